#include "permchal/permutation.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace permchal {

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial: n out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t injectiveTupleCount(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > 20) {
    throw std::invalid_argument("injectiveTupleCount: bad arguments");
  }
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c *= static_cast<std::uint64_t>(n - i);
  return c;
}

std::uint64_t rankInjectiveTuple(int n, std::span<const std::uint32_t> t) {
  const int k = static_cast<int>(t.size());
  if (k > n || n > 20) throw std::invalid_argument("rankInjectiveTuple: tuple too long");
  std::uint32_t used = 0;
  std::uint64_t rank = 0;
  for (int i = 0; i < k; ++i) {
    const std::uint32_t v = t[static_cast<std::size_t>(i)];
    if (v >= static_cast<std::uint32_t>(n) || (used >> v & 1u)) {
      throw std::invalid_argument("rankInjectiveTuple: not an injective tuple");
    }
    const std::uint32_t smallerFree =
        v - static_cast<std::uint32_t>(std::popcount(used & ((1u << v) - 1u)));
    rank = rank * static_cast<std::uint64_t>(n - i) + smallerFree;
    used |= 1u << v;
  }
  return rank;
}

std::vector<std::uint32_t> unrankInjectiveTuple(int n, int k, std::uint64_t rank) {
  const std::uint64_t count = injectiveTupleCount(n, k);
  if (rank >= count) throw std::invalid_argument("unrankInjectiveTuple: rank out of range");
  std::vector<std::uint64_t> digit(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    const auto radix = static_cast<std::uint64_t>(n - i);
    digit[static_cast<std::size_t>(i)] = rank % radix;
    rank /= radix;
  }
  std::vector<std::uint32_t> free(static_cast<std::size_t>(n));
  std::iota(free.begin(), free.end(), 0u);
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::uint64_t d : digit) {
    out.push_back(free[d]);
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return out;
}

std::uint64_t rankPermutation(std::span<const std::uint32_t> p) {
  return rankInjectiveTuple(static_cast<int>(p.size()), p);
}

Permutation unrankPermutation(int n, std::uint64_t rank) {
  return unrankInjectiveTuple(n, n, rank);
}

std::vector<Permutation> allPermutations(int n) {
  const std::uint64_t count = factorial(n);
  std::vector<Permutation> out;
  out.reserve(count);
  Permutation p = identityPermutation(static_cast<std::size_t>(n));
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Permutation identityPermutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

Permutation inversePermutation(std::span<const std::uint32_t> p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<std::uint32_t>(i);
  return inv;
}

bool isPermutation(std::span<const std::uint32_t> p) {
  std::vector<bool> seen(p.size(), false);
  for (std::uint32_t v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace permchal
