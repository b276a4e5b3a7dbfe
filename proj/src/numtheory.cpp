#include "permchal/numtheory.hpp"

#include <bit>
#include <tuple>
#include <utility>
#include <stdexcept>

namespace permchal::nt {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  std::int64_t oldR = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t oldS = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = oldR / r;
    std::tie(oldR, r) = std::make_pair(r, oldR - q * r);
    std::tie(oldS, s) = std::make_pair(s, oldS - q * s);
  }
  if (oldR != 1) throw std::invalid_argument("invmod: not invertible");
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((oldS % mm) + mm) % mm);
}

bool isPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> primeFactors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t primitiveRoot(std::uint64_t p) {
  if (!isPrime(p)) throw std::invalid_argument("primitiveRoot: modulus is not prime");
  if (p == 2) return 1;
  const auto factors = primeFactors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool generator = true;
    for (std::uint64_t q : factors) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("primitiveRoot: no generator found");
}

bool isPowerOfTwo(std::uint64_t n) { return std::has_single_bit(n); }

int ceilLog2(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("ceilLog2: n must be positive");
  return n == 1 ? 0 : 64 - std::countl_zero(n - 1);
}

}  // namespace permchal::nt
