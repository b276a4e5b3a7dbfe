#pragma once

// Lexicographic ranking of permutations and of injective tuples.

#include <cstdint>
#include <span>
#include <vector>

namespace permchal {

/// Images of 0..n-1. Values are 0-based slots.
using Permutation = std::vector<std::uint32_t>;

/// n! for n <= 20.
std::uint64_t factorial(int n);

/// n! / (n - k)!: the number of injective k-tuples over n values.
std::uint64_t injectiveTupleCount(int n, int k);

/// Lehmer-code rank in lexicographic order; the identity has rank 0.
std::uint64_t rankPermutation(std::span<const std::uint32_t> p);
Permutation unrankPermutation(int n, std::uint64_t rank);

/// Rank of an injective tuple over [0, n) in lexicographic order. With
/// k == n this agrees with rankPermutation.
std::uint64_t rankInjectiveTuple(int n, std::span<const std::uint32_t> t);
std::vector<std::uint32_t> unrankInjectiveTuple(int n, int k, std::uint64_t rank);

/// All permutations of [0, n) in rank order.
std::vector<Permutation> allPermutations(int n);

Permutation identityPermutation(std::size_t n);
Permutation inversePermutation(std::span<const std::uint32_t> p);
bool isPermutation(std::span<const std::uint32_t> p);

}  // namespace permchal
