#pragma once

#include <cstdint>
#include <vector>

namespace permchal::nt {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

/// Deterministic for all 64-bit inputs.
bool isPrime(std::uint64_t n);

/// Distinct prime factors in increasing order.
std::vector<std::uint64_t> primeFactors(std::uint64_t n);

/// Smallest generator of the multiplicative group mod prime p.
std::uint64_t primitiveRoot(std::uint64_t p);

bool isPowerOfTwo(std::uint64_t n);
/// ceil(log2 n) for n >= 1.
int ceilLog2(std::uint64_t n);

}  // namespace permchal::nt
