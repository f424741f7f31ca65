#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace lmoment {

/// Prime factorization of n >= 1 as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

bool is_prime(std::int64_t n);

/// base^exp mod m for m >= 1, exp >= 0.
std::int64_t power_mod(std::int64_t base, std::int64_t exp, std::int64_t m);

/// Inverse of a mod m; requires gcd(a, m) = 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Smallest generator of the cyclic group (Z/pe)^* where pe is 2, 4, or an
/// odd prime power.
std::int64_t smallest_primitive_root(std::int64_t pe);

/// x with x = r1 mod m1 and x = r2 mod m2; requires gcd(m1, m2) = 1.
std::int64_t crt_combine(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2);

/// spf[i] = smallest prime factor of i for 2 <= i <= limit (spf[0] = spf[1] = 0).
std::vector<std::int32_t> smallest_prime_factor_sieve(std::int64_t limit);

/// All primes p with lo <= p <= hi, ascending.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

}  // namespace lmoment
