#include "lmoment/numtheory.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "lmoment/errors.hpp"

namespace lmoment {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw DomainError("factorize: n must be >= 1, got " + std::to_string(n));
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t phi = 1;
    for (const auto& [p, e] : factorize(n)) {
        std::int64_t pe = 1;
        for (int i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

std::int64_t power_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
    if (m < 1) throw DomainError("power_mod: modulus must be >= 1");
    if (exp < 0) throw DomainError("power_mod: exponent must be >= 0");
    if (m == 1) return 0;
    __int128 acc = 1;
    __int128 b = ((base % m) + m) % m;
    while (exp > 0) {
        if (exp & 1) acc = acc * b % m;
        b = b * b % m;
        exp >>= 1;
    }
    return static_cast<std::int64_t>(acc);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = ((a % m) + m) % m;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t qq = r0 / r1;
        r0 -= qq * r1;
        std::swap(r0, r1);
        s0 -= qq * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) throw DomainError("mod_inverse: arguments are not coprime");
    return ((s0 % m) + m) % m;
}

std::int64_t smallest_primitive_root(std::int64_t pe) {
    if (pe == 1 || pe == 2) return 1;
    if (pe == 4) return 3;
    const auto factors = factorize(pe);
    if (factors.size() != 1 || factors[0].first == 2)
        throw DomainError("smallest_primitive_root: modulus must be 2, 4, or an odd prime power");
    const std::int64_t order = euler_phi(pe);
    const auto order_factors = factorize(order);
    for (std::int64_t g = 2; g < pe; ++g) {
        if (g % factors[0].first == 0) continue;
        bool primitive = true;
        for (const auto& [r, unused] : order_factors) {
            (void)unused;
            if (power_mod(g, order / r, pe) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
    throw ConvergenceError("smallest_primitive_root: no generator found (unreachable)");
}

std::int64_t crt_combine(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2) {
    if (std::gcd(m1, m2) != 1) throw DomainError("crt_combine: moduli must be coprime");
    const std::int64_t m = m1 * m2;
    const __int128 term1 = static_cast<__int128>(r1) * m2 % m * mod_inverse(m2 % m1, m1) % m;
    const __int128 term2 = static_cast<__int128>(r2) * m1 % m * mod_inverse(m1 % m2, m2) % m;
    return static_cast<std::int64_t>(((term1 + term2) % m + m) % m);
}

std::vector<std::int32_t> smallest_prime_factor_sieve(std::int64_t limit) {
    std::vector<std::int32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf[static_cast<std::size_t>(i)] != 0) continue;
        for (std::int64_t j = i; j <= limit; j += i)
            if (spf[static_cast<std::size_t>(j)] == 0)
                spf[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
    }
    return spf;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    if (hi < 2) return out;
    const auto spf = smallest_prime_factor_sieve(hi);
    for (std::int64_t n = std::max<std::int64_t>(lo, 2); n <= hi; ++n)
        if (spf[static_cast<std::size_t>(n)] == n) out.push_back(n);
    return out;
}

}  // namespace lmoment
