#pragma once

#include <cstdint>
#include <vector>

namespace lmoment {

/// Table of the generalized divisor function d_k(1..N): the multiplicative
/// function whose Dirichlet series is zeta(s)^k, with Euler factors given by
/// the binomial series of (1-x)^{-k}.
struct CoefficientSeries {
    double order = 1.0;          ///< k
    std::int64_t cutoff = 0;     ///< N
    std::vector<double> values;  ///< values[n-1] = d_k(n)

    double at(std::int64_t n) const { return values[static_cast<std::size_t>(n - 1)]; }
};

/// Coefficients a(n), q < n <= M, of the series tail left when the full
/// Dirichlet series is approximated by the v-th power of its length-q
/// truncation with coefficients d_{1/v}.  By construction a(n) = 0 for all
/// n <= q (asserted during the build), and a(n) = 1 when v = 1.
struct TailCoefficients {
    double order = 1.0;  ///< 1/v
    int v = 1;
    std::int64_t modulus_cutoff = 0;  ///< q
    std::int64_t upper = 0;           ///< M
    std::vector<double> values;       ///< values[i] = a(modulus_cutoff + 1 + i)

    double at(std::int64_t n) const;
};

/// Euler factor d_k(p^e) = prod_{j<e} (k+j) / e!.
double dk_prime_power(double k, int e);

double dk_coeff(double k, std::int64_t n);

CoefficientSeries dk_table(double k, std::int64_t N);

/// Dirichlet convolution (a*b)(n) = sum_{de=n} a(d) b(e); cutoffs must match.
CoefficientSeries dirichlet_convolve(const CoefficientSeries& a, const CoefficientSeries& b);

TailCoefficients tail_coeffs(int v, std::int64_t q, std::int64_t M);

/// Multiplicative f with f(p^e) = (1 + p^{-1/2})^4 + p^e - 1.
double imprimitivity_f(std::int64_t q);

struct PrimeLogSumReport {
    std::int64_t threshold = 0;  ///< largest m <= limit with positive excess (0 if none)
    std::vector<std::int64_t> violators;
};

/// Scans g(m) = sum_{p|m} log p / (p^{1/4} - 1) - (1/2) log m for m <= limit
/// and reports every m where g(m) > 0.
PrimeLogSumReport prime_log_sum_threshold(std::int64_t limit);

}  // namespace lmoment
