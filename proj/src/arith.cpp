#include "lmoment/arith.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "lmoment/errors.hpp"
#include "lmoment/numtheory.hpp"

namespace lmoment {

double TailCoefficients::at(std::int64_t n) const {
    if (n < 1 || n > upper) throw DomainError("TailCoefficients::at: index outside [1, M]");
    if (n <= modulus_cutoff) return 0.0;
    return values[static_cast<std::size_t>(n - modulus_cutoff - 1)];
}

double dk_prime_power(double k, int e) {
    double num = 1.0;
    double fact = 1.0;
    for (int j = 0; j < e; ++j) {
        num *= k + static_cast<double>(j);
        fact *= static_cast<double>(j + 1);
    }
    return num / fact;
}

double dk_coeff(double k, std::int64_t n) {
    if (n < 1) throw DomainError("dk_coeff: n must be >= 1");
    if (k <= 0.0) throw DomainError("dk_coeff: order must be positive");
    double out = 1.0;
    for (const auto& [p, e] : factorize(n)) {
        (void)p;
        out *= dk_prime_power(k, e);
    }
    return out;
}

CoefficientSeries dk_table(double k, std::int64_t N) {
    if (N < 1) throw DomainError("dk_table: cutoff must be >= 1");
    if (k <= 0.0) throw DomainError("dk_table: order must be positive");
    CoefficientSeries out;
    out.order = k;
    out.cutoff = N;
    out.values.assign(static_cast<std::size_t>(N), 1.0);
    const auto spf = smallest_prime_factor_sieve(N);
    for (std::int64_t n = 2; n <= N; ++n) {
        const std::int64_t p = spf[static_cast<std::size_t>(n)];
        std::int64_t m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.values[static_cast<std::size_t>(n - 1)] =
            out.values[static_cast<std::size_t>(m - 1)] * dk_prime_power(k, e);
    }
    return out;
}

CoefficientSeries dirichlet_convolve(const CoefficientSeries& a, const CoefficientSeries& b) {
    if (a.cutoff != b.cutoff)
        throw DomainError("dirichlet_convolve: cutoff mismatch (" + std::to_string(a.cutoff) +
                          " vs " + std::to_string(b.cutoff) + ")");
    const std::int64_t N = a.cutoff;
    CoefficientSeries out;
    out.order = a.order + b.order;
    out.cutoff = N;
    out.values.assign(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t d = 1; d <= N; ++d) {
        const double ad = a.values[static_cast<std::size_t>(d - 1)];
        if (ad == 0.0) continue;
        for (std::int64_t n = d; n <= N; n += d)
            out.values[static_cast<std::size_t>(n - 1)] += ad * b.values[static_cast<std::size_t>(n / d - 1)];
    }
    return out;
}

TailCoefficients tail_coeffs(int v, std::int64_t q, std::int64_t M) {
    if (v < 1) throw DomainError("tail_coeffs: v must be >= 1");
    if (M <= q) throw DomainError("tail_coeffs: M must exceed q");
    if (q < 1) throw DomainError("tail_coeffs: q must be >= 1");

    // truncated base series: d_{1/v}(n) for n <= q, zero above
    CoefficientSeries base = dk_table(1.0 / static_cast<double>(v), M);
    for (std::int64_t n = q + 1; n <= M; ++n) base.values[static_cast<std::size_t>(n - 1)] = 0.0;

    CoefficientSeries power = base;
    for (int pass = 1; pass < v; ++pass) power = dirichlet_convolve(power, base);

    // For n <= q every factorization is automatically within the cutoff, so
    // the v-fold product reproduces d_1 = 1 exactly there.
    for (std::int64_t n = 1; n <= q; ++n) {
        if (std::abs(power.values[static_cast<std::size_t>(n - 1)] - 1.0) > 1e-9)
            throw ConvergenceError("tail_coeffs: truncated power deviates from 1 at n <= q");
    }

    TailCoefficients out;
    out.order = 1.0 / static_cast<double>(v);
    out.v = v;
    out.modulus_cutoff = q;
    out.upper = M;
    out.values.resize(static_cast<std::size_t>(M - q));
    for (std::int64_t n = q + 1; n <= M; ++n)
        out.values[static_cast<std::size_t>(n - q - 1)] = 1.0 - power.values[static_cast<std::size_t>(n - 1)];
    return out;
}

double imprimitivity_f(std::int64_t q) {
    if (q < 1) throw DomainError("imprimitivity_f: q must be >= 1");
    double out = 1.0;
    for (const auto& [p, e] : factorize(q)) {
        std::int64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        const double base = 1.0 + 1.0 / std::sqrt(static_cast<double>(p));
        const double b2 = base * base;
        out *= b2 * b2 + static_cast<double>(pe - 1);
    }
    return out;
}

PrimeLogSumReport prime_log_sum_threshold(std::int64_t limit) {
    if (limit < 2) throw DomainError("prime_log_sum_threshold: limit must be >= 2");
    const auto spf = smallest_prime_factor_sieve(limit);
    PrimeLogSumReport report;
    // cache of log p / (p^{1/4} - 1) keyed by prime, filled on first sight
    std::vector<double> weight(static_cast<std::size_t>(limit) + 1, -1.0);
    for (std::int64_t m = 2; m <= limit; ++m) {
        double sum = 0.0;
        std::int64_t r = m;
        while (r > 1) {
            const std::int64_t p = spf[static_cast<std::size_t>(r)];
            double& w = weight[static_cast<std::size_t>(p)];
            if (w < 0.0) {
                const double pd = static_cast<double>(p);
                w = std::log(pd) / (std::pow(pd, 0.25) - 1.0);
            }
            sum += w;
            while (r % p == 0) r /= p;
        }
        if (sum - 0.5 * std::log(static_cast<double>(m)) > 0.0) {
            report.violators.push_back(m);
            report.threshold = m;
        }
    }
    return report;
}

}  // namespace lmoment
