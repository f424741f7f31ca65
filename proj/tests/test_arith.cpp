#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lmoment/arith.hpp"
#include "lmoment/errors.hpp"

using namespace lmoment;

TEST_CASE("dk_coeff examples") {
    CHECK(dk_coeff(0.5, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dk_coeff(2.0, 6) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(dk_coeff(0.5, 4) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
    CHECK(dk_coeff(1.7, 1) == 1.0);
    // multiplicativity across coprime factors
    CHECK(dk_coeff(0.8, 12) == doctest::Approx(dk_coeff(0.8, 4) * dk_coeff(0.8, 3)).epsilon(1e-14));
}

TEST_CASE("dk_prime_power binomial values") {
    // d_k(p^e) = prod_{j<e} (k+j) / e!
    CHECK(dk_prime_power(0.5, 1) == doctest::Approx(0.5));
    CHECK(dk_prime_power(0.5, 2) == doctest::Approx(0.375));
    CHECK(dk_prime_power(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5 / 6.0));
    CHECK(dk_prime_power(3.0, 2) == doctest::Approx(6.0));
    CHECK(dk_prime_power(1.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("dk_table pinned rows") {
    const CoefficientSeries ones = dk_table(1.0, 10);
    for (std::int64_t n = 1; n <= 10; ++n) CHECK(ones.at(n) == doctest::Approx(1.0).epsilon(1e-15));

    const CoefficientSeries divisors = dk_table(2.0, 10);
    const double expect[10] = {1, 2, 2, 3, 2, 4, 2, 4, 3, 4};
    for (std::int64_t n = 1; n <= 10; ++n)
        CHECK(divisors.at(n) == doctest::Approx(expect[n - 1]).epsilon(1e-14));
}

TEST_CASE("dk_table agrees with dk_coeff per index") {
    for (const double k : {0.5, 0.31, 1.9}) {
        const CoefficientSeries table = dk_table(k, 100);
        for (std::int64_t n = 1; n <= 100; ++n) {
            const double direct = dk_coeff(k, n);
            CHECK(std::abs(table.at(n) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("convolution identity d_k1 * d_k2 = d_{k1+k2}") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> dist(1e-6, 2.0);
    const std::int64_t n_max = 1000;
    for (int trial = 0; trial < 10; ++trial) {
        const double k1 = dist(rng);
        const double k2 = dist(rng);
        const CoefficientSeries conv = dirichlet_convolve(dk_table(k1, n_max), dk_table(k2, n_max));
        const CoefficientSeries direct = dk_table(k1 + k2, n_max);
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const double scale = std::max(1.0, std::abs(direct.at(n)));
            CHECK(std::abs(conv.at(n) - direct.at(n)) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("convolution special cases") {
    const std::int64_t n_max = 500;
    const CoefficientSeries half = dk_table(0.5, n_max);
    const CoefficientSeries sq = dirichlet_convolve(half, half);
    for (std::int64_t n = 1; n <= n_max; ++n)
        CHECK(std::abs(sq.at(n) - 1.0) < 1e-12);

    const CoefficientSeries mixed =
        dirichlet_convolve(dk_table(0.7, n_max), dk_table(1.3, n_max));
    const CoefficientSeries two = dk_table(2.0, n_max);
    for (std::int64_t n = 1; n <= n_max; ++n)
        CHECK(std::abs(mixed.at(n) - two.at(n)) <= 1e-10 * std::max(1.0, two.at(n)));

    CHECK_THROWS_AS(dirichlet_convolve(dk_table(1.0, 10), dk_table(1.0, 11)), DomainError);
}

TEST_CASE("tail_coeffs support and pinned values") {
    for (const std::int64_t q : {10LL, 50LL}) {
        for (const int v : {1, 2, 3}) {
            const TailCoefficients tc = tail_coeffs(v, q, 4 * q);
            for (std::int64_t n = 1; n <= q; ++n) CHECK(tc.at(n) == 0.0);
            if (v == 1)
                for (std::int64_t n = q + 1; n <= 4 * q; ++n)
                    CHECK(tc.at(n) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }

    // v=2, q=10: every in-range factorization of 22 has a part > 10, so a(22)=1
    const TailCoefficients t2 = tail_coeffs(2, 10, 100);
    CHECK(t2.at(22) == doctest::Approx(1.0).epsilon(1e-14));
    // a(12) = 1 - 2 [d(2)d(6) + d(3)d(4)] with d = d_{1/2}: 1 - 0.625 = 3/8
    CHECK(t2.at(12) == doctest::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("imprimitivity_f") {
    CHECK(imprimitivity_f(1) == doctest::Approx(1.0));
    const double f2 = std::pow(1.0 + 1.0 / std::sqrt(2.0), 4) + 1.0;
    CHECK(imprimitivity_f(2) == doctest::Approx(f2).epsilon(1e-14));
    const double f3 = std::pow(1.0 + 1.0 / std::sqrt(3.0), 4) + 2.0;
    CHECK(imprimitivity_f(3) == doctest::Approx(f3).epsilon(1e-14));
    CHECK(imprimitivity_f(6) == doctest::Approx(f2 * f3).epsilon(1e-13));
    // f(p^e) adds phi(p) + ... + phi(p^e) = p^e - 1
    const double f8 = std::pow(1.0 + 1.0 / std::sqrt(2.0), 4) + 7.0;
    CHECK(imprimitivity_f(8) == doctest::Approx(f8).epsilon(1e-14));
}

TEST_CASE("f(q)/q stays bounded up to 10^6, maximized at the primorial") {
    double sup = 0.0;
    std::int64_t argmax = 1;
    for (std::int64_t q = 1; q <= 1000000; ++q) {
        const double r = imprimitivity_f(q) / static_cast<double>(q);
        if (r > sup) {
            sup = r;
            argmax = q;
        }
    }
    INFO("sup f(q)/q = ", sup, " at q = ", argmax);
    // f(p)/p = 1 + ((1+p^{-1/2})^4 - 1)/p > 1 decays like 4 p^{-3/2}, so the
    // ratio peaks at the largest primorial in range, 510510 = 2*3*...*17.
    CHECK(argmax == 510510);
    double expected = 1.0;
    for (const double p : {2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0})
        expected *= (std::pow(1.0 + 1.0 / std::sqrt(p), 4) + p - 1.0) / p;
    CHECK(sup == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sup < 43.0);
}

TEST_CASE("prime_log_sum_threshold") {
    const PrimeLogSumReport rep = prime_log_sum_threshold(100000);
    // g(2) > 0: 2 is always a violator
    CHECK(std::find(rep.violators.begin(), rep.violators.end(), 2) != rep.violators.end());
    // 10^5 = 2^5 5^5 is smooth enough to violate, so the largest violator
    // below the limit is the limit itself
    CHECK(rep.threshold == 100000);
    // g(1) = 0 is not a violation
    CHECK(std::find(rep.violators.begin(), rep.violators.end(), 1) == rep.violators.end());
    // every reported violator actually violates
    for (const std::int64_t m : rep.violators) {
        double g = -0.5 * std::log(static_cast<double>(m));
        std::int64_t rest = m;
        for (std::int64_t p = 2; p * p <= rest; ++p) {
            if (rest % p) continue;
            g += std::log(static_cast<double>(p)) / (std::pow(static_cast<double>(p), 0.25) - 1.0);
            while (rest % p == 0) rest /= p;
        }
        if (rest > 1)
            g += std::log(static_cast<double>(rest)) /
                 (std::pow(static_cast<double>(rest), 0.25) - 1.0);
        CHECK(g > 0.0);
    }
}

TEST_CASE("|d_k(n)| <= d_ceil(k)(n) on n <= 10^4") {
    for (const double k : {0.3, 0.5, 1.2, 1.9}) {
        const double up = std::ceil(k);
        const CoefficientSeries a = dk_table(k, 10000);
        const CoefficientSeries b = dk_table(up, 10000);
        for (std::int64_t n = 1; n <= 10000; ++n)
            CHECK(std::abs(a.at(n)) <= b.at(n) * (1.0 + 1e-12));
    }
}
