#include <doctest.h>

#include <cmath>
#include <complex>

#include "lmoment/gammafn.hpp"

using namespace lmoment;
using std::complex;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma at real points") {
    CHECK(std::abs(gamma_fn(complex<double>(0.5, 0.0)) - std::sqrt(kPi)) < 1e-14);
    CHECK(std::abs(gamma_fn(complex<double>(1.0, 0.0)) - 1.0) < 1e-14);
    CHECK(std::abs(gamma_fn(complex<double>(5.0, 0.0)) - 24.0) < 1e-12);
    CHECK(std::abs(gamma_fn(complex<double>(10.0, 0.0)) - 362880.0) < 1e-7);
    // Gamma(1.5) = sqrt(pi)/2
    CHECK(std::abs(gamma_fn(complex<double>(1.5, 0.0)) - 0.5 * std::sqrt(kPi)) < 1e-14);
}

TEST_CASE("recurrence Gamma(z+1) = z Gamma(z)") {
    const complex<double> pts[] = {{0.3, 0.0}, {0.7, 1.2}, {2.5, -3.0}, {-1.3, 0.4}, {0.5, 10.0}};
    for (const auto z : pts) {
        const complex<double> lhs = gamma_fn(z + 1.0);
        const complex<double> rhs = z * gamma_fn(z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
}

TEST_CASE("reflection via |Gamma(it)|^2 = pi / (t sinh(pi t))") {
    for (const double t : {0.5, 1.0, 2.0, 5.0}) {
        const double lhs = std::norm(gamma_fn(complex<double>(0.0, t)));
        const double rhs = kPi / (t * std::sinh(kPi * t));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("duplication formula") {
    // Gamma(z) Gamma(z+1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)
    const complex<double> pts[] = {{0.8, 0.0}, {1.2, 0.7}, {0.6, -2.0}};
    for (const auto z : pts) {
        const complex<double> lhs = gamma_fn(z) * gamma_fn(z + 0.5);
        const complex<double> rhs =
            std::pow(complex<double>(2.0, 0.0), 1.0 - 2.0 * z) * std::sqrt(kPi) * gamma_fn(2.0 * z);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(rhs));
    }
}

TEST_CASE("negative real part via reflection") {
    // Gamma(-0.5) = -2 sqrt(pi)
    CHECK(std::abs(gamma_fn(complex<double>(-0.5, 0.0)) + 2.0 * std::sqrt(kPi)) < 1e-12);
    // Gamma(-1.5) = 4 sqrt(pi) / 3
    CHECK(std::abs(gamma_fn(complex<double>(-1.5, 0.0)) - 4.0 * std::sqrt(kPi) / 3.0) < 1e-12);
}
