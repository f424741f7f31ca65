#include <doctest.h>

#include <cmath>
#include <complex>

#include "lmoment/arith.hpp"
#include "lmoment/chargroup.hpp"
#include "lmoment/errors.hpp"
#include "lmoment/lfun.hpp"
#include "lmoment/meanvalue.hpp"

using namespace lmoment;
using std::complex;

namespace {
const EvaluationContext kCtx;
constexpr double kPi = 3.14159265358979323846;

Complex weight_direct(Complex s, const WeightSpec& spec) {
    const double lq = std::log(static_cast<double>(spec.modulus));
    const Complex z = s - Complex(0.5, 0.0);
    return (std::exp(spec.delta * z * lq) - 1.0) / (z * lq);
}
}  // namespace

TEST_CASE("weight_w at the center and across the Taylor boundary") {
    const WeightSpec spec{5, 0.15};
    CHECK(weight_w(Complex(0.5, 0.0), spec) == Complex(0.15, 0.0));

    const double lq = std::log(5.0);
    for (const double umag : {0.9e-3, 1.1e-3, 0.2, 2.0}) {
        for (const double angle : {0.0, 1.0, 2.5}) {
            const Complex u = umag * std::exp(Complex(0.0, angle));
            const Complex s = Complex(0.5, 0.0) + u / (spec.delta * lq);
            const Complex direct = weight_direct(s, spec);
            CHECK(std::abs(weight_w(s, spec) - direct) <= 1e-12 * std::abs(direct));
        }
    }
}

TEST_CASE("weight_w conjugation symmetry and vertical envelope") {
    const WeightSpec spec{7, 0.1};
    for (const double t : {0.1, 1.0, 14.0}) {
        const Complex w = weight_w(Complex(0.8, t), spec);
        const Complex wc = weight_w(Complex(0.8, -t), spec);
        CHECK(std::abs(wc - std::conj(w)) <= 1e-13 * std::abs(w));
    }
    // |W(sigma+it)| <= (q^{delta (sigma-1/2)} + 1) / (|t| log q)
    const double lq = std::log(7.0);
    for (const double sigma : {0.6, 1.0, 1.5}) {
        const double cw = (std::pow(7.0, spec.delta * (sigma - 0.5)) + 1.0) / lq;
        for (const double t : {0.5, 2.0, 50.0, 1000.0}) {
            CHECK(std::abs(weight_w(Complex(sigma, t), spec)) <= cw / std::abs(t) * (1 + 1e-12));
        }
    }
}

TEST_CASE("weight sixth moment: frozen value and tolerance scaling") {
    const WeightSpec spec{5, 0.15};
    const WeightSixthMoment wsm = weight_sixth_moment(1.0, spec, 1e-10);
    CHECK(std::abs(wsm.value - 0.00023515787204585324178) <= wsm.error + 1e-14);
    CHECK(std::abs(wsm.value - 0.00023515787204585324178) < 5e-11);
    CHECK(wsm.error < 1e-9);
    CHECK(wsm.truncation_height > 0.0);

    const WeightSixthMoment finer = weight_sixth_moment(1.0, spec, 1e-12);
    CHECK(std::abs(wsm.value - finer.value) <= wsm.error + finer.error);
    CHECK(finer.truncation_height >= wsm.truncation_height);
}

TEST_CASE("integrand matches its defining formula pointwise") {
    const DirichletCharacter chi = characters(build_group(5))[1];
    const WeightSpec spec{5, 0.1};
    const double k = 0.7;
    const Complex s(0.9, 1.7);
    const double w6 = std::pow(std::abs(weight_w(s, spec)), 6.0);

    const double j = integrand(IntegralKind::J, chi, s, k, 1, spec, kCtx);
    CHECK(j == doctest::Approx(std::pow(std::norm(l_value(s, chi, kCtx)), k) * w6)
                   .epsilon(1e-11));

    const CoefficientSeries dk = dk_table(k, 5);
    Complex series = 0.0;
    for (std::int64_t n = 1; n <= 5; ++n)
        if (n % 5 != 0)
            series += dk.at(n) * chi(n) * std::pow(Complex(static_cast<double>(n), 0.0), -s);
    const double kk = integrand(IntegralKind::K, chi, s, k, 1, spec, kCtx);
    CHECK(kk == doctest::Approx(std::norm(series) * w6).epsilon(1e-11));

    const double jstar = integrand(IntegralKind::Jstar, chi, Complex(1.2, 1.7), k, 1, spec, kCtx);
    CHECK(jstar == doctest::Approx(std::pow(std::norm(l_value(Complex(1.2, 1.7), chi, kCtx)), k) /
                                   (1.0 + 1.7 * 1.7))
                       .epsilon(1e-11));
}

TEST_CASE("principal character is rejected except for K") {
    const DirichletCharacter chi0 = principal_character(build_group(5));
    const WeightSpec spec{5, 0.1};
    CHECK_THROWS_AS(integrand(IntegralKind::J, chi0, Complex(0.8, 0.0), 1.0, 1, spec, kCtx),
                    DomainError);
    CHECK_NOTHROW(integrand(IntegralKind::K, chi0, Complex(0.8, 0.0), 1.0, 1, spec, kCtx));
}

TEST_CASE("G integrand at sigma = 3 equals the coefficient tail") {
    // L^k - S has Dirichlet coefficients supported on n > q; at sigma = 3 the
    // series converges absolutely and a long truncation is an oracle.
    const DirichletCharacter chi = characters(build_group(7))[1];
    const WeightSpec spec{7, 0.1};
    const double k = 0.5;
    const EvaluationContext ctx = kCtx;  // sigma = 3 inside the default strip
    const Complex s(3.0, 0.8);

    const std::int64_t big = 100000;
    const CoefficientSeries dk = dk_table(k, big);
    Complex tail = 0.0;
    for (std::int64_t n = big; n > 7; --n)
        tail += dk.at(n) * chi(n) * std::pow(Complex(static_cast<double>(n), 0.0), -s);
    const double w6 = std::pow(std::abs(weight_w(s, spec)), 6.0);
    const double expected = std::norm(tail) * w6;

    const double got = integrand(IntegralKind::G, chi, s, k, 1, spec, ctx);
    CHECK(std::abs(got - expected) <= 1e-8 * std::max(1e-6, expected));
}

TEST_CASE("H integrand ties k to 1/v") {
    const DirichletCharacter chi = characters(build_group(5))[1];
    const WeightSpec spec{5, 0.1};
    CHECK_THROWS_AS(integrand(IntegralKind::H, chi, Complex(0.9, 0.0), 0.4, 2, spec, kCtx),
                    DomainError);
    const double v2 = integrand(IntegralKind::H, chi, Complex(0.9, 1.0), 0.5, 2, spec, kCtx);
    // |L - S^2|^{1/2} |W|^6 against a manual rebuild
    const CoefficientSeries dk = dk_table(0.5, 5);
    Complex series = 0.0;
    const Complex s(0.9, 1.0);
    for (std::int64_t n = 1; n <= 5; ++n)
        if (n % 5 != 0)
            series += dk.at(n) * chi(n) * std::pow(Complex(static_cast<double>(n), 0.0), -s);
    const double expect = std::pow(std::norm(l_value(s, chi, kCtx) - series * series), 0.5) *
                          std::pow(std::abs(weight_w(s, spec)), 6.0);
    CHECK(v2 == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("kind names round-trip") {
    CHECK(std::string(kind_name(IntegralKind::Jstar)) == "Jstar");
    CHECK(kind_from_name("J").value() == IntegralKind::J);
    CHECK(kind_from_name("Jstar").value() == IntegralKind::Jstar);
    CHECK(kind_from_name("J*").value() == IntegralKind::Jstar);
    CHECK_FALSE(kind_from_name("Q").has_value());
}

TEST_CASE("vertical_integral basic behavior and kind guards") {
    const DirichletCharacter chi = characters(build_group(5))[1];
    const WeightSpec spec{5, 0.15};
    const VerticalIntegral r =
        vertical_integral(IntegralKind::K, chi, 1.0, 1.0, 1, spec, 1e-9, kCtx);
    CHECK(r.value > 0.0);
    CHECK(r.error < 1e-7);
    CHECK(r.truncation_height >= 10.0);

    CHECK_THROWS_AS(
        vertical_integral(IntegralKind::G, chi, 0.51, 1.0, 1, spec, 1e-8, kCtx), DomainError);
    CHECK_THROWS_AS(
        vertical_integral(IntegralKind::H, chi, 0.9, 0.4, 2, spec, 1e-8, kCtx), DomainError);
    CHECK_THROWS_AS(
        vertical_integral(IntegralKind::Jstar, chi, 0.6, 1.0, 1, spec, 1e-8, kCtx),
        ConvergenceError);
}

TEST_CASE("aggregate equals the lone vertical integral for q = 3") {
    const WeightSpec spec{3, 0.1};
    const double tol = 1e-8;
    const MeanValueResult agg = aggregate(IntegralKind::J, 3, 0.8, 0.5, 1, spec, tol, kCtx);
    REQUIRE(agg.per_character.size() == 1);
    const DirichletCharacter chi = characters(build_group(3))[1];
    const VerticalIntegral single =
        vertical_integral(IntegralKind::J, chi, 0.8, 0.5, 1, spec, tol, kCtx);
    CHECK(std::abs(agg.aggregate - single.value) <= agg.quadrature_error + single.error);
}

TEST_CASE("aggregate tolerance self-consistency") {
    const WeightSpec spec{5, 0.15};
    const MeanValueResult coarse = aggregate(IntegralKind::K, 5, 1.0, 1.0, 1, spec, 1e-7, kCtx);
    const MeanValueResult fine = aggregate(IntegralKind::K, 5, 1.0, 1.0, 1, spec, 1e-9, kCtx);
    CHECK(std::abs(coarse.aggregate - fine.aggregate) <=
          coarse.quadrature_error + fine.quadrature_error);
    REQUIRE(coarse.per_character.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(coarse.per_character[i] - fine.per_character[i]) <=
              coarse.per_character_error[i] + fine.per_character_error[i]);
}

TEST_CASE("forced truncation height is honored and sound") {
    const WeightSpec spec{5, 0.15};
    const MeanValueResult base = aggregate(IntegralKind::K, 5, 1.0, 1.0, 1, spec, 1e-8, kCtx);
    const MeanValueResult doubled =
        aggregate(IntegralKind::K, 5, 1.0, 1.0, 1, spec, 1e-8, kCtx, 2.0 * base.truncation_height);
    CHECK(doubled.truncation_height == doctest::Approx(2.0 * base.truncation_height));
    CHECK(std::abs(doubled.aggregate - base.aggregate) <= base.quadrature_error);
}

TEST_CASE("K-identity: frozen q=5 value") {
    const WeightSpec spec{5, 0.15};
    const IdentityCheck chk = k_identity_check(5, 1.0, 1.0, spec, 1e-7, kCtx);
    CHECK(chk.rel_err < 1e-7);
    CHECK(std::abs(chk.rhs - 0.0013390934380388865157) < 1e-12);
    CHECK(std::abs(chk.lhs - 0.0013390934380388865157) < 1e-9);
    CHECK(chk.truncation_height > 0.0);
    CHECK(chk.lhs_error > 0.0);
}

TEST_CASE("K-identity holds off the prime case") {
    const WeightSpec spec{12, 0.1};
    const IdentityCheck chk = k_identity_check(12, 0.8, 0.5, spec, 1e-6, kCtx);
    CHECK(chk.rel_err < 1e-6);
}

TEST_CASE("K-identity truncation soundness") {
    const WeightSpec spec{5, 0.15};
    const IdentityCheck base = k_identity_check(5, 1.0, 1.0, spec, 1e-7, kCtx);
    const IdentityCheck doubled =
        k_identity_check(5, 1.0, 1.0, spec, 1e-7, kCtx, 2.0 * base.truncation_height);
    CHECK(std::abs(doubled.lhs - base.lhs) <= base.lhs_error);
}

TEST_CASE("G-tail identity: single-pair sanity at M = 6") {
    const GTailCheck chk = g_tail_identity_check(5, 1.0, 6, 1e-4, kCtx);
    // only n = 6 contributes: rhs = pi phi(5) d_1(6)^2 / 6^3 = pi/54
    CHECK(chk.rhs == doctest::Approx(kPi / 54.0).epsilon(1e-12));
    CHECK(std::abs(chk.lhs - chk.rhs) <= 1e-4 * chk.rhs + chk.tail_bound);
}

TEST_CASE("G-tail identity: frozen rhs and closing gap at q=5, M=30") {
    const GTailCheck chk = g_tail_identity_check(5, 1.0, 30, 1e-5, kCtx);
    CHECK(std::abs(chk.rhs - 0.36963306151589457183) < 1e-10);
    CHECK(std::abs(chk.lhs - chk.rhs) <= 1e-5 * chk.rhs + chk.tail_bound);
    CHECK(chk.truncation_height >= 50.0);
}

TEST_CASE("G-tail identity: cutoff growth shrinks the reported tail") {
    const GTailCheck m30 = g_tail_identity_check(5, 0.5, 30, 1e-4, kCtx);
    const GTailCheck m60 = g_tail_identity_check(5, 0.5, 60, 1e-4, kCtx);
    CHECK(std::abs(m30.lhs - m30.rhs) <= 1e-4 * m30.rhs + m30.tail_bound);
    CHECK(std::abs(m60.lhs - m60.rhs) <= 1e-4 * m60.rhs + m60.tail_bound);
    CHECK(m60.rhs > m30.rhs);  // more pairs, larger both sides
}

TEST_CASE("G-tail kernel-height soundness") {
    const GTailCheck base = g_tail_identity_check(5, 1.0, 30, 1e-5, kCtx);
    const GTailCheck doubled =
        g_tail_identity_check(5, 1.0, 30, 1e-5, kCtx, 2.0 * base.truncation_height);
    CHECK(std::abs(doubled.lhs - base.lhs) <= base.tail_bound);
}

TEST_CASE("G-tail domain checks") {
    CHECK_THROWS_AS(g_tail_identity_check(5, 1.0, 5, 1e-5, kCtx), DomainError);
    CHECK_THROWS_AS(g_tail_identity_check(5, 2.5, 30, 1e-5, kCtx), DomainError);
    CHECK_THROWS_AS(g_tail_identity_check(2, 1.0, 30, 1e-5, kCtx), DomainError);
}
