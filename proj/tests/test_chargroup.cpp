#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "lmoment/chargroup.hpp"
#include "lmoment/numtheory.hpp"

using namespace lmoment;
using std::complex;

namespace {

// Smallest divisor d of q such that chi(a) = 1 for every unit a = 1 mod d.
std::int64_t conductor_brute_force(const DirichletCharacter& chi) {
    const std::int64_t q = chi.modulus();
    for (std::int64_t d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        bool ok = true;
        for (std::int64_t a = 1; a <= q && ok; ++a) {
            if (std::gcd(a, q) != 1 || a % d != 1 % d) continue;
            if (std::abs(chi(a) - complex<double>(1.0, 0.0)) > 1e-9) ok = false;
        }
        if (ok) return d;
    }
    return q;
}

}  // namespace

TEST_CASE("group structure examples") {
    CHECK(build_group(7)->components().size() == 1);
    CHECK(build_group(7)->components()[0].order == 6);

    const auto g8 = build_group(8);
    REQUIRE(g8->components().size() == 2);
    CHECK(g8->components()[0].order == 2);
    CHECK(g8->components()[1].order == 2);

    const auto g12 = build_group(12);
    CHECK(g12->phi() == 4);
    std::int64_t prod = 1;
    for (const auto& c : g12->components()) prod *= c.order;
    CHECK(prod == 4);
}

TEST_CASE("component orders multiply to phi and dlog round-trips") {
    for (std::int64_t q = 1; q <= 120; ++q) {
        const auto table = build_group(q);
        std::int64_t prod = 1;
        for (const auto& c : table->components()) prod *= c.order;
        CHECK(prod == table->phi());
        for (std::int64_t a = 0; a < q; ++a) {
            const auto xs = table->dlog(a);
            CHECK(xs.has_value() == (std::gcd(a, q) == 1));
            if (!xs) continue;
            // re-exponentiate: combine generator^exponent per component by CRT.
            // Components of the same prime power merge multiplicatively; a
            // prime power with trivial unit group (2^1) has no component and
            // contributes the fixed residue 1.
            std::vector<std::pair<std::int64_t, std::int64_t>> residues;  // (residue, prime_power)
            for (const auto& [p, e] : factorize(q)) {
                std::int64_t pp = 1;
                for (int j = 0; j < e; ++j) pp *= p;
                residues.emplace_back(1 % pp, pp);
            }
            for (std::size_t c = 0; c < table->components().size(); ++c) {
                const auto& comp = table->components()[c];
                const std::int64_t r = power_mod(comp.generator, (*xs)[c], comp.prime_power);
                for (auto& [res, pp] : residues)
                    if (pp == comp.prime_power) {
                        res = (res * r) % pp;
                        break;
                    }
            }
            std::int64_t value = 1 % q;
            std::int64_t mod = 1;
            for (const auto& [res, pp] : residues) {
                value = crt_combine(value, mod, res, pp);
                mod *= pp;
            }
            CHECK(value % q == a);
        }
    }
}

TEST_CASE("characters enumeration") {
    CHECK(characters(build_group(5)).size() == 4);
    CHECK(characters(build_group(1)).size() == 1);
    const auto chars3 = characters(build_group(3));
    REQUIRE(chars3.size() == 2);
    CHECK(chars3[0].is_principal());
    CHECK_FALSE(chars3[1].is_principal());
    // distinctness via value vectors
    const auto chars12 = characters(build_group(12));
    for (std::size_t i = 0; i < chars12.size(); ++i)
        for (std::size_t j = i + 1; j < chars12.size(); ++j) {
            double diff = 0.0;
            for (std::int64_t a = 0; a < 12; ++a)
                diff = std::max(diff, std::abs(chars12[i](a) - chars12[j](a)));
            CHECK(diff > 0.5);
        }
}

TEST_CASE("eval_char pinned values") {
    const auto chars7 = characters(build_group(7));
    CHECK(std::abs(chars7[0](3) - complex<double>(1, 0)) < 1e-15);

    // quadratic character mod 5: exponent 2 against the order-4 generator 2
    const DirichletCharacter quad(build_group(5), {2});
    CHECK(std::abs(quad(2) - complex<double>(-1, 0)) < 1e-15);
    CHECK(std::abs(quad(4) - complex<double>(1, 0)) < 1e-15);

    for (const auto& chi : characters(build_group(6))) CHECK(std::abs(chi(3)) == 0.0);
}

TEST_CASE("multiplicativity and unit modulus") {
    for (std::int64_t q : {5, 8, 9, 12, 24, 35}) {
        for (const auto& chi : characters(build_group(q))) {
            for (std::int64_t m = 0; m < q; ++m) {
                CHECK(std::abs(std::abs(chi(m)) - (std::gcd(m, q) == 1 ? 1.0 : 0.0)) < 1e-14);
                for (std::int64_t n = 0; n < q; ++n)
                    CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-13);
            }
        }
    }
}

TEST_CASE("orthogonality within 1e-10 of phi") {
    for (std::int64_t q : {3, 5, 8, 9, 12, 16, 21, 40}) {
        const auto table = build_group(q);
        const auto chars = characters(table);
        const double phi = static_cast<double>(table->phi());
        for (std::int64_t m = 1; m <= q; ++m) {
            for (std::int64_t n = 1; n <= q; ++n) {
                complex<double> sum = 0.0;
                for (const auto& chi : chars) sum += chi(m) * std::conj(chi(n));
                const bool diag =
                    (m % q) == (n % q) && std::gcd(m, q) == 1 && std::gcd(n, q) == 1;
                CHECK(std::abs(sum - (diag ? phi : 0.0)) < 1e-10 * phi);
            }
        }
    }
}

TEST_CASE("conductor matches brute force for q <= 60") {
    for (std::int64_t q = 1; q <= 60; ++q) {
        for (const auto& chi : characters(build_group(q))) {
            CHECK(conductor(chi) == conductor_brute_force(chi));
            CHECK(q % conductor(chi) == 0);
        }
    }
}

TEST_CASE("conductor pinned examples") {
    CHECK(conductor(principal_character(build_group(12))) == 1);
    for (const auto& chi : characters(build_group(5)))
        if (!chi.is_principal()) CHECK(conductor(chi) == 5);
    int period3 = 0;
    for (const auto& chi : characters(build_group(9)))
        if (conductor(chi) == 3) ++period3;
    CHECK(period3 == 1);  // exactly one character mod 9 drops to conductor 3
}

TEST_CASE("induced_primitive agrees on units and is primitive") {
    for (std::int64_t q = 1; q <= 60; ++q) {
        for (const auto& chi : characters(build_group(q))) {
            const DirichletCharacter psi = induced_primitive(chi);
            CHECK(psi.modulus() == conductor(chi));
            CHECK(psi.is_primitive());
            CHECK(conductor(psi) == psi.modulus());
            for (std::int64_t n = 0; n < q; ++n) {
                if (std::gcd(n, q) != 1) continue;
                CHECK(std::abs(chi(n) - psi(n)) < 1e-12);
            }
        }
    }
    // conductor-3 character mod 9 reduces to the non-principal character mod 3
    for (const auto& chi : characters(build_group(9))) {
        if (chi.is_principal() || conductor(chi) != 3) continue;
        const DirichletCharacter psi = induced_primitive(chi);
        CHECK(psi.modulus() == 3);
        CHECK(std::abs(psi(2) - complex<double>(-1, 0)) < 1e-14);
    }
}

TEST_CASE("gauss sums") {
    // quadratic character mod 5: tau = sqrt(5), real and positive
    const DirichletCharacter quad(build_group(5), {2});
    const complex<double> tau5 = gauss_sum(quad);
    CHECK(std::abs(tau5.real() - std::sqrt(5.0)) < 1e-12);
    CHECK(std::abs(tau5.imag()) < 1e-12);

    // odd quadratic character mod 3: tau = i sqrt(3)
    const auto chars3 = characters(build_group(3));
    const complex<double> tau3 = gauss_sum(chars3[1]);
    CHECK(std::abs(tau3.real()) < 1e-12);
    CHECK(std::abs(tau3.imag() - std::sqrt(3.0)) < 1e-12);

    // conductor-3 character mod 9: direct summation oracle
    for (const auto& chi : characters(build_group(9))) {
        if (chi.is_principal() || conductor(chi) != 3) continue;
        complex<double> direct = 0.0;
        for (std::int64_t a = 1; a <= 9; ++a)
            direct += chi(a) * std::exp(complex<double>(0.0, 2.0 * M_PI * a / 9.0));
        CHECK(std::abs(gauss_sum(chi) - direct) < 1e-12);
    }
}

TEST_CASE("|tau| = sqrt(q) for all primitive characters, q <= 200") {
    for (std::int64_t q = 3; q <= 200; ++q) {
        for (const auto& chi : characters(build_group(q))) {
            if (!chi.is_primitive() || chi.is_principal()) continue;
            const double mag = std::abs(gauss_sum(chi));
            CHECK(std::abs(mag - std::sqrt(static_cast<double>(q))) <
                  1e-9 * std::sqrt(static_cast<double>(q)));
        }
    }
}

TEST_CASE("conjugate and index") {
    const auto chars = characters(build_group(7));
    for (std::size_t i = 0; i < chars.size(); ++i) {
        CHECK(chars[i].index() == i);
        const DirichletCharacter bar = chars[i].conjugate();
        for (std::int64_t n = 0; n < 7; ++n)
            CHECK(std::abs(bar(n) - std::conj(chars[i](n))) < 1e-15);
    }
}

TEST_CASE("is_even matches chi(-1)") {
    for (std::int64_t q : {3, 4, 5, 7, 8, 9, 12, 15}) {
        for (const auto& chi : characters(build_group(q))) {
            const complex<double> at_minus1 = chi(q - 1);
            CHECK(chi.is_even() == (std::abs(at_minus1 - complex<double>(1, 0)) < 1e-12));
        }
    }
}
