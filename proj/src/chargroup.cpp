#include "lmoment/chargroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "lmoment/errors.hpp"
#include "lmoment/numtheory.hpp"

namespace lmoment {

namespace {

std::int64_t ipow(std::int64_t p, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= p;
    return r;
}

std::vector<std::int32_t> cyclic_dlog_table(std::int64_t pe, std::int64_t g, std::int64_t order) {
    std::vector<std::int32_t> table(static_cast<std::size_t>(pe), -1);
    std::int64_t x = 1;
    for (std::int64_t i = 0; i < order; ++i) {
        table[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(i);
        x = static_cast<std::int64_t>(static_cast<__int128>(x) * g % pe);
    }
    return table;
}

}  // namespace

TablePtr CharacterTable::build(std::int64_t q) {
    if (q < 1) throw DomainError("CharacterTable::build: modulus must be >= 1");
    auto table = std::shared_ptr<CharacterTable>(new CharacterTable());
    table->q_ = q;
    table->factors_ = factorize(q);
    table->phi_ = euler_phi(q);

    for (const auto& [p, e] : table->factors_) {
        const std::int64_t pe = ipow(p, e);
        if (p == 2) {
            if (e == 1) continue;  // (Z/2)^* is trivial
            if (e == 2) {
                CyclicComponent c{p, e, pe, 3, 2};
                table->components_.push_back(c);
                table->dlog_tables_.push_back(cyclic_dlog_table(pe, 3, 2));
                continue;
            }
            // (Z/2^e)^* = <-1> x <5> with orders 2 and 2^{e-2}
            const std::int64_t half_order = pe / 4;
            CyclicComponent cm{p, e, pe, pe - 1, 2};
            CyclicComponent c5{p, e, pe, 5, half_order};
            std::vector<std::int32_t> tm(static_cast<std::size_t>(pe), -1);
            std::vector<std::int32_t> t5(static_cast<std::size_t>(pe), -1);
            for (int sign = 0; sign < 2; ++sign) {
                std::int64_t x = (sign == 0) ? 1 : pe - 1;
                for (std::int64_t j = 0; j < half_order; ++j) {
                    tm[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(sign);
                    t5[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(j);
                    x = static_cast<std::int64_t>(static_cast<__int128>(x) * 5 % pe);
                }
            }
            table->components_.push_back(cm);
            table->dlog_tables_.push_back(std::move(tm));
            table->components_.push_back(c5);
            table->dlog_tables_.push_back(std::move(t5));
            continue;
        }
        const std::int64_t g = smallest_primitive_root(pe);
        const std::int64_t order = euler_phi(pe);
        CyclicComponent c{p, e, pe, g, order};
        table->components_.push_back(c);
        table->dlog_tables_.push_back(cyclic_dlog_table(pe, g, order));
    }

    std::int64_t lcm = 1;
    for (const auto& c : table->components_) lcm = std::lcm(lcm, c.order);
    table->order_lcm_ = lcm;

    table->roots_.resize(static_cast<std::size_t>(lcm));
    for (std::int64_t j = 0; j < lcm; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(lcm);
        table->roots_[static_cast<std::size_t>(j)] = {std::cos(theta), std::sin(theta)};
    }
    return table;
}

bool CharacterTable::is_unit(std::int64_t a) const noexcept {
    const std::int64_t r = ((a % q_) + q_) % q_;
    return std::gcd(r, q_) == 1;
}

std::optional<std::vector<std::int64_t>> CharacterTable::dlog(std::int64_t a) const {
    const std::int64_t r = ((a % q_) + q_) % q_;
    if (std::gcd(r, q_) != 1) return std::nullopt;
    std::vector<std::int64_t> out(components_.size());
    for (std::size_t c = 0; c < components_.size(); ++c) {
        const std::int64_t rc = r % components_[c].prime_power;
        out[c] = dlog_tables_[c][static_cast<std::size_t>(rc)];
    }
    return out;
}

std::optional<std::int64_t> CharacterTable::phase(const std::vector<std::int64_t>& exponents,
                                                  std::int64_t a) const {
    const std::int64_t r = ((a % q_) + q_) % q_;
    if (std::gcd(r, q_) != 1) return std::nullopt;
    std::int64_t u = 0;
    for (std::size_t c = 0; c < components_.size(); ++c) {
        const std::int64_t rc = r % components_[c].prime_power;
        const std::int64_t x = dlog_tables_[c][static_cast<std::size_t>(rc)];
        const std::int64_t scale = order_lcm_ / components_[c].order;
        u = (u + static_cast<std::int64_t>(
                     static_cast<__int128>(exponents[c]) * x % order_lcm_ * scale % order_lcm_)) %
            order_lcm_;
    }
    return u;
}

DirichletCharacter::DirichletCharacter(TablePtr table, std::vector<std::int64_t> exponents)
    : table_(std::move(table)), exponents_(std::move(exponents)), cache_(std::make_shared<ValueCache>()) {
    const auto& comps = table_->components();
    if (exponents_.size() != comps.size())
        throw DomainError("DirichletCharacter: exponent vector length mismatch");
    for (std::size_t c = 0; c < comps.size(); ++c)
        exponents_[c] = ((exponents_[c] % comps[c].order) + comps[c].order) % comps[c].order;
}

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
    const auto u = table_->phase(exponents_, n);
    if (!u) return {0.0, 0.0};
    return table_->roots()[static_cast<std::size_t>(*u)];
}

const std::vector<std::complex<double>>& DirichletCharacter::values() const {
    std::call_once(cache_->once, [this] {
        const std::int64_t q = table_->modulus();
        cache_->values.assign(static_cast<std::size_t>(q), {0.0, 0.0});
        for (std::int64_t a = 0; a < q; ++a) {
            const auto u = table_->phase(exponents_, a);
            if (u) cache_->values[static_cast<std::size_t>(a)] = table_->roots()[static_cast<std::size_t>(*u)];
        }
        if (q == 1) cache_->values.assign(1, {1.0, 0.0});
    });
    return cache_->values;
}

bool DirichletCharacter::is_principal() const noexcept {
    return std::all_of(exponents_.begin(), exponents_.end(), [](std::int64_t m) { return m == 0; });
}

bool DirichletCharacter::is_primitive() const { return conductor(*this) == table_->modulus(); }

bool DirichletCharacter::is_even() const {
    const auto u = table_->phase(exponents_, table_->modulus() - 1);
    if (!u) return true;  // q <= 2
    return *u == 0;
}

DirichletCharacter DirichletCharacter::conjugate() const {
    std::vector<std::int64_t> neg(exponents_.size());
    for (std::size_t c = 0; c < neg.size(); ++c) neg[c] = -exponents_[c];
    return DirichletCharacter(table_, std::move(neg));
}

std::size_t DirichletCharacter::index() const {
    std::size_t idx = 0;
    const auto& comps = table_->components();
    for (std::size_t c = 0; c < comps.size(); ++c)
        idx = idx * static_cast<std::size_t>(comps[c].order) + static_cast<std::size_t>(exponents_[c]);
    return idx;
}

TablePtr build_group(std::int64_t q) { return CharacterTable::build(q); }

std::vector<DirichletCharacter> characters(const TablePtr& table) {
    const auto& comps = table->components();
    std::vector<DirichletCharacter> out;
    out.reserve(static_cast<std::size_t>(table->phi()));
    std::vector<std::int64_t> exps(comps.size(), 0);
    while (true) {
        out.emplace_back(table, exps);
        // lexicographic odometer, least significant position last
        std::size_t c = comps.size();
        while (c > 0) {
            --c;
            if (++exps[c] < comps[c].order) break;
            exps[c] = 0;
            if (c == 0) return out;
        }
        if (comps.empty()) return out;
    }
}

DirichletCharacter principal_character(const TablePtr& table) {
    return DirichletCharacter(table, std::vector<std::int64_t>(table->components().size(), 0));
}

std::complex<double> eval_char(const DirichletCharacter& chi, std::int64_t n) { return chi(n); }

std::int64_t conductor(const DirichletCharacter& chi) {
    const auto& table = chi.table();
    const auto& comps = table.components();
    const auto& exps = chi.exponents();

    std::int64_t cond = 1;
    // Walk components grouped by prime; the two 2-adic components (if present)
    // are adjacent and share prime_power.
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto& comp = comps[c];
        if (comp.prime != 2) {
            const std::int64_t m = exps[c];
            if (m == 0) continue;
            int v = 0;
            std::int64_t mm = m;
            while (mm % comp.prime == 0) {
                mm /= comp.prime;
                ++v;
            }
            const int j = std::max(1, comp.exponent - v);
            cond *= ipow(comp.prime, j);
            continue;
        }
        if (comp.exponent == 2) {  // single component mod 4
            if (exps[c] != 0) cond *= 4;
            continue;
        }
        // two components: c is <-1>, c+1 is <5>
        const std::int64_t m_minus = exps[c];
        const std::int64_t m_five = exps[c + 1];
        if (m_five != 0) {
            int v = 0;
            std::int64_t mm = m_five;
            while (mm % 2 == 0) {
                mm /= 2;
                ++v;
            }
            cond *= ipow(2, comp.exponent - v);
        } else if (m_minus != 0) {
            cond *= 4;
        }
        ++c;  // consumed the <5> component as well
    }
    return cond;
}

DirichletCharacter induced_primitive(const DirichletCharacter& chi) {
    const std::int64_t q = chi.modulus();
    const std::int64_t q1 = conductor(chi);
    if (q1 == q) return chi;
    const TablePtr target = build_group(q1);
    const auto& tcomps = target->components();
    const std::int64_t big_l = chi.table().order_lcm();

    std::vector<std::int64_t> exps(tcomps.size());
    for (std::size_t c = 0; c < tcomps.size(); ++c) {
        const auto& comp = tcomps[c];
        // Lift the generator to a residue mod q that is 1 away from the
        // relevant prime power, so only that factor contributes to the phase.
        std::int64_t other = 1;
        std::int64_t pe_in_q = 1;
        for (const auto& [p, e] : chi.table().factorization()) {
            const std::int64_t pe = ipow(p, e);
            if (p == comp.prime)
                pe_in_q = pe;
            else
                other *= pe;
        }
        const std::int64_t lifted =
            (other == 1) ? comp.generator % q : crt_combine(comp.generator % pe_in_q, pe_in_q, 1, other);
        const auto u = chi.phase(lifted);
        if (!u) throw ConvergenceError("induced_primitive: lifted generator not a unit (unreachable)");
        // chi(lifted) = e^{2 pi i u / big_l} must be an order-comp.order root.
        const __int128 prod = static_cast<__int128>(*u) * comp.order;
        if (prod % big_l != 0)
            throw ConvergenceError("induced_primitive: phase not divisible (conductor bug)");
        exps[c] = static_cast<std::int64_t>(prod / big_l);
    }
    return DirichletCharacter(target, std::move(exps));
}

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
    const std::int64_t q = chi.modulus();
    const auto& vals = chi.values();
    std::complex<double> tau{0.0, 0.0};
    for (std::int64_t a = 1; a <= q; ++a) {
        const auto& v = vals[static_cast<std::size_t>(a % q)];
        if (v == std::complex<double>{0.0, 0.0}) continue;
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(q);
        tau += v * std::complex<double>{std::cos(theta), std::sin(theta)};
    }
    return tau;
}

}  // namespace lmoment
