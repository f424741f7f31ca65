#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace lmoment {

/// One cyclic piece of the unit group mod q.  Each odd prime-power factor
/// contributes a single piece; 2^e contributes none for e = 1, one piece for
/// e = 2, and two pieces (orders 2 and 2^{e-2}) for e >= 3.
struct CyclicComponent {
    std::int64_t prime = 0;
    int exponent = 0;
    std::int64_t prime_power = 1;
    std::int64_t generator = 1;  ///< residue mod prime_power
    std::int64_t order = 1;
};

class CharacterTable;
using TablePtr = std::shared_ptr<const CharacterTable>;

/// Structure of the unit group mod q: factorization, cyclic components with
/// deterministic generators (smallest primitive root per odd prime power,
/// {-1, 5} for 2^e with e >= 3), and discrete-log tables per component.
/// Immutable after construction and safe to share across threads.
class CharacterTable {
public:
    static TablePtr build(std::int64_t q);

    std::int64_t modulus() const noexcept { return q_; }
    std::int64_t phi() const noexcept { return phi_; }
    const std::vector<std::pair<std::int64_t, int>>& factorization() const noexcept { return factors_; }
    const std::vector<CyclicComponent>& components() const noexcept { return components_; }

    /// lcm of the component orders (the exponent of the group).
    std::int64_t order_lcm() const noexcept { return order_lcm_; }

    /// roots()[j] = e^{2 pi i j / order_lcm()}.
    const std::vector<std::complex<double>>& roots() const noexcept { return roots_; }

    bool is_unit(std::int64_t a) const noexcept;

    /// Exponent vector of a unit residue, one entry per cyclic component;
    /// empty optional when gcd(a, q) > 1.
    std::optional<std::vector<std::int64_t>> dlog(std::int64_t a) const;

    /// Numerator u in [0, order_lcm) such that the character with the given
    /// exponents takes the value e^{2 pi i u / order_lcm} at a; empty when
    /// gcd(a, q) > 1.  Exact integer arithmetic throughout.
    std::optional<std::int64_t> phase(const std::vector<std::int64_t>& exponents, std::int64_t a) const;

private:
    CharacterTable() = default;

    std::int64_t q_ = 1;
    std::int64_t phi_ = 1;
    std::int64_t order_lcm_ = 1;
    std::vector<std::pair<std::int64_t, int>> factors_;
    std::vector<CyclicComponent> components_;
    /// dlog_tables_[c][a mod prime_power] = exponent of generator c, or -1 off units.
    std::vector<std::vector<std::int32_t>> dlog_tables_;
    std::vector<std::complex<double>> roots_;
};

/// A Dirichlet character mod q, identified by its exponent vector against the
/// table's cyclic generators.  Values are exact roots of unity looked up from
/// the table's root cache; the optional length-q value vector is built once
/// on first use (thread-safe) and shared by copies.
class DirichletCharacter {
public:
    DirichletCharacter(TablePtr table, std::vector<std::int64_t> exponents);

    const CharacterTable& table() const noexcept { return *table_; }
    const TablePtr& table_ptr() const noexcept { return table_; }
    std::int64_t modulus() const noexcept { return table_->modulus(); }
    const std::vector<std::int64_t>& exponents() const noexcept { return exponents_; }

    std::complex<double> operator()(std::int64_t n) const;
    std::optional<std::int64_t> phase(std::int64_t n) const { return table_->phase(exponents_, n); }

    /// chi(0..q-1), built lazily, then cached for the character's lifetime.
    const std::vector<std::complex<double>>& values() const;

    bool is_principal() const noexcept;
    bool is_primitive() const;
    bool is_even() const;  ///< chi(-1) == 1
    DirichletCharacter conjugate() const;

    /// Rank in the lexicographic enumeration used by characters().
    std::size_t index() const;

private:
    TablePtr table_;
    std::vector<std::int64_t> exponents_;
    struct ValueCache {
        std::once_flag once;
        std::vector<std::complex<double>> values;
    };
    std::shared_ptr<ValueCache> cache_;
};

TablePtr build_group(std::int64_t q);

/// All phi(q) characters, principal first, then ascending lexicographic
/// order of exponent vectors.
std::vector<DirichletCharacter> characters(const TablePtr& table);

DirichletCharacter principal_character(const TablePtr& table);

std::complex<double> eval_char(const DirichletCharacter& chi, std::int64_t n);

/// Smallest q1 | q such that chi is induced by a character mod q1.
std::int64_t conductor(const DirichletCharacter& chi);

/// The primitive character mod conductor(chi) agreeing with chi on units.
DirichletCharacter induced_primitive(const DirichletCharacter& chi);

/// tau(chi) = sum_{a=1}^{q} chi(a) e^{2 pi i a / q}.
std::complex<double> gauss_sum(const DirichletCharacter& chi);

}  // namespace lmoment
