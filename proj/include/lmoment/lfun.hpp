#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lmoment/chargroup.hpp"

namespace lmoment {

using Complex = std::complex<double>;

/// Numeric policy shared by every analytic evaluation: Euler–Maclaurin depth,
/// error targets, branch-tracking granularity and the admissible (σ, t) window.
struct EvaluationContext {
    int em_terms = 48;               // initial-sum length floor
    int em_bernoulli_depth = 14;     // correction terms (≤ 24)
    double target_abs_error = 1e-12;
    double branch_step = 0.05;       // horizontal continuation step for L^k
    int branch_max_refine = 64;      // bisection budget per continuation
    double sigma_min = 0.3;
    double sigma_max = 3.5;
    double t_max = 200000.0;
    bool internal_extension = false;  // set by widened(); relaxes the envelope check

    void validate() const;

    /// Copy with the σ window stretched to cover [lo, hi].  Used internally for
    /// disc averages and reflected evaluations.  The error target is relaxed to
    /// what double rounding allows when the window dips below σ = 0: the
    /// initial sum then grows like N^{1-σ} and its rounding noise scales with it.
    EvaluationContext widened(double lo, double hi) const;

    /// Stable 64-bit digest of every policy field (cache invalidation key).
    std::uint64_t fingerprint() const;
};

/// Hurwitz zeta ζ(s, a) for a ∈ (0, 1], Euler–Maclaurin with automatic
/// lengthening of the initial sum until the error estimate meets the target.
Complex hurwitz_zeta(Complex s, double a, const EvaluationContext& ctx);

/// ζ(s) = ζ(s, 1).
Complex riemann_zeta(Complex s, const EvaluationContext& ctx);

/// The vector ζ(s, a/q) for a = 1..q, indexed by a (entry 0 unused).  With
/// units_only, residues sharing a factor with q are left as zero — every
/// character sum only reads the unit entries.
std::vector<Complex> hurwitz_vector(Complex s, std::int64_t q, const EvaluationContext& ctx,
                                    bool units_only = true);

/// L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q); principal characters use
/// ζ(s)·∏_{p|q}(1 - p^{-s}) instead of the full residue sum.
Complex l_value(Complex s, const DirichletCharacter& chi, const EvaluationContext& ctx);

/// Same combination with a precomputed Hurwitz vector for this s and modulus.
Complex l_value_from_vector(Complex s, const DirichletCharacter& chi,
                            const std::vector<Complex>& zv);

/// L(s, χ)^k for non-principal χ, Re s > ½, k > 0.  The logarithm branch is
/// carried from the anchor σ = 3 (where the Euler product pins |arg| < π/2)
/// by horizontal steps ≤ branch_step; any step whose argument jump exceeds
/// π/2 is bisected.  Exhausting branch_max_refine signals a suspected zero.
Complex l_power(Complex s, const DirichletCharacter& chi, double k,
                const EvaluationContext& ctx);

/// Branch-coherent L(σ+it, χ)^k along a fixed vertical line, for use inside
/// quadrature loops that visit t in arbitrary order.  Arguments are continued
/// from the nearest previously resolved height; gaps wider than a few units
/// get a fresh horizontal anchor walk instead, so aliasing across distant
/// heights cannot occur.  An optional provider supplies L(s) values (letting
/// callers share Hurwitz work across characters); it defaults to l_value.
class LPowerLine {
public:
    LPowerLine(double sigma, DirichletCharacter chi, double k, EvaluationContext ctx,
               std::function<Complex(Complex)> l_provider = {});

    /// L(σ+it, χ)^k with the continued branch.
    Complex value(double t);

    /// The continued argument of L(σ+it, χ) itself.
    double arg_at(double t);

    double sigma() const { return sigma_; }

private:
    Complex l_at(Complex s);
    double fresh_anchor(double t);
    double continue_vertical(double t_from, double arg_from, double t_to);

    double sigma_;
    DirichletCharacter chi_;
    double k_;
    EvaluationContext ctx_;
    std::function<Complex(Complex)> provider_;
    std::map<double, double> args_;  // resolved heights → arg L
    static constexpr double kFreshGap = 8.0;
};

/// |Λ(s,χ) − ε(χ)Λ(1−s, conj χ)| for primitive non-principal χ, where
/// Λ(s,χ) = (q/π)^{(s+a)/2} Γ((s+a)/2) L(s,χ) and ε(χ) = τ(χ)/(i^a √q).
double fe_residual(const DirichletCharacter& chi, Complex s, const EvaluationContext& ctx);

struct FeRatio {
    double ratio = 0.0;      // |L(1-σ+it)| / ((1+|t|)^{σ-½} q^{σ-½} |L(σ+it)|)
    double rho = 1.0;        // imprimitivity factor ∏_{p|q₂} |1-ψ(p)p^{-σ-it}|/|1-ψ(p)p^{σ-1-it}|
    bool degenerate = false; // |L(σ+it)| under the floor; ratio meaningless
};

/// Reflection-growth ratio for ½ ≤ σ ≤ ¾, plus the Euler-factor correction ρ
/// comparing an imprimitive character to the primitive ψ inducing it.
FeRatio fe_ratio(double sigma, double t, const DirichletCharacter& chi,
                 const EvaluationContext& ctx);

}  // namespace lmoment
