#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/chargroup.hpp"
#include "lmoment/lfun.hpp"

namespace lmoment {

/// Parameters of the vertical-line weight W(s) = (q^{δ(s-½)} - 1)/((s-½) log q).
struct WeightSpec {
    std::int64_t modulus = 3;
    double delta = 0.1;
};

/// W(s); the removable singularity at s = ½ is filled by a degree-6 Taylor
/// expansion in u = (s-½)δ log q whenever |u| < 1e-3.
Complex weight_w(Complex s, const WeightSpec& spec);

struct WeightSixthMoment {
    double value = 0.0;              // ∫_{-∞}^{∞} |W(σ+it)|^6 dt
    double ratio = 0.0;              // value / (q^{3δ(2σ-1)} / log q)
    double error = 0.0;              // quadrature + tail estimate
    double truncation_height = 0.0;  // T used before the analytic tail bound takes over
};

WeightSixthMoment weight_sixth_moment(double sigma, const WeightSpec& spec, double tol);

enum class IntegralKind { J, K, G, H, Jstar };

const char* kind_name(IntegralKind kind);
std::optional<IntegralKind> kind_from_name(const std::string& name);

/// Pointwise integrand value at s = σ+it:
///   J:  |L(s,χ)|^{2k} |W(s)|^6
///   K:  |S(s,χ)|^2 |W(s)|^6, S the d_k coefficient series truncated at q
///   G:  |L(s,χ)^k - S(s,χ)|^2 |W(s)|^6 (branch-tracked power)
///   H:  |L(s,χ) - S(s,χ)^v|^{2/v} |W(s)|^6 with k = 1/v
///   J*: |L(s,χ)|^{2k} / (1+t²)
/// Principal characters are rejected except for K, whose identity sums run
/// over the full character group.
double integrand(IntegralKind kind, const DirichletCharacter& chi, Complex s, double k, int v,
                 const WeightSpec& spec, const EvaluationContext& ctx);

struct VerticalIntegral {
    double value = 0.0;
    double error = 0.0;              // quadrature error + analytic tail bound
    double truncation_height = 0.0;  // T of the integration window [-T, T]
};

/// ∫_{-T}^{T} integrand dt with T sized from the |W|^6 envelope (or the
/// 1/(1+t²) kernel for J*) so the discarded tail stays below tol/10.
/// t_override > 0 forces the window height (the tail bound is re-evaluated
/// at the forced height); used for truncation-soundness checks.
VerticalIntegral vertical_integral(IntegralKind kind, const DirichletCharacter& chi, double sigma,
                                   double k, int v, const WeightSpec& spec, double tol,
                                   const EvaluationContext& ctx, double t_override = 0.0);

struct MeanValueResult {
    IntegralKind kind = IntegralKind::J;
    double sigma = 0.0;
    double k = 0.0;
    int v = 1;
    std::vector<double> per_character;        // non-principal χ, enumeration order
    std::vector<double> per_character_error;
    double aggregate = 0.0;                   // deterministic fold of per_character
    double quadrature_error = 0.0;
    double truncation_height = 0.0;
};

/// Per-character vertical integrals over every non-principal χ mod q, sharing
/// one quadrature panel set and one Hurwitz vector per node across the whole
/// group.
MeanValueResult aggregate(IntegralKind kind, std::int64_t q, double sigma, double k, int v,
                          const WeightSpec& spec, double tol, const EvaluationContext& ctx,
                          double t_override = 0.0);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
    double lhs_error = 0.0;          // quadrature error + truncation bound on lhs
    double truncation_height = 0.0;  // T of the integration windows
};

/// Orthogonality identity for the truncated series: Σ_{ALL χ} K(σ,χ) =
/// φ(q) Σ_{n≤q,(n,q)=1} d_k(n)² n^{-2σ} ∫|W|^6 dt.  The two sides are
/// computed by unrelated code paths (quadrature vs coefficient sum); tol is
/// the relative accuracy request for the comparison.
IdentityCheck k_identity_check(std::int64_t q, double sigma, double k, const WeightSpec& spec,
                               double tol, const EvaluationContext& ctx, double t_override = 0.0);

struct GTailCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
    double tail_bound = 0.0;         // truncation + off-diagonal + quadrature allowance
    double truncation_height = 0.0;  // kernel cutoff T on the lhs integrals
};

/// Tail orthogonality at σ = 3/2 with kernel 1/(1+t²):
///   Σ_{ALL χ} ∫ |Σ_{q<n≤M} d_k(n)χ(n)n^{-3/2-it}|² dt/(1+t²)
///     = π φ(q) Σ_{q<m,n≤M, q|m-n, (mn,q)=1} d_k(m)d_k(n) min(m^{-1/2}n^{-5/2}, n^{-1/2}m^{-5/2}).
GTailCheck g_tail_identity_check(std::int64_t q, double k, std::int64_t m_cut, double tol,
                                 const EvaluationContext& ctx, double t_override = 0.0);

}  // namespace lmoment
