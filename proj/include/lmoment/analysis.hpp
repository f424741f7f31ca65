#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmoment/chargroup.hpp"
#include "lmoment/lfun.hpp"
#include "lmoment/meanvalue.hpp"

namespace lmoment {

struct MomentReport {
    std::int64_t q = 0;
    double k = 0.0;
    std::int64_t phi = 0;
    std::vector<double> per_character_moment;  // |L(½,χ)|^{2k}, non-principal χ
    double m_k = 0.0;                          // sum of per_character_moment
    double ratio = 0.0;                        // m_k / (φ(q) (log q)^{k²})
    std::string warning;                       // nonempty for q < 3 and flagged zeros
};

/// M_k(q) via one shared ζ(½, a/q) vector for the whole character group.
/// k = 0 is admitted for calibration (each term is 1 unless L(½,χ) = 0).
MomentReport moment_mk(std::int64_t q, double k, const EvaluationContext& ctx);

struct ScanRow {
    std::int64_t q = 0;
    std::int64_t phi = 0;
    double m_k = 0.0;
    double ratio = 0.0;
    bool ok = false;
    std::string error;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    double min_ratio = 0.0;
    double median_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t failures = 0;
};

/// moment_mk over a list of moduli; per-q failures become NA rows and the
/// scan continues.  Summary statistics cover the successful rows.
ScanResult scaling_scan(const std::vector<std::int64_t>& q_list, double k,
                        const EvaluationContext& ctx);

enum class ProofMode { GRH, Unconditional };

struct ProofParameters {
    ProofMode mode = ProofMode::GRH;
    double k = 1.0;
    int v = 1;                    // meaningful in unconditional mode (k = 1/v)
    double delta = 0.0;           // (2-k)/10 under GRH, k/10 unconditionally
    double c_k_surrogate = 1.0;
    double kappa = 0.0;           // (2δ)^{-1} max(1, log 2c_k)
    double sigma0 = 0.0;          // ½ + κ/log q
    double disc_radius = 0.0;     // min(κ, δ^{-1})/log q
    double contraction = 0.0;     // c_k q^{-δ(2σ₀-1)}
    bool contraction_ok = false;  // contraction ≤ ½
};

ProofParameters proof_parameters(std::int64_t q, double k, ProofMode mode, double c_k_surrogate);

struct ConvexityCheck {
    double alpha = 0.0, gamma = 0.0, beta = 0.0;
    double lhs = 0.0;   // I(γ)
    double rhs = 0.0;   // I(α)^{(β-γ)/(β-α)} I(β)^{(γ-α)/(β-α)}
    double slack = 0.0; // rhs - lhs; the inequality holds when slack ≥ -tol·rhs
    bool pass = false;
};

/// Log-convexity of the vertical-line integral in σ for one character.
ConvexityCheck convexity_check(IntegralKind kind, const DirichletCharacter& chi, double alpha,
                               double gamma, double beta, double k, int v, const WeightSpec& spec,
                               double tol, const EvaluationContext& ctx);

/// Same inequality for the aggregate over all non-principal χ mod q.
ConvexityCheck convexity_check(IntegralKind kind, std::int64_t q, double alpha, double gamma,
                               double beta, double k, int v, const WeightSpec& spec, double tol,
                               const EvaluationContext& ctx);

struct SubharmonicCheck {
    double point_value = 0.0;   // |L(½,χ)|^{2k}
    double disc_average = 0.0;  // mean of |L(½+z,χ)|^{2k} over |z| ≤ R
    double slack = 0.0;         // disc_average - point_value
    double radius = 0.0;
    bool pass = false;          // slack ≥ -tol·disc_average
};

/// Mean-value inequality for |L|^{2k} on the disc of radius params.disc_radius
/// about ½, by a polar product rule refined until two levels agree.
SubharmonicCheck subharmonic_bound_check(const DirichletCharacter& chi, double k,
                                         const ProofParameters& params, double tol,
                                         const EvaluationContext& ctx);

struct MontgomeryScan {
    double lhs = 0.0;         // Σ_{χ primitive} ∫_{-T}^{T} |L(½+it,χ)|⁴ dt
    double normalizer = 0.0;  // φ(q) T (log qT)⁴
    double ratio = 0.0;
    std::size_t character_count = 0;
};

MontgomeryScan montgomery_scan(std::int64_t q, double t_height, double tol,
                               const EvaluationContext& ctx);

struct DkSumNorm {
    double value = 0.0;  // Σ_{n≤q} d_k(n)²/n
    double ratio = 0.0;  // value / (log q)^{k²}
};

DkSumNorm dksum_norm(std::int64_t q, double k);

/// Spearman rank correlation with average ranks on ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lmoment
