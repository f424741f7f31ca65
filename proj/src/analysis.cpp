#include "lmoment/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "lmoment/errors.hpp"
#include "lmoment/numtheory.hpp"
#include "lmoment/quadrature.hpp"

namespace lmoment {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p = 1.0, pm = 0.0;
            for (int j = 0; j < n; ++j) {
                const double tmp = ((2.0 * j + 1.0) * t * p - j * pm) / (j + 1.0);
                pm = p;
                p = tmp;
            }
            dp = n * (t * p - pm) / (t * t - 1.0);
            const double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -t;
        x[static_cast<std::size_t>(n - 1 - i)] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
}

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

MomentReport moment_mk(std::int64_t q, double k, const EvaluationContext& ctx) {
    if (k < 0.0) throw DomainError("moment_mk: k must be nonnegative");
    MomentReport rep;
    rep.q = q;
    rep.k = k;
    if (q < 3) {
        rep.phi = q >= 1 ? euler_phi(q) : 0;
        rep.warning = "no non-principal characters below modulus 3";
        return rep;
    }

    const TablePtr table = build_group(q);
    rep.phi = table->phi();
    const std::vector<Complex> zv = hurwitz_vector(Complex(0.5, 0.0), q, ctx, true);
    const std::vector<DirichletCharacter> chars = characters(table);

    const auto& comps = table->components();
    const std::int64_t big_l = table->order_lcm();
    std::vector<std::int64_t> mult(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) mult[c] = big_l / comps[c].order;
    const auto& roots = table->roots();

    const double qinv = 1.0 / std::sqrt(static_cast<double>(q));
    std::vector<Complex> sums(chars.size() - 1, Complex(0.0, 0.0));
    for (std::int64_t a = 1; a < q; ++a) {
        const auto xs = table->dlog(a);
        if (!xs) continue;
        const Complex z = zv[static_cast<std::size_t>(a)];
        for (std::size_t i = 1; i < chars.size(); ++i) {
            const auto& exps = chars[i].exponents();
            __int128 u = 0;
            for (std::size_t c = 0; c < comps.size(); ++c)
                u += static_cast<__int128>(exps[c]) * (*xs)[c] % big_l * mult[c];
            sums[i - 1] += roots[static_cast<std::size_t>(u % big_l)] * z;
        }
    }

    rep.per_character_moment.reserve(sums.size());
    double total = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const double norm2 = std::norm(sums[i]) * qinv * qinv;
        double val;
        if (k == 0.0) {
            val = 1.0;
            if (norm2 < 1e-28) {
                val = 0.0;
                rep.warning += "L(1/2) numerically zero at character index " + std::to_string(i + 1) + "; ";
            }
        } else {
            val = std::pow(norm2, k);
        }
        rep.per_character_moment.push_back(val);
        total += val;
    }
    rep.m_k = total;
    rep.ratio = rep.m_k / (static_cast<double>(rep.phi) *
                           std::pow(std::log(static_cast<double>(q)), k * k));
    return rep;
}

ScanResult scaling_scan(const std::vector<std::int64_t>& q_list, double k,
                        const EvaluationContext& ctx) {
    ScanResult out;
    std::vector<double> ratios;
    for (const std::int64_t q : q_list) {
        ScanRow row;
        row.q = q;
        try {
            if (q < 3) throw DomainError("modulus below 3");
            const MomentReport rep = moment_mk(q, k, ctx);
            row.phi = rep.phi;
            row.m_k = rep.m_k;
            row.ratio = rep.ratio;
            row.ok = std::isfinite(rep.ratio) && rep.ratio > 0.0;
            if (!row.ok) row.error = "non-finite or non-positive ratio";
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        if (row.ok) ratios.push_back(row.ratio);
        else ++out.failures;
        out.rows.push_back(std::move(row));
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        out.min_ratio = ratios.front();
        out.max_ratio = ratios.back();
        const std::size_t n = ratios.size();
        out.median_ratio = (n % 2 == 1) ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    }
    return out;
}

ProofParameters proof_parameters(std::int64_t q, double k, ProofMode mode, double c_k_surrogate) {
    if (q < 3) throw DomainError("proof_parameters: modulus must be at least 3");
    if (!(c_k_surrogate > 0.0)) throw DomainError("proof_parameters: surrogate constant must be positive");

    ProofParameters p;
    p.mode = mode;
    p.k = k;
    p.c_k_surrogate = c_k_surrogate;
    if (mode == ProofMode::GRH) {
        if (!(k > 0.0 && k < 2.0)) throw DomainError("proof_parameters: GRH mode requires k in (0, 2)");
        p.delta = (2.0 - k) / 10.0;
        p.v = 0;
    } else {
        const int v = static_cast<int>(std::lround(1.0 / k));
        if (v < 1 || std::abs(k * v - 1.0) > 1e-12)
            throw DomainError("proof_parameters: unconditional mode requires k = 1/v");
        p.delta = k / 10.0;
        p.v = v;
    }
    const double lq = std::log(static_cast<double>(q));
    p.kappa = std::max(1.0, std::log(2.0 * c_k_surrogate)) / (2.0 * p.delta);
    p.sigma0 = 0.5 + p.kappa / lq;
    p.disc_radius = std::min(p.kappa, 1.0 / p.delta) / lq;
    p.contraction = c_k_surrogate * std::pow(static_cast<double>(q), -p.delta * (2.0 * p.sigma0 - 1.0));
    p.contraction_ok = p.contraction <= 0.5 + 1e-12;
    return p;
}

namespace {

template <typename Eval>
ConvexityCheck convexity_impl(Eval&& eval, double alpha, double gamma, double beta, double tol) {
    if (!(alpha <= gamma && gamma <= beta))
        throw DomainError("convexity_check: need alpha <= gamma <= beta");
    ConvexityCheck out;
    out.alpha = alpha;
    out.gamma = gamma;
    out.beta = beta;
    const double ia = eval(alpha);
    const double ib = (beta == alpha) ? ia : eval(beta);
    out.lhs = (gamma == alpha) ? ia : (gamma == beta) ? ib : eval(gamma);
    if (beta == alpha) {
        out.rhs = ia;
    } else {
        const double e1 = (beta - gamma) / (beta - alpha);
        const double e2 = (gamma - alpha) / (beta - alpha);
        out.rhs = std::pow(ia, e1) * std::pow(ib, e2);
    }
    out.slack = out.rhs - out.lhs;
    out.pass = out.slack >= -tol * out.rhs;
    return out;
}

double kind_rel_target(IntegralKind kind) {
    switch (kind) {
        case IntegralKind::K: return 1e-8;
        case IntegralKind::G: return 1e-4;
        default: return 1e-6;
    }
}

// Two-pass evaluation: a survey pass, then a refinement at a relative target
// once the integral's scale is known.
template <typename Fn>
double refined_value(Fn&& integral_at, double rel_target) {
    const auto first = integral_at(1e-7);
    const double target = std::max(rel_target * std::abs(first.first), 5e-14);
    if (first.second <= target) return first.first;
    return integral_at(target).first;
}

}  // namespace

ConvexityCheck convexity_check(IntegralKind kind, const DirichletCharacter& chi, double alpha,
                               double gamma, double beta, double k, int v, const WeightSpec& spec,
                               double tol, const EvaluationContext& ctx) {
    const double rel = kind_rel_target(kind);
    const auto eval = [&](double sigma) {
        return refined_value(
            [&](double t) {
                const VerticalIntegral r = vertical_integral(kind, chi, sigma, k, v, spec, t, ctx);
                return std::make_pair(r.value, r.error);
            },
            rel);
    };
    return convexity_impl(eval, alpha, gamma, beta, tol);
}

ConvexityCheck convexity_check(IntegralKind kind, std::int64_t q, double alpha, double gamma,
                               double beta, double k, int v, const WeightSpec& spec, double tol,
                               const EvaluationContext& ctx) {
    const double rel = kind_rel_target(kind);
    const auto eval = [&](double sigma) {
        return refined_value(
            [&](double t) {
                const MeanValueResult r = aggregate(kind, q, sigma, k, v, spec, t, ctx);
                return std::make_pair(r.aggregate, r.quadrature_error);
            },
            rel);
    };
    return convexity_impl(eval, alpha, gamma, beta, tol);
}

SubharmonicCheck subharmonic_bound_check(const DirichletCharacter& chi, double k,
                                         const ProofParameters& params, double tol,
                                         const EvaluationContext& ctx) {
    if (chi.is_principal()) throw DomainError("subharmonic_bound_check: character must be non-principal");
    if (!(k > 0.0)) throw DomainError("subharmonic_bound_check: k must be positive");
    const double radius = params.disc_radius;
    if (!(radius > 0.0)) throw DomainError("subharmonic_bound_check: disc radius must be positive");

    const EvaluationContext wctx = ctx.widened(0.5 - radius - 0.02, 0.5 + radius + 0.02);
    const auto f = [&](Complex s) { return std::pow(std::norm(l_value(s, chi, wctx)), k); };

    const auto polar_average = [&](int nr, int na) {
        std::vector<double> gx, gw;
        gauss_legendre(nr, gx, gw);
        double acc = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double r = radius * 0.5 * (gx[static_cast<std::size_t>(i)] + 1.0);
            const double wr = radius * 0.5 * gw[static_cast<std::size_t>(i)];
            double ring = 0.0;
            for (int j = 0; j < na; ++j) {
                const double theta = 2.0 * kPi * (j + 0.5) / na;
                ring += f(Complex(0.5 + r * std::cos(theta), r * std::sin(theta)));
            }
            acc += wr * r * ring * (2.0 * kPi / na);
        }
        return acc / (kPi * radius * radius);
    };

    SubharmonicCheck out;
    out.radius = radius;
    out.point_value = f(Complex(0.5, 0.0));

    int nr = 8, na = 16;
    double avg = polar_average(nr, na);
    for (int level = 0; level < 5; ++level) {
        nr *= 2;
        na *= 2;
        const double next = polar_average(nr, na);
        const bool settled = std::abs(next - avg) <= 1e-4 * std::abs(next);
        avg = next;
        if (settled) break;
    }
    out.disc_average = avg;
    out.slack = out.disc_average - out.point_value;
    out.pass = out.slack >= -tol * out.disc_average;
    return out;
}

MontgomeryScan montgomery_scan(std::int64_t q, double t_height, double tol,
                               const EvaluationContext& ctx) {
    if (q < 3) throw DomainError("montgomery_scan: modulus must be at least 3");
    if (!(t_height >= 2.0)) throw DomainError("montgomery_scan: height must be at least 2");
    if (!(tol > 0.0)) throw DomainError("montgomery_scan: tol must be positive");

    const TablePtr table = build_group(q);
    std::vector<DirichletCharacter> prim;
    for (const DirichletCharacter& chi : characters(table))
        if (!chi.is_principal() && chi.is_primitive()) prim.push_back(chi);

    MontgomeryScan out;
    out.character_count = prim.size();
    out.normalizer = static_cast<double>(table->phi()) * t_height *
                     std::pow(std::log(static_cast<double>(q) * t_height), 4.0);
    if (prim.empty()) return out;

    const auto f = [&](double t, double* vals) {
        const std::vector<Complex> zv = hurwitz_vector(Complex(0.5, t), q, ctx, true);
        for (std::size_t i = 0; i < prim.size(); ++i) {
            const double n2 = std::norm(l_value_from_vector(Complex(0.5, t), prim[i], zv));
            vals[i] = n2 * n2;
        }
    };
    QuadratureOptions qopts;
    qopts.abs_tol = tol * out.normalizer;
    const QuadratureResult qr =
        integrate_vector(f, static_cast<int>(prim.size()), -t_height, t_height, qopts);
    for (const double x : qr.values) out.lhs += x;
    out.ratio = out.lhs / out.normalizer;
    return out;
}

DkSumNorm dksum_norm(std::int64_t q, double k) {
    if (q < 2) throw DomainError("dksum_norm: modulus must be at least 2");
    if (!(k > 0.0)) throw DomainError("dksum_norm: k must be positive");
    const CoefficientSeries dk = dk_table(k, q);
    DkSumNorm out;
    for (std::int64_t n = 1; n <= q; ++n) out.value += dk.at(n) * dk.at(n) / static_cast<double>(n);
    out.ratio = out.value / std::pow(std::log(static_cast<double>(q)), k * k);
    return out;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("spearman_rho: need two equal-length samples of size >= 2");
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace lmoment
