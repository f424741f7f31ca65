#include "lmoment/meanvalue.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>

#include "lmoment/errors.hpp"
#include "lmoment/quadrature.hpp"

namespace lmoment {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_log_q(const WeightSpec& spec) {
    if (spec.modulus < 2) throw DomainError("WeightSpec: modulus must be at least 2");
    if (!(spec.delta > 0.0)) throw DomainError("WeightSpec: delta must be positive");
    return std::log(static_cast<double>(spec.modulus));
}

double w6_at(Complex s, const WeightSpec& spec) {
    const double n2 = std::norm(weight_w(s, spec));
    return n2 * n2 * n2;
}

// |L(sigma+it, chi)| <= abel_l_bound * (1+|t|) for every non-principal chi
// mod q: partial summation of the Dirichlet series at B = sqrt(q) log q,
// with the character sums beyond B bounded by sqrt(q) log q.
double abel_l_bound(std::int64_t q, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("abel_l_bound: sigma must be positive");
    const double qd = static_cast<double>(q);
    const double pv = std::sqrt(qd) * std::log(qd);
    const double b = std::max(2.0, pv);
    const double head = (std::abs(sigma - 1.0) < 1e-12)
                            ? std::log(b)
                            : (std::pow(b, 1.0 - sigma) - 1.0) / (1.0 - sigma);
    return std::max(sigma, 1.0) * (1.0 + head + pv * std::pow(b, -sigma) / sigma);
}

double series_sup(const CoefficientSeries& dk, double sigma) {
    double s = 0.0;
    for (std::int64_t n = 1; n <= dk.cutoff; ++n) s += dk.at(n) * std::pow(static_cast<double>(n), -sigma);
    return s;
}

double zeta_real(double sigma, const EvaluationContext& ctx) {
    return hurwitz_zeta(Complex(sigma, 0.0), 1.0, ctx).real();
}

struct TailPlan {
    double height = 0.0;  // T
    double bound = 0.0;   // tail estimate beyond [-T, T]
};

// Chooses T so the two-sided analytic tail falls below budget.  The L-factor
// is enveloped by C·t^A with the pinned exponent A = 2 max(k, 1); above
// sigma = 1.05 the termwise zeta bound gives a flat (A = 0) alternative and
// the smaller T wins.
TailPlan plan_tail(IntegralKind kind, std::int64_t q, double sigma, double k, int v,
                   const WeightSpec& spec, double budget, const CoefficientSeries* dk,
                   const EvaluationContext& ctx, double t_override = 0.0) {
    const double lq = checked_log_q(spec);
    const double cw = (std::pow(static_cast<double>(spec.modulus), spec.delta * (sigma - 0.5)) + 1.0) / lq;
    const double c6 = std::pow(cw, 6.0);
    const double a_pinned = 2.0 * std::max(k, 1.0);
    const double t_floor = std::max(10.0, 20.0 / (spec.delta * lq));

    const auto solve_w6 = [&](double c_env, double a_env) {
        // two-sided tail: 2 C c6 T^{A-5} / (5-A) <= budget
        return std::pow(2.0 * c_env * c6 / ((5.0 - a_env) * budget), 1.0 / (5.0 - a_env));
    };
    const auto w6_tail_at = [&](double c_env, double a_env, double t) {
        return 2.0 * c_env * c6 * std::pow(t, a_env - 5.0) / (5.0 - a_env);
    };

    double t_best = std::numeric_limits<double>::infinity();
    double c_best = 0.0, a_best = 0.0;
    const auto consider = [&](double c_env, double a_env) {
        if (a_env >= 5.0) return;  // envelope outruns the |W|^6 decay
        const double t = solve_w6(c_env, a_env);
        if (t < t_best) {
            t_best = t;
            c_best = c_env;
            a_best = a_env;
        }
    };

    switch (kind) {
        case IntegralKind::K: {
            const double smax = series_sup(*dk, sigma);
            consider(smax * smax, 0.0);
            break;
        }
        case IntegralKind::J: {
            consider(std::pow(2.0 * abel_l_bound(q, sigma), 2.0 * k), a_pinned);
            if (sigma > 1.05) consider(std::pow(zeta_real(sigma, ctx), 2.0 * k), 0.0);
            break;
        }
        case IntegralKind::G: {
            const double smax = series_sup(*dk, sigma);
            const double c1 = std::pow(2.0 * abel_l_bound(q, sigma), k) + smax;
            consider(c1 * c1, a_pinned);
            if (sigma > 1.05) {
                const double c2 = std::pow(zeta_real(sigma, ctx), k) + smax;
                consider(c2 * c2, 0.0);
            }
            break;
        }
        case IntegralKind::H: {
            const double smax_v = std::pow(series_sup(*dk, sigma), static_cast<double>(v));
            consider(std::pow(2.0 * abel_l_bound(q, sigma) + smax_v, 2.0 / v), a_pinned);
            if (sigma > 1.05)
                consider(std::pow(zeta_real(sigma, ctx) + smax_v, 2.0 / v), 0.0);
            break;
        }
        case IntegralKind::Jstar: {
            // kernel 1/(1+t^2); no |W|^6 factor
            if (sigma > 1.05) {
                const double c = std::pow(zeta_real(sigma, ctx), 2.0 * k);
                const double t =
                    t_override > 0.0 ? t_override : std::max(t_floor, 2.0 * c / budget);
                return {t, 2.0 * c / t};
            }
            if (2.0 * k < 1.0) {
                const double c = std::pow(2.0 * abel_l_bound(q, sigma), 2.0 * k);
                const double t =
                    t_override > 0.0
                        ? t_override
                        : std::max(t_floor, std::pow(2.0 * c / ((1.0 - 2.0 * k) * budget),
                                                     1.0 / (1.0 - 2.0 * k)));
                if (t > 5e7)
                    throw ConvergenceError("vertical_integral: J* tail requires an impractical window");
                return {t, 2.0 * c * std::pow(t, 2.0 * k - 1.0) / (1.0 - 2.0 * k)};
            }
            throw ConvergenceError(
                "vertical_integral: no usable J* tail bound for k >= 1/2 at sigma <= 1.05");
        }
    }
    if (!std::isfinite(t_best))
        throw ConvergenceError("vertical_integral: no tail envelope applies to these parameters");
    const double t = t_override > 0.0 ? t_override : std::max(t_floor, t_best);
    return {t, w6_tail_at(c_best, a_best, t)};
}

void check_kind_domain(IntegralKind kind, const DirichletCharacter& chi, double sigma, double k,
                       int v) {
    if (chi.is_principal() && kind != IntegralKind::K)
        throw DomainError("integrand: principal character only admitted for K");
    if (!(k > 0.0)) throw DomainError("integrand: k must be positive");
    if (v < 1) throw DomainError("integrand: v must be a positive integer");
    if (kind == IntegralKind::G && !(sigma >= 0.52))
        throw DomainError("integrand: G requires sigma >= 0.52 (branch-tracking margin)");
    if (kind == IntegralKind::H && std::abs(k * v - 1.0) > 1e-9)
        throw DomainError("integrand: H requires k = 1/v");
}

bool kind_needs_l(IntegralKind kind) { return kind != IntegralKind::K; }
bool kind_needs_series(IntegralKind kind) {
    return kind == IntegralKind::K || kind == IntegralKind::G || kind == IntegralKind::H;
}

Complex series_value(const CoefficientSeries& dk, const DirichletCharacter& chi, Complex s) {
    const auto& vals = chi.values();
    const std::int64_t q = chi.modulus();
    Complex sum = 0.0;
    for (std::int64_t n = 1; n <= dk.cutoff; ++n) {
        const Complex c = vals[static_cast<std::size_t>(n % q)];
        if (c == Complex(0.0, 0.0)) continue;
        sum += dk.at(n) * c * std::exp(-s * std::log(static_cast<double>(n)));
    }
    return sum;
}

// Hurwitz vectors memoized by evaluation point; shared by every character of
// the group while a quadrature (and any branch walks inside it) runs.
class HurwitzCache {
public:
    HurwitzCache(std::int64_t q, const EvaluationContext& ctx) : q_(q), ctx_(ctx) {}

    std::shared_ptr<const std::vector<Complex>> get(Complex s) {
        const auto key = std::make_pair(s.real(), s.imag());
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        if (map_.size() >= 20000) map_.clear();
        auto v = std::make_shared<const std::vector<Complex>>(hurwitz_vector(s, q_, ctx_, true));
        map_.emplace(key, v);
        return v;
    }

private:
    std::int64_t q_;
    EvaluationContext ctx_;
    std::map<std::pair<double, double>, std::shared_ptr<const std::vector<Complex>>> map_;
};

}  // namespace

Complex weight_w(Complex s, const WeightSpec& spec) {
    const double lq = checked_log_q(spec);
    const Complex sm = s - 0.5;
    const Complex u = sm * spec.delta * lq;
    if (std::abs(u) < 1e-3) {
        const Complex p =
            1.0 + u * (1.0 / 2.0 +
                       u * (1.0 / 6.0 +
                            u * (1.0 / 24.0 + u * (1.0 / 120.0 + u * (1.0 / 720.0 + u / 5040.0)))));
        return spec.delta * p;
    }
    return (std::exp(u) - 1.0) / (sm * lq);
}

WeightSixthMoment weight_sixth_moment(double sigma, const WeightSpec& spec, double tol) {
    if (!(tol > 0.0)) throw DomainError("weight_sixth_moment: tol must be positive");
    const double lq = checked_log_q(spec);
    const double cw = (std::pow(static_cast<double>(spec.modulus), spec.delta * (sigma - 0.5)) + 1.0) / lq;
    const double c6 = std::pow(cw, 6.0);
    const double t_height =
        std::max({std::pow(2.0 * c6 / tol, 0.2), 10.0, 20.0 / (spec.delta * lq)});
    double quad_err = 0.0;
    const double half = integrate(
        [&](double t) { return w6_at(Complex(sigma, t), spec); }, 0.0, t_height, tol / 4.0, &quad_err);
    const double tail = 2.0 * c6 / (5.0 * std::pow(t_height, 5.0));

    WeightSixthMoment out;
    out.value = 2.0 * half;
    out.error = 2.0 * quad_err + tail;
    out.truncation_height = t_height;
    out.ratio = out.value /
                (std::pow(static_cast<double>(spec.modulus), 3.0 * spec.delta * (2.0 * sigma - 1.0)) / lq);
    return out;
}

const char* kind_name(IntegralKind kind) {
    switch (kind) {
        case IntegralKind::J: return "J";
        case IntegralKind::K: return "K";
        case IntegralKind::G: return "G";
        case IntegralKind::H: return "H";
        case IntegralKind::Jstar: return "Jstar";
    }
    return "?";
}

std::optional<IntegralKind> kind_from_name(const std::string& name) {
    if (name == "J") return IntegralKind::J;
    if (name == "K") return IntegralKind::K;
    if (name == "G") return IntegralKind::G;
    if (name == "H") return IntegralKind::H;
    if (name == "Jstar" || name == "J*") return IntegralKind::Jstar;
    return std::nullopt;
}

double integrand(IntegralKind kind, const DirichletCharacter& chi, Complex s, double k, int v,
                 const WeightSpec& spec, const EvaluationContext& ctx) {
    check_kind_domain(kind, chi, s.real(), k, v);
    switch (kind) {
        case IntegralKind::J:
            return std::pow(std::norm(l_value(s, chi, ctx)), k) * w6_at(s, spec);
        case IntegralKind::K: {
            const CoefficientSeries dk = dk_table(k, chi.modulus());
            return std::norm(series_value(dk, chi, s)) * w6_at(s, spec);
        }
        case IntegralKind::G: {
            const CoefficientSeries dk = dk_table(k, chi.modulus());
            const Complex diff = l_power(s, chi, k, ctx) - series_value(dk, chi, s);
            return std::norm(diff) * w6_at(s, spec);
        }
        case IntegralKind::H: {
            const CoefficientSeries dk = dk_table(1.0 / v, chi.modulus());
            const Complex sv = std::pow(series_value(dk, chi, s), v);
            return std::pow(std::norm(l_value(s, chi, ctx) - sv), 1.0 / v) * w6_at(s, spec);
        }
        case IntegralKind::Jstar:
            return std::pow(std::norm(l_value(s, chi, ctx)), k) / (1.0 + s.imag() * s.imag());
    }
    throw DomainError("integrand: unknown kind");
}

VerticalIntegral vertical_integral(IntegralKind kind, const DirichletCharacter& chi, double sigma,
                                   double k, int v, const WeightSpec& spec, double tol,
                                   const EvaluationContext& ctx, double t_override) {
    if (!(tol > 0.0)) throw DomainError("vertical_integral: tol must be positive");
    check_kind_domain(kind, chi, sigma, k, v);

    const std::int64_t q = chi.modulus();
    std::unique_ptr<CoefficientSeries> dk;
    if (kind_needs_series(kind))
        dk = std::make_unique<CoefficientSeries>(
            dk_table(kind == IntegralKind::H ? 1.0 / v : k, q));

    const TailPlan plan =
        plan_tail(kind, q, sigma, k, v, spec, tol / 10.0, dk.get(), ctx, t_override);

    std::unique_ptr<LPowerLine> line;
    if (kind == IntegralKind::G) line = std::make_unique<LPowerLine>(sigma, chi, k, ctx);

    const auto f = [&](double t) -> double {
        const Complex s(sigma, t);
        switch (kind) {
            case IntegralKind::J:
                return std::pow(std::norm(l_value(s, chi, ctx)), k) * w6_at(s, spec);
            case IntegralKind::K:
                return std::norm(series_value(*dk, chi, s)) * w6_at(s, spec);
            case IntegralKind::G: {
                const Complex diff = line->value(t) - series_value(*dk, chi, s);
                return std::norm(diff) * w6_at(s, spec);
            }
            case IntegralKind::H: {
                const Complex sv = std::pow(series_value(*dk, chi, s), v);
                return std::pow(std::norm(l_value(s, chi, ctx) - sv), 1.0 / v) * w6_at(s, spec);
            }
            case IntegralKind::Jstar:
                return std::pow(std::norm(l_value(s, chi, ctx)), k) / (1.0 + t * t);
        }
        return 0.0;
    };

    double quad_err = 0.0;
    const double value = integrate(f, -plan.height, plan.height, 0.8 * tol, &quad_err);
    return {value, quad_err + plan.bound, plan.height};
}

MeanValueResult aggregate(IntegralKind kind, std::int64_t q, double sigma, double k, int v,
                          const WeightSpec& spec, double tol, const EvaluationContext& ctx,
                          double t_override) {
    if (q < 3) throw DomainError("aggregate: modulus must be at least 3");
    if (!(tol > 0.0)) throw DomainError("aggregate: tol must be positive");

    const TablePtr table = build_group(q);
    const std::vector<DirichletCharacter> chars = characters(table);
    const std::size_t m = chars.size() - 1;  // non-principal count
    check_kind_domain(kind, chars.back(), sigma, k, v);

    std::unique_ptr<CoefficientSeries> dk;
    if (kind_needs_series(kind))
        dk = std::make_unique<CoefficientSeries>(
            dk_table(kind == IntegralKind::H ? 1.0 / v : k, q));

    const TailPlan plan = plan_tail(kind, q, sigma, k, v, spec,
                                    tol / (10.0 * static_cast<double>(m)), dk.get(), ctx, t_override);

    HurwitzCache cache(q, ctx);
    const bool needs_l = kind_needs_l(kind);
    const bool needs_s = kind_needs_series(kind);

    std::vector<std::unique_ptr<LPowerLine>> lines;
    if (kind == IntegralKind::G) {
        for (std::size_t i = 1; i < chars.size(); ++i) {
            const DirichletCharacter chi = chars[i];
            auto provider = [&cache, chi](Complex z) {
                return l_value_from_vector(z, chi, *cache.get(z));
            };
            lines.push_back(std::make_unique<LPowerLine>(sigma, chi, k, ctx, provider));
        }
    }

    std::vector<std::int64_t> units;
    for (std::int64_t n = 1; n <= q; ++n)
        if (table->is_unit(n % q)) units.push_back(n);

    const auto f = [&](double t, double* out) {
        const Complex s(sigma, t);
        std::shared_ptr<const std::vector<Complex>> zv;
        if (needs_l) zv = cache.get(s);
        std::vector<Complex> xn;
        if (needs_s) {
            xn.assign(static_cast<std::size_t>(q) + 1, Complex(0.0, 0.0));
            for (const std::int64_t n : units)
                if (n <= dk->cutoff)
                    xn[static_cast<std::size_t>(n)] =
                        dk->at(n) * std::exp(-s * std::log(static_cast<double>(n)));
        }
        const double w6 = (kind == IntegralKind::Jstar) ? 0.0 : w6_at(s, spec);
        for (std::size_t i = 0; i < m; ++i) {
            const DirichletCharacter& chi = chars[i + 1];
            Complex series = 0.0;
            if (needs_s) {
                const auto& vals = chi.values();
                for (const std::int64_t n : units)
                    series += xn[static_cast<std::size_t>(n)] * vals[static_cast<std::size_t>(n % q)];
            }
            switch (kind) {
                case IntegralKind::J:
                    out[i] = std::pow(std::norm(l_value_from_vector(s, chi, *zv)), k) * w6;
                    break;
                case IntegralKind::K:
                    out[i] = std::norm(series) * w6;
                    break;
                case IntegralKind::G: {
                    try {
                        const Complex diff = lines[i]->value(t) - series;
                        out[i] = std::norm(diff) * w6;
                    } catch (const BranchTrackingError& e) {
                        throw BranchTrackingError("character index " + std::to_string(i + 1) + ": " +
                                                  e.what());
                    }
                    break;
                }
                case IntegralKind::H: {
                    const Complex lv = l_value_from_vector(s, chi, *zv);
                    out[i] = std::pow(std::norm(lv - std::pow(series, v)), 1.0 / v) * w6;
                    break;
                }
                case IntegralKind::Jstar:
                    out[i] = std::pow(std::norm(l_value_from_vector(s, chi, *zv)), k) / (1.0 + t * t);
                    break;
            }
        }
    };

    QuadratureOptions qopts;
    qopts.abs_tol = 0.8 * tol;
    qopts.max_panels = 200000;
    const QuadratureResult qr = integrate_vector(f, static_cast<int>(m), -plan.height, plan.height, qopts);

    MeanValueResult out;
    out.kind = kind;
    out.sigma = sigma;
    out.k = k;
    out.v = v;
    out.per_character = qr.values;
    out.per_character_error.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.per_character_error[i] = qr.errors[i] + plan.bound;
    double total = 0.0;
    for (const double x : qr.values) total += x;
    out.aggregate = total;
    out.quadrature_error = qr.total_error + static_cast<double>(m) * plan.bound;
    out.truncation_height = plan.height;
    return out;
}

IdentityCheck k_identity_check(std::int64_t q, double sigma, double k, const WeightSpec& spec,
                               double tol, const EvaluationContext& ctx, double t_override) {
    if (q < 3) throw DomainError("k_identity_check: modulus must be at least 3");
    if (!(k > 0.0)) throw DomainError("k_identity_check: k must be positive");
    if (!(tol > 0.0)) throw DomainError("k_identity_check: tol must be positive");

    const TablePtr table = build_group(q);
    const std::vector<DirichletCharacter> chars = characters(table);
    const std::size_t m = chars.size();
    const CoefficientSeries dk = dk_table(k, q);

    double coef = 0.0;
    for (std::int64_t n = 1; n <= q; ++n)
        if (std::gcd(n, q) == 1)
            coef += dk.at(n) * dk.at(n) * std::pow(static_cast<double>(n), -2.0 * sigma);
    coef *= static_cast<double>(table->phi());

    WeightSixthMoment wsm = weight_sixth_moment(sigma, spec, 1e-8);
    const double wsm_target = 0.2 * tol * wsm.value;
    if (wsm_target > 0.0 && wsm.error > wsm_target)
        wsm = weight_sixth_moment(sigma, spec, wsm_target);
    const double rhs = coef * wsm.value;

    const TailPlan plan = plan_tail(IntegralKind::K, q, sigma, k, 1, spec,
                                    0.1 * tol * rhs / static_cast<double>(m), &dk, ctx, t_override);

    std::vector<std::int64_t> units;
    for (std::int64_t n = 1; n <= q; ++n)
        if (std::gcd(n, q) == 1) units.push_back(n);

    const auto f = [&](double t, double* out) {
        const Complex s(sigma, t);
        std::vector<Complex> xn(static_cast<std::size_t>(q) + 1, Complex(0.0, 0.0));
        for (const std::int64_t n : units)
            xn[static_cast<std::size_t>(n)] = dk.at(n) * std::exp(-s * std::log(static_cast<double>(n)));
        const double w6 = w6_at(s, spec);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& vals = chars[i].values();
            Complex series = 0.0;
            for (const std::int64_t n : units)
                series += xn[static_cast<std::size_t>(n)] * vals[static_cast<std::size_t>(n % q)];
            out[i] = std::norm(series) * w6;
        }
    };

    QuadratureOptions qopts;
    qopts.abs_tol = 0.5 * tol * rhs;
    qopts.max_panels = 200000;
    const QuadratureResult qr = integrate_vector(f, static_cast<int>(m), -plan.height, plan.height, qopts);

    double lhs = 0.0;
    for (const double x : qr.values) lhs += x;

    IdentityCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.rel_err = std::abs(lhs - rhs) / rhs;
    out.lhs_error = qr.total_error + static_cast<double>(m) * plan.bound;
    out.truncation_height = plan.height;
    return out;
}

GTailCheck g_tail_identity_check(std::int64_t q, double k, std::int64_t m_cut, double tol,
                                 const EvaluationContext& ctx, double t_override) {
    if (q < 3) throw DomainError("g_tail_identity_check: modulus must be at least 3");
    if (m_cut <= q) throw DomainError("g_tail_identity_check: truncation must exceed the modulus");
    if (!(k > 0.0 && k < 2.0)) throw DomainError("g_tail_identity_check: k must lie in (0, 2)");
    if (!(tol > 0.0)) throw DomainError("g_tail_identity_check: tol must be positive");
    (void)ctx;

    const TablePtr table = build_group(q);
    const std::vector<DirichletCharacter> chars = characters(table);
    const std::size_t m = chars.size();
    const double phi = static_cast<double>(table->phi());

    const std::int64_t m_ext = 4 * m_cut;
    const CoefficientSeries dk = dk_table(k, m_ext);

    // Pair sums over m = n (mod q), both coprime to q: the identity's right
    // side at cutoffs m_cut and m_ext, the diagonal weight for the exact
    // |t| > T correction, and the 1/theta sum sizing the off-diagonal tail.
    double rhs_pairs = 0.0, rhs_ext_pairs = 0.0, diag = 0.0, theta_sum = 0.0;
    for (std::int64_t r = 1; r <= q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        std::vector<std::int64_t> ns;
        for (std::int64_t n = q + 1 + ((r - (q + 1)) % q + q) % q; n <= m_ext; n += q) ns.push_back(n);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double ni = static_cast<double>(ns[i]);
            const double di = dk.at(ns[i]);
            {
                const double c = di * di * std::pow(ni, -3.0);
                rhs_ext_pairs += c;
                if (ns[i] <= m_cut) {
                    rhs_pairs += c;
                    diag += c;
                }
            }
            for (std::size_t j = i + 1; j < ns.size(); ++j) {
                const double nj = static_cast<double>(ns[j]);
                const double dj = dk.at(ns[j]);
                const double c = 2.0 * di * dj * std::pow(ni, -0.5) * std::pow(nj, -2.5);
                rhs_ext_pairs += c;
                if (ns[j] <= m_cut) {
                    rhs_pairs += c;
                    theta_sum += 2.0 * di * dj * std::pow(ni * nj, -1.5) / std::log(nj / ni);
                }
            }
        }
    }
    const double rhs = kPi * phi * rhs_pairs;
    const double rhs_ext = kPi * phi * rhs_ext_pairs;

    const double abs_budget = tol * rhs;
    // off-diagonal |t| > T remainder <= 2 phi theta_sum / (1 + T^2)
    const double t_height =
        t_override > 0.0
            ? t_override
            : std::max(50.0, std::sqrt(std::max(0.0, 8.0 * phi * theta_sum / abs_budget)));
    const double offdiag_tail = 2.0 * phi * theta_sum / (1.0 + t_height * t_height);

    std::vector<std::int64_t> tail_ns;
    for (std::int64_t n = q + 1; n <= m_cut; ++n)
        if (std::gcd(n, q) == 1) tail_ns.push_back(n);

    const auto f = [&](double t, double* out) {
        const Complex s(1.5, t);
        std::vector<Complex> yn(tail_ns.size());
        for (std::size_t i = 0; i < tail_ns.size(); ++i)
            yn[i] = dk.at(tail_ns[i]) * std::exp(-s * std::log(static_cast<double>(tail_ns[i])));
        const double kernel = 1.0 / (1.0 + t * t);
        for (std::size_t c = 0; c < m; ++c) {
            const auto& vals = chars[c].values();
            Complex sum = 0.0;
            for (std::size_t i = 0; i < tail_ns.size(); ++i)
                sum += yn[i] * vals[static_cast<std::size_t>(tail_ns[i] % q)];
            out[c] = std::norm(sum) * kernel;
        }
    };

    QuadratureOptions qopts;
    qopts.abs_tol = 0.5 * abs_budget;
    qopts.max_panels = 200000;
    const QuadratureResult qr = integrate_vector(f, static_cast<int>(m), -t_height, t_height, qopts);

    double lhs = 0.0;
    for (const double x : qr.values) lhs += x;
    lhs += 2.0 * std::atan(1.0 / t_height) * phi * diag;  // exact diagonal |t| > T remainder

    GTailCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.rel_err = std::abs(lhs - rhs) / rhs;
    out.tail_bound = 1.5 * (rhs_ext - rhs) + offdiag_tail + qr.total_error;
    out.truncation_height = t_height;
    return out;
}

}  // namespace lmoment
