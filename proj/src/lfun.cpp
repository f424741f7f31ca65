#include "lmoment/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <numeric>

#include "lmoment/errors.hpp"
#include "lmoment/gammafn.hpp"
#include "lmoment/numtheory.hpp"

namespace lmoment {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kHardSigmaFloor = -8.0;

// B_{2j} / (2j)! for j = 1..25; entry 0 unused.
constexpr double kBernFact[26] = {
    0.0,
    0.0833333333333333333333,
    -0.00138888888888888888889,
    0.0000330687830687830687831,
    -8.26719576719576719577e-7,
    2.08767569878680989792e-8,
    -5.28419013868749318485e-10,
    1.33825365306846788328e-11,
    -3.38968029632258286683e-13,
    8.58606205627784456414e-15,
    -2.17486869855806187304e-16,
    5.50900282836022951520e-18,
    -1.39544646858125233407e-19,
    3.53470703962946747169e-21,
    -8.95351742703754685040e-23,
    2.26795245233768306031e-24,
    -5.74479066887220244526e-26,
    1.45517247561486490187e-27,
    -3.68599494066531017818e-29,
    9.33673425709504467203e-31,
    -2.36502241570062993456e-32,
    5.99067176248213430466e-34,
    -1.51745488446829026171e-35,
    3.84375812545418823223e-37,
    -9.73635307264669103527e-39,
    2.46624704420068095711e-40,
};

inline Complex pow_real_base(double x, Complex e) { return std::exp(e * std::log(x)); }

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a_double(std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return fnv1a(h, &bits, sizeof bits);
}

}  // namespace

void EvaluationContext::validate() const {
    if (em_terms < 8) throw DomainError("EvaluationContext: em_terms too small");
    if (em_bernoulli_depth < 1 || em_bernoulli_depth > 24)
        throw DomainError("EvaluationContext: em_bernoulli_depth outside [1, 24]");
    if (!(target_abs_error > 0.0)) throw DomainError("EvaluationContext: target_abs_error must be positive");
    if (!(branch_step > 0.0) || branch_step > 0.1)
        throw DomainError("EvaluationContext: branch_step outside (0, 0.1]");
    if (branch_max_refine < 1) throw DomainError("EvaluationContext: branch_max_refine < 1");
    if (!(sigma_min < sigma_max)) throw DomainError("EvaluationContext: empty sigma window");
    if (!internal_extension && (sigma_min < 0.3 || sigma_max > 3.5))
        throw DomainError("EvaluationContext: sigma window outside operating envelope");
    if (!(t_max > 0.0)) throw DomainError("EvaluationContext: t_max must be positive");
}

EvaluationContext EvaluationContext::widened(double lo, double hi) const {
    EvaluationContext out = *this;
    out.sigma_min = std::min(sigma_min, lo);
    out.sigma_max = std::max(sigma_max, hi);
    out.internal_extension = true;
    if (out.sigma_min < 0.3) {
        // Left of the envelope the initial sum carries terms of size up to
        // N^{-sigma}; their accumulated rounding noise bounds the achievable
        // absolute accuracy.
        const double n = static_cast<double>(em_terms);
        const double growth = 1.0 - out.sigma_min;
        const double scale = std::pow(n, growth) / growth;
        out.target_abs_error = std::max(out.target_abs_error, 50.0 * kEps * scale);
    }
    return out;
}

std::uint64_t EvaluationContext::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    const std::int64_t ints[3] = {em_terms, em_bernoulli_depth, branch_max_refine};
    h = fnv1a(h, ints, sizeof ints);
    h = fnv1a_double(h, target_abs_error);
    h = fnv1a_double(h, branch_step);
    h = fnv1a_double(h, sigma_min);
    h = fnv1a_double(h, sigma_max);
    h = fnv1a_double(h, t_max);
    return h;
}

namespace {

// (e^u - 1)/u, stable for small |u|.
Complex expm1_over(Complex u) {
    if (std::abs(u) < 1e-4) return 1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0));
    return (std::exp(u) - 1.0) / u;
}

// Euler-Maclaurin core shared by the plain and pole-deflated evaluations.
// deflated = true computes zeta(s, a) - 1/(s-1), entire in s.
Complex hurwitz_em(Complex s, double a, const EvaluationContext& ctx, bool deflated) {
    ctx.validate();
    if (!(a > 0.0) || a > 1.0) throw DomainError("hurwitz_zeta: a must lie in (0, 1]");
    const double sigma = s.real();
    const double t = s.imag();
    if (!deflated && std::abs(s - Complex(1.0, 0.0)) < 1e-12)
        throw PoleError("hurwitz_zeta: pole at s = 1");
    if (sigma < kHardSigmaFloor) throw DomainError("hurwitz_zeta: Re(s) below supported range");
    if (sigma < ctx.sigma_min || sigma > ctx.sigma_max)
        throw DomainError("hurwitz_zeta: Re(s) outside the context sigma window");
    if (std::abs(t) > ctx.t_max) throw DomainError("hurwitz_zeta: |Im(s)| exceeds t_max");

    const int J = ctx.em_bernoulli_depth;
    std::int64_t N = std::max<std::int64_t>(ctx.em_terms,
                                            static_cast<std::int64_t>(std::ceil(std::abs(t))) + 10);
    for (int attempt = 0;; ++attempt) {
        Complex sum = 0.0;
        double abs_sum = 0.0;
        for (std::int64_t n = 0; n < N; ++n) {
            const Complex term = pow_real_base(static_cast<double>(n) + a, -s);
            sum += term;
            abs_sum += std::abs(term);
        }
        const double x = static_cast<double>(N) + a;
        const double lx = std::log(x);
        const Complex xms = std::exp(-s * lx);
        // x^{1-s}/(s-1), or its deflation [x^{1-s} - 1]/(s-1) = -lx (e^u-1)/u
        // with u = (1-s) lx, finite through s = 1.
        const Complex tail_main = deflated ? -lx * expm1_over((1.0 - s) * lx)
                                           : std::exp((1.0 - s) * lx) / (s - 1.0);
        const Complex tail_half = 0.5 * xms;
        Complex val = sum + tail_main + tail_half;
        abs_sum += std::abs(tail_main) + std::abs(tail_half);

        Complex poch = s;        // rising product with 2j-1 factors
        Complex xpow = xms / x;  // x^{-s-(2j-1)}
        for (int j = 1; j <= J; ++j) {
            const Complex term = kBernFact[j] * poch * xpow;
            val += term;
            abs_sum += std::abs(term);
            poch *= (s + Complex(2.0 * j - 1.0)) * (s + Complex(2.0 * j));
            xpow /= x * x;
        }
        const double est = 2.0 * std::abs(kBernFact[J + 1]) * std::abs(poch) * std::abs(xpow) +
                           4.0 * kEps * abs_sum;
        if (est <= ctx.target_abs_error) return val;
        if (attempt >= 4)
            throw ConvergenceError("hurwitz_zeta: error target unattainable at configured depth");
        N *= 2;
    }
}

}  // namespace

Complex hurwitz_zeta(Complex s, double a, const EvaluationContext& ctx) {
    return hurwitz_em(s, a, ctx, false);
}

Complex riemann_zeta(Complex s, const EvaluationContext& ctx) { return hurwitz_zeta(s, 1.0, ctx); }

std::vector<Complex> hurwitz_vector(Complex s, std::int64_t q, const EvaluationContext& ctx,
                                    bool units_only) {
    if (q < 1) throw DomainError("hurwitz_vector: modulus must be positive");
    std::vector<Complex> zv(static_cast<std::size_t>(q) + 1, Complex(0.0, 0.0));
    for (std::int64_t a = 1; a <= q; ++a) {
        if (units_only && std::gcd(a, q) != 1) continue;
        zv[static_cast<std::size_t>(a)] =
            hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q), ctx);
    }
    return zv;
}

Complex l_value(Complex s, const DirichletCharacter& chi, const EvaluationContext& ctx) {
    const std::int64_t q = chi.modulus();
    if (chi.is_principal()) {
        Complex val = hurwitz_zeta(s, 1.0, ctx);
        for (const auto& [p, e] : chi.table().factorization()) {
            (void)e;
            val *= 1.0 - pow_real_base(static_cast<double>(p), -s);
        }
        return val;
    }
    const auto& vals = chi.values();
    // Near s = 1 each Hurwitz term blows up but the poles cancel exactly
    // (the character values sum to 0), so subtract 1/(s-1) termwise and use
    // the entire deflated evaluation.
    const bool deflate = std::abs(s - Complex(1.0, 0.0)) < 0.5;
    Complex sum = 0.0;
    for (std::int64_t a = 1; a < q; ++a) {
        const Complex c = vals[static_cast<std::size_t>(a)];
        if (c == Complex(0.0, 0.0)) continue;
        sum += c * hurwitz_em(s, static_cast<double>(a) / static_cast<double>(q), ctx, deflate);
    }
    return pow_real_base(static_cast<double>(q), -s) * sum;
}

Complex l_value_from_vector(Complex s, const DirichletCharacter& chi,
                            const std::vector<Complex>& zv) {
    const std::int64_t q = chi.modulus();
    if (zv.size() != static_cast<std::size_t>(q) + 1)
        throw DomainError("l_value_from_vector: vector length does not match modulus");
    const auto& vals = chi.values();
    Complex sum = 0.0;
    for (std::int64_t a = 1; a <= q; ++a) {
        const Complex c = vals[static_cast<std::size_t>(a % q)];
        if (c == Complex(0.0, 0.0)) continue;
        sum += c * zv[static_cast<std::size_t>(a)];
    }
    return pow_real_base(static_cast<double>(q), -s) * sum;
}

namespace {

// Carries the argument of L from (s_cur, known arg) to s_target along the
// straight segment, bisecting any step whose principal argument jump exceeds
// pi/2.  Returns the continued argument at s_target and leaves the L-value
// there in *l_out.  refine_budget is shared across the caller's whole walk.
double continue_arg(const std::function<Complex(Complex)>& l_of_s, Complex s_cur, Complex l_cur,
                    double arg_cur, Complex s_target, int* refine_budget, Complex* l_out) {
    std::vector<Complex> stack{s_target};
    while (!stack.empty()) {
        const Complex s_next = stack.back();
        const Complex l_next = l_of_s(s_next);
        if (std::abs(l_next) < 1e-280)
            throw BranchTrackingError("l_power: L vanishes on the continuation path");
        const double delta = std::arg(l_next / l_cur);
        if (std::abs(delta) > kPi / 2.0) {
            if (--(*refine_budget) < 0 || std::abs(s_next - s_cur) < 1e-12)
                throw BranchTrackingError(
                    "l_power: argument jump persists after refinement (suspected zero near path)");
            stack.push_back(0.5 * (s_cur + s_next));
            continue;
        }
        arg_cur += delta;
        s_cur = s_next;
        l_cur = l_next;
        stack.pop_back();
    }
    *l_out = l_cur;
    return arg_cur;
}

// Horizontal walk from the sigma = anchor line down to s, returning the
// continued argument and the L-value at s.
double anchored_arg(const std::function<Complex(Complex)>& l_of_s, Complex s,
                    const EvaluationContext& ctx, Complex* l_out) {
    const double sigma = s.real();
    const double t = s.imag();
    const double anchor = std::max(3.0, sigma);
    Complex l_cur = l_of_s(Complex(anchor, t));
    if (std::abs(l_cur) < 1e-280) throw BranchTrackingError("l_power: anchor value underflows");
    double arg_cur = std::arg(l_cur);
    Complex s_cur(anchor, t);
    int budget = ctx.branch_max_refine;
    const int steps = std::max(1, static_cast<int>(std::ceil((anchor - sigma) / ctx.branch_step)));
    for (int i = 1; i <= steps; ++i) {
        const double x = (i == steps) ? sigma : anchor + (sigma - anchor) * static_cast<double>(i) / steps;
        arg_cur = continue_arg(l_of_s, s_cur, l_cur, arg_cur, Complex(x, t), &budget, &l_cur);
        s_cur = Complex(x, t);
    }
    *l_out = l_cur;
    return arg_cur;
}

}  // namespace

Complex l_power(Complex s, const DirichletCharacter& chi, double k, const EvaluationContext& ctx) {
    if (chi.is_principal()) throw DomainError("l_power: principal character has a pole");
    if (!(k > 0.0)) throw DomainError("l_power: exponent must be positive");
    if (!(s.real() > 0.5)) throw DomainError("l_power: Re(s) must exceed 1/2");
    const auto l_of_s = [&chi, &ctx](Complex z) { return l_value(z, chi, ctx); };
    Complex l_final;
    const double arg = anchored_arg(l_of_s, s, ctx, &l_final);
    return std::exp(k * Complex(std::log(std::abs(l_final)), arg));
}

LPowerLine::LPowerLine(double sigma, DirichletCharacter chi, double k, EvaluationContext ctx,
                       std::function<Complex(Complex)> l_provider)
    : sigma_(sigma), chi_(std::move(chi)), k_(k), ctx_(std::move(ctx)),
      provider_(std::move(l_provider)) {
    if (chi_.is_principal()) throw DomainError("LPowerLine: principal character has a pole");
    if (!(k_ > 0.0)) throw DomainError("LPowerLine: exponent must be positive");
    if (!(sigma_ > 0.5)) throw DomainError("LPowerLine: Re(s) must exceed 1/2");
    if (!provider_) {
        const DirichletCharacter c = chi_;
        const EvaluationContext cc = ctx_;
        provider_ = [c, cc](Complex z) { return l_value(z, c, cc); };
    }
}

Complex LPowerLine::l_at(Complex s) { return provider_(s); }

double LPowerLine::fresh_anchor(double t) {
    Complex l_final;
    const double arg = anchored_arg(provider_, Complex(sigma_, t), ctx_, &l_final);
    args_[t] = arg;
    return arg;
}

double LPowerLine::continue_vertical(double t_from, double arg_from, double t_to) {
    Complex l_cur = l_at(Complex(sigma_, t_from));
    Complex s_cur(sigma_, t_from);
    double arg_cur = arg_from;
    int budget = ctx_.branch_max_refine;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t_to - t_from) / 0.5)));
    for (int i = 1; i <= steps; ++i) {
        const double t = (i == steps) ? t_to : t_from + (t_to - t_from) * static_cast<double>(i) / steps;
        arg_cur = continue_arg(provider_, s_cur, l_cur, arg_cur, Complex(sigma_, t), &budget, &l_cur);
        s_cur = Complex(sigma_, t);
        args_[t] = arg_cur;
    }
    return arg_cur;
}

double LPowerLine::arg_at(double t) {
    if (args_.empty()) return fresh_anchor(t);
    auto it = args_.lower_bound(t);
    double t0;
    if (it == args_.end()) {
        t0 = std::prev(it)->first;
    } else if (it->first == t) {
        return it->second;
    } else if (it == args_.begin()) {
        t0 = it->first;
    } else {
        const double above = it->first;
        const double below = std::prev(it)->first;
        t0 = (above - t < t - below) ? above : below;
    }
    if (std::abs(t - t0) > kFreshGap) return fresh_anchor(t);
    return continue_vertical(t0, args_.at(t0), t);
}

Complex LPowerLine::value(double t) {
    const double arg = arg_at(t);
    const Complex l = l_at(Complex(sigma_, t));
    if (std::abs(l) < 1e-280) throw BranchTrackingError("LPowerLine: L underflows at requested height");
    return std::exp(k_ * Complex(std::log(std::abs(l)), arg));
}

double fe_residual(const DirichletCharacter& chi, Complex s, const EvaluationContext& ctx) {
    if (chi.is_principal()) throw DomainError("fe_residual: character must be non-principal");
    if (!chi.is_primitive()) throw DomainError("fe_residual: character must be primitive");
    const std::int64_t q = chi.modulus();
    const int a = chi.is_even() ? 0 : 1;
    const Complex one_minus_s = 1.0 - s;

    const double lo = std::min({s.real(), one_minus_s.real(), ctx.sigma_min});
    const double hi = std::max({s.real(), one_minus_s.real(), ctx.sigma_max});
    const EvaluationContext wctx = ctx.widened(lo, hi);

    const double qd = static_cast<double>(q);
    const auto lambda = [&](Complex z, const DirichletCharacter& c) {
        const Complex half = 0.5 * (z + static_cast<double>(a));
        return pow_real_base(qd / kPi, half) * gamma_fn(half) * l_value(z, c, wctx);
    };
    const Complex tau = gauss_sum(chi);
    const Complex ia = (a == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    const Complex eps = tau / (ia * std::sqrt(qd));
    const Complex lhs = lambda(s, chi);
    const Complex rhs = eps * lambda(one_minus_s, chi.conjugate());
    return std::abs(lhs - rhs);
}

FeRatio fe_ratio(double sigma, double t, const DirichletCharacter& chi,
                 const EvaluationContext& ctx) {
    if (sigma < 0.5 || sigma > 0.75) throw DomainError("fe_ratio: sigma outside [1/2, 3/4]");
    const std::int64_t q = chi.modulus();
    const EvaluationContext wctx = ctx.widened(std::min(1.0 - sigma, ctx.sigma_min), ctx.sigma_max);

    FeRatio out;
    const std::int64_t q1 = conductor(chi);
    if (q1 != q) {
        const DirichletCharacter psi = induced_primitive(chi);
        const std::int64_t q2 = q / q1;
        for (const auto& [p, e] : factorize(q2)) {
            (void)e;
            const Complex z = psi(p);
            if (z == Complex(0.0, 0.0)) continue;
            const Complex pit = Complex(0.0, -t) * std::log(static_cast<double>(p));
            const double num = std::abs(1.0 - z * std::exp(Complex(-sigma, 0.0) * std::log(static_cast<double>(p)) + pit));
            const double den = std::abs(1.0 - z * std::exp(Complex(sigma - 1.0, 0.0) * std::log(static_cast<double>(p)) + pit));
            out.rho *= num / den;
        }
    }

    const Complex l_den = l_value(Complex(sigma, t), chi, wctx);
    if (std::abs(l_den) < 1e-12) {
        out.degenerate = true;
        return out;
    }
    const Complex l_num = l_value(Complex(1.0 - sigma, t), chi, wctx);
    out.ratio = std::abs(l_num) /
                (std::pow(1.0 + std::abs(t), sigma - 0.5) * std::pow(static_cast<double>(q), sigma - 0.5) *
                 std::abs(l_den));
    return out;
}

}  // namespace lmoment
