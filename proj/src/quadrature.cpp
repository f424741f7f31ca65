#include "lmoment/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "lmoment/errors.hpp"

namespace lmoment {

namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]; Gauss points sit at
// the odd indices.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0, b = 0.0;
    std::vector<double> values;  // Kronrod estimates per component
    std::vector<double> errors;  // |Kronrod - Gauss| per component
    double total_error = 0.0;
};

class PanelEvaluator {
public:
    PanelEvaluator(const std::function<void(double, double*)>& f, int m) : f_(f), m_(m), buf_(m) {}

    Panel evaluate(double a, double b) {
        Panel p;
        p.a = a;
        p.b = b;
        p.values.assign(static_cast<std::size_t>(m_), 0.0);
        p.errors.assign(static_cast<std::size_t>(m_), 0.0);
        std::vector<double> gauss(static_cast<std::size_t>(m_), 0.0);
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            const int reps = (i == 7) ? 1 : 2;
            for (int sgn = 0; sgn < reps; ++sgn) {
                const double x = mid + (sgn == 0 ? half : -half) * kNodes[i];
                f_(x, buf_.data());
                ++evaluations;
                for (int c = 0; c < m_; ++c) {
                    p.values[static_cast<std::size_t>(c)] += kKronrodW[i] * buf_[static_cast<std::size_t>(c)];
                    if (i % 2 == 1)
                        gauss[static_cast<std::size_t>(c)] += kGaussW[i / 2] * buf_[static_cast<std::size_t>(c)];
                }
            }
        }
        for (int c = 0; c < m_; ++c) {
            p.values[static_cast<std::size_t>(c)] *= half;
            gauss[static_cast<std::size_t>(c)] *= half;
            p.errors[static_cast<std::size_t>(c)] =
                std::abs(p.values[static_cast<std::size_t>(c)] - gauss[static_cast<std::size_t>(c)]);
            p.total_error += p.errors[static_cast<std::size_t>(c)];
        }
        return p;
    }

    std::size_t evaluations = 0;

private:
    const std::function<void(double, double*)>& f_;
    int m_;
    std::vector<double> buf_;
};

}  // namespace

QuadratureResult integrate_vector(const std::function<void(double, double*)>& f, int components,
                                  double a, double b, const QuadratureOptions& opts) {
    if (components < 1) throw DomainError("integrate_vector: need at least one component");
    if (!(a < b)) throw DomainError("integrate_vector: empty or inverted interval");

    PanelEvaluator ev(f, components);

    // Seed panels.  Wide two-sided ranges are pre-split on a geometric grid
    // around zero so that a narrow central feature cannot hide between the
    // nodes of one gigantic panel.
    std::vector<double> cuts{a};
    if (a < 0.0 && b > 0.0 && b - a > 40.0) {
        std::vector<double> marks;
        for (double m = 1.0; m < std::max(-a, b); m *= 10.0) marks.push_back(m);
        for (auto it = marks.rbegin(); it != marks.rend(); ++it)
            if (-*it > a) cuts.push_back(-*it);
        cuts.push_back(0.0);
        for (double m : marks)
            if (m < b) cuts.push_back(m);
    }
    cuts.push_back(b);

    std::vector<Panel> heap;
    std::vector<Panel> frozen;  // panels too narrow to split further
    const auto cmp = [](const Panel& lhs, const Panel& rhs) { return lhs.total_error < rhs.total_error; };
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(ev.evaluate(cuts[i], cuts[i + 1]));
        total_error += heap.back().total_error;
        std::push_heap(heap.begin(), heap.end(), cmp);
    }

    std::size_t splits = 0;
    const double min_width = 1e-13 * (std::abs(a) + std::abs(b) + 1.0);
    while (total_error > opts.abs_tol && splits < opts.max_panels && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = std::move(heap.back());
        heap.pop_back();
        if (worst.b - worst.a < min_width || worst.total_error == 0.0) {
            frozen.push_back(std::move(worst));
            continue;
        }
        total_error -= worst.total_error;
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = ev.evaluate(worst.a, mid);
        Panel right = ev.evaluate(mid, worst.b);
        total_error += left.total_error + right.total_error;
        heap.push_back(std::move(left));
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(std::move(right));
        std::push_heap(heap.begin(), heap.end(), cmp);
        ++splits;
    }

    if (total_error > opts.abs_tol && splits >= opts.max_panels)
        throw ConvergenceError("integrate_vector: tolerance unattainable within panel budget");

    for (auto& p : frozen) heap.push_back(std::move(p));

    QuadratureResult out;
    out.values.assign(static_cast<std::size_t>(components), 0.0);
    out.errors.assign(static_cast<std::size_t>(components), 0.0);
    for (const auto& p : heap) {
        for (int c = 0; c < components; ++c) {
            out.values[static_cast<std::size_t>(c)] += p.values[static_cast<std::size_t>(c)];
            out.errors[static_cast<std::size_t>(c)] += p.errors[static_cast<std::size_t>(c)];
        }
    }
    for (int c = 0; c < components; ++c) out.total_error += out.errors[static_cast<std::size_t>(c)];
    out.panels = heap.size();
    out.evaluations = ev.evaluations;
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double* error_out) {
    const auto wrapped = [&f](double t, double* out) { out[0] = f(t); };
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    const QuadratureResult r = integrate_vector(wrapped, 1, a, b, opts);
    if (error_out) *error_out = r.total_error;
    return r.values[0];
}

}  // namespace lmoment
