#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lmoment {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    std::size_t max_panels = 120000;
};

struct QuadratureResult {
    std::vector<double> values;  ///< one entry per integrand component
    std::vector<double> errors;  ///< per-component error estimates
    double total_error = 0.0;    ///< sum of per-component errors
    std::size_t panels = 0;
    std::size_t evaluations = 0;
};

/// Adaptive Gauss-Kronrod 7/15 quadrature of a vector-valued integrand over
/// [a, b].  The callback fills out[0..components-1] for the given abscissa;
/// all components share panels, and refinement always splits the panel with
/// the largest summed error until the total is below abs_tol.  Throws
/// ConvergenceError when the panel budget runs out first.
QuadratureResult integrate_vector(const std::function<void(double, double*)>& f, int components,
                                  double a, double b, const QuadratureOptions& opts);

/// Scalar convenience wrapper.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double* error_out = nullptr);

}  // namespace lmoment
