#pragma once

#include <complex>

namespace lmoment {

/// Gamma function on the complex plane via a 15-term Lanczos approximation
/// (g = 607/128) with the reflection formula for Re z < 1/2.  Relative error
/// is below roughly 1e-13 away from the poles at z = 0, -1, -2, ...
std::complex<double> gamma_fn(std::complex<double> z);

}  // namespace lmoment
