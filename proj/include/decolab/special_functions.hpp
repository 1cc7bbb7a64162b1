#pragma once

#include <complex>

namespace decolab {

/// log Gamma(z) for complex z.
///
/// Lanczos approximation (g = 671/128, 14 series terms) for Re z >= 1/2 and
/// the reflection formula Gamma(z) Gamma(1-z) = pi / sin(pi z) below. The
/// real part is the quantity callers depend on; the imaginary part is a
/// logarithm branch, not necessarily the principal continuous one.
/// Relative accuracy is about 1e-14 in the half plane Re z >= 1/2.
[[nodiscard]] std::complex<double> log_gamma(std::complex<double> z);

/// log(sinh(x) / x) for x >= 0, accurate near 0 and free of overflow for large x.
[[nodiscard]] double log_sinhc(double x);

}  // namespace decolab
