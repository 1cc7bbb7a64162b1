#include "decolab/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "decolab/errors.hpp"

namespace decolab {
namespace {

constexpr double kLanczosG = 671.0 / 128.0;
constexpr double kSqrtTwoPi = 2.5066282746310005;
constexpr double kSeriesHead = 0.999999999999997092;
constexpr std::array<double, 14> kLanczosCoeffs = {
    57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
    -0.491913816097620199,   0.339946499848118887e-4,  0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
};

std::complex<double> lanczos_log_gamma(std::complex<double> z) {
    const std::complex<double> shifted = z + kLanczosG;
    const std::complex<double> head = (z + 0.5) * std::log(shifted) - shifted;
    std::complex<double> series = kSeriesHead;
    std::complex<double> denom = z;
    for (const double c : kLanczosCoeffs) {
        denom += 1.0;
        series += c / denom;
    }
    return head + std::log(kSqrtTwoPi * series / z);
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        // Poles at the non-positive integers.
        if (z.imag() == 0.0 && z.real() == std::floor(z.real())) {
            throw DomainError("log_gamma is singular at non-positive integers");
        }
        constexpr double pi = std::numbers::pi;
        return std::log(pi) - std::log(std::sin(pi * z)) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

double log_sinhc(double x) {
    x = std::abs(x);
    if (x < 1.0) {
        // sinh(x)/x - 1 = sum_k x^{2k} / (2k+1)!, summed without cancellation.
        const double x2 = x * x;
        double term = 1.0, excess = 0.0;
        for (int k = 1; k < 30; ++k) {
            term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
            excess += term;
            if (term < 1e-17 * excess) break;
        }
        return std::log1p(excess);
    }
    if (x < 20.0) return std::log(std::sinh(x) / x);
    // sinh x = e^x (1 - e^{-2x}) / 2
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2 - std::log(x);
}

}  // namespace decolab
