#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "decolab/special_functions.hpp"

using decolab::log_gamma;
using decolab::log_sinhc;
using C = std::complex<double>;

TEST(LogGamma, MatchesRealLgamma) {
    for (double x = 0.1; x < 60.0; x *= 1.37) {
        const double expect = std::lgamma(x);
        const double got = log_gamma(C(x, 0.0)).real();
        EXPECT_NEAR(got, expect, 1e-13 * std::max(1.0, std::abs(expect))) << x;
    }
}

TEST(LogGamma, ModulusOnImaginaryLine) {
    // |Gamma(1 + i y)|^2 = pi y / sinh(pi y).
    for (double y : {1e-3, 0.1, 0.7, 2.0, 10.0, 50.0, 300.0}) {
        const double lhs = 2.0 * log_gamma(C(1.0, y)).real();
        const double py = std::numbers::pi * y;
        const double rhs = std::log(py) - (py + std::log1p(-std::exp(-2.0 * py)) - std::log(2.0));
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << y;
    }
}

TEST(LogGamma, ReflectionFormula) {
    // |Gamma(z) Gamma(1 - z)| = pi / |sin(pi z)|.
    for (C z : {C(0.3, 0.4), C(0.25, -1.5), C(0.7, 2.0)}) {
        const double lhs = (log_gamma(z) + log_gamma(1.0 - z)).real();
        const double rhs = std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * z)));
        EXPECT_NEAR(lhs, rhs, 1e-12) << z;
    }
}

TEST(LogGamma, Recurrence) {
    for (C z : {C(1.2, 3.0), C(5.0, -7.5), C(0.6, 100.0)}) {
        const double lhs = (log_gamma(z + 1.0) - log_gamma(z)).real();
        EXPECT_NEAR(lhs, std::log(std::abs(z)), 1e-12) << z;
    }
}

TEST(LogGamma, HalfValue) {
    EXPECT_NEAR(log_gamma(C(0.5, 0.0)).real(), 0.5 * std::log(std::numbers::pi), 1e-14);
}

TEST(LogSinhc, Limits) {
    EXPECT_EQ(log_sinhc(0.0), 0.0);
    EXPECT_NEAR(log_sinhc(1e-4), 1e-8 / 6.0 - 1e-16 / 180.0, 1e-24);
    for (double x : {0.01, 0.3, 0.99, 1.01, 3.0}) {
        EXPECT_NEAR(log_sinhc(x), std::log(std::sinh(x) / x), 1e-15 * std::max(1.0, x * x)) << x;
    }
    EXPECT_NEAR(log_sinhc(1.0), std::log(std::sinh(1.0)), 1e-15);
    EXPECT_NEAR(log_sinhc(5000.0), 5000.0 - std::log(2.0 * 5000.0), 1e-10);
}
