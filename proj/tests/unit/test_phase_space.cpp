#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "decolab/errors.hpp"
#include "decolab/fock.hpp"
#include "decolab/gravity.hpp"
#include "decolab/phase_space.hpp"

using namespace decolab;
using namespace decolab::phase_space;
using std::numbers::pi;

namespace {

DensityMatrix number_state(int n, int dim) {
    CVector psi = CVector::Zero(dim);
    psi(n) = 1.0;
    return DensityMatrix::pure(FockSpace(dim), psi);
}

DensityMatrix coherent_density(Complex alpha, int dim) {
    FockSpace space(dim);
    return DensityMatrix::pure(space, coherent_state(alpha, space).amplitudes);
}

// W(alpha) = Tr[rho D(alpha) Pi D(alpha)^+] / pi with D built in a larger
// space and cropped, so the retained block is exact.
double wigner_oracle(const DensityMatrix& rho, double x, double p) {
    const int d = rho.dim();
    const int big = d + 200;
    const Complex alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
    const CMatrix disp = displacement(FockSpace(big), alpha).matrix();
    const CMatrix parity = parity_operator(FockSpace(big)).matrix();
    const CMatrix kernel = (disp * parity * disp.adjoint()).topLeftCorner(d, d);
    return (rho.matrix() * kernel).trace().real() / pi;
}

}  // namespace

TEST(Wigner, Vacuum) {
    const auto grid = PhaseSpaceGrid::square(6.0, 61);
    const auto field = wigner(number_state(0, 10), grid);
    double err = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            const double x = grid.x(i), p = grid.p(j);
            err = std::max(err, std::abs(field.values(i, j) - std::exp(-x * x - p * p) / pi));
        }
    }
    EXPECT_LT(err, 1e-12);
    EXPECT_NEAR(field.values(30, 30), 1.0 / pi, 1e-14);
}

TEST(Wigner, CoherentStateIsDisplacedGaussian) {
    const Complex alpha(3.0, 0.0);
    const auto grid = PhaseSpaceGrid::covering(3.0, 101);
    const auto field = wigner(coherent_density(alpha, 50), grid);
    const double x0 = std::sqrt(2.0) * 3.0;
    double err = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            const double x = grid.x(i) - x0, p = grid.p(j);
            err = std::max(err, std::abs(field.values(i, j) - std::exp(-x * x - p * p) / pi));
        }
    }
    EXPECT_LT(err, 1e-8);
}

TEST(Wigner, FirstNumberStateAtOrigin) {
    const auto grid = PhaseSpaceGrid::square(7.0, 71);
    const auto field = wigner(number_state(1, 8), grid);
    EXPECT_NEAR(field.values(35, 35), -1.0 / pi, 1e-13);
}

TEST(Wigner, MatchesDisplacedParityOracle) {
    // A random mixed state supported on the first 12 levels.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    const int d = 12;
    CMatrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Complex(normal(rng), normal(rng));
    CMatrix m = g * g.adjoint();
    m /= m.trace();
    const auto rho = DensityMatrix::from_matrix(FockSpace(d), m);
    // |alpha|^2 <= 36 on this grid keeps the cropped displacement exact.
    const auto grid = PhaseSpaceGrid::square(6.0, 17);
    const auto field = wigner(rho, grid, false);
    for (int i = 3; i < grid.nx; i += 4) {
        for (int j = 2; j < grid.np; j += 5) {
            EXPECT_NEAR(field.values(i, j), wigner_oracle(rho, grid.x(i), grid.p(j)), 1e-10);
        }
    }
}

TEST(Wigner, NormalizedOnCoveringGrid) {
    const auto rho = cat_density(3.0, -3.0, FockSpace(40));
    const auto field = wigner(rho, PhaseSpaceGrid::covering(3.0, 201));
    EXPECT_NEAR(field.integral(), 1.0, 1e-4);
}

TEST(Wigner, CoverageError) {
    const auto rho = coherent_density(3.0, 40);
    EXPECT_THROW((void)wigner(rho, PhaseSpaceGrid::square(3.0, 41)), CoverageError);
}

TEST(Wigner, MarginalIsPositionDensity) {
    const auto rho = gravity::evolve_density(cat_density(3.0, -5.0, FockSpace(70)), 3.0 * pi / 2.0, {});
    PhaseSpaceGrid grid = PhaseSpaceGrid::square(12.0, 481);
    const auto field = wigner(rho, grid, false);
    const auto density = position_density(rho, grid.xs(), false);
    double err = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        double marginal = 0.0;
        for (int j = 0; j < grid.np; ++j) {
            const double w = (j == 0 || j == grid.np - 1) ? 0.5 : 1.0;
            marginal += w * field.values(i, j) * grid.dp();
        }
        err = std::max(err, std::abs(marginal - density.values[i]));
    }
    EXPECT_LT(err, 1e-6);
}

TEST(Hermite, Orthonormal) {
    const auto x = linspace(-14.0, 14.0, 1401);
    const int d = 50;
    const auto psi = hermite_functions(x, d);
    const double h = x[1] - x[0];
    for (int m = 0; m < d; m += 7) {
        for (int n = 0; n < d; n += 3) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += psi(static_cast<Eigen::Index>(i), m) * psi(static_cast<Eigen::Index>(i), n);
            EXPECT_NEAR(s * h, m == n ? 1.0 : 0.0, 1e-10) << m << "," << n;
        }
    }
}

TEST(PositionDensityTest, Vacuum) {
    const auto x = linspace(-8.0, 8.0, 161);
    const auto density = position_density(number_state(0, 5), x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(density.values[i], std::exp(-x[i] * x[i]) / std::sqrt(pi), 1e-14);
    }
    EXPECT_NEAR(density.integral(), 1.0, 1e-10);
    EXPECT_NEAR(position_density_at(number_state(0, 5), 0.3), std::exp(-0.09) / std::sqrt(pi), 1e-14);
}

TEST(PositionDensityTest, CatAtOverlapShowsCosineFringes) {
    // Pure even cat rotated by a quarter period: psi ~ exp(-x^2/2) cos(sqrt(2) alpha x).
    const double alpha = 3.0;
    const auto rho = cat_density(Complex(0.0, -alpha), Complex(0.0, alpha), FockSpace(50));
    const auto x = linspace(-7.0, 7.0, 141);
    const auto density = position_density(rho, x);
    const double k = std::sqrt(2.0) * alpha;
    const double norm = 0.5 * std::sqrt(pi) * (1.0 + std::exp(-k * k));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = std::cos(k * x[i]);
        EXPECT_NEAR(density.values[i], std::exp(-x[i] * x[i]) * c * c / norm, 1e-10);
    }
}

TEST(PositionDensityTest, CoverageError) {
    const auto rho = coherent_density(3.0, 40);
    EXPECT_THROW((void)position_density(rho, linspace(-2.0, 2.0, 41)), CoverageError);
}

TEST(VisibilityTest, PureCatIsFullyVisible) {
    const double alpha = 3.0;
    const auto rho = cat_density(Complex(0.0, -alpha), Complex(0.0, alpha), FockSpace(50));
    const auto density = position_density(rho, linspace(-8.0, 8.0, 801));
    const auto coarse = visibility(density, fringe_spacing(alpha));
    EXPECT_GT(coarse.nu, 0.99);
    const auto fine = visibility_refined(rho, density, fringe_spacing(alpha));
    EXPECT_NEAR(fine.nu, 1.0, 1e-6);
    EXPECT_NEAR(2.0 * std::abs(fine.x_min - fine.x_max), fringe_spacing(alpha), 1e-6);
}

TEST(VisibilityTest, ScaleInvariant) {
    PositionDensity d;
    d.x = linspace(-5.0, 5.0, 501);
    for (double x : d.x) d.values.push_back(std::exp(-x * x) * (1.0 + 0.5 * std::cos(4.0 * x)));
    const auto v1 = visibility(d);
    for (double& v : d.values) v *= 7.0;
    const auto v2 = visibility(d);
    EXPECT_NEAR(v1.nu, v2.nu, 1e-14);
}

TEST(VisibilityTest, SingleWavepacketHasNoFringe) {
    const auto density = position_density(number_state(0, 5), linspace(-8.0, 8.0, 161));
    EXPECT_THROW((void)visibility(density), NoFringeError);
}

TEST(VisibilityTest, DecreasesUnderGravityDephasing) {
    const auto rho0 = cat_density(3.0, -5.0, FockSpace(70));
    const auto x = linspace(-12.0, 12.0, 1201);
    double previous = 2.0;
    for (int k = 0; k < 5; ++k) {
        const auto rho = gravity::evolve_density(rho0, overlap_time(k), {});
        const auto nu = visibility_refined(rho, position_density(rho, x)).nu;
        EXPECT_LT(nu, previous) << k;
        previous = nu;
    }
}

TEST(Negativity, VacuumHasNone) {
    const auto field = wigner(number_state(0, 5), PhaseSpaceGrid::square(8.0, 101));
    EXPECT_EQ(negativity_volume(field), 0.0);
}

TEST(Negativity, FirstNumberState) {
    // Analytic value 2 exp(-1/2) - 1.
    const auto field = wigner(number_state(1, 5), PhaseSpaceGrid::square(6.0, 801));
    EXPECT_NEAR(negativity_volume(field), 2.0 * std::exp(-0.5) - 1.0, 1e-5);
}

TEST(Negativity, GridRefinementConverges) {
    const auto rho = cat_density(3.0, -3.0, FockSpace(40));
    const double coarse = negativity_volume(wigner(rho, PhaseSpaceGrid::square(10.0, 201)));
    const double fine = negativity_volume(wigner(rho, PhaseSpaceGrid::square(10.0, 401)));
    EXPECT_GT(fine, 0.2);
    EXPECT_LT(std::abs(coarse - fine) / fine, 0.01);
}

TEST(Grid, Geometry) {
    const auto g = PhaseSpaceGrid::covering(5.0);
    EXPECT_NEAR(g.x_max, std::sqrt(2.0) * 5.0 + 5.0, 1e-12);
    EXPECT_EQ(PhaseSpaceGrid::covering(1.0).x_max, 8.0);
    PhaseSpaceGrid bad;
    bad.nx = 1;
    EXPECT_THROW(bad.validate(), DomainError);
    EXPECT_NEAR(fringe_spacing(3.0), pi / (std::sqrt(2.0) * 3.0), 1e-15);
    EXPECT_NEAR(overlap_time(4), 4.5 * pi, 1e-14);
}
