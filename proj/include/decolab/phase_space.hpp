#pragma once

// Phase-space observables in dimensionless (x, p): Wigner function,
// position density, fringe visibility and negativity volume.
// Conventions: alpha = (x + i p) / sqrt(2), vacuum W = exp(-x^2 - p^2) / pi.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "decolab/fock.hpp"

namespace decolab::phase_space {

struct PhaseSpaceGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    double p_min = -8.0;
    double p_max = 8.0;
    int nx = 201;
    int np = 201;

    [[nodiscard]] static PhaseSpaceGrid square(double range, int n);
    /// Square grid wide enough for coherent amplitudes up to alpha_max:
    /// half-width max(8, sqrt(2) alpha_max + 5).
    [[nodiscard]] static PhaseSpaceGrid covering(double alpha_max, int n = 201);

    [[nodiscard]] double dx() const { return (x_max - x_min) / (nx - 1); }
    [[nodiscard]] double dp() const { return (p_max - p_min) / (np - 1); }
    [[nodiscard]] double x(int i) const { return x_min + i * dx(); }
    [[nodiscard]] double p(int j) const { return p_min + j * dp(); }
    [[nodiscard]] std::vector<double> xs() const;
    [[nodiscard]] std::vector<double> ps() const;

    /// Throws DomainError for fewer than 2 points or empty ranges; warns if
    /// the grid does not reach sqrt(2) alpha_max + 4 on both axes.
    void validate(double alpha_max = 0.0) const;
};

struct WignerField {
    PhaseSpaceGrid grid;
    Eigen::MatrixXd values;  ///< values(i, j) = W(x_i, p_j)

    /// Riemann sum of W dx dp.
    [[nodiscard]] double integral() const;
};

struct PositionDensity {
    std::vector<double> x;
    std::vector<double> values;

    [[nodiscard]] double integral() const;  ///< trapezoid rule
};

/// Relative boundary level above which a sampled field counts as not covered.
inline constexpr double kCoverageTol = 1e-6;

/// W(x, p) = Tr[rho D(alpha) Pi D(alpha)^dagger] / pi, evaluated with the
/// Laguerre recurrence for the displaced-parity matrix elements, O(dim^2)
/// per grid point. Throws CoverageError when |W| on the boundary exceeds
/// kCoverageTol * max|W| (unless check_coverage is false).
[[nodiscard]] WignerField wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid, bool check_coverage = true);

/// Harmonic eigenfunctions psi_0..psi_{dim-1} at each x (rows: x, cols: n).
[[nodiscard]] Eigen::MatrixXd hermite_functions(const std::vector<double>& x, int dim);

/// P(x) = sum rho_mn psi_m(x) psi_n(x). Throws CoverageError if the
/// endpoints exceed kCoverageTol * max P (unless check_coverage is false).
[[nodiscard]] PositionDensity position_density(const DensityMatrix& rho, const std::vector<double>& x,
                                               bool check_coverage = true);
/// Single-point evaluation of P(x).
[[nodiscard]] double position_density_at(const DensityMatrix& rho, double x);

/// Uniform grid of n points on [lo, hi].
[[nodiscard]] std::vector<double> linspace(double lo, double hi, int n);

/// Expected fringe spacing pi / (sqrt(2) |alpha|) for a symmetric cat.
[[nodiscard]] double fringe_spacing(double alpha);

struct Visibility {
    double nu;
    double x_max;
    double p_max;
    double x_min;
    double p_min;
};

/// nu = (P_max - P_min) / (P_max + P_min) with P_max the sampled local
/// maximum nearest x = 0 and P_min the first sampled local minimum to its
/// right. When `spacing` is given, the minimum must lie within 3 spacings.
/// Throws NoFringeError when no such minimum exists.
[[nodiscard]] Visibility visibility(const PositionDensity& density, std::optional<double> spacing = std::nullopt);

/// Same extrema, refined on the continuous P(x) of rho by Brent
/// minimization inside the bracketing grid cells.
[[nodiscard]] Visibility visibility_refined(const DensityMatrix& rho, const PositionDensity& density,
                                            std::optional<double> spacing = std::nullopt);

/// sum max(0, -W) dx dp.
[[nodiscard]] double negativity_volume(const WignerField& field);

/// Overlap instants tau_k = pi (k + 1/2).
[[nodiscard]] double overlap_time(int k);

}  // namespace decolab::phase_space
