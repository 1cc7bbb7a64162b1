#include "decolab/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "decolab/diagnostics.hpp"
#include "decolab/errors.hpp"
#include "decolab/parallel.hpp"

namespace decolab::phase_space {

using std::numbers::pi;

PhaseSpaceGrid PhaseSpaceGrid::square(double range, int n) { return {-range, range, -range, range, n, n}; }

PhaseSpaceGrid PhaseSpaceGrid::covering(double alpha_max, int n) {
    return square(std::max(8.0, std::numbers::sqrt2 * std::abs(alpha_max) + 5.0), n);
}

std::vector<double> PhaseSpaceGrid::xs() const { return linspace(x_min, x_max, nx); }
std::vector<double> PhaseSpaceGrid::ps() const { return linspace(p_min, p_max, np); }

void PhaseSpaceGrid::validate(double alpha_max) const {
    if (nx < 2 || np < 2) throw DomainError("phase-space grid needs at least 2 points per axis");
    if (!(x_max > x_min) || !(p_max > p_min)) throw DomainError("phase-space grid ranges are empty");
    const double reach = std::numbers::sqrt2 * std::abs(alpha_max) + 4.0;
    if (std::min({-x_min, x_max, -p_min, p_max}) < reach) {
        warn(fmt::format("phase-space grid does not reach +-{:.2f} on both axes", reach));
    }
}

double WignerField::integral() const { return values.sum() * grid.dx() * grid.dp(); }

double PositionDensity::integral() const {
    double total = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) total += 0.5 * (values[i] + values[i - 1]) * (x[i] - x[i - 1]);
    return total;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw DomainError("linspace needs at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + i * h;
    out.back() = hi;
    return out;
}

double fringe_spacing(double alpha) {
    if (alpha == 0.0) throw DomainError("fringe spacing undefined for alpha = 0");
    return pi / (std::numbers::sqrt2 * std::abs(alpha));
}

double overlap_time(int k) { return pi * (k + 0.5); }

namespace {

/// W at one phase-space point. w[n] holds the running matrix elements of
/// the displaced parity between |m> and |n> for the current row m.
double wigner_point(const CMatrix& rho, Complex alpha, std::vector<Complex>& w) {
    const int d = static_cast<int>(rho.rows());
    const Complex a2 = 2.0 * alpha;
    const Complex a2c = std::conj(a2);

    w[0] = std::exp(-2.0 * std::norm(alpha)) / pi;
    double total = rho(0, 0).real() * w[0].real();
    for (int n = 1; n < d; ++n) {
        w[n] = a2 * w[n - 1] / std::sqrt(static_cast<double>(n));
        total += 2.0 * std::real(rho(0, n) * w[n]);
    }
    for (int m = 1; m < d; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        Complex held = w[m];
        w[m] = (a2c * held - sm * w[m - 1]) / sm;
        total += std::real(rho(m, m) * w[m]);
        for (int n = m + 1; n < d; ++n) {
            const Complex next = (a2 * w[n - 1] - sm * held) / std::sqrt(static_cast<double>(n));
            held = w[n];
            w[n] = next;
            total += 2.0 * std::real(rho(m, n) * w[n]);
        }
    }
    return total;
}

void require_coverage(double boundary, double peak, const char* what) {
    if (boundary > kCoverageTol * peak) {
        throw CoverageError(fmt::format("{} reaches {:.3e} of its maximum on the grid boundary", what,
                                        peak > 0.0 ? boundary / peak : boundary));
    }
}

}  // namespace

WignerField wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid, bool check_coverage) {
    grid.validate();
    WignerField field{grid, Eigen::MatrixXd(grid.nx, grid.np)};
    const CMatrix& m = rho.matrix();
    parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t i) {
        std::vector<Complex> w(static_cast<std::size_t>(rho.dim()));
        const double x = grid.x(static_cast<int>(i));
        for (int j = 0; j < grid.np; ++j) {
            const Complex alpha = Complex(x, grid.p(j)) / std::numbers::sqrt2;
            field.values(static_cast<Eigen::Index>(i), j) = wigner_point(m, alpha, w);
        }
    });

    if (check_coverage) {
        const Eigen::MatrixXd& v = field.values;
        const double boundary = std::max({v.row(0).cwiseAbs().maxCoeff(), v.row(v.rows() - 1).cwiseAbs().maxCoeff(),
                                          v.col(0).cwiseAbs().maxCoeff(), v.col(v.cols() - 1).cwiseAbs().maxCoeff()});
        require_coverage(boundary, v.cwiseAbs().maxCoeff(), "Wigner function");
    }
    return field;
}

Eigen::MatrixXd hermite_functions(const std::vector<double>& x, int dim) {
    if (dim < 1) throw DomainError("need at least one eigenfunction");
    const auto nx = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd psi(nx, dim);
    const double norm0 = std::pow(pi, -0.25);
    for (Eigen::Index i = 0; i < nx; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        psi(i, 0) = norm0 * std::exp(-0.5 * xi * xi);
        if (dim > 1) psi(i, 1) = std::numbers::sqrt2 * xi * psi(i, 0);
        for (int n = 1; n + 1 < dim; ++n) {
            psi(i, n + 1) = xi * std::sqrt(2.0 / (n + 1)) * psi(i, n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(i, n - 1);
        }
    }
    return psi;
}

PositionDensity position_density(const DensityMatrix& rho, const std::vector<double>& x, bool check_coverage) {
    if (x.size() < 2) throw DomainError("position grid needs at least 2 points");
    const Eigen::MatrixXd psi = hermite_functions(x, rho.dim());
    // P_i = Re sum_mn psi_im rho_mn psi_in; rho is Hermitian so only its real part contributes.
    const Eigen::MatrixXd re = rho.matrix().real();
    const Eigen::MatrixXd weighted = psi * re;
    PositionDensity out{x, std::vector<double>(x.size())};
    for (Eigen::Index i = 0; i < psi.rows(); ++i) {
        out.values[static_cast<std::size_t>(i)] = weighted.row(i).dot(psi.row(i));
    }
    if (check_coverage) {
        const double peak = *std::max_element(out.values.begin(), out.values.end());
        require_coverage(std::max(std::abs(out.values.front()), std::abs(out.values.back())), peak, "position density");
    }
    return out;
}

double position_density_at(const DensityMatrix& rho, double x) {
    const Eigen::MatrixXd psi = hermite_functions({x}, rho.dim());
    const Eigen::RowVectorXd row = psi.row(0);
    return row * rho.matrix().real() * row.transpose();
}

namespace {

struct Extrema {
    std::size_t max_index;
    std::size_t min_index;
};

Extrema locate_extrema(const PositionDensity& density, std::optional<double> spacing) {
    const auto& v = density.values;
    const auto& x = density.x;
    const std::size_t n = v.size();
    if (n < 3) throw NoFringeError("position density has fewer than three samples");

    std::optional<std::size_t> peak;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (v[i] >= v[i - 1] && v[i] >= v[i + 1] && v[i] > 0.0) {
            if (!peak || std::abs(x[i]) < std::abs(x[*peak])) peak = i;
        }
    }
    if (!peak) throw NoFringeError("position density has no interior local maximum");

    for (std::size_t j = *peak + 1; j + 1 < n; ++j) {
        if (spacing && x[j] - x[*peak] > 3.0 * *spacing) break;
        if (v[j] <= v[j - 1] && v[j] <= v[j + 1] && v[j] < v[*peak]) return {*peak, j};
    }
    throw NoFringeError(fmt::format("no local minimum to the right of the maximum at x = {:.4f}", x[*peak]));
}

double ratio(double hi, double lo) { return (hi - lo) / (hi + lo); }

}  // namespace

Visibility visibility(const PositionDensity& density, std::optional<double> spacing) {
    const Extrema e = locate_extrema(density, spacing);
    const double hi = density.values[e.max_index];
    const double lo = std::max(density.values[e.min_index], 0.0);
    return {ratio(hi, lo), density.x[e.max_index], hi, density.x[e.min_index], lo};
}

Visibility visibility_refined(const DensityMatrix& rho, const PositionDensity& density, std::optional<double> spacing) {
    const Extrema e = locate_extrema(density, spacing);
    const auto& x = density.x;
    constexpr int kBits = 52;

    auto bracket = [&](std::size_t i) { return std::pair{x[i - 1], x[i + 1]}; };
    const auto [max_lo, max_hi] = bracket(e.max_index);
    const auto top = boost::math::tools::brent_find_minima(
        [&](double xx) { return -position_density_at(rho, xx); }, max_lo, max_hi, kBits);
    const auto [min_lo, min_hi] = bracket(e.min_index);
    const auto bottom = boost::math::tools::brent_find_minima(
        [&](double xx) { return position_density_at(rho, xx); }, min_lo, min_hi, kBits);

    const double hi = std::max(-top.second, density.values[e.max_index]);
    const double lo = std::max(std::min(bottom.second, density.values[e.min_index]), 0.0);
    const double x_hi = -top.second >= density.values[e.max_index] ? top.first : x[e.max_index];
    const double x_lo = bottom.second <= density.values[e.min_index] ? bottom.first : x[e.min_index];
    return {ratio(hi, lo), x_hi, hi, x_lo, lo};
}

double negativity_volume(const WignerField& field) {
    return (-field.values).cwiseMax(0.0).sum() * field.grid.dx() * field.grid.dp();
}

}  // namespace decolab::phase_space
