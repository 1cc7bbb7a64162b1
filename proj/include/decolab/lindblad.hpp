#pragma once

// Born-Markov-RWA master equations for the minimally coupled oscillator
// (two-photon damping) and, for comparison, the single-photon damped
// oscillator. Density matrices are column-stacked: vec(rho)[m + n dim] = rho(m, n).

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "decolab/fock.hpp"

namespace decolab::lindblad {

struct QedParams {
    double gamma = 1e-3;  ///< damping gamma/Omega = 1/Q
    double nbar = 0.0;    ///< thermal occupation n(2 Omega)
    double omega = 1.0;   ///< rotation rate; 0 gives the interaction picture

    /// Throws DomainError on negative gamma/nbar; warns when gamma > 0.05.
    void validate() const;
};

using SparseSuperoperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

class Liouvillian {
public:
    Liouvillian(FockSpace space, SparseSuperoperator superoperator);

    [[nodiscard]] FockSpace space() const noexcept { return space_; }
    [[nodiscard]] const SparseSuperoperator& superoperator() const noexcept { return super_; }
    /// Dense dim^2 x dim^2 copy; intended for small spaces.
    [[nodiscard]] CMatrix dense() const;
    /// Induced 1-norm (max absolute column sum); bounds the spectral radius.
    [[nodiscard]] double norm1() const noexcept { return norm1_; }

    /// out = L vec(rho).
    void apply(const CVector& in, CVector& out) const;
    [[nodiscard]] DensityMatrix apply(const DensityMatrix& rho) const;

private:
    FockSpace space_;
    SparseSuperoperator super_;
    double norm1_;
};

/// drho/dt = i Omega [rho, a^+ a]
///         + (gamma/2)(n+1)([a^2 rho, a^+2] + [a^2, rho a^+2])
///         + (gamma/2) n    ([a^+2 rho, a^2] + [a^+2, rho a^2]).
[[nodiscard]] Liouvillian build_two_photon(FockSpace space, const QedParams& params);

/// drho/dt = i Omega [rho, a^+ a]
///         + (gamma/2)(n+1)(2 a rho a^+ - a^+ a rho - rho a^+ a)
///         + (gamma/2) n    (2 a^+ rho a - a a^+ rho - rho a a^+).
[[nodiscard]] Liouvillian build_single_photon(FockSpace space, const QedParams& params);

/// RK4 is stable for every Lindblad spectrum inside the left half-disc of
/// radius 2.6; requiring dt * ||L||_1 below this bound keeps the whole
/// spectrum there.
inline constexpr double kStabilityBound = 2.0;
inline constexpr double kTraceDriftLimit = 1e-6;

struct Snapshot {
    double time;
    DensityMatrix rho;               ///< re-symmetrized
    double raw_hermiticity = 0.0;    ///< max |rho - rho^dagger| of the integrated state before re-symmetrizing
};

struct TimeSeries {
    std::vector<Snapshot> snapshots;
    double max_trace_drift = 0.0;
    double dt = 0.0;
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Classical fourth-order Runge-Kutta on vec(rho), reporting each requested
/// time (re-symmetrized, never projected). Empty `sample_times` means {0, t_final}.
///
/// Throws StabilityError if dt * ||L||_1 >= kStabilityBound or the trace
/// drifts by more than kTraceDriftLimit; StepError if a sample time is not a
/// multiple of dt (to 1e-9) or lies outside [0, t_final].
void evolve_observed(const DensityMatrix& rho0, const Liouvillian& liouvillian, double t_final, double dt,
                     std::span<const double> sample_times, const SnapshotObserver& observer);

[[nodiscard]] TimeSeries evolve(const DensityMatrix& rho0, const Liouvillian& liouvillian, double t_final, double dt,
                                std::span<const double> sample_times = {});

/// Evolves through an arbitrary nondecreasing list of times (not tied to a
/// global step grid): each interval is split into ceil(interval / max_dt)
/// equal RK4 steps. The observer sees every requested time, starting from
/// rho0 itself when times[0] == 0.
void evolve_through(const DensityMatrix& rho0, const Liouvillian& liouvillian, std::span<const double> times,
                    double max_dt, const SnapshotObserver& observer);

/// Uniform grid 0, stride, 2 stride, ... up to t_final (inclusive when it lands on the grid).
[[nodiscard]] std::vector<double> uniform_times(double t_final, double stride);

/// Largest dt = base / 2^k that satisfies the stability bound and whose
/// dt-vs-dt/2 discrepancy on a probe window of length min(horizon, 2 pi) is
/// below `audit_tol` (max entry difference of the state).
[[nodiscard]] double select_step(const DensityMatrix& rho0, const Liouvillian& liouvillian, double horizon,
                                 double base = 2e-3 * 3.14159265358979323846, double audit_tol = 1e-6);

/// Moments along a trajectory.
struct MomentSeries {
    std::vector<double> times;
    std::vector<Complex> mean_a;
    std::vector<Complex> mean_adag_a2;  ///< <a^+ a a>
    std::vector<double> mean_n;
};

/// Observer that appends the moments of each snapshot it is shown.
class MomentRecorder {
public:
    explicit MomentRecorder(FockSpace space);
    void operator()(const Snapshot& snapshot);
    [[nodiscard]] const MomentSeries& series() const noexcept { return series_; }

private:
    Operator a_;
    Operator adag_a2_;
    Operator number_;
    MomentSeries series_;
};

[[nodiscard]] MomentSeries moment_series(const TimeSeries& series);

/// max over interior samples of |centered difference of <a> - RHS| with
/// RHS = -i Omega <a> - gamma <a^+ a^2> + 2 gamma n <a>.
/// Throws DomainError for fewer than 3 samples or a non-uniform grid.
[[nodiscard]] double moment_residual(const MomentSeries& series, const QedParams& params);

/// Moments at arbitrary nondecreasing `times` for a phase-covariant
/// generator (both builders above are: they never couple entries with
/// different m - n). Only the band |m - n| <= 1, which carries <a>,
/// <a^+ a^2> and <a^+ a>, is integrated, with RK4 steps of at most max_dt;
/// max_dt <= 0 selects the step by the same halving audit as select_step.
/// Throws StabilityError if the trace drifts by more than kTraceDriftLimit.
[[nodiscard]] MomentSeries band_moments(const DensityMatrix& rho0, const Liouvillian& liouvillian,
                                        std::span<const double> times, double max_dt = 0.0);

/// rho_{mn} -> rho_{mn} exp(-i (m - n) angle): free evolution e^{-i angle a^+a} rho e^{i angle a^+a}.
[[nodiscard]] DensityMatrix rotate(const DensityMatrix& rho, double angle);

}  // namespace decolab::lindblad
