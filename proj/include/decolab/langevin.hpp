#pragma once

// Classical stochastic model of the two-photon-damped oscillator:
//   da = -i Omega a dt - gamma a^2 a* dt - sqrt(2 gamma theta) a* dW
// with a single real Wiener increment dW, and its non-RWA counterpart whose
// drift carries (i gamma / 2 Omega) d/dt(a*^2 - a^2) a*.

#include <cstdint>
#include <string_view>
#include <vector>

#include "decolab/fock.hpp"

namespace decolab::langevin {

enum class Variant { rwa, nonrwa };
enum class NonRwaMode { substitute, lag1 };
/// ito: Euler-Maruyama. stratonovich: Heun predictor-corrector.
enum class Calculus { ito, stratonovich };

[[nodiscard]] std::string_view to_string(Variant v);
[[nodiscard]] std::string_view to_string(NonRwaMode m);
[[nodiscard]] std::string_view to_string(Calculus c);
[[nodiscard]] Variant parse_variant(std::string_view text);
[[nodiscard]] NonRwaMode parse_nonrwa_mode(std::string_view text);
[[nodiscard]] Calculus parse_calculus(std::string_view text);

/// Blow-up guard on |a|.
inline constexpr double kOverflowLimit = 1e6;

struct SdeParams {
    double gamma = 1e-3;   ///< gamma / Omega = 1/Q
    double theta = 0.0;    ///< k_B T / hbar Omega
    double omega = 1.0;
    double dt = 4e-3;
    int n_traj = 1000;
    std::uint64_t seed = 0;
    double t_final = 200.0;
    double sample_stride = 0.5;  ///< must be a multiple of dt
    /// Samples with t >= average_from also enter a per-trajectory time
    /// average; negative disables it.
    double average_from = -1.0;
    Calculus calculus = Calculus::stratonovich;
    NonRwaMode nonrwa_mode = NonRwaMode::substitute;

    /// Throws DomainError on non-positive gamma/dt/n_traj, negative theta,
    /// or a stride that is not a multiple of dt.
    void validate() const;
};

/// theta = 2 / ln(1 + 1/n): the temperature at which n(2 Omega) = n.
[[nodiscard]] double theta_for_occupation(double nbar);

/// One Euler-Maruyama step of the RWA equation. Throws OverflowError if
/// the result exceeds kOverflowLimit in modulus.
[[nodiscard]] Complex step_rwa(Complex a, double dt, double dW, const SdeParams& params);

/// One Euler-Maruyama step of the non-RWA equation. `substitute` replaces
/// d/dt(a*^2 - a^2) by 2 i Omega (a*^2 + a^2); `lag1` uses
/// (X(a) - X(a_prev)) / dt with X = a*^2 - a^2.
[[nodiscard]] Complex step_nonrwa(Complex a, Complex a_prev, double dt, double dW, const SdeParams& params,
                                  NonRwaMode mode);

/// Drift f and noise coefficient g (da = f dt + g dW) of each model, as
/// used by the integrators. `a_prev` matters only for lag1.
[[nodiscard]] Complex drift(Complex a, Complex a_prev, const SdeParams& params, Variant variant, NonRwaMode mode);
[[nodiscard]] Complex noise_coefficient(Complex a, const SdeParams& params);

/// One step in the calculus selected by params (EM or Heun).
[[nodiscard]] Complex step(Complex a, Complex a_prev, double dW, const SdeParams& params, Variant variant);

struct TrajectoryEnsemble {
    std::vector<double> times;
    std::vector<Complex> mean_a;
    std::vector<double> mean_abs2;
    std::vector<double> stderr_a;     ///< sqrt(sample variance of a / n), variance = E|a - <a>|^2
    std::vector<double> stderr_abs2;
    int n_traj = 0;                   ///< trajectories that entered the statistics
    int discarded = 0;                ///< trajectories dropped after an OverflowError
    double late_abs2 = 0.0;           ///< mean over trajectories of the time-averaged |a|^2
    double late_abs2_stderr = 0.0;
};

/// Trajectory k draws its increments from a generator seeded by a stateless
/// mix of (seed, k). Statistics are accumulated in fixed blocks of
/// trajectories and merged in block order, so results do not depend on the
/// worker count.
[[nodiscard]] TrajectoryEnsemble run_ensemble(Complex alpha0, const SdeParams& params, Variant variant);

/// Deterministic per-trajectory seed.
[[nodiscard]] std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace decolab::langevin
