#pragma once

// Exact reduced dynamics of the energy-coupled (phase-damped) oscillator.
//
// Every Fock-basis entry evolves independently:
//   rho_{n n'}(t) = rho_{n n'}(0) exp(E(n, n', t))
// with E = -i (n - n') t + [optional cutoff phase] - (C/pi) (n - n')^2 D(t).
// D(t) is twice the thermal bath integral
//   I(t) = int_0^inf dw coth(beta w / 2) sin^2(w t / 2) exp(-w / w_c) / w.

#include <string_view>

#include "decolab/fock.hpp"

namespace decolab::gravity {

struct GravityBathParams {
    double coupling_over_pi = 1e-3;  ///< C/pi, coupling already rescaled by Omega^2
    double cutoff = 1e3;             ///< w_c / Omega
    double beta = 1.0;               ///< hbar Omega / k_B T
    bool include_kerr_phase = false;
    bool include_freq_shift = false;

    /// Throws DomainError on non-positive parameters; warns for cutoff < 10.
    void validate() const;
};

enum class DecayForm {
    exact_gamma,       ///< complex Gamma-function closed form
    high_cutoff,       ///< beta w_c -> infinity: (beta / pi t) sinh(pi t / beta)
    high_temperature,  ///< t >> beta asymptote: ln(beta w_c / 2 pi) + pi t / beta
};

[[nodiscard]] std::string_view to_string(DecayForm form);
/// Accepts "exact_gamma", "high_cutoff", "high_T" / "high_temperature".
[[nodiscard]] DecayForm parse_decay_form(std::string_view text);

/// Numerical quadrature of I(t), independent of the closed forms.
/// Integrates period by period (width <= 2 pi / t) with adaptive
/// Gauss-Kronrod panels and stops once the exponential tail is below the
/// tolerance. Throws QuadratureError if a panel misses `rel_tol`.
[[nodiscard]] double decoherence_integral_oracle(double t, const GravityBathParams& params,
                                                 double rel_tol = 1e-9);

/// D(t) for the selected closed form; D(0) = 0 for every form.
[[nodiscard]] double decay_function(double t, const GravityBathParams& params, DecayForm form);

/// w_c t - atan(w_c t).
[[nodiscard]] double cutoff_phase(double t, double cutoff);

/// Full exponent E(n, n', t). Throws DomainError for t < 0 or negative indices.
[[nodiscard]] Complex decoherence_exponent(int n, int np, double t, const GravityBathParams& params,
                                           DecayForm form = DecayForm::exact_gamma);

/// Same exponent with D(t) already evaluated, for bulk use.
[[nodiscard]] Complex decoherence_exponent_from_decay(int n, int np, double t, double decay,
                                                      const GravityBathParams& params);

[[nodiscard]] DensityMatrix evolve_density(const DensityMatrix& rho0, double t, const GravityBathParams& params,
                                           DecayForm form = DecayForm::exact_gamma);

/// Long-time limit: the number-state populations of rho0 with all coherences removed.
[[nodiscard]] DensityMatrix steady_state(const DensityMatrix& rho0);

}  // namespace decolab::gravity
