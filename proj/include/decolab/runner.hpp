#pragma once

// Binds a Scenario to the model modules and writes one CSV per observable.

#include <filesystem>
#include <string>
#include <vector>

#include "decolab/gravity.hpp"
#include "decolab/langevin.hpp"
#include "decolab/lindblad.hpp"
#include "decolab/phase_space.hpp"
#include "decolab/scenario.hpp"

namespace decolab {

[[nodiscard]] std::string version();

struct RunOptions {
    std::filesystem::path out_dir = "results";
};

/// Runs every sweep member of the scenario and returns the written files
/// in creation order. Throws ConfigError for invalid settings and the
/// model's own errors otherwise.
std::vector<std::filesystem::path> run(const Scenario& scenario, const RunOptions& options);

// Typed views of a scenario, shared with tests.

[[nodiscard]] gravity::GravityBathParams gravity_params(const Scenario& s);
[[nodiscard]] gravity::DecayForm gravity_decay_form(const Scenario& s);
[[nodiscard]] lindblad::QedParams qed_params(const Scenario& s);
[[nodiscard]] langevin::SdeParams sde_params(const Scenario& s);

/// The (alpha1, alpha2) pair of a cat scenario; alpha2 defaults to -alpha1.
[[nodiscard]] std::pair<Complex, Complex> cat_amplitudes(const Scenario& s);

/// Fock dimension: the `dim` key or default_dim of the largest amplitude.
[[nodiscard]] int scenario_dim(const Scenario& s);

/// Initial state: cat when alpha1 is present, otherwise the coherent state `alpha`.
[[nodiscard]] DensityMatrix initial_state(const Scenario& s);

/// Two-photon (or single-photon) evolution sampled at `times`, integrated in
/// the frame rotating at omega and rotated back analytically. The
/// dissipators commute with the number operator, so this equals lab-frame
/// integration while allowing a much larger step.
void evolve_qed(const DensityMatrix& rho0, const lindblad::QedParams& params, bool single_photon,
                std::span<const double> times, const lindblad::SnapshotObserver& observer, double max_dt = 0.0);

/// Default Fock dimension for thermal two-photon runs starting from |alpha>.
[[nodiscard]] int quantum_dim_for(double alpha, double nbar);

}  // namespace decolab
