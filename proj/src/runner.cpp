#include "decolab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "decolab/errors.hpp"
#include "decolab/result_table.hpp"

#ifndef DECOLAB_VERSION
#define DECOLAB_VERSION "0.0.0"
#endif

namespace decolab {

std::string version() { return DECOLAB_VERSION; }

gravity::GravityBathParams gravity_params(const Scenario& s) {
    gravity::GravityBathParams p;
    p.coupling_over_pi = s.number("coupling_over_pi", p.coupling_over_pi);
    p.cutoff = s.number("cutoff", p.cutoff);
    if (s.has("beta") && s.has("temperature")) throw ConfigError("keys 'beta' and 'temperature' are exclusive");
    if (const auto t = s.number("temperature")) {
        if (!(*t > 0.0)) throw ConfigError("key 'temperature' must be positive");
        p.beta = 1.0 / *t;
    } else {
        p.beta = s.number("beta", p.beta);
    }
    p.include_kerr_phase = s.flag("include_kerr_phase", false);
    p.include_freq_shift = s.flag("include_freq_shift", false);
    p.validate();
    return p;
}

gravity::DecayForm gravity_decay_form(const Scenario& s) {
    try {
        return gravity::parse_decay_form(s.text("decay_form", "exact_gamma"));
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("key 'decay_form': {}", e.what()));
    }
}

lindblad::QedParams qed_params(const Scenario& s) {
    lindblad::QedParams p;
    p.gamma = s.number("gamma", p.gamma);
    p.nbar = s.number("nbar", p.nbar);
    p.omega = s.number("omega", p.omega);
    p.validate();
    return p;
}

langevin::SdeParams sde_params(const Scenario& s) {
    langevin::SdeParams p;
    p.gamma = s.number("gamma", p.gamma);
    p.omega = s.number("omega", p.omega);
    if (const auto theta = s.number("theta")) {
        p.theta = *theta;
    } else {
        const double nbar = s.number("nbar", 0.0);
        p.theta = nbar > 0.0 ? langevin::theta_for_occupation(nbar) : 0.0;
    }
    p.dt = s.number("dt", p.dt);
    p.n_traj = static_cast<int>(s.integer("n_traj", p.n_traj));
    p.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
    p.average_from = s.number("average_from", -1.0);
    try {
        p.calculus = langevin::parse_calculus(s.text("calculus", "stratonovich"));
        p.nonrwa_mode = langevin::parse_nonrwa_mode(s.text("nonrwa_mode", "substitute"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!s.has("t_max")) throw ConfigError("qed_sde scenarios need 't_max' and 'stride'");
    p.t_final = parse_time_expression(s.text("t_max", "0"));
    p.sample_stride = parse_time_expression(s.text("stride", "1"));
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

std::pair<Complex, Complex> cat_amplitudes(const Scenario& s) {
    if (!s.has("alpha1")) throw ConfigError("cat scenario needs 'alpha1'");
    const Complex a1 = s.complex("alpha1", 0.0);
    return {a1, s.complex("alpha2", -a1)};
}

int scenario_dim(const Scenario& s) {
    if (s.has("dim")) {
        const long d = s.integer("dim", 0);
        if (d < 2) throw ConfigError("key 'dim' must be at least 2");
        return static_cast<int>(d);
    }
    double amplitude = std::abs(s.complex("alpha", 0.0));
    if (s.has("alpha1")) {
        const auto [a1, a2] = cat_amplitudes(s);
        amplitude = std::max(std::abs(a1), std::abs(a2));
    }
    return default_dim(amplitude);
}

DensityMatrix initial_state(const Scenario& s) {
    const FockSpace space(scenario_dim(s));
    if (s.has("alpha1")) {
        if (s.has("alpha")) throw ConfigError("keys 'alpha' and 'alpha1' are exclusive");
        const auto [a1, a2] = cat_amplitudes(s);
        return cat_density(a1, a2, space);
    }
    if (!s.has("alpha")) throw ConfigError("scenario needs 'alpha' or 'alpha1'");
    return DensityMatrix::pure(space, coherent_state(s.complex("alpha", 0.0), space).amplitudes);
}

void evolve_qed(const DensityMatrix& rho0, const lindblad::QedParams& params, bool single_photon,
                std::span<const double> times, const lindblad::SnapshotObserver& observer, double max_dt) {
    lindblad::QedParams rotating = params;
    rotating.omega = 0.0;
    const lindblad::Liouvillian L = single_photon ? lindblad::build_single_photon(rho0.space(), rotating)
                                                  : lindblad::build_two_photon(rho0.space(), rotating);
    const double horizon = times.empty() ? 0.0 : times.back();
    const double dt = max_dt > 0.0 ? max_dt : lindblad::select_step(rho0, L, std::max(horizon, 1.0));
    lindblad::evolve_through(rho0, L, times, dt, [&](const lindblad::Snapshot& snap) {
        observer(lindblad::Snapshot{snap.time, lindblad::rotate(snap.rho, params.omega * snap.time), snap.raw_hermiticity});
    });
}

int quantum_dim_for(double alpha, double nbar) {
    const int coherent = default_dim(alpha);
    if (nbar <= 0.0) return coherent;
    // Two-photon thermal equilibrium weights pairs of levels geometrically
    // with ratio n/(n+1); keep pairs until that weight is below 1e-5.
    const double pairs = std::log(1e-5) / std::log(nbar / (nbar + 1.0));
    return std::max(coherent, static_cast<int>(std::ceil(2.0 * pairs)) + 2);
}

namespace {

struct Context {
    const Scenario& scenario;
    std::string stem;  ///< file-name prefix including the sweep label
    std::filesystem::path dir;
    std::vector<std::filesystem::path>& written;

    ResultTable table(const std::vector<std::string>& columns) const {
        ResultTable t(columns);
        t.set_metadata("scenario", scenario.name());
        t.set_metadata("model", std::string(to_string(scenario.model())));
        t.set_metadata("scenario_hash", scenario.hash());
        t.set_metadata("seed", scenario.text("seed", "0"));
        t.set_metadata("code_version", version());
        return t;
    }

    void save(const ResultTable& t, const std::string& suffix) const {
        const auto path = dir / fmt::format("{}_{}.csv", stem, suffix);
        t.write(path);
        written.push_back(path);
    }
};

std::string tau_label(double tau) { return std::isinf(tau) ? "steady_state" : fmt::format("{:.17g}", tau); }

phase_space::PhaseSpaceGrid wigner_grid(const Scenario& s, double alpha_max) {
    phase_space::PhaseSpaceGrid g = phase_space::PhaseSpaceGrid::covering(alpha_max);
    const double range = s.number("grid_range", g.x_max);
    const int nx = static_cast<int>(s.integer("grid_nx", g.nx));
    const int np = static_cast<int>(s.integer("grid_np", g.np));
    if (!(range > 0.0) || nx < 2 || np < 2) throw ConfigError("invalid Wigner grid settings");
    return {-range, range, -range, range, nx, np};
}

std::vector<double> position_grid(const Scenario& s, double alpha_max) {
    const double range = s.number("x_range", phase_space::PhaseSpaceGrid::covering(alpha_max).x_max);
    const long points = s.integer("x_points", 801);
    if (!(range > 0.0) || points < 3) throw ConfigError("invalid position grid settings");
    return phase_space::linspace(-range, range, static_cast<int>(points));
}

/// Accumulates the phase-space observables over a sequence of snapshots.
class SnapshotTables {
public:
    SnapshotTables(const Context& ctx, double alpha_max, std::optional<double> spacing)
        : ctx_(ctx),
          observables_(ctx.scenario.observables()),
          grid_(wigner_grid(ctx.scenario, alpha_max)),
          xs_(position_grid(ctx.scenario, alpha_max)),
          spacing_(spacing),
          visibility_(ctx.table(schema::visibility)),
          pdensity_(ctx.table(schema::pdensity)),
          negativity_(ctx.table(schema::negativity)),
          moments_(ctx.table(schema::moments)) {}

    void observe(double tau, const DensityMatrix& rho) {
        // The steady state (tau = inf) is written with an empty tau cell.
        const Cell t = std::isinf(tau) ? Cell{std::monostate{}} : Cell{tau};
        if (observables_.contains(Observable::wigner) || observables_.contains(Observable::negativity)) {
            const auto field = phase_space::wigner(rho, grid_);
            if (observables_.contains(Observable::wigner)) {
                ResultTable w = ctx_.table(schema::wigner);
                w.set_metadata("tau", tau_label(tau));
                for (int i = 0; i < grid_.nx; ++i) {
                    for (int j = 0; j < grid_.np; ++j) w.add_row({grid_.x(i), grid_.p(j), field.values(i, j)});
                }
                ctx_.save(w, fmt::format("wigner_t{}", wigner_index_++));
            }
            if (observables_.contains(Observable::negativity)) {
                negativity_.add_row({t, phase_space::negativity_volume(field)});
            }
        }
        if (observables_.contains(Observable::pdensity) || observables_.contains(Observable::visibility)) {
            const auto density = phase_space::position_density(rho, xs_);
            if (observables_.contains(Observable::pdensity)) {
                for (std::size_t i = 0; i < xs_.size(); ++i) pdensity_.add_row({t, xs_[i], density.values[i]});
            }
            if (observables_.contains(Observable::visibility)) {
                try {
                    const auto v = phase_space::visibility_refined(rho, density, spacing_);
                    visibility_.add_row({t, v.nu, 2.0 * std::abs(v.x_min - v.x_max), std::string("ok")});
                } catch (const NoFringeError&) {
                    visibility_.add_row({t, std::monostate{}, std::monostate{}, std::string("no_fringe")});
                }
            }
        }
        if (observables_.contains(Observable::moments)) {
            const FockSpace space = rho.space();
            const Complex a = rho.expectation(annihilation(space));
            moments_.add_row({t, a.real(), a.imag(), rho.expectation(number_operator(space)).real(), 0.0});
        }
    }

    void finish() const {
        if (observables_.contains(Observable::pdensity)) ctx_.save(pdensity_, "pdensity");
        if (observables_.contains(Observable::visibility)) ctx_.save(visibility_, "visibility");
        if (observables_.contains(Observable::negativity)) ctx_.save(negativity_, "negativity");
        if (observables_.contains(Observable::moments)) ctx_.save(moments_, "moments");
    }

private:
    const Context& ctx_;
    std::set<Observable> observables_;
    phase_space::PhaseSpaceGrid grid_;
    std::vector<double> xs_;
    std::optional<double> spacing_;
    ResultTable visibility_, pdensity_, negativity_, moments_;
    int wigner_index_ = 0;
};

std::optional<double> cat_spacing(const Scenario& s) {
    if (!s.has("alpha1")) return std::nullopt;
    const auto [a1, a2] = cat_amplitudes(s);
    const double separation = std::abs(a1 - a2);
    if (separation == 0.0) return std::nullopt;
    // Momenta sqrt(2) Re/Im(alpha) differ by sqrt(2) |a1 - a2| at the overlap.
    return 2.0 * std::numbers::pi / (std::numbers::sqrt2 * separation);
}

double max_amplitude(const Scenario& s) {
    if (s.has("alpha1")) {
        const auto [a1, a2] = cat_amplitudes(s);
        return std::max(std::abs(a1), std::abs(a2));
    }
    return std::abs(s.complex("alpha", 0.0));
}

void run_gravity(const Context& ctx) {
    const Scenario& s = ctx.scenario;
    if (s.has("alpha")) throw ConfigError("gravity scenarios use 'alpha1' and 'alpha2'");
    const auto params = gravity_params(s);
    const auto form = gravity_decay_form(s);
    const DensityMatrix rho0 = initial_state(s);
    SnapshotTables tables(ctx, max_amplitude(s), cat_spacing(s));
    for (const double tau : s.times()) {
        tables.observe(tau, std::isinf(tau) ? gravity::steady_state(rho0) : gravity::evolve_density(rho0, tau, params, form));
    }
    tables.finish();
}

void run_lindblad(const Context& ctx, bool single_photon) {
    const Scenario& s = ctx.scenario;
    const auto params = qed_params(s);
    const std::vector<double> times = s.times();
    if (std::isinf(times.back())) throw ConfigError("master-equation scenarios cannot sample tau = inf");
    const std::string frame = s.text("frame", "rotating");
    if (frame != "rotating" && frame != "lab") throw ConfigError("key 'frame' must be 'rotating' or 'lab'");
    const DensityMatrix rho0 = initial_state(s);
    // Thermal pair creation spreads the state over the whole truncated space.
    const double extent = std::max(max_amplitude(s), std::sqrt(0.5 * rho0.dim()));
    SnapshotTables tables(ctx, extent, cat_spacing(s));
    const double max_dt = s.number("dt", 0.0);
    auto record = [&](const lindblad::Snapshot& snap) { tables.observe(snap.time, snap.rho); };

    if (frame == "rotating") {
        evolve_qed(rho0, params, single_photon, times, record, max_dt);
    } else {
        const auto L = single_photon ? lindblad::build_single_photon(rho0.space(), params)
                                     : lindblad::build_two_photon(rho0.space(), params);
        const double dt = max_dt > 0.0 ? max_dt : lindblad::select_step(rho0, L, std::max(times.back(), 1.0));
        lindblad::evolve_through(rho0, L, times, dt, record);
    }
    tables.finish();
}

void run_sde(const Context& ctx) {
    const Scenario& s = ctx.scenario;
    if (s.has("alpha1")) throw ConfigError("qed_sde scenarios use a single 'alpha'");
    for (const Observable o : s.observables()) {
        if (o != Observable::moments) throw ConfigError("qed_sde scenarios support only the 'moments' observable");
    }
    const auto params = sde_params(s);
    const Complex alpha = s.complex("alpha", 0.0);
    const std::string variant = s.text("variant", "rwa");
    std::vector<langevin::Variant> variants;
    if (variant == "rwa" || variant == "both") variants.push_back(langevin::Variant::rwa);
    if (variant == "nonrwa" || variant == "both") variants.push_back(langevin::Variant::nonrwa);
    if (variants.empty()) throw ConfigError("key 'variant' must be rwa, nonrwa or both");

    for (const auto v : variants) {
        const auto ens = langevin::run_ensemble(alpha, params, v);
        ResultTable t = ctx.table(schema::moments);
        t.set_metadata("variant", std::string(langevin::to_string(v)));
        t.set_metadata("calculus", std::string(langevin::to_string(params.calculus)));
        t.set_metadata("theta", fmt::format("{:.17g}", params.theta));
        t.set_metadata("dt", fmt::format("{:.17g}", params.dt));
        t.set_metadata("n_traj", std::to_string(ens.n_traj));
        t.set_metadata("discarded", std::to_string(ens.discarded));
        for (std::size_t k = 0; k < ens.times.size(); ++k) {
            t.add_row({ens.times[k], ens.mean_a[k].real(), ens.mean_a[k].imag(), ens.mean_abs2[k], ens.stderr_abs2[k]});
        }
        ctx.save(t, fmt::format("moments_{}", langevin::to_string(v)));
    }

    if (s.flag("compare_quantum", false)) {
        lindblad::QedParams q;
        q.gamma = params.gamma;
        q.omega = params.omega;
        q.nbar = s.number("nbar", 0.0);
        const long dim_key = s.integer("quantum_dim", 0);
        const int dim = dim_key > 0 ? static_cast<int>(dim_key) : quantum_dim_for(std::abs(alpha), q.nbar);
        const FockSpace space(dim);
        const DensityMatrix rho0 = DensityMatrix::pure(space, coherent_state(alpha, space).amplitudes);
        const auto times = lindblad::uniform_times(params.t_final, params.sample_stride);
        ResultTable t = ctx.table(schema::moments);
        t.set_metadata("variant", "quantum");
        t.set_metadata("dim", std::to_string(dim));
        const auto series = lindblad::band_moments(rho0, lindblad::build_two_photon(space, q), times);
        for (std::size_t k = 0; k < series.times.size(); ++k) {
            t.add_row({series.times[k], series.mean_a[k].real(), series.mean_a[k].imag(), series.mean_n[k], 0.0});
        }
        ctx.save(t, "moments_quantum");
    }
}

}  // namespace

std::vector<std::filesystem::path> run(const Scenario& scenario, const RunOptions& options) {
    std::vector<std::filesystem::path> written;
    for (const auto& [label, member] : scenario.expand_sweep()) {
        const std::string stem = label.empty() ? member.name() : member.name() + "_" + label;
        const Context ctx{member, stem, options.out_dir, written};
        switch (member.model()) {
            case Model::gravity: run_gravity(ctx); break;
            case Model::qed_lindblad: run_lindblad(ctx, false); break;
            case Model::qed_single_photon: run_lindblad(ctx, true); break;
            case Model::qed_sde: run_sde(ctx); break;
        }
    }
    return written;
}

}  // namespace decolab
