#include "decolab/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "decolab/diagnostics.hpp"
#include "decolab/errors.hpp"

namespace decolab::lindblad {
namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;
using Triplets = std::vector<Eigen::Triplet<Complex>>;

SparseOp sparse(const Operator& op) { return op.matrix().sparseView(); }

/// Appends coeff * (rho -> left rho right) in column-stacked form:
/// vec(A rho B)[i + j d] += A(i,k) B(l,j) vec(rho)[k + l d].
void add_sandwich(Triplets& out, int d, const SparseOp& left, const SparseOp& right, Complex coeff) {
    for (int k = 0; k < left.outerSize(); ++k) {
        for (SparseOp::InnerIterator a(left, k); a; ++a) {
            const int i = static_cast<int>(a.row());
            for (int j = 0; j < right.outerSize(); ++j) {
                for (SparseOp::InnerIterator b(right, j); b; ++b) {
                    const int l = static_cast<int>(b.row());
                    out.emplace_back(i + j * d, k + l * d, coeff * a.value() * b.value());
                }
            }
        }
    }
}

/// i Omega [rho, N].
void add_rotation(Triplets& out, FockSpace space, double omega) {
    if (omega == 0.0) return;
    const int d = space.dim();
    const SparseOp id = sparse(identity(space));
    const SparseOp num = sparse(number_operator(space));
    add_sandwich(out, d, id, num, {0.0, omega});
    add_sandwich(out, d, num, id, {0.0, -omega});
}

Liouvillian assemble(FockSpace space, const Triplets& triplets) {
    const int d2 = space.dim() * space.dim();
    SparseSuperoperator s(d2, d2);
    s.setFromTriplets(triplets.begin(), triplets.end());
    s.prune(Complex(0.0, 0.0));
    s.makeCompressed();
    return {space, std::move(s)};
}

}  // namespace

void QedParams::validate() const {
    if (!(gamma >= 0.0)) throw DomainError("damping gamma must be nonnegative");
    if (!(nbar >= 0.0)) throw DomainError("thermal occupation must be nonnegative");
    if (!std::isfinite(omega)) throw DomainError("rotation rate must be finite");
    if (gamma > 0.05) warn(fmt::format("gamma = {} is not small; the rotating-wave approximation may fail", gamma));
}

Liouvillian::Liouvillian(FockSpace space, SparseSuperoperator superoperator)
    : space_(space), super_(std::move(superoperator)), norm1_(0.0) {
    const int d2 = space_.dim() * space_.dim();
    if (super_.rows() != d2 || super_.cols() != d2) throw DomainError("superoperator shape mismatch");
    Eigen::VectorXd column_sums = Eigen::VectorXd::Zero(d2);
    for (int r = 0; r < super_.outerSize(); ++r) {
        for (SparseSuperoperator::InnerIterator it(super_, r); it; ++it) column_sums(it.col()) += std::abs(it.value());
    }
    norm1_ = column_sums.maxCoeff();
}

CMatrix Liouvillian::dense() const { return CMatrix(super_); }

void Liouvillian::apply(const CVector& in, CVector& out) const { out.noalias() = super_ * in; }

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
    const int d = space_.dim();
    CVector in = Eigen::Map<const CVector>(rho.matrix().data(), d * d);
    CVector out(d * d);
    apply(in, out);
    return DensityMatrix::unchecked(space_, Eigen::Map<const CMatrix>(out.data(), d, d));
}

Liouvillian build_two_photon(FockSpace space, const QedParams& params) {
    params.validate();
    const int d = space.dim();
    const Operator a = annihilation(space);
    const Operator a2 = a * a;
    const Operator ad2 = a2.adjoint();
    const SparseOp id = sparse(identity(space));
    const SparseOp lower = sparse(a2);
    const SparseOp raise = sparse(ad2);
    const SparseOp down_count = sparse(ad2 * a2);
    const SparseOp up_count = sparse(a2 * ad2);

    Triplets t;
    add_rotation(t, space, params.omega);

    // (gamma/2)(n+1) ([a^2 rho, a^+2] + [a^2, rho a^+2])
    const Complex down = 0.5 * params.gamma * (params.nbar + 1.0);
    add_sandwich(t, d, lower, raise, down);       // a^2 rho a^+2
    add_sandwich(t, d, down_count, id, -down);    // -a^+2 a^2 rho
    add_sandwich(t, d, lower, raise, down);       // a^2 rho a^+2
    add_sandwich(t, d, id, down_count, -down);    // -rho a^+2 a^2

    // (gamma/2) n ([a^+2 rho, a^2] + [a^+2, rho a^2])
    const Complex up = 0.5 * params.gamma * params.nbar;
    if (up != 0.0) {
        add_sandwich(t, d, raise, lower, up);
        add_sandwich(t, d, up_count, id, -up);
        add_sandwich(t, d, raise, lower, up);
        add_sandwich(t, d, id, up_count, -up);
    }
    return assemble(space, t);
}

Liouvillian build_single_photon(FockSpace space, const QedParams& params) {
    params.validate();
    const int d = space.dim();
    const Operator a = annihilation(space);
    const Operator ad = a.adjoint();
    const SparseOp id = sparse(identity(space));
    const SparseOp lower = sparse(a);
    const SparseOp raise = sparse(ad);
    const SparseOp down_count = sparse(ad * a);
    const SparseOp up_count = sparse(a * ad);

    Triplets t;
    add_rotation(t, space, params.omega);

    const Complex down = 0.5 * params.gamma * (params.nbar + 1.0);
    add_sandwich(t, d, lower, raise, 2.0 * down);
    add_sandwich(t, d, down_count, id, -down);
    add_sandwich(t, d, id, down_count, -down);

    const Complex up = 0.5 * params.gamma * params.nbar;
    if (up != 0.0) {
        add_sandwich(t, d, raise, lower, 2.0 * up);
        add_sandwich(t, d, up_count, id, -up);
        add_sandwich(t, d, id, up_count, -up);
    }
    return assemble(space, t);
}

std::vector<double> uniform_times(double t_final, double stride) {
    if (!(stride > 0.0)) throw DomainError("sampling stride must be positive");
    std::vector<double> times;
    const auto count = static_cast<long>(std::floor(t_final / stride + 1e-9));
    times.reserve(static_cast<std::size_t>(count) + 1);
    for (long k = 0; k <= count; ++k) times.push_back(static_cast<double>(k) * stride);
    return times;
}

namespace {

Snapshot make_snapshot(double time, FockSpace space, const CVector& v) {
    const int d = space.dim();
    Eigen::Map<const CMatrix> m(v.data(), d, d);
    const double raw = (m - m.adjoint()).cwiseAbs().maxCoeff();
    CMatrix sym = 0.5 * (m + m.adjoint());
    return {time, DensityMatrix::unchecked(space, std::move(sym)), raw};
}

}  // namespace

void evolve_observed(const DensityMatrix& rho0, const Liouvillian& liouvillian, double t_final, double dt,
                     std::span<const double> sample_times, const SnapshotObserver& observer) {
    if (!(rho0.space() == liouvillian.space())) throw DomainError("state and Liouvillian live in different spaces");
    if (!(dt > 0.0)) throw StepError("time step must be positive");
    if (!(t_final >= 0.0)) throw StepError("final time must be nonnegative");
    if (dt * liouvillian.norm1() >= kStabilityBound) {
        throw StabilityError(fmt::format("dt * ||L||_1 = {:.3f} exceeds the RK4 stability bound {}",
                                         dt * liouvillian.norm1(), kStabilityBound));
    }

    std::vector<double> default_times{0.0, t_final};
    if (sample_times.empty()) sample_times = default_times;

    std::vector<long> sample_steps;
    sample_steps.reserve(sample_times.size());
    for (const double t : sample_times) {
        const double k = std::round(t / dt);
        if (t < 0.0 || t > t_final + 1e-9 * std::max(1.0, t_final)) {
            throw StepError(fmt::format("sample time {} lies outside [0, {}]", t, t_final));
        }
        if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, std::abs(t))) {
            throw StepError(fmt::format("sample time {} is not a multiple of dt = {}", t, dt));
        }
        if (!sample_steps.empty() && static_cast<long>(k) < sample_steps.back()) {
            throw StepError("sample times must be nondecreasing");
        }
        sample_steps.push_back(static_cast<long>(k));
    }

    const FockSpace space = rho0.space();
    const int d2 = space.dim() * space.dim();
    CVector state = Eigen::Map<const CVector>(rho0.matrix().data(), d2);
    const Complex initial_trace = rho0.matrix().trace();
    CVector k1(d2), k2(d2), k3(d2), k4(d2), probe(d2);

    auto trace_of = [&](const CVector& v) {
        Complex tr = 0.0;
        for (int n = 0; n < space.dim(); ++n) tr += v(n + n * space.dim());
        return tr;
    };

    long step = 0;
    for (std::size_t s = 0; s < sample_steps.size(); ++s) {
        for (; step < sample_steps[s]; ++step) {
            liouvillian.apply(state, k1);
            probe = state + (0.5 * dt) * k1;
            liouvillian.apply(probe, k2);
            probe = state + (0.5 * dt) * k2;
            liouvillian.apply(probe, k3);
            probe = state + dt * k3;
            liouvillian.apply(probe, k4);
            state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double drift = std::abs(trace_of(state) - initial_trace);
        if (!std::isfinite(drift) || drift > kTraceDriftLimit) {
            throw StabilityError(fmt::format("trace drift {:.3e} at t = {} exceeds {}", drift, sample_times[s],
                                             kTraceDriftLimit));
        }
        observer(make_snapshot(sample_times[s], space, state));
    }
}

TimeSeries evolve(const DensityMatrix& rho0, const Liouvillian& liouvillian, double t_final, double dt,
                  std::span<const double> sample_times) {
    TimeSeries series;
    series.dt = dt;
    const Complex initial_trace = rho0.matrix().trace();
    evolve_observed(rho0, liouvillian, t_final, dt, sample_times, [&](const Snapshot& snap) {
        series.max_trace_drift = std::max(series.max_trace_drift, std::abs(snap.rho.matrix().trace() - initial_trace));
        series.snapshots.push_back(snap);
    });
    return series;
}

void evolve_through(const DensityMatrix& rho0, const Liouvillian& liouvillian, std::span<const double> times,
                    double max_dt, const SnapshotObserver& observer) {
    if (!(max_dt > 0.0)) throw StepError("time step must be positive");
    DensityMatrix state = rho0;
    double now = 0.0;
    for (const double target : times) {
        if (target < now) throw StepError(fmt::format("times must be nondecreasing (got {} after {})", target, now));
        const double span = target - now;
        if (span == 0.0) {
            observer(Snapshot{target, state});
            continue;
        }
        const double steps = std::ceil(span / max_dt * (1.0 - 1e-12));
        const double dt = span / steps;
        const std::vector<double> end{span};
        double raw = 0.0;
        evolve_observed(state, liouvillian, span, dt, end, [&](const Snapshot& snap) {
            state = snap.rho;
            raw = snap.raw_hermiticity;
        });
        now = target;
        observer(Snapshot{target, state, raw});
    }
}

double select_step(const DensityMatrix& rho0, const Liouvillian& liouvillian, double horizon, double base,
                   double audit_tol) {
    double dt = base;
    while (dt * liouvillian.norm1() >= kStabilityBound) dt *= 0.5;
    const double window = std::min(horizon, 2.0 * 3.14159265358979323846);
    if (!(window > 0.0)) return dt;
    for (int attempt = 0; attempt < 12; ++attempt) {
        const double probe_end = std::round(window / dt) * dt;
        const std::vector<double> ends{probe_end};
        const TimeSeries coarse = evolve(rho0, liouvillian, probe_end, dt, ends);
        const TimeSeries fine = evolve(rho0, liouvillian, probe_end, 0.5 * dt, ends);
        const double gap =
            (coarse.snapshots.back().rho.matrix() - fine.snapshots.back().rho.matrix()).cwiseAbs().maxCoeff();
        if (gap < audit_tol) return dt;
        dt *= 0.5;
    }
    throw StabilityError("step-size audit did not converge");
}

namespace {

/// The generator restricted to entries with |m - n| <= 1.
struct Band {
    int dim;
    std::vector<Eigen::Index> full_index;  ///< band position -> column-stacked index
    SparseSuperoperator generator;
    double norm1 = 0.0;

    Band(const DensityMatrix& rho0, const Liouvillian& liouvillian) : dim(rho0.dim()) {
        std::vector<Eigen::Index> position(static_cast<std::size_t>(dim) * dim, -1);
        for (int n = 0; n < dim; ++n) {
            for (int m = std::max(0, n - 1); m <= std::min(dim - 1, n + 1); ++m) {
                position[static_cast<std::size_t>(m + n * dim)] = static_cast<Eigen::Index>(full_index.size());
                full_index.push_back(m + n * dim);
            }
        }
        const SparseSuperoperator& full = liouvillian.superoperator();
        std::vector<Eigen::Triplet<Complex>> t;
        Eigen::VectorXd column_sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full_index.size()));
        for (std::size_t r = 0; r < full_index.size(); ++r) {
            for (SparseSuperoperator::InnerIterator it(full, full_index[r]); it; ++it) {
                const Eigen::Index c = position[static_cast<std::size_t>(it.col())];
                if (c < 0) continue;
                t.emplace_back(static_cast<Eigen::Index>(r), c, it.value());
                column_sums(c) += std::abs(it.value());
            }
        }
        const auto size = static_cast<Eigen::Index>(full_index.size());
        generator.resize(size, size);
        generator.setFromTriplets(t.begin(), t.end());
        norm1 = column_sums.maxCoeff();
    }

    [[nodiscard]] CVector gather(const DensityMatrix& rho) const {
        CVector v(static_cast<Eigen::Index>(full_index.size()));
        const Complex* data = rho.matrix().data();
        for (std::size_t k = 0; k < full_index.size(); ++k) v(static_cast<Eigen::Index>(k)) = data[full_index[k]];
        return v;
    }

    /// Advances `state` by `steps` RK4 steps of size dt.
    void advance(CVector& state, long steps, double dt) const {
        CVector k1(state.size()), k2(state.size()), k3(state.size()), k4(state.size()), probe(state.size());
        for (long s = 0; s < steps; ++s) {
            k1.noalias() = generator * state;
            probe = state + (0.5 * dt) * k1;
            k2.noalias() = generator * probe;
            probe = state + (0.5 * dt) * k2;
            k3.noalias() = generator * probe;
            probe = state + dt * k3;
            k4.noalias() = generator * probe;
            state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }

    /// <a>, <a^+ a^2>, <a^+ a> from band entries (rho(m, n) at m + n dim).
    void moments(const CVector& state, MomentSeries& out, double time) const {
        Complex mean_a = 0.0, mean_adag_a2 = 0.0, trace_n = 0.0;
        for (std::size_t k = 0; k < full_index.size(); ++k) {
            const int m = static_cast<int>(full_index[k] % dim);
            const int n = static_cast<int>(full_index[k] / dim);
            const Complex v = state(static_cast<Eigen::Index>(k));
            if (m == n) {
                trace_n += static_cast<double>(n) * v;
            } else if (m == n + 1) {
                // Tr(rho A) picks rho(m, m-1) <m-1|A|m>: sqrt(m) for a, (m-1) sqrt(m) for a^+ a a.
                mean_a += v * std::sqrt(static_cast<double>(m));
                mean_adag_a2 += v * std::sqrt(static_cast<double>(m)) * (m - 1.0);
            }
        }
        out.times.push_back(time);
        out.mean_a.push_back(mean_a);
        out.mean_adag_a2.push_back(mean_adag_a2);
        out.mean_n.push_back(trace_n.real());
    }

    [[nodiscard]] Complex trace(const CVector& state) const {
        Complex tr = 0.0;
        for (std::size_t k = 0; k < full_index.size(); ++k) {
            if (full_index[k] % dim == full_index[k] / dim) tr += state(static_cast<Eigen::Index>(k));
        }
        return tr;
    }
};

double band_step(const Band& band, const CVector& start, double horizon, double base, double audit_tol) {
    double dt = base;
    while (dt * band.norm1 >= kStabilityBound) dt *= 0.5;
    const double window = std::min(horizon, 2.0 * 3.14159265358979323846);
    for (int attempt = 0; attempt < 12; ++attempt) {
        const long steps = std::max(1L, std::lround(window / dt));
        CVector coarse = start, fine = start;
        band.advance(coarse, steps, dt);
        band.advance(fine, 2 * steps, 0.5 * dt);
        if ((coarse - fine).cwiseAbs().maxCoeff() < audit_tol) return dt;
        dt *= 0.5;
    }
    throw StabilityError("step-size audit did not converge");
}

}  // namespace

MomentSeries band_moments(const DensityMatrix& rho0, const Liouvillian& liouvillian, std::span<const double> times,
                          double max_dt) {
    if (!(rho0.space() == liouvillian.space())) throw DomainError("state and Liouvillian live in different spaces");
    const Band band(rho0, liouvillian);
    CVector state = band.gather(rho0);
    const double horizon = times.empty() ? 1.0 : std::max(times.back(), 1.0);
    const double dt_cap = max_dt > 0.0 ? max_dt : band_step(band, state, horizon, 2e-3 * 3.14159265358979323846, 1e-6);
    if (dt_cap * band.norm1 >= kStabilityBound) {
        throw StabilityError(fmt::format("dt * ||L||_1 = {:.3f} exceeds the RK4 stability bound {}",
                                         dt_cap * band.norm1, kStabilityBound));
    }
    const Complex initial_trace = band.trace(state);
    MomentSeries out;
    double now = 0.0;
    for (const double target : times) {
        if (target < now) throw StepError("times must be nondecreasing");
        const double span = target - now;
        if (span > 0.0) {
            const double steps = std::ceil(span / dt_cap * (1.0 - 1e-12));
            band.advance(state, static_cast<long>(steps), span / steps);
            now = target;
        }
        const double drift = std::abs(band.trace(state) - initial_trace);
        if (!std::isfinite(drift) || drift > kTraceDriftLimit) {
            throw StabilityError(fmt::format("trace drift {:.3e} at t = {} exceeds {}", drift, target, kTraceDriftLimit));
        }
        band.moments(state, out, target);
    }
    return out;
}

MomentRecorder::MomentRecorder(FockSpace space)
    : a_(annihilation(space)), adag_a2_(creation(space) * annihilation(space) * annihilation(space)),
      number_(number_operator(space)) {}

void MomentRecorder::operator()(const Snapshot& snapshot) {
    series_.times.push_back(snapshot.time);
    series_.mean_a.push_back(snapshot.rho.expectation(a_));
    series_.mean_adag_a2.push_back(snapshot.rho.expectation(adag_a2_));
    series_.mean_n.push_back(snapshot.rho.expectation(number_).real());
}

MomentSeries moment_series(const TimeSeries& series) {
    if (series.snapshots.empty()) return {};
    MomentRecorder recorder(series.snapshots.front().rho.space());
    for (const Snapshot& s : series.snapshots) recorder(s);
    return recorder.series();
}

double moment_residual(const MomentSeries& series, const QedParams& params) {
    const std::size_t count = series.times.size();
    if (count < 3) throw DomainError("moment residual needs at least three samples");
    const double h = series.times[1] - series.times[0];
    if (!(h > 0.0)) throw DomainError("moment series times must increase");
    for (std::size_t k = 1; k < count; ++k) {
        if (std::abs(series.times[k] - series.times[k - 1] - h) > 1e-9 * std::max(1.0, h)) {
            throw DomainError("moment series is not uniformly sampled");
        }
    }
    const Complex minus_i_omega{0.0, -params.omega};
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < count; ++k) {
        const Complex slope = (series.mean_a[k + 1] - series.mean_a[k - 1]) / (2.0 * h);
        const Complex rhs = minus_i_omega * series.mean_a[k] - params.gamma * series.mean_adag_a2[k] +
                            2.0 * params.gamma * params.nbar * series.mean_a[k];
        worst = std::max(worst, std::abs(slope - rhs));
    }
    return worst;
}

DensityMatrix rotate(const DensityMatrix& rho, double angle) {
    const int d = rho.dim();
    CMatrix out = rho.matrix();
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            if (m != n) out(m, n) *= std::exp(Complex(0.0, -static_cast<double>(m - n) * angle));
        }
    }
    return DensityMatrix::unchecked(rho.space(), std::move(out));
}

}  // namespace decolab::lindblad
