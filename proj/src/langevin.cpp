#include "decolab/langevin.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "decolab/errors.hpp"
#include "decolab/parallel.hpp"

namespace decolab::langevin {

std::string_view to_string(Variant v) { return v == Variant::rwa ? "rwa" : "nonrwa"; }
std::string_view to_string(NonRwaMode m) { return m == NonRwaMode::substitute ? "substitute" : "lag1"; }
std::string_view to_string(Calculus c) { return c == Calculus::ito ? "ito" : "stratonovich"; }

Variant parse_variant(std::string_view text) {
    if (text == "rwa") return Variant::rwa;
    if (text == "nonrwa") return Variant::nonrwa;
    throw DomainError(fmt::format("unknown SDE variant '{}'", text));
}

NonRwaMode parse_nonrwa_mode(std::string_view text) {
    if (text == "substitute") return NonRwaMode::substitute;
    if (text == "lag1") return NonRwaMode::lag1;
    throw DomainError(fmt::format("unknown non-RWA mode '{}'", text));
}

Calculus parse_calculus(std::string_view text) {
    if (text == "ito") return Calculus::ito;
    if (text == "stratonovich") return Calculus::stratonovich;
    throw DomainError(fmt::format("unknown stochastic calculus '{}'", text));
}

void SdeParams::validate() const {
    if (!(gamma >= 0.0)) throw DomainError("SDE damping gamma must be nonnegative");
    if (!(theta >= 0.0)) throw DomainError("SDE temperature theta must be nonnegative");
    if (!(dt > 0.0)) throw DomainError("SDE time step must be positive");
    if (n_traj < 1) throw DomainError("ensemble needs at least one trajectory");
    if (!(t_final >= 0.0)) throw DomainError("SDE final time must be nonnegative");
    if (!(sample_stride > 0.0)) throw DomainError("SDE sample stride must be positive");
    const double ratio = sample_stride / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw DomainError(fmt::format("sample stride {} is not a multiple of dt = {}", sample_stride, dt));
    }
}

double theta_for_occupation(double nbar) {
    if (!(nbar > 0.0)) throw DomainError("thermal occupation must be positive");
    return 2.0 / std::log1p(1.0 / nbar);
}

namespace {

constexpr Complex kI{0.0, 1.0};

void guard(Complex a) {
    if (!(std::abs(a) <= kOverflowLimit)) {
        throw OverflowError(fmt::format("trajectory amplitude |a| = {:.3e} exceeds {:.0e}", std::abs(a), kOverflowLimit));
    }
}

Complex rwa_drift(Complex a, const SdeParams& p) { return -kI * p.omega * a - p.gamma * a * a * std::conj(a); }

Complex substitute_drift(Complex a, const SdeParams& p) {
    const Complex c = std::conj(a);
    return -kI * p.omega * a - p.gamma * (c * c * c + a * a * c);
}

}  // namespace

Complex noise_coefficient(Complex a, const SdeParams& params) {
    return -std::sqrt(2.0 * params.gamma * params.theta) * std::conj(a);
}

Complex drift(Complex a, Complex a_prev, const SdeParams& params, Variant variant, NonRwaMode mode) {
    if (variant == Variant::rwa) return rwa_drift(a, params);
    if (mode == NonRwaMode::substitute || a == a_prev) return substitute_drift(a, params);
    auto x = [](Complex z) { return std::conj(z) * std::conj(z) - z * z; };
    const Complex rate = (x(a) - x(a_prev)) / params.dt;
    return -kI * params.omega * a + kI * (params.gamma / (2.0 * params.omega)) * rate * std::conj(a);
}

Complex step_rwa(Complex a, double dt, double dW, const SdeParams& params) {
    const Complex next = a + rwa_drift(a, params) * dt + noise_coefficient(a, params) * dW;
    guard(next);
    return next;
}

Complex step_nonrwa(Complex a, Complex a_prev, double dt, double dW, const SdeParams& params, NonRwaMode mode) {
    SdeParams local = params;
    local.dt = dt;
    const Complex next = a + drift(a, a_prev, local, Variant::nonrwa, mode) * dt + noise_coefficient(a, params) * dW;
    guard(next);
    return next;
}

Complex step(Complex a, Complex a_prev, double dW, const SdeParams& params, Variant variant) {
    const double dt = params.dt;
    const Complex f0 = drift(a, a_prev, params, variant, params.nonrwa_mode);
    const Complex g0 = noise_coefficient(a, params);
    Complex next = a + f0 * dt + g0 * dW;
    if (params.calculus == Calculus::stratonovich) {
        guard(next);
        // The lag-1 quotient at the predictor differences against the current point.
        const Complex f1 = drift(next, a, params, variant, params.nonrwa_mode);
        const Complex g1 = noise_coefficient(next, params);
        next = a + 0.5 * (f0 + f1) * dt + 0.5 * (g0 + g1) * dW;
    }
    guard(next);
    return next;
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer applied to a counter derived from (seed, index).
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ mix(index + 0x632BE59BD9B4E019ULL));
}

namespace {

/// Welford accumulators per sample, merged with the pairwise update.
struct Moments {
    double count = 0.0;
    std::vector<Complex> mean_a;
    std::vector<double> m2_a;
    std::vector<double> mean_abs2;
    std::vector<double> m2_abs2;
    double late_mean = 0.0;
    double late_m2 = 0.0;
    int discarded = 0;

    explicit Moments(std::size_t samples)
        : mean_a(samples, 0.0), m2_a(samples, 0.0), mean_abs2(samples, 0.0), m2_abs2(samples, 0.0) {}

    void add(const std::vector<Complex>& path, double late) {
        count += 1.0;
        for (std::size_t s = 0; s < path.size(); ++s) {
            const Complex da = path[s] - mean_a[s];
            mean_a[s] += da / count;
            m2_a[s] += std::real(std::conj(da) * (path[s] - mean_a[s]));
            const double abs2 = std::norm(path[s]);
            const double db = abs2 - mean_abs2[s];
            mean_abs2[s] += db / count;
            m2_abs2[s] += db * (abs2 - mean_abs2[s]);
        }
        const double dl = late - late_mean;
        late_mean += dl / count;
        late_m2 += dl * (late - late_mean);
    }

    void merge(const Moments& other) {
        discarded += other.discarded;
        if (other.count == 0.0) return;
        const double n = count + other.count;
        const double wa = count / n;
        const double wb = other.count / n;
        const double cross = count * other.count / n;
        for (std::size_t s = 0; s < mean_a.size(); ++s) {
            const Complex da = other.mean_a[s] - mean_a[s];
            m2_a[s] += other.m2_a[s] + std::norm(da) * cross;
            mean_a[s] = wa * mean_a[s] + wb * other.mean_a[s];
            const double db = other.mean_abs2[s] - mean_abs2[s];
            m2_abs2[s] += other.m2_abs2[s] + db * db * cross;
            mean_abs2[s] = wa * mean_abs2[s] + wb * other.mean_abs2[s];
        }
        const double dl = other.late_mean - late_mean;
        late_m2 += other.late_m2 + dl * dl * cross;
        late_mean = wa * late_mean + wb * other.late_mean;
        count = n;
    }
};

constexpr int kBlockSize = 32;

}  // namespace

TrajectoryEnsemble run_ensemble(Complex alpha0, const SdeParams& params, Variant variant) {
    params.validate();
    const auto stride_steps = static_cast<long>(std::llround(params.sample_stride / params.dt));
    const auto n_samples = static_cast<std::size_t>(std::floor(params.t_final / params.sample_stride + 1e-9)) + 1;
    const double sqrt_dt = std::sqrt(params.dt);

    TrajectoryEnsemble out;
    out.times.resize(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) out.times[s] = static_cast<double>(s) * params.sample_stride;

    const std::size_t n_blocks = (static_cast<std::size_t>(params.n_traj) + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> blocks(n_blocks, Moments(n_samples));

    parallel_for(n_blocks, [&](std::size_t b) {
        Moments& acc = blocks[b];
        std::vector<Complex> path(n_samples);
        const std::size_t first = b * kBlockSize;
        const std::size_t last = std::min<std::size_t>(first + kBlockSize, static_cast<std::size_t>(params.n_traj));
        for (std::size_t k = first; k < last; ++k) {
            std::mt19937_64 engine(trajectory_seed(params.seed, k));
            std::normal_distribution<double> normal(0.0, sqrt_dt);
            Complex a = alpha0;
            Complex a_prev = alpha0;
            double late_sum = 0.0;
            int late_count = 0;
            try {
                for (std::size_t s = 0; s < n_samples; ++s) {
                    if (s > 0) {
                        for (long j = 0; j < stride_steps; ++j) {
                            const Complex next = step(a, a_prev, normal(engine), params, variant);
                            a_prev = a;
                            a = next;
                        }
                    }
                    path[s] = a;
                    if (params.average_from >= 0.0 && out.times[s] >= params.average_from - 1e-12) {
                        late_sum += std::norm(a);
                        ++late_count;
                    }
                }
            } catch (const OverflowError&) {
                ++acc.discarded;
                continue;
            }
            acc.add(path, late_count > 0 ? late_sum / late_count : 0.0);
        }
    });

    Moments total(n_samples);
    for (const Moments& block : blocks) total.merge(block);

    out.n_traj = static_cast<int>(total.count);
    out.discarded = total.discarded;
    out.mean_a = std::move(total.mean_a);
    out.mean_abs2 = std::move(total.mean_abs2);
    out.stderr_a.assign(n_samples, 0.0);
    out.stderr_abs2.assign(n_samples, 0.0);
    const double n = total.count;
    if (n > 1.0) {
        for (std::size_t s = 0; s < n_samples; ++s) {
            out.stderr_a[s] = std::sqrt(total.m2_a[s] / (n - 1.0) / n);
            out.stderr_abs2[s] = std::sqrt(total.m2_abs2[s] / (n - 1.0) / n);
        }
        out.late_abs2_stderr = std::sqrt(total.late_m2 / (n - 1.0) / n);
    }
    out.late_abs2 = total.late_mean;
    return out;
}

}  // namespace decolab::langevin
