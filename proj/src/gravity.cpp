#include "decolab/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <fmt/format.h>

#include "decolab/diagnostics.hpp"
#include "decolab/errors.hpp"
#include "decolab/special_functions.hpp"

namespace decolab::gravity {

using std::numbers::pi;

void GravityBathParams::validate() const {
    if (!(coupling_over_pi > 0.0)) throw DomainError("gravity coupling C/pi must be positive");
    if (!(cutoff > 0.0)) throw DomainError("cutoff ratio w_c/Omega must be positive");
    if (!(beta > 0.0)) throw DomainError("beta*hbar*Omega must be positive");
    if (cutoff < 10.0) warn(fmt::format("cutoff ratio {} is not large compared with the oscillator frequency", cutoff));
}

std::string_view to_string(DecayForm form) {
    switch (form) {
        case DecayForm::exact_gamma: return "exact_gamma";
        case DecayForm::high_cutoff: return "high_cutoff";
        case DecayForm::high_temperature: return "high_T";
    }
    return "unknown";
}

DecayForm parse_decay_form(std::string_view text) {
    if (text == "exact_gamma") return DecayForm::exact_gamma;
    if (text == "high_cutoff") return DecayForm::high_cutoff;
    if (text == "high_T" || text == "high_temperature") return DecayForm::high_temperature;
    throw DomainError(fmt::format("unknown decay form '{}'", text));
}

double decoherence_integral_oracle(double t, const GravityBathParams& params, double rel_tol) {
    if (t < 0.0) throw DomainError("decoherence integral needs t >= 0");
    params.validate();
    if (t == 0.0) return 0.0;

    const double beta = params.beta;
    const double wc = params.cutoff;
    // sin^2(w t / 2) = (1 - cos(w t)) / 2 applied to the smooth envelope f.
    auto envelope = [=](double w) { return std::exp(-w / wc) / (w * std::tanh(0.5 * beta * w)); };
    auto integrand = [=](double w) {
        if (w <= 0.0) return 0.0;
        const double s = std::sin(0.5 * w * t);
        return s * s * envelope(w);
    };

    // coth >= 1, so the zero-temperature value bounds I(t) from below and
    // sets the absolute error scale.
    const double floor = 0.25 * std::log1p(t * t * wc * wc);
    const double abs_tol = rel_tol * floor;
    auto check = [&](double value, double err, double lo, double hi) {
        if (!std::isfinite(value) || !(err <= abs_tol)) {
            throw QuadratureError(fmt::format("piece [{}, {}] error {:.3e} exceeds tolerance {:.3e} (value {:.3e})", lo,
                                              hi, err, abs_tol, value));
        }
    };

    // Head: whole oscillation periods up to where the envelope is smooth on
    // the thermal and cutoff scales, integrated period by period.
    const double period = 2.0 * pi / t;
    const double smooth_from = std::min(std::max(1.0, 2.0 * pi / beta), wc);
    const long head_periods = std::max(1L, static_cast<long>(std::ceil(smooth_from / period)));
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    double head_err = 0.0;
    for (long k = 0; k < head_periods; ++k) {
        double err = 0.0;
        total += Rule::integrate(integrand, k * period, (k + 1) * period, 10, 0.01 * rel_tol, &err);
        head_err += err;
    }
    check(total, head_err, 0.0, head_periods * period);

    // Tail from a period boundary A, where cos(w t) = cos((w - A) t).
    const double a = head_periods * period;
    boost::math::quadrature::exp_sinh<double> half_line;
    double smooth_err = 0.0;
    const double smooth = half_line.integrate([&](double u) { return envelope(a + u); }, 0.01 * rel_tol, &smooth_err);
    check(smooth, 0.5 * smooth_err * std::abs(smooth), a, HUGE_VAL);

    boost::math::quadrature::ooura_fourier_cos<double> fourier(0.01 * rel_tol);
    const auto [oscillating, osc_rel] = fourier.integrate([&](double u) { return envelope(a + u); }, t);
    check(oscillating, 0.5 * osc_rel * std::abs(oscillating), a, HUGE_VAL);

    return total + 0.5 * (smooth - oscillating);
}

double cutoff_phase(double t, double cutoff) {
    const double x = cutoff * t;
    return x - std::atan(x);
}

double decay_function(double t, const GravityBathParams& params, DecayForm form) {
    if (t < 0.0) throw DomainError("decay function needs t >= 0");
    if (t == 0.0) return 0.0;
    const double beta = params.beta;
    const double wc = params.cutoff;
    const double cutoff_term = 0.5 * std::log1p(t * t * wc * wc);
    switch (form) {
        case DecayForm::exact_gamma: {
            const double eps = 1.0 / (beta * wc);
            const double y = t / beta;
            const double head = log_gamma({1.0 + eps, 0.0}).real();
            const double tilted = log_gamma({1.0 + eps, y}).real();
            // Gamma(1+eps-iy) is the conjugate of Gamma(1+eps+iy).
            return cutoff_term + 2.0 * (head - tilted);
        }
        case DecayForm::high_cutoff:
            if (beta * wc <= 1.0) throw DomainError("high-cutoff form needs beta * w_c > 1");
            return cutoff_term + log_sinhc(pi * t / beta);
        case DecayForm::high_temperature:
            if (beta * wc <= 1.0) throw DomainError("high-temperature form needs beta * w_c > 1");
            return std::log(beta * wc / (2.0 * pi)) + pi * t / beta;
    }
    throw DomainError("unknown decay form");
}

Complex decoherence_exponent_from_decay(int n, int np, double t, double decay, const GravityBathParams& params) {
    if (n < 0 || np < 0) throw DomainError("Fock indices must be nonnegative");
    if (t < 0.0) throw DomainError("decoherence exponent needs t >= 0");
    const double diff = static_cast<double>(n - np);
    if (diff == 0.0) return {0.0, 0.0};

    double phase = -diff * t;
    if (params.include_kerr_phase || params.include_freq_shift) {
        // Kerr on: the full (n + n' + 1) factor. Frequency shift alone: only the linear piece.
        const double multiplicity = params.include_kerr_phase ? static_cast<double>(n + np + 1) : 1.0;
        phase += params.coupling_over_pi * diff * multiplicity * cutoff_phase(t, params.cutoff);
    }
    const double real = -params.coupling_over_pi * diff * diff * decay;
    return {real, phase};
}

Complex decoherence_exponent(int n, int np, double t, const GravityBathParams& params, DecayForm form) {
    if (t < 0.0) throw DomainError("decoherence exponent needs t >= 0");
    return decoherence_exponent_from_decay(n, np, t, decay_function(t, params, form), params);
}

DensityMatrix evolve_density(const DensityMatrix& rho0, double t, const GravityBathParams& params, DecayForm form) {
    if (t < 0.0) throw DomainError("gravity evolution needs t >= 0");
    params.validate();
    const int d = rho0.dim();
    const double decay = decay_function(t, params, form);
    CMatrix out = rho0.matrix();
    for (int n = 0; n < d; ++n) {
        for (int np = n + 1; np < d; ++np) {
            const Complex factor = std::exp(decoherence_exponent_from_decay(n, np, t, decay, params));
            out(n, np) = rho0(n, np) * factor;
            // E(n', n) = conj(E(n, n')), so the lower triangle mirrors exactly.
            out(np, n) = rho0(np, n) * std::conj(factor);
        }
    }
    return DensityMatrix::unchecked(rho0.space(), std::move(out));
}

DensityMatrix steady_state(const DensityMatrix& rho0) {
    CMatrix out = rho0.matrix().diagonal().asDiagonal();
    return DensityMatrix::unchecked(rho0.space(), std::move(out));
}

}  // namespace decolab::gravity
