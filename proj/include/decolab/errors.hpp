#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decolab {

/// Base of every error the library throws. `name()` is the stable
/// identifier the CLI prints so callers can tell failure classes apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
};

#define DECOLAB_DEFINE_ERROR(Type)                                              \
    class Type : public Error {                                                 \
    public:                                                                     \
        using Error::Error;                                                     \
        [[nodiscard]] std::string_view name() const noexcept override { return #Type; } \
    }

/// Argument outside the mathematical domain of an operation.
DECOLAB_DEFINE_ERROR(DomainError);
/// Fock-space truncation too small for the requested state.
DECOLAB_DEFINE_ERROR(TruncationError);
/// Numerical quadrature failed to reach its tolerance.
DECOLAB_DEFINE_ERROR(QuadratureError);
/// Time integration lost stability or drifted past its trace budget.
DECOLAB_DEFINE_ERROR(StabilityError);
/// Requested sample times are incompatible with the step size.
DECOLAB_DEFINE_ERROR(StepError);
/// A stochastic trajectory blew up.
DECOLAB_DEFINE_ERROR(OverflowError);
/// Sampling grid does not cover the support of the field.
DECOLAB_DEFINE_ERROR(CoverageError);
/// No interference fringe was found where one was expected.
DECOLAB_DEFINE_ERROR(NoFringeError);
/// Malformed or unknown scenario configuration.
DECOLAB_DEFINE_ERROR(ConfigError);

#undef DECOLAB_DEFINE_ERROR

}  // namespace decolab
