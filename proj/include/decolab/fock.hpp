#pragma once

// Truncated Fock-space algebra. Units throughout the library: hbar = 1,
// oscillator frequency = 1, so time is tau = Omega t and phase-space
// coordinates are the dimensionless x sqrt(M Omega / hbar), p / sqrt(M Omega hbar).

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace decolab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Number-state basis |0>, ..., |dim-1>.
class FockSpace {
public:
    explicit FockSpace(int dim);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    friend bool operator==(const FockSpace&, const FockSpace&) = default;

private:
    int dim_;
};

/// Truncation that keeps the Poisson tail of the largest coherent amplitude
/// (and a margin for thermal broadening): ceil(a^2 + 6a + 10).
[[nodiscard]] int default_dim(double alpha_max);

class Operator {
public:
    Operator(FockSpace space, CMatrix entries);

    [[nodiscard]] FockSpace space() const noexcept { return space_; }
    [[nodiscard]] const CMatrix& matrix() const noexcept { return entries_; }
    [[nodiscard]] Complex operator()(int row, int col) const { return entries_(row, col); }

    [[nodiscard]] Operator adjoint() const;

    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend Operator operator+(const Operator& lhs, const Operator& rhs);
    friend Operator operator-(const Operator& lhs, const Operator& rhs);

private:
    FockSpace space_;
    CMatrix entries_;
};

[[nodiscard]] Operator identity(FockSpace space);
/// <n-1| a |n> = sqrt(n).
[[nodiscard]] Operator annihilation(FockSpace space);
[[nodiscard]] Operator creation(FockSpace space);
[[nodiscard]] Operator number_operator(FockSpace space);
/// (-1)^{a^dagger a}.
[[nodiscard]] Operator parity_operator(FockSpace space);
/// exp(alpha a^dagger - conj(alpha) a) evaluated inside the truncated space.
/// Only the upper-left block is faithful to the infinite-dimensional
/// operator; callers that need exact matrix elements should build it in a
/// larger space and crop.
[[nodiscard]] Operator displacement(FockSpace space, Complex alpha);

struct CoherentState {
    CVector amplitudes;          ///< unit-norm after truncation
    double truncation_deficit;   ///< 1 - (norm before renormalization)^2
};

/// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) via c_{n+1} = c_n alpha / sqrt(n+1).
/// Throws TruncationError when the retained norm is below 1 - 1e-6.
[[nodiscard]] CoherentState coherent_state(Complex alpha, FockSpace space);

/// Hermitian, unit-trace matrix in the Fock basis.
///
/// `from_matrix` enforces the invariants (Hermitian to 1e-12, trace 1 to
/// 1e-10, spectrum >= -1e-8). Evolved states are created with `unchecked`
/// and diagnosed through the accessors rather than repaired.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kEigenTol = 1e-8;

    [[nodiscard]] static DensityMatrix from_matrix(FockSpace space, CMatrix entries);
    [[nodiscard]] static DensityMatrix unchecked(FockSpace space, CMatrix entries);
    /// |psi><psi| / <psi|psi>.
    [[nodiscard]] static DensityMatrix pure(FockSpace space, const CVector& psi);

    [[nodiscard]] FockSpace space() const noexcept { return space_; }
    [[nodiscard]] int dim() const noexcept { return space_.dim(); }
    [[nodiscard]] const CMatrix& matrix() const noexcept { return entries_; }
    [[nodiscard]] Complex operator()(int row, int col) const { return entries_(row, col); }

    [[nodiscard]] double trace() const;
    /// max |rho - rho^dagger|.
    [[nodiscard]] double hermiticity_error() const;
    /// Smallest eigenvalue of the Hermitian part.
    [[nodiscard]] double min_eigenvalue() const;
    /// Eigenvalues of the Hermitian part in ascending order.
    [[nodiscard]] Eigen::VectorXd eigenvalues() const;
    [[nodiscard]] Eigen::VectorXd populations() const;
    [[nodiscard]] Complex expectation(const Operator& op) const;

private:
    DensityMatrix(FockSpace space, CMatrix entries);

    FockSpace space_;
    CMatrix entries_;
};

/// N (|a1> + |a2>)(<a1| + <a2|) with N = 1 / (2 + 2 Re<a1|a2>).
[[nodiscard]] DensityMatrix cat_density(Complex alpha1, Complex alpha2, FockSpace space);

/// Bose occupation at twice the oscillator frequency: 1 / (exp(2 beta) - 1),
/// beta = hbar Omega / k_B T. Throws DomainError for beta <= 0.
[[nodiscard]] double thermal_occupation(double beta_hw);
/// Inverse of thermal_occupation: beta = ln(1 + 1/n) / 2.
[[nodiscard]] double beta_for_occupation(double nbar);

/// sum_n (-1)^n rho_nn.
[[nodiscard]] double parity_expectation(const DensityMatrix& rho);

}  // namespace decolab
