#include "decolab/fock.hpp"

#include <cmath>
#include <fmt/format.h>
#include <string>

#include "decolab/diagnostics.hpp"
#include "decolab/errors.hpp"

namespace decolab {

FockSpace::FockSpace(int dim) : dim_(dim) {
    if (dim < 2) throw DomainError("FockSpace dimension must be at least 2, got " + std::to_string(dim));
}

int default_dim(double alpha_max) {
    const double a = std::abs(alpha_max);
    return static_cast<int>(std::ceil(a * a + 6.0 * a + 10.0));
}

Operator::Operator(FockSpace space, CMatrix entries) : space_(space), entries_(std::move(entries)) {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
        throw DomainError("operator shape does not match Fock-space dimension");
    }
}

Operator Operator::adjoint() const { return {space_, entries_.adjoint()}; }

Operator operator*(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.space_ == rhs.space_)) throw DomainError("operator product across different Fock spaces");
    return {lhs.space_, lhs.entries_ * rhs.entries_};
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.space_ == rhs.space_)) throw DomainError("operator sum across different Fock spaces");
    return {lhs.space_, lhs.entries_ + rhs.entries_};
}

Operator operator-(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.space_ == rhs.space_)) throw DomainError("operator difference across different Fock spaces");
    return {lhs.space_, lhs.entries_ - rhs.entries_};
}

Operator identity(FockSpace space) {
    return {space, CMatrix::Identity(space.dim(), space.dim())};
}

Operator annihilation(FockSpace space) {
    const int d = space.dim();
    CMatrix m = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {space, std::move(m)};
}

Operator creation(FockSpace space) { return annihilation(space).adjoint(); }

Operator number_operator(FockSpace space) {
    const int d = space.dim();
    CMatrix m = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
    return {space, std::move(m)};
}

Operator parity_operator(FockSpace space) {
    const int d = space.dim();
    CMatrix m = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return {space, std::move(m)};
}

Operator displacement(FockSpace space, Complex alpha) {
    const CMatrix a = annihilation(space).matrix();
    // alpha a^+ - conj(alpha) a is anti-Hermitian; i times it is Hermitian.
    const CMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
    const CMatrix hermitian = Complex(0.0, 1.0) * generator;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    CVector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::exp(Complex(0.0, -lambda(k)));
    const CMatrix& v = es.eigenvectors();
    return {space, v * phases.asDiagonal() * v.adjoint()};
}

CoherentState coherent_state(Complex alpha, FockSpace space) {
    const int d = space.dim();
    const double mod2 = std::norm(alpha);
    if (mod2 > 0.5 * d) {
        warn(fmt::format("coherent amplitude |alpha|^2 = {:.3g} exceeds dim/2 = {}; truncation may be inadequate",
                         mod2, 0.5 * d));
    }
    CVector c(d);
    c(0) = std::exp(-0.5 * mod2);
    for (int n = 1; n < d; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));

    const double norm2 = c.squaredNorm();
    const double norm = std::sqrt(norm2);
    if (norm < 1.0 - 1e-6) {
        throw TruncationError(fmt::format(
            "coherent state alpha = ({}, {}) keeps only norm {:.9f} in dim {}", alpha.real(), alpha.imag(), norm, d));
    }
    c /= norm;
    return {std::move(c), 1.0 - norm2};
}

DensityMatrix::DensityMatrix(FockSpace space, CMatrix entries) : space_(space), entries_(std::move(entries)) {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
        throw DomainError("density matrix shape does not match Fock-space dimension");
    }
}

DensityMatrix DensityMatrix::unchecked(FockSpace space, CMatrix entries) {
    return DensityMatrix(space, std::move(entries));
}

DensityMatrix DensityMatrix::from_matrix(FockSpace space, CMatrix entries) {
    DensityMatrix rho(space, std::move(entries));
    if (const double h = rho.hermiticity_error(); h > kHermitianTol) {
        throw DomainError(fmt::format("density matrix not Hermitian (max deviation {:.3e})", h));
    }
    const Complex tr = rho.entries_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw DomainError(fmt::format("density matrix trace ({}, {}) differs from 1", tr.real(), tr.imag()));
    }
    if (const double e = rho.min_eigenvalue(); e < -kEigenTol) {
        throw DomainError(fmt::format("density matrix has negative eigenvalue {:.3e}", e));
    }
    return rho;
}

DensityMatrix DensityMatrix::pure(FockSpace space, const CVector& psi) {
    if (psi.size() != space.dim()) throw DomainError("state vector size does not match Fock-space dimension");
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw DomainError("cannot normalize a zero state vector");
    return DensityMatrix(space, psi * psi.adjoint() / n2);
}

double DensityMatrix::trace() const { return entries_.trace().real(); }

double DensityMatrix::hermiticity_error() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    const CMatrix herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues()(0); }

Eigen::VectorXd DensityMatrix::populations() const { return entries_.diagonal().real(); }

Complex DensityMatrix::expectation(const Operator& op) const {
    if (!(op.space() == space_)) throw DomainError("expectation across different Fock spaces");
    // Tr(rho A) without forming the product.
    return (entries_.transpose().cwiseProduct(op.matrix())).sum();
}

DensityMatrix cat_density(Complex alpha1, Complex alpha2, FockSpace space) {
    const CoherentState s1 = coherent_state(alpha1, space);
    const CoherentState s2 = coherent_state(alpha2, space);
    const CVector branch_sum = s1.amplitudes + s2.amplitudes;
    // |branch_sum|^2 = 2 + 2 Re<a1|a2>, so this is the N normalization.
    return DensityMatrix::pure(space, branch_sum);
}

double thermal_occupation(double beta_hw) {
    if (!(beta_hw > 0.0)) throw DomainError("inverse temperature beta*hbar*Omega must be positive");
    return 1.0 / std::expm1(2.0 * beta_hw);
}

double beta_for_occupation(double nbar) {
    if (!(nbar > 0.0)) throw DomainError("thermal occupation must be positive to invert");
    return 0.5 * std::log1p(1.0 / nbar);
}

double parity_expectation(const DensityMatrix& rho) {
    double p = 0.0;
    for (int n = 0; n < rho.dim(); ++n) p += ((n % 2 == 0) ? 1.0 : -1.0) * rho(n, n).real();
    return p;
}

}  // namespace decolab
