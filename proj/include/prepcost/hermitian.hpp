#pragma once

// Dense complex Hermitian linear algebra and quantum-state primitives.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "prepcost/errors.hpp"

namespace prepcost {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Every numerical threshold used by the library lives here so tests can
// tighten or loosen them in one place.
struct ToleranceConfig {
  double hermiticity = 1e-10;  // max |A - A^dagger| entrywise
  double trace = 1e-10;        // |Tr A - 1|
  double positivity = 1e-10;   // smallest admissible eigenvalue is -positivity
  double norm = 1e-12;         // | ||psi||^2 - 1 |
  double unitarity = 1e-10;    // max |U^dagger U - I| entrywise
  double degeneracy = 1e-9;    // eigenvalue gap below which modes form one cluster
  double support = 1e-10;      // eigenvalue floor for the Bures weights
};

inline const ToleranceConfig& default_tolerances() {
  static const ToleranceConfig config{};
  return config;
}

class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, const ToleranceConfig& tol = default_tolerances());

  // Rescales to unit norm instead of rejecting; zero vectors still throw.
  static PureState normalized(ComplexVector amplitudes);
  static PureState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity; the stored matrix is
  // symmetrized and eigenvalues in [-positivity, 0) are clamped to zero.
  explicit DensityMatrix(const ComplexMatrix& matrix, const ToleranceConfig& tol = default_tolerances());
  explicit DensityMatrix(const PureState& state);

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix diagonal(const RealVector& probabilities, const ToleranceConfig& tol = default_tolerances());

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {}
  friend DensityMatrix kron(const DensityMatrix&, const DensityMatrix&);
  friend DensityMatrix conjugate(const DensityMatrix&, const ComplexMatrix&);

  ComplexMatrix matrix_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, unitary

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& u, double tol);
double max_abs_entry(const ComplexMatrix& a);

// Eigenvalues descending. Inside a cluster of eigenvalues closer than
// `tol.degeneracy` the basis is canonical: it depends only on the eigenspace,
// each vector has its largest-modulus component real positive, and vectors
// are ordered by the position of that component.
SpectralDecomposition eigendecompose(const ComplexMatrix& a, const ToleranceConfig& tol = default_tolerances());

ComplexMatrix matrix_sqrt(const ComplexMatrix& a, const ToleranceConfig& tol = default_tolerances());

// Moore-Penrose inverse square root on the support (eigenvalues above `floor`).
ComplexMatrix pseudo_inverse_sqrt(const ComplexMatrix& a, double floor);

// exp(i * generator) for Hermitian `generator`.
ComplexMatrix unitary_exp(const ComplexMatrix& generator);

// Hermitian K with exp(iK) = u and eigenvalues of K in (-pi, pi]. The
// principal branch of the logarithm of a unitary, returned as the Hermitian
// generator rather than the anti-Hermitian log itself.
ComplexMatrix principal_log_unitary(const ComplexMatrix& u, const ToleranceConfig& tol = default_tolerances());

// F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
// Square root of a state with eigenvalues below kStateSqrtFloor set to zero:
// a rounded-off zero eigenvalue (~1e-17) would otherwise contribute ~3e-9.
constexpr double kStateSqrtFloor = 1e-14;
ComplexMatrix state_sqrt(const DensityMatrix& rho);

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma);
double fubini_study(const PureState& psi, const PureState& phi);

double variance(const DensityMatrix& rho, const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// U rho U^dagger for unitary U (not revalidated).
DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u);

// Trace out every subsystem not listed in `keep`. `keep` must be sorted and
// unique; the kept factors stay in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims, std::span<const int> keep);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// (I + r . sigma) / 2; throws InvalidBloch when |r| > 1 + 1e-10.
DensityMatrix bloch_state(const Eigen::Vector3d& r);
Eigen::Vector3d bloch_vector(const DensityMatrix& qubit);

}  // namespace prepcost
