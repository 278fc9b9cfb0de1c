#include "prepcost/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace prepcost {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::InvalidTrace: return "InvalidTrace";
    case ErrorKind::InvalidNorm: return "InvalidNorm";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::InvalidGenerator: return "InvalidGenerator";
    case ErrorKind::FrameJump: return "FrameJump";
    case ErrorKind::SupportCrossing: return "SupportCrossing";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::InvalidBloch: return "InvalidBloch";
    case ErrorKind::NonpositiveSeminorm: return "NonpositiveSeminorm";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

// Index of the first component whose modulus is maximal (up to 1e-12).
Eigen::Index leading_component(const ComplexVector& v) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= best - 1e-12) return i;
  }
  return 0;
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
  const Complex lead = v(leading_component(v));
  if (std::abs(lead) > 0.0) v *= std::conj(lead) / std::abs(lead);
}

// Replace the columns of `block` by a basis that depends only on their span:
// pivoted Gram-Schmidt over the projections of the computational basis.
ComplexMatrix canonical_subspace_basis(const ComplexMatrix& block) {
  const Eigen::Index d = block.rows();
  const Eigen::Index m = block.cols();
  const ComplexMatrix projector = block * block.adjoint();
  ComplexMatrix basis(d, m);
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (Eigen::Index c = 0; c < m; ++c) {
    Eigen::Index pick = -1;
    double pick_norm = -1.0;
    ComplexVector pick_vec;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      ComplexVector r = projector.col(j);
      for (Eigen::Index k = 0; k < c; ++k) r -= basis.col(k) * basis.col(k).dot(r);
      const double n = r.norm();
      if (n > pick_norm + 1e-12) {
        pick = j;
        pick_norm = n;
        pick_vec = std::move(r);
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    // second pass of Gram-Schmidt for orthogonality at machine precision
    for (Eigen::Index k = 0; k < c; ++k) pick_vec -= basis.col(k) * basis.col(k).dot(pick_vec);
    basis.col(c) = pick_vec / pick_vec.norm();
  }
  for (Eigen::Index c = 0; c < m; ++c) fix_phase(basis.col(c));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Eigen::Index la = leading_component(basis.col(a));
    const Eigen::Index lb = leading_component(basis.col(b));
    if (la != lb) return la < lb;
    return std::abs(basis(la, a)) > std::abs(basis(lb, b));
  });
  ComplexMatrix sorted(d, m);
  for (Eigen::Index c = 0; c < m; ++c) sorted.col(c) = basis.col(order[static_cast<std::size_t>(c)]);
  return sorted;
}

}  // namespace

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && max_abs_entry(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs_entry(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

double max_abs_entry(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- states

PureState::PureState(ComplexVector amplitudes, const ToleranceConfig& tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) throw Error(ErrorKind::InvalidNorm, "pure state needs at least one amplitude");
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol.norm) {
    std::ostringstream os;
    os << "squared norm " << n2 << " differs from 1";
    throw Error(ErrorKind::InvalidNorm, os.str());
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidNorm, "cannot normalize a zero vector");
  return PureState(amplitudes / n);
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& matrix, const ToleranceConfig& tol) {
  require_square(matrix, "density matrix");
  if (!is_hermitian(matrix, tol.hermiticity)) {
    throw Error(ErrorKind::NonHermitianInput, "density matrix is not Hermitian");
  }
  matrix_ = hermitian_part(matrix);
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "trace " << tr << " differs from 1";
    throw Error(ErrorKind::InvalidTrace, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_);
  const RealVector& w = solver.eigenvalues();
  if (w.minCoeff() < -tol.positivity) {
    std::ostringstream os;
    os << "smallest eigenvalue " << w.minCoeff() << " is negative";
    throw Error(ErrorKind::NotPositive, os.str());
  }
  if (w.minCoeff() < 0.0) {
    const RealVector clamped = w.cwiseMax(0.0);
    const ComplexMatrix& v = solver.eigenvectors();
    matrix_ = hermitian_part(v * clamped.cast<Complex>().asDiagonal() * v.adjoint());
  }
}

DensityMatrix::DensityMatrix(const PureState& state) : matrix_(state.projector()) {}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), Trusted{});
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probabilities, const ToleranceConfig& tol) {
  return DensityMatrix(ComplexMatrix(probabilities.cast<Complex>().asDiagonal()), tol);
}

// ---------------------------------------------------------------- spectra

SpectralDecomposition eigendecompose(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square(a, "eigendecompose input");
  if (!is_hermitian(a, tol.hermiticity)) throw Error(ErrorKind::NonHermitianInput, "eigendecompose needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  const Eigen::Index d = a.rows();
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && out.eigenvalues(end - 1) - out.eigenvalues(end) < tol.degeneracy) ++end;
    if (end - start == 1) {
      fix_phase(out.eigenvectors.col(start));
    } else {
      out.eigenvectors.middleCols(start, end - start) =
          canonical_subspace_basis(out.eigenvectors.middleCols(start, end - start));
    }
    start = end;
  }
  return out;
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& a, const ToleranceConfig& tol) {
  const SpectralDecomposition s = eigendecompose(a, tol);
  if (s.eigenvalues.minCoeff() < -tol.positivity) {
    std::ostringstream os;
    os << "matrix_sqrt of a matrix with eigenvalue " << s.eigenvalues.minCoeff();
    throw Error(ErrorKind::NotPositive, os.str());
  }
  const RealVector roots = s.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(s.eigenvectors * roots.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint());
}

ComplexMatrix pseudo_inverse_sqrt(const ComplexMatrix& a, double floor) {
  const SpectralDecomposition s = eigendecompose(a);
  RealVector inv(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = s.eigenvalues(i) > floor ? 1.0 / std::sqrt(s.eigenvalues(i)) : 0.0;
  }
  return hermitian_part(s.eigenvectors * inv.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint());
}

ComplexMatrix unitary_exp(const ComplexMatrix& generator) {
  require_square(generator, "generator");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(generator));
  const RealVector& w = solver.eigenvalues();
  ComplexVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, w(i));
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix principal_log_unitary(const ComplexMatrix& u, const ToleranceConfig& tol) {
  require_square(u, "unitary");
  if (!is_unitary(u, std::max(tol.unitarity, 1e-9))) throw Error(ErrorKind::NotUnitary, "logarithm needs a unitary matrix");
  // A unitary is normal, so its complex Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  const ComplexMatrix& q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();
  RealVector angles(u.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double phi = std::arg(t(i, i));
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    angles(i) = phi;
  }
  return hermitian_part(q * angles.cast<Complex>().asDiagonal() * q.adjoint());
}

// ---------------------------------------------------------------- distances

ComplexMatrix state_sqrt(const DensityMatrix& rho) {
  const SpectralDecomposition s = eigendecompose(rho.matrix());
  RealVector r(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = s.eigenvalues(i) > kStateSqrtFloor ? std::sqrt(s.eigenvalues(i)) : 0.0;
  return hermitian_part(s.eigenvectors * r.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint());
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimensionMismatch, "fidelity of states with different dimensions");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) is the nuclear norm of sqrt(rho) sqrt(sigma).
  // Singular values keep the null directions at ~1e-16 instead of the ~1e-8
  // left by square roots of rounded-off zero eigenvalues.
  const ComplexMatrix product = state_sqrt(rho) * state_sqrt(sigma);
  const double f = Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
  return std::clamp(f, 0.0, 1.0);
}

double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma) { return std::acos(fidelity(rho, sigma)); }

double fubini_study(const PureState& psi, const PureState& phi) {
  if (psi.dim() != phi.dim()) throw Error(ErrorKind::DimensionMismatch, "Fubini-Study distance of states with different dimensions");
  return std::acos(std::clamp(std::abs(psi.amplitudes().dot(phi.amplitudes())), 0.0, 1.0));
}

double variance(const DensityMatrix& rho, const ComplexMatrix& h) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "observable and state dimensions differ");
  if (!is_hermitian(h, 1e-10)) throw Error(ErrorKind::NonHermitianInput, "variance needs a Hermitian observable");
  const ComplexMatrix rh = rho.matrix() * h;
  const double mean = rh.trace().real();
  const double second = (rh * h).trace().real();
  return std::max(0.0, second - mean * mean);
}

// ---------------------------------------------------------------- tensors

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), DensityMatrix::Trusted{});
}

DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "unitary and state dimensions differ");
  return DensityMatrix(hermitian_part(u * rho.matrix() * u.adjoint()), DensityMatrix::Trusted{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims, std::span<const int> keep) {
  const int n = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "subsystem dimensions must be positive");
    total *= d;
  }
  if (total != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions do not multiply to the state dimension");
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  int prev = -1;
  for (int k : keep) {
    if (k <= prev || k >= n) throw Error(ErrorKind::InvalidArgument, "keep indices must be sorted, unique and in range");
    kept[static_cast<std::size_t>(k)] = true;
    prev = k;
  }
  long kept_dim = 1;
  for (int k : keep) kept_dim *= dims[static_cast<std::size_t>(k)];

  // Map a full multi-index to (kept index, traced index).
  std::vector<long> kept_index(static_cast<std::size_t>(total)), traced_index(static_cast<std::size_t>(total));
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int s = n - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % dims[static_cast<std::size_t>(s)]);
      rem /= dims[static_cast<std::size_t>(s)];
    }
    long ki = 0, ti = 0;
    for (int s = 0; s < n; ++s) {
      const auto su = static_cast<std::size_t>(s);
      if (kept[su]) ki = ki * dims[su] + digits[su];
      else ti = ti * dims[su] + digits[su];
    }
    kept_index[static_cast<std::size_t>(flat)] = ki;
    traced_index[static_cast<std::size_t>(flat)] = ti;
  }
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  const ComplexMatrix& m = rho.matrix();
  for (long r = 0; r < total; ++r) {
    for (long c = 0; c < total; ++c) {
      if (traced_index[static_cast<std::size_t>(r)] != traced_index[static_cast<std::size_t>(c)]) continue;
      out(kept_index[static_cast<std::size_t>(r)], kept_index[static_cast<std::size_t>(c)]) += m(r, c);
    }
  }
  return DensityMatrix(out);
}

// ---------------------------------------------------------------- qubits

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

DensityMatrix bloch_state(const Eigen::Vector3d& r) {
  if (r.norm() > 1.0 + 1e-10) throw Error(ErrorKind::InvalidBloch, "Bloch vector longer than 1");
  const ComplexMatrix m = 0.5 * (pauli::identity() + r.x() * pauli::x() + r.y() * pauli::y() + r.z() * pauli::z());
  ToleranceConfig tol;
  tol.positivity = 1e-9;
  return DensityMatrix(m, tol);
}

Eigen::Vector3d bloch_vector(const DensityMatrix& qubit) {
  if (qubit.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "Bloch vector needs a qubit");
  const ComplexMatrix& m = qubit.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

}  // namespace prepcost
