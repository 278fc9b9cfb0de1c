#include "prepcost/prep_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "internal.hpp"

namespace prepcost {

ReferenceBasis::ReferenceBasis(ComplexMatrix columns, const ToleranceConfig& tol) : columns_(std::move(columns)) {
  if (columns_.rows() != columns_.cols() || columns_.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "reference basis must be a square matrix");
  }
  if (!is_unitary(columns_, tol.unitarity)) throw Error(ErrorKind::NotUnitary, "reference basis columns are not orthonormal");
}

ReferenceBasis ReferenceBasis::computational(Eigen::Index dim) { return ReferenceBasis(ComplexMatrix::Identity(dim, dim)); }

DensityMatrix ReferenceBasis::diagonal_state(const RealVector& p) const {
  if (p.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "population vector does not match the basis");
  return DensityMatrix(columns_ * p.cast<Complex>().asDiagonal() * columns_.adjoint());
}

RealVector ReferenceBasis::populations(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match the basis");
  return (columns_.adjoint() * rho.matrix() * columns_).diagonal().real();
}

bool ReferenceBasis::is_diagonal(const DensityMatrix& rho, double tol) const {
  if (rho.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "state does not match the basis");
  ComplexMatrix m = columns_.adjoint() * rho.matrix() * columns_;
  m.diagonal().setZero();
  return max_abs_entry(m) <= tol;
}

// ---------------------------------------------------------------- free states

IsospectralFreeSet isospectral_free_states(const DensityMatrix& target, const ReferenceBasis& basis,
                                           const ToleranceConfig& tol) {
  const Eigen::Index d = target.dim();
  if (basis.dim() != d) throw Error(ErrorKind::DimensionMismatch, "basis and target dimensions differ");
  if (d > kMaxFreeSetDim) throw Error(ErrorKind::DimensionTooLarge, "isospectral enumeration is limited to dimension 8");

  IsospectralFreeSet out;
  out.spectrum = eigendecompose(target.matrix(), tol).eigenvalues.cwiseMax(0.0);
  const auto groups = detail::clusters(out.spectrum, tol.degeneracy);

  std::vector<int> labels;
  for (std::size_t g = 0; g < groups.size(); ++g) labels.insert(labels.end(), groups[g].size(), static_cast<int>(g));
  do {
    std::vector<std::size_t> next(groups.size(), 0);
    std::vector<int> arrangement(static_cast<std::size_t>(d));
    RealVector p(d);
    for (Eigen::Index slot = 0; slot < d; ++slot) {
      const auto g = static_cast<std::size_t>(labels[static_cast<std::size_t>(slot)]);
      const int k = groups[g][next[g]++];
      arrangement[static_cast<std::size_t>(slot)] = k;
      p(slot) = out.spectrum(k);
    }
    out.arrangements.push_back(std::move(arrangement));
    out.states.push_back(basis.diagonal_state(p / p.sum()));
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

// ---------------------------------------------------------------- geodesic

StateCurve pure_geodesic(const PureState& from, const PureState& to, double horizon, int intervals) {
  if (from.dim() != to.dim()) throw Error(ErrorKind::DimensionMismatch, "geodesic endpoints differ in dimension");
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  if (intervals < 2) throw Error(ErrorKind::InvalidArgument, "need at least two intervals");

  const Complex overlap = from.amplitudes().dot(to.amplitudes());
  const double mag = std::abs(overlap);
  ComplexVector target = to.amplitudes();
  if (mag > 0.0) target *= std::conj(overlap) / mag;
  const double dist = std::acos(std::clamp(mag, 0.0, 1.0));

  std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  for (int k = 0; k <= intervals; ++k) {
    const double t = k == intervals ? horizon : horizon * k / intervals;
    times[static_cast<std::size_t>(k)] = t;
    if (dist <= 1e-9) {
      states.emplace_back(from);
      continue;
    }
    const double theta = dist * t / horizon;
    // cos θ - sin θ / tan d  ==  sin(d - θ) / sin d
    const ComplexVector psi = (std::sin(dist - theta) / std::sin(dist)) * from.amplitudes() +
                              (std::sin(theta) / std::sin(dist)) * target;
    states.emplace_back(PureState::normalized(psi));
  }
  return StateCurve(std::move(times), std::move(states), "geodesic");
}

// ---------------------------------------------------------------- purifications

namespace {

ComplexVector purification_vector(const ComplexMatrix& m, const ComplexMatrix& basis) {
  const Eigen::Index d = m.rows();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) psi += kron(ComplexVector(m * basis.col(i)), ComplexVector(basis.col(i)));
  return psi;
}

}  // namespace

PurificationPair closest_purifications(const DensityMatrix& free_state, const DensityMatrix& target,
                                       const ReferenceBasis& basis, const PurificationOptions& options,
                                       const ToleranceConfig& tol) {
  const Eigen::Index d = target.dim();
  if (free_state.dim() != d || basis.dim() != d) throw Error(ErrorKind::DimensionMismatch, "purification inputs differ in dimension");

  const SpectralDecomposition sd = eigendecompose(free_state.matrix(), tol);
  ComplexMatrix kernel_projector = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (sd.eigenvalues(i) <= tol.support) kernel_projector += sd.eigenvectors.col(i) * sd.eigenvectors.col(i).adjoint();
  }
  const double leak = (kernel_projector * target.matrix()).trace().real();

  double perturbation = 0.0;
  ComplexMatrix rho = free_state.matrix();
  if (leak > tol.support) {
    if (!options.allow_fallback) throw Error(ErrorKind::SupportMismatch, "target is not supported inside the free state's support");
    perturbation = tol.support;
    rho = (1.0 - perturbation) * rho + (perturbation / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  }

  DensityMatrix used = perturbation > 0.0 ? DensityMatrix(rho, tol) : free_state;
  const ComplexMatrix sqrt_rho = state_sqrt(used);
  const ComplexMatrix sqrt_tau = state_sqrt(target);
  // rho^{-1/2} sqrt(sqrt(rho) tau sqrt(rho)) restricted to the support equals
  // sqrt(tau) A B^dagger for the SVD sqrt(tau) sqrt(rho) = A S B^dagger, which
  // needs no inverse.
  Eigen::JacobiSVD<ComplexMatrix> svd(sqrt_tau * sqrt_rho, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix m = sqrt_tau * svd.matrixU() * svd.matrixV().adjoint();

  PureState free_pur = PureState::normalized(purification_vector(sqrt_rho, basis.matrix()));
  PureState target_pur = PureState::normalized(purification_vector(m, basis.matrix()));
  const double overlap = std::min(1.0, std::abs(free_pur.amplitudes().dot(target_pur.amplitudes())));
  return PurificationPair{std::move(free_pur), std::move(target_pur), overlap, perturbation, std::move(used)};
}

namespace {

PurificationBound lower_bound_over(const IsospectralFreeSet& set, const DensityMatrix& target, double horizon) {
  PurificationBound best{std::numeric_limits<double>::infinity(), 0.0, set.states.front(), 0};
  for (std::size_t a = 0; a < set.size(); ++a) {
    const double angle = bures_angle(set.states[a], target);
    const double value = angle * angle / horizon;
    if (value < best.value) best = PurificationBound{value, angle, set.states[a], a};
  }
  return best;
}

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
}

}  // namespace

PurificationBound purification_lower_bound(const DensityMatrix& target, const ReferenceBasis& basis, double horizon,
                                           const ToleranceConfig& tol) {
  check_horizon(horizon);
  return lower_bound_over(isospectral_free_states(target, basis, tol), target, horizon);
}

// ---------------------------------------------------------------- qubit

namespace {

double qubit_expression(double norm, double rz, double horizon) {
  const double radicand = norm * norm + 2.0 * norm * rz - norm * norm * (norm * norm - rz * rz - 1.0);
  const double root = std::sqrt(std::max(0.0, radicand));
  const double f_plus = std::max(0.0, 1.0 + norm * rz + root);
  // f_plus f_minus = (1 - |r|^2)^2; the subtraction form loses f_minus near
  // the surface of the ball, where it is tiny.
  const double sqrt_minus = f_plus > 0.0 ? (1.0 - norm * norm) / std::sqrt(f_plus) : 0.0;
  const double c = std::clamp((std::sqrt(f_plus) + sqrt_minus) / 2.0, 0.0, 1.0);
  const double angle = std::acos(c);
  return angle * angle / horizon;
}

double checked_norm(const Eigen::Vector3d& r) {
  const double norm = r.norm();
  if (!(norm <= 1.0 + 1e-10)) throw Error(ErrorKind::InvalidBloch, "Bloch vector longer than 1");
  return std::min(norm, 1.0);
}

}  // namespace

double qubit_closed_form(const Eigen::Vector3d& r, double horizon) {
  check_horizon(horizon);
  const double norm = checked_norm(r);
  return qubit_expression(norm, std::min(std::abs(r.z()), norm), horizon);
}

double qubit_closed_form_as_printed(const Eigen::Vector3d& r, double horizon) {
  check_horizon(horizon);
  const double norm = checked_norm(r);
  return qubit_expression(norm, std::clamp(r.z(), -norm, norm), horizon);
}

// ---------------------------------------------------------------- bracket

ComplexMatrix interpolation_unitary(const DensityMatrix& target, const IsospectralFreeSet& free_set,
                                    std::size_t arrangement, const ReferenceBasis& basis, const ToleranceConfig& tol) {
  const Eigen::Index d = target.dim();
  const SpectralDecomposition sd = eigendecompose(target.matrix(), tol);
  const auto& arr = free_set.arrangements.at(arrangement);
  std::vector<int> slot_of(static_cast<std::size_t>(d));
  for (Eigen::Index slot = 0; slot < d; ++slot) slot_of[static_cast<std::size_t>(arr[static_cast<std::size_t>(slot)])] = static_cast<int>(slot);

  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (const auto& group : detail::clusters(sd.eigenvalues.cwiseMax(0.0), tol.degeneracy)) {
    std::vector<int> slots;
    for (int k : group) slots.push_back(slot_of[static_cast<std::size_t>(k)]);
    const ComplexMatrix e = detail::gather(basis.matrix(), slots);
    ComplexMatrix w = detail::gather(sd.eigenvectors, group);
    w = w * detail::procrustes(w.adjoint() * e);
    v += w * e.adjoint();
  }
  return v;
}

double interpolation_energy(const DensityMatrix& free_state, const ComplexMatrix& unitary, double horizon,
                            const ToleranceConfig& tol) {
  check_horizon(horizon);
  const ComplexMatrix k = principal_log_unitary(unitary, tol);
  const SpectralDecomposition sd = eigendecompose(free_state.matrix(), tol);
  const ComplexMatrix g = sd.eigenvectors.adjoint() * k * sd.eigenvectors;
  const Eigen::Index d = g.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double li = sd.eigenvalues(i);
      const double lj = sd.eigenvalues(j);
      if (li + lj < tol.support) continue;
      sum += std::norm(g(i, j)) * (li - lj) * (li - lj) / (li + lj);
    }
  }
  return sum / horizon;
}

CostBracket qu_cost_bracket(const DensityMatrix& target, const ReferenceBasis& basis, double horizon, int intervals,
                            const ToleranceConfig& tol) {
  check_horizon(horizon);
  const IsospectralFreeSet set = isospectral_free_states(target, basis, tol);
  const PurificationBound lower = lower_bound_over(set, target, horizon);

  double best_upper = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  ComplexMatrix best_unitary;
  for (std::size_t a = 0; a < set.size(); ++a) {
    const ComplexMatrix v = interpolation_unitary(target, set, a, basis, tol);
    const double e = interpolation_energy(set.states[a], v, horizon, tol);
    if (e < best_upper) {
      best_upper = e;
      best_index = a;
      best_unitary = v;
    }
  }

  CostBracket out{lower.value, best_upper, std::nullopt, std::nullopt, lower.free_state, set.states[best_index],
                  best_unitary, 0.0, horizon, intervals, set.size()};
  const StateCurve path = make_curve(InterpolationGenerator{best_unitary, set.states[best_index], horizon}, intervals);
  out.upper_sampled = integrate_energy(path, tol).total_energy;
  if (target.purity() >= 1.0 - 1e-10) out.exact = lower.value;
  if (target.dim() == 2 && (basis.matrix() - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12) {
    out.qubit_closed_form = qubit_closed_form(bloch_vector(target), horizon);
  }
  return out;
}

// ---------------------------------------------------------------- gates

double seminorm(const ComplexMatrix& h, const ToleranceConfig& tol) {
  const RealVector ev = eigendecompose(h, tol).eigenvalues;
  return ev.maxCoeff() - ev.minCoeff();
}

long gate_count_bound(double q_over_t, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::NonpositiveSeminorm, "gate seminorm must be positive");
  if (!(q_over_t >= 0.0) || !std::isfinite(q_over_t)) throw Error(ErrorKind::InvalidArgument, "Q/T must be a finite non-negative number");
  const double x = (2.0 / h) * std::sqrt(q_over_t);
  // a measured energy sitting on an integer should not round up past it
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(x));
}

}  // namespace prepcost
