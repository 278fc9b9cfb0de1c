#pragma once

// Preparation cost of a target state: isospectral free states, pure-state
// geodesics, closest purifications, the Q^u bracket, the qubit closed form
// and the gate-count bound.

#include <optional>
#include <vector>

#include "prepcost/curve.hpp"
#include "prepcost/hermitian.hpp"

namespace prepcost {

// Orthonormal basis stored as the columns of a unitary. Free states are the
// density matrices diagonal in it.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(ComplexMatrix columns, const ToleranceConfig& tol = default_tolerances());
  static ReferenceBasis computational(Eigen::Index dim);

  Eigen::Index dim() const { return columns_.rows(); }
  const ComplexMatrix& matrix() const { return columns_; }

  // sum_i p_i |i_R><i_R|
  DensityMatrix diagonal_state(const RealVector& p) const;
  // Re <i_R| rho |i_R>
  RealVector populations(const DensityMatrix& rho) const;
  bool is_diagonal(const DensityMatrix& rho, double tol = 1e-9) const;

 private:
  ComplexMatrix columns_;
};

constexpr Eigen::Index kMaxFreeSetDim = 8;

struct IsospectralFreeSet {
  RealVector spectrum;  // descending
  // arrangements[a][slot] = index into `spectrum` placed on basis vector `slot`.
  std::vector<std::vector<int>> arrangements;
  std::vector<DensityMatrix> states;

  std::size_t size() const { return states.size(); }
};

// Distinct placements of the target spectrum on the basis diagonal, in
// lexicographic order of the multiset labels; the first is descending.
// Eigenvalues closer than tol.degeneracy count as equal.
IsospectralFreeSet isospectral_free_states(const DensityMatrix& target, const ReferenceBasis& basis,
                                           const ToleranceConfig& tol = default_tolerances());

// Constant-speed great circle from `from` to `to` (phase of `to` aligned
// first). Identical endpoints give the constant curve.
StateCurve pure_geodesic(const PureState& from, const PureState& to, double horizon, int intervals);

struct PurificationOptions {
  bool allow_fallback = true;
};

struct PurificationPair {
  PureState free_purification;    // on dim x dim, system first
  PureState target_purification;
  double overlap = 0.0;           // |<free|target>|
  double perturbation = 0.0;      // weight of I/d mixed into the free state, 0 if untouched
  DensityMatrix free_state;       // the free state actually purified
};

// sum_i M|i_R> (x) |i_R> with M = sqrt(rho) for the free state and
// M = rho^{-1/2} sqrt(sqrt(rho) tau sqrt(rho)) for the target. When the target
// leaves the support of the free state the latter is not a purification of
// tau; the free state is then mixed with ε I/d (ε = tol.support) or
// SupportMismatch is raised when fallback is off.
PurificationPair closest_purifications(const DensityMatrix& free_state, const DensityMatrix& target,
                                       const ReferenceBasis& basis, const PurificationOptions& options = {},
                                       const ToleranceConfig& tol = default_tolerances());

struct PurificationBound {
  double value = 0.0;   // D_B^2 / T
  double angle = 0.0;   // D_B at the minimizer
  DensityMatrix free_state;
  std::size_t index = 0;  // position in the isospectral set
};

PurificationBound purification_lower_bound(const DensityMatrix& target, const ReferenceBasis& basis, double horizon,
                                           const ToleranceConfig& tol = default_tolerances());

// Purification bound for a qubit target with Bloch vector r against the
// computational basis. Valid for both hemispheres.
double qubit_closed_form(const Eigen::Vector3d& r, double horizon);
// The same expression with r_z kept signed; agrees with the above only for
// r_z >= 0.
double qubit_closed_form_as_printed(const Eigen::Vector3d& r, double horizon);

// V with V rho_p V^dagger = target, mapping basis vectors to target
// eigenvectors with each eigenspace rotated as close to the identity as
// possible.
ComplexMatrix interpolation_unitary(const DensityMatrix& target, const IsospectralFreeSet& free_set,
                                    std::size_t arrangement, const ReferenceBasis& basis,
                                    const ToleranceConfig& tol = default_tolerances());

// Energy of t -> exp(i t K / T) rho_p exp(-i t K / T), exp(iK) = V, which has
// constant speed, evaluated in closed form.
double interpolation_energy(const DensityMatrix& free_state, const ComplexMatrix& unitary, double horizon,
                            const ToleranceConfig& tol = default_tolerances());

struct CostBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;             // pure targets
  std::optional<double> qubit_closed_form; // qubit targets, computational basis only
  DensityMatrix lower_free_state;
  DensityMatrix upper_free_state;
  ComplexMatrix upper_unitary;
  double upper_sampled = 0.0;  // integrate_energy on the sampled upper path
  double horizon = 1.0;
  int samples = 0;
  std::size_t free_states = 0;
};

CostBracket qu_cost_bracket(const DensityMatrix& target, const ReferenceBasis& basis, double horizon, int intervals = 1000,
                            const ToleranceConfig& tol = default_tolerances());

// Largest minus smallest eigenvalue.
double seminorm(const ComplexMatrix& h, const ToleranceConfig& tol = default_tolerances());

// ceil((2/h) sqrt(Q/T)).
long gate_count_bound(double q_over_t, double h);

}  // namespace prepcost
