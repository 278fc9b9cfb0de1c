#pragma once

// State curves on the manifold of density matrices, continued eigenframes,
// the Bures squared speed and the classical/quantum split of curve energy.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prepcost/hermitian.hpp"

namespace prepcost {

class StateCurve {
 public:
  // Requires at least three samples, strictly increasing times starting at 0,
  // and a common dimension. The horizon T is the last time.
  StateCurve(std::vector<double> times, std::vector<DensityMatrix> states, std::string label = "samples");

  const std::vector<double>& times() const { return times_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  double horizon() const { return times_.back(); }
  int intervals() const { return static_cast<int>(times_.size()) - 1; }
  Eigen::Index dim() const { return states_.front().dim(); }
  const std::string& label() const { return label_; }

 private:
  std::vector<double> times_;
  std::vector<DensityMatrix> states_;
  std::string label_;
};

// Per-sample eigendecomposition with columns reordered and rephased so that
// slot i at sample k+1 continues slot i at sample k. Eigenvalues are in slot
// order, which is not necessarily descending.
struct ContinuedFrame {
  std::vector<SpectralDecomposition> frames;
  // permutations[k][slot] is the index of that slot in the sorted
  // decomposition of sample k.
  std::vector<std::vector<int>> permutations;
};

struct TangentSplit {
  double classical_speed_sq = 0.0;
  double quantum_speed_sq = 0.0;
  std::vector<int> dropped_modes;

  double total() const { return classical_speed_sq + quantum_speed_sq; }
};

struct EnergyReport {
  double total_energy = 0.0;
  double classical_energy = 0.0;
  double quantum_energy = 0.0;
  std::vector<double> times;
  std::vector<TangentSplit> speeds;  // one per grid node
  int grid_size = 0;                 // number of intervals K
};

// ---------------------------------------------------------------- generators

// e^{-iHt} rho e^{iHt}
struct UnitaryGenerator {
  ComplexMatrix hamiltonian;
  DensityMatrix initial;
  double horizon = 1.0;
};

enum class Schedule { Linear, Sine };

// B diag(lambda(t)) B^dagger with lambda(t) = (1 - s) from + s to, where
// s = t/T (Linear) or s = sin^2(pi t / 2T) (Sine).
struct DiagonalGenerator {
  RealVector from;
  RealVector to;
  Schedule schedule = Schedule::Linear;
  std::optional<ComplexMatrix> basis;
  double horizon = 1.0;
};

// exp((t/T) log V) rho exp((t/T) log V)^dagger with the principal logarithm.
struct InterpolationGenerator {
  ComplexMatrix unitary;
  DensityMatrix initial;
  double horizon = 1.0;
};

struct SampleList {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

using CurveGenerator = std::variant<UnitaryGenerator, DiagonalGenerator, InterpolationGenerator, SampleList>;

// Uniform grid of `intervals` + 1 samples on [0, T]. SampleList ignores
// `intervals`. Bad generator data raises InvalidGenerator.
StateCurve make_curve(const CurveGenerator& generator, int intervals = 1000);

// ---------------------------------------------------------------- kinematics

// Raises FrameJump when the best assignment leaves some slot with squared
// overlap below 1/2.
ContinuedFrame continue_frame(const StateCurve& curve, const ToleranceConfig& tol = default_tolerances());

// The Bures weights. `g` is the tangent expressed in the eigenframe,
// `rates` and `curvatures` are the first and second time derivatives of the
// eigenvalue trajectories, used for modes sitting on the support boundary.
// A mode with eigenvalue below the support floor contributes its smooth limit
// lambda''/2 when its rate is at most sqrt(floor), and raises SupportCrossing
// otherwise. Curvatures below sqrt(floor) are treated as rounding noise.
TangentSplit bures_split(const RealVector& eigenvalues, const ComplexMatrix& g, const RealVector& rates,
                         const RealVector& curvatures, const ToleranceConfig& tol = default_tolerances(),
                         std::optional<double> time = std::nullopt);

// Second-order finite differences: central on interior nodes, one-sided at
// k = 0 and k = K.
TangentSplit tangent_split_at(const StateCurve& curve, const ContinuedFrame& frame, int k,
                              const ToleranceConfig& tol = default_tolerances());

EnergyReport integrate_energy(const StateCurve& curve, const ToleranceConfig& tol = default_tolerances());

// Finite-difference weights for derivative `order` at `x0` over `nodes`.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order);

}  // namespace prepcost
