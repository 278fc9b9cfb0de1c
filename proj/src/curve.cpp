#include "prepcost/curve.hpp"

#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>


namespace prepcost {

using detail::clusters;
using detail::gather;
using detail::procrustes;
using detail::scatter;

StateCurve::StateCurve(std::vector<double> times, std::vector<DensityMatrix> states, std::string label)
    : times_(std::move(times)), states_(std::move(states)), label_(std::move(label)) {
  if (times_.size() != states_.size()) throw Error(ErrorKind::InvalidCurve, "times and states differ in length");
  if (times_.size() < 3) throw Error(ErrorKind::InvalidCurve, "a curve needs at least three samples");
  if (times_.front() != 0.0) throw Error(ErrorKind::InvalidCurve, "curve times must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw Error(ErrorKind::InvalidCurve, "curve times must be strictly increasing");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) throw Error(ErrorKind::InvalidCurve, "curve samples differ in dimension");
  }
}

// ---------------------------------------------------------------- generators

namespace {

std::vector<double> uniform_grid(double horizon, int intervals) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorKind::InvalidGenerator, "horizon must be positive");
  if (intervals < 2) throw Error(ErrorKind::InvalidGenerator, "need at least two intervals");
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) t[static_cast<std::size_t>(k)] = horizon * k / intervals;
  t.back() = horizon;
  return t;
}

void check_probabilities(const RealVector& p, const char* what) {
  if (p.size() < 1 || p.minCoeff() < -1e-12 || std::abs(p.sum() - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidGenerator, std::string(what) + " must be a probability vector");
  }
}

StateCurve build(const UnitaryGenerator& g, int intervals) {
  if (g.hamiltonian.rows() != g.initial.dim() || g.hamiltonian.cols() != g.initial.dim()) {
    throw Error(ErrorKind::InvalidGenerator, "Hamiltonian and initial state dimensions differ");
  }
  if (!is_hermitian(g.hamiltonian, 1e-10)) throw Error(ErrorKind::InvalidGenerator, "Hamiltonian is not Hermitian");
  const auto times = uniform_grid(g.horizon, intervals);
  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(conjugate(g.initial, unitary_exp(-t * g.hamiltonian)));
  return StateCurve(times, std::move(states), "unitary");
}

StateCurve build(const DiagonalGenerator& g, int intervals) {
  check_probabilities(g.from, "diagonal schedule start");
  check_probabilities(g.to, "diagonal schedule end");
  if (g.from.size() != g.to.size()) throw Error(ErrorKind::InvalidGenerator, "schedule endpoints differ in dimension");
  const Eigen::Index d = g.from.size();
  ComplexMatrix basis = ComplexMatrix::Identity(d, d);
  if (g.basis) {
    if (g.basis->rows() != d || !is_unitary(*g.basis, 1e-10)) throw Error(ErrorKind::InvalidGenerator, "diagonal basis must be a unitary of matching size");
    basis = *g.basis;
  }
  const auto times = uniform_grid(g.horizon, intervals);
  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  for (double t : times) {
    double s = t / g.horizon;
    if (g.schedule == Schedule::Sine) {
      const double v = std::sin(std::numbers::pi * t / (2.0 * g.horizon));
      s = v * v;
    }
    const RealVector lambda = ((1.0 - s) * g.from + s * g.to).cwiseMax(0.0);
    const ComplexMatrix m = basis * lambda.cast<Complex>().asDiagonal() * basis.adjoint();
    states.emplace_back(m);
  }
  return StateCurve(times, std::move(states), g.schedule == Schedule::Sine ? "diagonal-sine" : "diagonal-linear");
}

StateCurve build(const InterpolationGenerator& g, int intervals) {
  if (g.unitary.rows() != g.initial.dim() || g.unitary.cols() != g.initial.dim()) {
    throw Error(ErrorKind::InvalidGenerator, "unitary and initial state dimensions differ");
  }
  if (!is_unitary(g.unitary, 1e-9)) throw Error(ErrorKind::InvalidGenerator, "interpolation target is not unitary");
  const ComplexMatrix generator = principal_log_unitary(g.unitary);
  const auto times = uniform_grid(g.horizon, intervals);
  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(conjugate(g.initial, unitary_exp((t / g.horizon) * generator)));
  return StateCurve(times, std::move(states), "interp");
}

StateCurve build(const SampleList& g, int /*intervals*/) {
  try {
    return StateCurve(g.times, g.states, "samples");
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidGenerator, e.what());
  }
}

}  // namespace

StateCurve make_curve(const CurveGenerator& generator, int intervals) {
  return std::visit([intervals](const auto& g) { return build(g, intervals); }, generator);
}

// ---------------------------------------------------------------- frames

namespace {

// Maximum-weight perfect assignment (Hungarian algorithm, O(n^3)).
// Returns slot -> column.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight) {
  const int n = static_cast<int>(weight.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), way_min(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(way_min.begin(), way_min.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int row0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -weight(row0 - 1, col - 1) - u[row0] - v[col];
        if (cur < way_min[col]) {
          way_min[col] = cur;
          way[col] = col0;
        }
        if (way_min[col] < delta) {
          delta = way_min[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          way_min[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> slot_to_col(n);
  for (int col = 1; col <= n; ++col) slot_to_col[match[col] - 1] = col - 1;
  return slot_to_col;
}

}  // namespace

ContinuedFrame continue_frame(const StateCurve& curve, const ToleranceConfig& tol) {
  const auto& states = curve.states();
  const auto& times = curve.times();
  const int d = static_cast<int>(curve.dim());
  ContinuedFrame out;
  out.frames.reserve(states.size());
  out.permutations.reserve(states.size());
  out.frames.push_back(eigendecompose(states.front().matrix(), tol));
  std::vector<int> identity(static_cast<std::size_t>(d));
  std::iota(identity.begin(), identity.end(), 0);
  out.permutations.push_back(identity);

  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    SpectralDecomposition& prev = out.frames[k];
    const SpectralDecomposition raw = eigendecompose(states[k + 1].matrix(), tol);
    const ComplexMatrix overlap = prev.eigenvectors.adjoint() * raw.eigenvectors;
    const std::vector<int> assign = max_weight_assignment(overlap.cwiseAbs2());

    SpectralDecomposition cur{RealVector(d), ComplexMatrix(d, d)};
    for (int a = 0; a < d; ++a) {
      cur.eigenvalues(a) = raw.eigenvalues(assign[static_cast<std::size_t>(a)]);
      cur.eigenvectors.col(a) = raw.eigenvectors.col(assign[static_cast<std::size_t>(a)]);
    }

    // A degenerate eigenspace at sample k has no preferred basis; pick the one
    // the next sample singles out. A degenerate eigenspace at k+1 is aligned
    // to sample k instead.
    for (const auto& group : clusters(prev.eigenvalues, tol.degeneracy)) {
      if (group.size() < 2) continue;
      const ComplexMatrix p = gather(prev.eigenvectors, group);
      const ComplexMatrix c = gather(cur.eigenvectors, group);
      scatter(prev.eigenvectors, group, p * procrustes(p.adjoint() * c));
    }
    for (const auto& group : clusters(cur.eigenvalues, tol.degeneracy)) {
      if (group.size() < 2) continue;
      const ComplexMatrix p = gather(prev.eigenvectors, group);
      const ComplexMatrix c = gather(cur.eigenvectors, group);
      scatter(cur.eigenvectors, group, c * procrustes(c.adjoint() * p));
    }

    for (int a = 0; a < d; ++a) {
      const Complex ov = prev.eigenvectors.col(a).dot(cur.eigenvectors.col(a));
      const double mag = std::abs(ov);
      if (mag * mag < 0.5) {
        std::ostringstream os;
        os << "eigenvector slot " << a << " keeps squared overlap " << mag * mag << " between t=" << times[k]
           << " and t=" << times[k + 1] << "; refine the grid";
        throw Error(ErrorKind::FrameJump, os.str(), times[k + 1]);
      }
      cur.eigenvectors.col(a) *= std::conj(ov) / mag;
    }
    out.frames.push_back(std::move(cur));
    out.permutations.push_back(assign);
  }
  return out;
}

// ---------------------------------------------------------------- speeds

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (n <= order) throw Error(ErrorKind::InvalidArgument, "stencil too small for derivative order");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      auto& ci = c[static_cast<std::size_t>(i)];
      auto& cim = c[static_cast<std::size_t>(i - 1)];
      auto& cj = c[static_cast<std::size_t>(j)];
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) ci[m] = c1 * (m * cim[m - 1] - c5 * cim[m]) / c2;
        ci[0] = -c1 * c5 * cim[0] / c2;
      }
      for (int m = mn; m >= 1; --m) cj[m] = (c4 * cj[m] - m * cj[m - 1]) / c3;
      cj[0] = c4 * cj[0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(order)];
  return w;
}

namespace {

std::vector<int> stencil(int k, int last, int width) {
  std::vector<int> idx;
  int start = k - (width - 1) / 2;
  start = std::clamp(start, 0, std::max(0, last - width + 1));
  for (int i = 0; i < width && start + i <= last; ++i) idx.push_back(start + i);
  return idx;
}

}  // namespace

TangentSplit bures_split(const RealVector& eigenvalues, const ComplexMatrix& g, const RealVector& rates,
                         const RealVector& curvatures, const ToleranceConfig& tol, std::optional<double> time) {
  const Eigen::Index d = eigenvalues.size();
  const double floor = tol.support;
  const double rate_limit = std::sqrt(floor);
  TangentSplit out;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lambda = eigenvalues(i);
    if (lambda < floor) {
      if (std::abs(rates(i)) > rate_limit) {
        std::ostringstream os;
        os << "eigenvalue " << i << " = " << lambda << " moves at rate " << rates(i) << " through the support boundary";
        throw Error(ErrorKind::SupportCrossing, os.str(), time);
      }
      out.dropped_modes.push_back(static_cast<int>(i));
      // lambda ~ c (t - t0)^2 near a smooth touch, so lambda'^2 / 4 lambda -> lambda'' / 2.
      // A resting zero mode differentiates rounding noise of order 1e-16 / h^2,
      // so curvatures below the rate limit count as zero.
      if (curvatures(i) > rate_limit) out.classical_speed_sq += curvatures(i) / 2.0;
      continue;
    }
    const double diag = g(i, i).real();
    out.classical_speed_sq += diag * diag / (4.0 * lambda);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double denom = eigenvalues(i) + eigenvalues(j);
      if (denom < floor) continue;
      out.quantum_speed_sq += std::norm(g(i, j)) / denom;
    }
  }
  return out;
}

TangentSplit tangent_split_at(const StateCurve& curve, const ContinuedFrame& frame, int k, const ToleranceConfig& tol) {
  const int last = curve.intervals();
  if (k < 0 || k > last) throw Error(ErrorKind::InvalidArgument, "grid index out of range");
  if (static_cast<int>(frame.frames.size()) != last + 1) throw Error(ErrorKind::InvalidArgument, "frame does not belong to this curve");
  const auto& times = curve.times();
  const auto& states = curve.states();
  const Eigen::Index d = curve.dim();

  const std::vector<int> s1 = stencil(k, last, 3);
  const std::vector<int> s2 = stencil(k, last, (k == 0 || k == last) ? 4 : 3);
  std::vector<double> nodes1, nodes2;
  for (int i : s1) nodes1.push_back(times[static_cast<std::size_t>(i)]);
  for (int i : s2) nodes2.push_back(times[static_cast<std::size_t>(i)]);
  const double tk = times[static_cast<std::size_t>(k)];
  const std::vector<double> w1 = fornberg_weights(tk, nodes1, 1);
  const std::vector<double> w2 = fornberg_weights(tk, nodes2, 2);

  ComplexMatrix rho_dot = ComplexMatrix::Zero(d, d);
  RealVector rates = RealVector::Zero(d);
  for (std::size_t j = 0; j < s1.size(); ++j) {
    const auto idx = static_cast<std::size_t>(s1[j]);
    rho_dot += w1[j] * states[idx].matrix();
    rates += w1[j] * frame.frames[idx].eigenvalues;
  }
  RealVector curvatures = RealVector::Zero(d);
  for (std::size_t j = 0; j < s2.size(); ++j) {
    curvatures += w2[j] * frame.frames[static_cast<std::size_t>(s2[j])].eigenvalues;
  }
  const SpectralDecomposition& here = frame.frames[static_cast<std::size_t>(k)];
  const ComplexMatrix g = here.eigenvectors.adjoint() * rho_dot * here.eigenvectors;
  return bures_split(here.eigenvalues, g, rates, curvatures, tol, tk);
}

EnergyReport integrate_energy(const StateCurve& curve, const ToleranceConfig& tol) {
  const ContinuedFrame frame = continue_frame(curve, tol);
  const auto& times = curve.times();
  EnergyReport report;
  report.grid_size = curve.intervals();
  report.times = times;
  report.speeds.reserve(times.size());
  for (int k = 0; k <= curve.intervals(); ++k) report.speeds.push_back(tangent_split_at(curve, frame, k, tol));
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    report.classical_energy += 0.5 * h * (report.speeds[k].classical_speed_sq + report.speeds[k + 1].classical_speed_sq);
    report.quantum_energy += 0.5 * h * (report.speeds[k].quantum_speed_sq + report.speeds[k + 1].quantum_speed_sq);
  }
  report.total_energy = report.classical_energy + report.quantum_energy;
  return report;
}

}  // namespace prepcost
