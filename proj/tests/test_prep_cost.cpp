#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "prepcost/curve.hpp"
#include "prepcost/prep_cost.hpp"
#include "prepcost/random.hpp"
#include "support.hpp"

using namespace prepcost;
using testing_support::ket;
using testing_support::kind_of;
using testing_support::pure_dm;

namespace {

constexpr double kPi = std::numbers::pi;

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

DensityMatrix plus() { return pure_dm(ket({1.0, 1.0})); }

// arccos of the best overlap with a reference-basis vector
double fs_to_basis(const PureState& psi, const ReferenceBasis& basis) {
  const double best = (basis.matrix().adjoint() * psi.amplitudes()).cwiseAbs().maxCoeff();
  return std::acos(std::min(1.0, best));
}

DensityMatrix diagonal_in(const ReferenceBasis& basis, const RealVector& p) { return basis.diagonal_state(p); }

}  // namespace

TEST_CASE("ReferenceBasis") {
  CHECK(kind_of([] { ReferenceBasis(2.0 * ComplexMatrix::Identity(2, 2)); }) == ErrorKind::NotUnitary);
  CHECK(kind_of([] { ReferenceBasis(ComplexMatrix::Identity(2, 3)); }) == ErrorKind::DimensionMismatch);
  Engine rng(3);
  const ReferenceBasis b(haar_unitary(3, rng));
  const DensityMatrix free = b.diagonal_state(vec({0.5, 0.3, 0.2}));
  CHECK(b.is_diagonal(free));
  CHECK(!ReferenceBasis::computational(3).is_diagonal(free));
  const RealVector p = b.populations(free);
  CHECK(p(0) == doctest::Approx(0.5));
  CHECK(p(2) == doctest::Approx(0.2));
}

TEST_CASE("isospectral free sets: counts") {
  const ReferenceBasis q = ReferenceBasis::computational(2);
  const auto two = isospectral_free_states(DensityMatrix::diagonal(vec({0.8, 0.2})), q);
  REQUIRE(two.size() == 2);
  CHECK(two.states[0].matrix()(0, 0).real() == doctest::Approx(0.8));
  CHECK(two.states[1].matrix()(0, 0).real() == doctest::Approx(0.2));

  const auto three = isospectral_free_states(DensityMatrix::diagonal(vec({0.5, 0.5, 0.0})), ReferenceBasis::computational(3));
  CHECK(three.size() == 3);
  CHECK(isospectral_free_states(DensityMatrix::maximally_mixed(4), ReferenceBasis::computational(4)).size() == 1);

  // d! / prod m_i! for a few multiplicity patterns
  CHECK(isospectral_free_states(DensityMatrix::diagonal(vec({0.4, 0.3, 0.2, 0.1})), ReferenceBasis::computational(4)).size() == 24);
  CHECK(isospectral_free_states(DensityMatrix::diagonal(vec({0.3, 0.3, 0.2, 0.2})), ReferenceBasis::computational(4)).size() == 6);
  CHECK(isospectral_free_states(DensityMatrix::diagonal(vec({0.4, 0.2, 0.2, 0.2})), ReferenceBasis::computational(4)).size() == 4);

  CHECK(kind_of([] { isospectral_free_states(DensityMatrix::maximally_mixed(9), ReferenceBasis::computational(9)); }) ==
        ErrorKind::DimensionTooLarge);
}

TEST_CASE("isospectral free sets: members are distinct, diagonal and isospectral") {
  Engine rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial % 4;
    const ReferenceBasis basis(haar_unitary(d, rng));
    const DensityMatrix target = random_density_matrix(d, d, rng);
    const auto set = isospectral_free_states(target, basis);
    const RealVector spectrum = eigendecompose(target.matrix()).eigenvalues;
    CHECK((set.spectrum - spectrum).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(set.size() == std::size_t(std::tgamma(double(d) + 1.0) + 0.5));
    for (std::size_t a = 0; a < set.size(); ++a) {
      CHECK(basis.is_diagonal(set.states[a]));
      CHECK((eigendecompose(set.states[a].matrix()).eigenvalues - spectrum).cwiseAbs().maxCoeff() < 1e-12);
      for (std::size_t b = 0; b < a; ++b) {
        CHECK((set.states[a].matrix() - set.states[b].matrix()).cwiseAbs().maxCoeff() > 1e-6);
        const ComplexMatrix comm = set.states[a].matrix() * set.states[b].matrix() - set.states[b].matrix() * set.states[a].matrix();
        CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("pure_geodesic endpoints, speed and energy") {
  const PureState zero = PureState::basis(2, 0);
  const PureState one = PureState::basis(2, 1);
  const PureState p = PureState::normalized(ket({1.0, 1.0}));

  const StateCurve c = pure_geodesic(zero, p, 1.0, 1000);
  CHECK((c.states().front().matrix() - DensityMatrix(zero).matrix()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((c.states().back().matrix() - plus().matrix()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(integrate_energy(c).total_energy - kPi * kPi / 16.0) <= 1e-5);

  const EnergyReport flip = integrate_energy(pure_geodesic(zero, one, 1.0, 1000));
  CHECK(std::abs(flip.total_energy - kPi * kPi / 4.0) <= 1e-5);

  // T scaling: E = d^2 / T
  CHECK(std::abs(integrate_energy(pure_geodesic(zero, p, 2.5, 1000)).total_energy - kPi * kPi / 16.0 / 2.5) <= 1e-5);

  const StateCurve still = pure_geodesic(p, p, 1.0, 10);
  CHECK(integrate_energy(still).total_energy == doctest::Approx(0.0));
  CHECK(kind_of([&] { pure_geodesic(zero, PureState::basis(3, 0), 1.0, 10); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("pure_geodesic aligns the phase of the target") {
  // -i|+> has overlap -i/sqrt2 with |0>; the curve must still be the short arc
  const PureState zero = PureState::basis(2, 0);
  const PureState rotated = PureState::normalized(Complex(0.0, -1.0) * ket({1.0, 1.0}));
  const EnergyReport r = integrate_energy(pure_geodesic(zero, rotated, 1.0, 1000));
  CHECK(std::abs(r.total_energy - kPi * kPi / 16.0) <= 1e-5);
}

TEST_CASE("property: geodesic speed is constant and matches Fubini-Study") {
  Engine rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const PureState a = random_pure_state(d, rng);
    const PureState b = random_pure_state(d, rng);
    const double dist = fubini_study(a, b);
    const StateCurve c = pure_geodesic(a, b, 1.0, 400);
    // chords between consecutive samples all have the same length d / K
    for (int k = 0; k < c.intervals(); ++k) {
      const double chord = std::acos(std::min(1.0, oracle::fidelity(c.states()[k].matrix(), c.states()[k + 1].matrix())));
      CHECK(std::abs(chord - dist / 400.0) <= 1e-6 * dist / 400.0 + 1e-12);
    }
    // finite-difference speeds on a finer grid; the one-sided endpoint
    // stencils dominate the spread
    const EnergyReport r = integrate_energy(pure_geodesic(a, b, 1.0, 4000));
    double lo = 1e300, hi = 0.0;
    for (const auto& s : r.speeds) {
      lo = std::min(lo, std::sqrt(s.total()));
      hi = std::max(hi, std::sqrt(s.total()));
    }
    CHECK(hi - lo <= 1e-6 * hi);
    CHECK(std::abs(hi - dist) <= 1e-6 * dist);
    CHECK(std::abs(r.total_energy - dist * dist) <= 1e-5);
  }
}

TEST_CASE("closest purifications: examples and failure modes") {
  const ReferenceBasis q = ReferenceBasis::computational(2);
  const DensityMatrix same = DensityMatrix::diagonal(vec({0.7, 0.3}));
  const PurificationPair id = closest_purifications(same, same, q);
  CHECK(id.overlap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((id.free_purification.amplitudes() - id.target_purification.amplitudes()).norm() < 1e-12);

  const PurificationPair mixed = closest_purifications(DensityMatrix::maximally_mixed(2), plus(), q);
  CHECK(mixed.overlap == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(mixed.perturbation == 0.0);

  // |+> leaves the support of |0><0|
  const DensityMatrix ground(PureState::basis(2, 0));
  PurificationOptions strict;
  strict.allow_fallback = false;
  CHECK(kind_of([&] { closest_purifications(ground, plus(), q, strict); }) == ErrorKind::SupportMismatch);
  const PurificationPair fallback = closest_purifications(ground, plus(), q);
  CHECK(fallback.perturbation > 0.0);
  CHECK(fallback.perturbation <= 1e-9);
  CHECK(fallback.overlap == doctest::Approx(fidelity(ground, plus())).epsilon(1e-4));
  // a target inside the support needs no perturbation
  CHECK(closest_purifications(ground, ground, q, strict).perturbation == 0.0);
}

TEST_CASE("property: purification overlap equals the fidelity") {
  Engine rng(13);
  const int dims[] = {2, 3, 4};
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = dims[trial % 3];
    const ReferenceBasis basis = trial % 2 ? ReferenceBasis(haar_unitary(d, rng)) : ReferenceBasis::computational(d);
    const DensityMatrix free = basis.diagonal_state(dirichlet_flat(d, rng));
    const DensityMatrix target = random_density_matrix(d, d, rng);
    const PurificationPair pair = closest_purifications(free, target, basis);
    CHECK(pair.perturbation == 0.0);
    CHECK(std::abs(pair.overlap - oracle::fidelity(free.matrix(), target.matrix())) <= 1e-9);
    CHECK(std::abs(pair.overlap - std::abs(pair.free_purification.amplitudes().dot(pair.target_purification.amplitudes()))) <= 1e-12);
    const int sys[] = {int(d), int(d)};
    const int keep[] = {0};
    const DensityMatrix rf = partial_trace(DensityMatrix(pair.free_purification), sys, keep);
    const DensityMatrix rt = partial_trace(DensityMatrix(pair.target_purification), sys, keep);
    CHECK((rf.matrix() - free.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((rt.matrix() - target.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("purification identities hold for rank-deficient targets inside the support") {
  Engine rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const DensityMatrix free = DensityMatrix::diagonal(dirichlet_flat(d, rng));
    const DensityMatrix target = random_density_matrix(d, 1, rng);
    const PurificationPair pair = closest_purifications(free, target, ReferenceBasis::computational(d));
    CHECK(std::abs(pair.overlap - oracle::fidelity(free.matrix(), target.matrix())) <= 1e-9);
    const int sys[] = {int(d), int(d)};
    const int keep[] = {0};
    CHECK((partial_trace(DensityMatrix(pair.target_purification), sys, keep).matrix() - target.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("purification lower bound examples") {
  const ReferenceBasis q = ReferenceBasis::computational(2);
  CHECK(purification_lower_bound(DensityMatrix::diagonal(vec({0.6, 0.4})), q, 1.0).value == doctest::Approx(0.0));
  const PurificationBound plus_bound = purification_lower_bound(plus(), q, 1.0);
  CHECK(plus_bound.value == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-12));
  CHECK(plus_bound.angle == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(purification_lower_bound(plus(), q, 2.0).value == doctest::Approx(kPi * kPi / 32.0).epsilon(1e-12));
}

TEST_CASE("qubit closed form against the direct oracle") {
  CHECK(qubit_closed_form({0.0, 0.0, 0.7}, 1.0) == doctest::Approx(0.0));
  CHECK(qubit_closed_form({0.0, 0.0, -0.7}, 1.0) == doctest::Approx(0.0));
  CHECK(qubit_closed_form({1.0, 0.0, 0.0}, 1.0) == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-12));
  CHECK(qubit_closed_form({0.3, 0.2, 0.4}, 1.0) == doctest::Approx(oracle::qubit_bound(0.3, 0.2, 0.4, 1.0)).epsilon(1e-10));
  CHECK(qubit_closed_form({0.0, 0.0, 0.0}, 1.0) == doctest::Approx(0.0));
  CHECK(kind_of([] { qubit_closed_form({1.0, 0.1, 0.0}, 1.0); }) == ErrorKind::InvalidBloch);

  Engine rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ReferenceBasis q = ReferenceBasis::computational(2);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::Vector3d r(u(rng), u(rng), u(rng));
    if (r.norm() > 1.0) r /= 1.0 + 1e-3 + r.norm() * u(rng) * u(rng);
    if (r.norm() > 1.0) r.normalize();
    const double horizon = 0.5 + std::abs(u(rng));
    const double expected = oracle::qubit_bound(r.x(), r.y(), r.z(), horizon);
    const double closed = qubit_closed_form(r, horizon);
    CHECK(std::abs(closed - expected) <= 1e-8);
    CHECK(closed >= 0.0);
    CHECK(closed <= kPi * kPi / (4.0 * horizon) + 1e-12);
    CHECK(std::abs(closed - purification_lower_bound(bloch_state(r), q, horizon).value) <= 1e-8);
    // the signed-r_z transcription only matches in the upper hemisphere
    if (r.z() >= 0.0) CHECK(std::abs(qubit_closed_form_as_printed(r, horizon) - expected) <= 1e-8);
  }
  // a lower-hemisphere point where it does not
  const double printed = qubit_closed_form_as_printed({0.3, 0.2, -0.4}, 1.0);
  CHECK(std::abs(printed - oracle::qubit_bound(0.3, 0.2, -0.4, 1.0)) > 0.1);
}

TEST_CASE("cost bracket examples") {
  const ReferenceBasis q = ReferenceBasis::computational(2);
  const CostBracket free = qu_cost_bracket(DensityMatrix::diagonal(vec({0.9, 0.1})), q, 1.0, 200);
  CHECK(free.lower == doctest::Approx(0.0));
  CHECK(free.upper == doctest::Approx(0.0));

  const CostBracket p = qu_cost_bracket(plus(), q, 1.0, 1000);
  REQUIRE(p.exact.has_value());
  CHECK(*p.exact == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-12));
  CHECK(std::abs(p.lower - p.upper) <= 1e-5);
  CHECK(std::abs(p.upper_sampled - p.upper) <= 1e-5);
  REQUIRE(p.qubit_closed_form.has_value());
  CHECK(*p.qubit_closed_form == doctest::Approx(p.lower).epsilon(1e-10));
  CHECK(p.free_states == 2);

  Engine rng(33);
  const DensityMatrix mixed = random_density_matrix(2, 2, rng);
  const CostBracket m = qu_cost_bracket(mixed, q, 1.0, 400);
  CHECK(m.lower <= m.upper + 1e-8);
  CHECK(std::isfinite(m.upper));
  CHECK(!m.exact.has_value());
  // the reported unitary carries the chosen free state onto the target
  const ComplexMatrix reached = m.upper_unitary * m.upper_free_state.matrix() * m.upper_unitary.adjoint();
  CHECK((reached - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(m.upper_sampled - m.upper) <= 1e-4 * std::max(1.0, m.upper));

  // no closed form outside the computational basis
  Engine rng2(34);
  CHECK(!qu_cost_bracket(mixed, ReferenceBasis(haar_unitary(2, rng2)), 1.0, 50).qubit_closed_form.has_value());
}

TEST_CASE("interpolation energy matches the sampled path") {
  Engine rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const ReferenceBasis basis(haar_unitary(d, rng));
    const DensityMatrix target = random_density_matrix(d, d, rng);
    const auto set = isospectral_free_states(target, basis);
    const std::size_t a = static_cast<std::size_t>(trial) % set.size();
    const ComplexMatrix v = interpolation_unitary(target, set, a, basis);
    CHECK(is_unitary(v, 1e-10));
    CHECK(((v * set.states[a].matrix() * v.adjoint()) - target.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    const double analytic = interpolation_energy(set.states[a], v, 1.3);
    const double sampled = integrate_energy(make_curve(InterpolationGenerator{v, set.states[a], 1.3}, 1000)).total_energy;
    CHECK(std::abs(analytic - sampled) <= 1e-5 * std::max(1.0, analytic));
  }
}

TEST_CASE("property: faithfulness of the lower bound") {
  Engine rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const ReferenceBasis basis = trial % 2 ? ReferenceBasis(haar_unitary(d, rng)) : ReferenceBasis::computational(d);
    const CostBracket free = qu_cost_bracket(diagonal_in(basis, dirichlet_flat(d, rng)), basis, 1.0, 50);
    CHECK(free.lower <= 1e-9);
    CHECK(free.upper <= 1e-9);
    const DensityMatrix target = random_density_matrix(d, 1 + trial % int(d), rng);
    CHECK(!basis.is_diagonal(target));
    CHECK(qu_cost_bracket(target, basis, 1.0, 50).lower > 1e-9);
  }
}

TEST_CASE("property: the bracket depends on the target, basis and horizon only") {
  // the free input state is not an argument; repeated calls agree bit for bit
  Engine rng(52);
  const DensityMatrix target = random_density_matrix(3, 3, rng);
  const ReferenceBasis basis(haar_unitary(3, rng));
  const CostBracket a = qu_cost_bracket(target, basis, 1.7, 100);
  const CostBracket b = qu_cost_bracket(target, basis, 1.7, 100);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.upper_sampled == b.upper_sampled);
  // the horizon enters as 1/T
  const CostBracket c = qu_cost_bracket(target, basis, 3.4, 100);
  CHECK(c.lower == doctest::Approx(a.lower / 2.0).epsilon(1e-12));
  CHECK(c.upper == doctest::Approx(a.upper / 2.0).epsilon(1e-12));
}

TEST_CASE("property: pure targets are exact") {
  Engine rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const ReferenceBasis basis = trial % 2 ? ReferenceBasis(haar_unitary(d, rng)) : ReferenceBasis::computational(d);
    const PureState psi = random_pure_state(d, rng);
    const double horizon = 1.0;
    const CostBracket b = qu_cost_bracket(DensityMatrix(psi), basis, horizon, 2000);
    const double fs = fs_to_basis(psi, basis);
    REQUIRE(b.exact.has_value());
    CHECK(std::abs(b.upper - b.lower) <= 1e-4);
    CHECK(std::abs(b.upper_sampled - b.lower) <= 1e-4);
    CHECK(std::abs(b.lower - fs * fs / horizon) <= 1e-10);
    CHECK(std::abs(b.upper - fs * fs / horizon) <= 1e-4);
  }
}

TEST_CASE("property: lower <= upper on random mixed targets") {
  Engine rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const ReferenceBasis basis = trial % 2 ? ReferenceBasis(haar_unitary(d, rng)) : ReferenceBasis::computational(d);
    const DensityMatrix target = random_density_matrix(d, 1 + (trial / 3) % int(d), rng);
    const CostBracket b = qu_cost_bracket(target, basis, 1.0, 20);
    CHECK(b.lower >= 0.0);
    CHECK(b.lower <= b.upper + 1e-8);
    if (b.exact) CHECK(*b.exact <= b.upper + 1e-8);
  }
}

TEST_CASE("seminorm and gate-count bound") {
  CHECK(seminorm(pauli::z()) == doctest::Approx(2.0));
  CHECK(seminorm(pauli::identity()) == doctest::Approx(0.0));
  Engine rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_hermitian(4, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    CHECK(seminorm(h) == doctest::Approx(es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff()).epsilon(1e-12));
  }

  CHECK(gate_count_bound(0.0, 1.0) == 0);
  CHECK(gate_count_bound(kPi * kPi / 16.0, 1.0) == 2);
  CHECK(gate_count_bound(9.0 / 4.0, 1.0) == 3);
  CHECK(gate_count_bound(1.0, 0.5) == 4);
  CHECK(gate_count_bound(1.01, 0.5) == 5);
  CHECK(kind_of([] { gate_count_bound(1.0, 0.0); }) == ErrorKind::NonpositiveSeminorm);
  CHECK(kind_of([] { gate_count_bound(-1.0, 1.0); }) == ErrorKind::InvalidArgument);
  long previous = 0;
  for (int i = 0; i <= 400; ++i) {
    const long n = gate_count_bound(i * 0.01, 0.7);
    CHECK(n >= previous);
    previous = n;
  }
}

TEST_CASE("three commuting gates on GHZ saturate the bound") {
  // H = sum_l sigma_z^(l) / 2, each with seminorm 1
  const ComplexMatrix i2 = pauli::identity();
  const ComplexMatrix half_z = 0.5 * pauli::z();
  const ComplexMatrix h = kron(kron(half_z, i2), i2) + kron(kron(i2, half_z), i2) + kron(kron(i2, i2), half_z);
  ComplexVector ghz = ComplexVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const EnergyReport r = integrate_energy(make_curve(UnitaryGenerator{h, DensityMatrix(PureState(ghz)), 1.0}, 2000));
  CHECK(std::abs(r.total_energy - 9.0 / 4.0) <= 1e-4);
  CHECK(oracle::variance(ghz, h) == doctest::Approx(9.0 / 4.0));
  CHECK(gate_count_bound(r.total_energy / 1.0, seminorm(half_z)) == 3);
}

TEST_CASE("property: variance chain for commuting gates") {
  Engine rng(91);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const Eigen::Index d = Eigen::Index(1) << n;
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    double sum_seminorms = 0.0;
    for (int l = 0; l < n; ++l) {
      // diagonal (hence commuting) local terms a sigma_z + b I on qubit l
      const ComplexMatrix local = u(rng) * pauli::z() + u(rng) * pauli::identity();
      ComplexMatrix full = ComplexMatrix::Identity(1, 1);
      for (int m = 0; m < n; ++m) full = kron(full, m == l ? local : pauli::identity());
      total += full;
      sum_seminorms += seminorm(local);
    }
    const DensityMatrix rho = random_density_matrix(d, 1 + trial % int(d), rng);
    const double v = variance(rho, total);
    const double s = seminorm(total);
    CHECK(4.0 * v <= s * s + 1e-10);
    CHECK(s * s <= sum_seminorms * sum_seminorms + 1e-10);
  }
}
