#include "doctest.h"

#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "prepcost/hermitian.hpp"
#include "prepcost/random.hpp"
#include "support.hpp"

using namespace prepcost;
using testing_support::ket;
using testing_support::kind_of;
using testing_support::pure_dm;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix zero() { return DensityMatrix(PureState::basis(2, 0)); }
DensityMatrix one() { return DensityMatrix(PureState::basis(2, 1)); }
DensityMatrix plus() { return pure_dm(ket({kInvSqrt2, kInvSqrt2})); }

}  // namespace

TEST_CASE("eigendecompose on the qubit examples") {
  const auto mixed = eigendecompose(DensityMatrix::maximally_mixed(2).matrix());
  CHECK(mixed.eigenvalues(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mixed.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-15));
  // fully degenerate: the canonical basis is the computational one
  CHECK((mixed.eigenvectors - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const auto ground = eigendecompose(zero().matrix());
  CHECK(ground.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(std::abs(ground.eigenvalues(1)) < 1e-15);
  CHECK(std::abs(ground.eigenvectors(0, 0) - Complex(1.0, 0.0)) < 1e-12);

  const auto z = eigendecompose(bloch_state({0.0, 0.0, 0.6}).matrix());
  CHECK(z.eigenvalues(0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(z.eigenvalues(1) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("eigendecompose rejects non-Hermitian input") {
  ComplexMatrix a(2, 2);
  a << 1.0, 0.5, 0.0, 0.0;
  CHECK(kind_of([&] { eigendecompose(a); }) == ErrorKind::NonHermitianInput);
}

TEST_CASE("eigenvectors are phase fixed and degenerate bases are canonical") {
  Engine rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = random_hermitian(4, rng);
    const auto sd = eigendecompose(h);
    for (Eigen::Index c = 0; c < 4; ++c) {
      Eigen::Index lead = 0;
      sd.eigenvectors.col(c).cwiseAbs().maxCoeff(&lead);
      CHECK(std::abs(sd.eigenvectors(lead, c).imag()) < 1e-12);
      CHECK(sd.eigenvectors(lead, c).real() > 0.0);
    }
  }
  // the same degenerate eigenspace described through two different matrices
  const ComplexMatrix u = haar_unitary(3, rng);
  RealVector w(3);
  w << 0.4, 0.4, 0.2;
  const ComplexMatrix a = u * w.cast<Complex>().asDiagonal() * u.adjoint();
  ComplexMatrix v = u;
  const ComplexMatrix mix = haar_unitary(2, rng);
  v.leftCols(2) = u.leftCols(2) * mix;
  const ComplexMatrix b = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  const auto sa = eigendecompose(a);
  const auto sb = eigendecompose(b);
  CHECK((sa.eigenvectors.leftCols(2) - sb.eigenvectors.leftCols(2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("eigendecompose reconstructs and is orthonormal") {
  Engine rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 1 + trial % 6;
    const ComplexMatrix h = random_hermitian(d, rng);
    const auto sd = eigendecompose(h);
    CHECK((sd.reconstruct() - h).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Eigen::Index i = 1; i < d; ++i) CHECK(sd.eigenvalues(i - 1) >= sd.eigenvalues(i));
  }
  const DensityMatrix rho = random_density_matrix(4, 4, rng);
  const auto sd = eigendecompose(rho.matrix());
  CHECK(sd.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sd.eigenvalues.minCoeff() >= -1e-10);
}

TEST_CASE("matrix_sqrt examples and properties") {
  CHECK((matrix_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0 / 13.0;
  d(1, 1) = 9.0 / 13.0;
  const ComplexMatrix r = matrix_sqrt(d);
  CHECK(r(0, 0).real() == doctest::Approx(2.0 / std::sqrt(13.0)).epsilon(1e-14));
  CHECK(r(1, 1).real() == doctest::Approx(3.0 / std::sqrt(13.0)).epsilon(1e-14));
  CHECK(std::abs(r(0, 1)) < 1e-15);

  Engine rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const ComplexMatrix a = random_density_matrix(n, n, rng).matrix();
    const ComplexMatrix b = matrix_sqrt(a);
    CHECK((b * b - a).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((b - oracle::sqrtm(a)).cwiseAbs().maxCoeff() <= 1e-8);
    // sqrt(B^2) = B
    CHECK((matrix_sqrt(b * b) - b).cwiseAbs().maxCoeff() <= 1e-8);
  }

  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -0.1;
  CHECK(kind_of([&] { matrix_sqrt(neg); }) == ErrorKind::NotPositive);
}

TEST_CASE("fidelity examples") {
  CHECK(fidelity(plus(), plus()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(zero(), one()) == doctest::Approx(0.0));
  CHECK(fidelity(zero(), plus()) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(kind_of([&] { fidelity(zero(), DensityMatrix::maximally_mixed(3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("fidelity agrees with the product-spectrum oracle and is symmetric and unitarily invariant") {
  Engine rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const DensityMatrix a = random_density_matrix(d, 1 + trial % d, rng);
    const DensityMatrix b = random_density_matrix(d, d, rng);
    const double f = fidelity(a, b);
    CHECK(std::abs(f - oracle::fidelity(a.matrix(), b.matrix())) <= 1e-9);
    CHECK(std::abs(f - fidelity(b, a)) <= 1e-9);
    const ComplexMatrix u = haar_unitary(d, rng);
    CHECK(std::abs(f - fidelity(conjugate(a, u), conjugate(b, u))) <= 1e-9);
    if (d == 2) CHECK(std::abs(f - oracle::qubit_fidelity(a.matrix(), b.matrix())) <= 1e-9);
  }
}

TEST_CASE("bures_angle examples and metric axioms") {
  CHECK(bures_angle(plus(), plus()) < 1e-7);
  CHECK(bures_angle(zero(), one()) == doctest::Approx(std::numbers::pi / 2));
  CHECK(bures_angle(zero(), plus()) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));

  Engine rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const DensityMatrix a = random_density_matrix(d, d, rng);
    const DensityMatrix b = random_density_matrix(d, 1 + trial % d, rng);
    const DensityMatrix c = random_density_matrix(d, d, rng);
    const double ab = bures_angle(a, b), bc = bures_angle(b, c), ac = bures_angle(a, c);
    CHECK(std::abs(ab - bures_angle(b, a)) <= 1e-9);
    CHECK(bures_angle(a, a) <= 1e-7);
    CHECK(ac <= ab + bc + 1e-8);
    CHECK(ab >= 0.0);
    CHECK(ab <= std::numbers::pi / 2 + 1e-12);
  }
}

TEST_CASE("fubini_study matches the Bures angle of the projectors") {
  const PureState z = PureState::basis(2, 0);
  const PureState o = PureState::basis(2, 1);
  const PureState p = PureState::normalized(ket({1.0, 1.0}));
  CHECK(fubini_study(z, z) == doctest::Approx(0.0));
  CHECK(fubini_study(z, o) == doctest::Approx(std::numbers::pi / 2));
  CHECK(fubini_study(z, p) == doctest::Approx(std::numbers::pi / 4));
  Engine rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState a = random_pure_state(3, rng);
    const PureState b = random_pure_state(3, rng);
    CHECK(std::abs(fubini_study(a, b) - bures_angle(DensityMatrix(a), DensityMatrix(b))) <= 1e-9);
  }
}

TEST_CASE("variance examples") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  CHECK(variance(zero(), h) == doctest::Approx(0.0));
  CHECK(variance(plus(), h) == doctest::Approx(1.0));
  CHECK(variance(DensityMatrix::maximally_mixed(2), pauli::z()) == doctest::Approx(1.0));
  Engine rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density_matrix(3, 3, rng);
    const ComplexMatrix g = random_hermitian(3, rng);
    CHECK(variance(rho, g) == doctest::Approx(oracle::variance(rho.matrix(), g)).epsilon(1e-12));
  }
}

TEST_CASE("kron and partial_trace") {
  Engine rng(37);
  const DensityMatrix a = random_density_matrix(2, 2, rng);
  const DensityMatrix b = random_density_matrix(3, 3, rng);
  const DensityMatrix ab = kron(a, b);
  const std::vector<int> dims{2, 3};
  const std::vector<int> first{0}, second{1};
  CHECK((partial_trace(ab, dims, first).matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((partial_trace(ab, dims, second).matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix bell = pure_dm(ket({kInvSqrt2, 0.0, 0.0, kInvSqrt2}));
  const std::vector<int> qubits{2, 2};
  CHECK((partial_trace(bell, qubits, first).matrix() - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((partial_trace(bell, qubits, second).matrix() - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix quarter = kron(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2));
  CHECK((quarter.matrix() - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-16);

  // spectrum of a product is the set of products
  const RealVector la = eigendecompose(a.matrix()).eigenvalues;
  const RealVector lb = eigendecompose(b.matrix()).eigenvalues;
  std::vector<double> expected;
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) expected.push_back(la(i) * lb(j));
  std::sort(expected.rbegin(), expected.rend());
  const RealVector lab = eigendecompose(ab.matrix()).eigenvalues;
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(lab(static_cast<Eigen::Index>(i)) == doctest::Approx(expected[i]).epsilon(1e-12));

  // tracing out the middle of three factors keeps the outer ones in order
  const DensityMatrix c = random_density_matrix(2, 2, rng);
  const std::vector<int> three{2, 3, 2}, outer{0, 2};
  const DensityMatrix abc = kron(kron(a, b), c);
  CHECK((partial_trace(abc, three, outer).matrix() - kron(a, c).matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("principal logarithm of a unitary") {
  Engine rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix u = haar_unitary(4, rng);
    const ComplexMatrix k = principal_log_unitary(u);
    CHECK(is_hermitian(k, 1e-12));
    CHECK((unitary_exp(k) - u).cwiseAbs().maxCoeff() < 1e-10);
    const RealVector w = eigendecompose(k).eigenvalues;
    CHECK(w.maxCoeff() <= std::numbers::pi + 1e-12);
    CHECK(w.minCoeff() > -std::numbers::pi);
  }
  // -I sits on the branch cut and maps to +pi
  const ComplexMatrix k = principal_log_unitary(-ComplexMatrix::Identity(2, 2));
  CHECK(k(0, 0).real() == doctest::Approx(std::numbers::pi));
  CHECK(kind_of([&] { principal_log_unitary(2.0 * ComplexMatrix::Identity(2, 2)); }) == ErrorKind::NotUnitary);
}

TEST_CASE("state validation") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK(kind_of([&] { DensityMatrix{m}; }) == ErrorKind::InvalidTrace);
  m << 1.2, 0.0, 0.0, -0.2;
  CHECK(kind_of([&] { DensityMatrix{m}; }) == ErrorKind::NotPositive);
  m << 0.5, 0.1, 0.3, 0.5;
  CHECK(kind_of([&] { DensityMatrix{m}; }) == ErrorKind::NonHermitianInput);
  CHECK(kind_of([&] { PureState(ket({1.0, 1.0})); }) == ErrorKind::InvalidNorm);

  // tiny negative eigenvalues are clamped
  m << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
  const DensityMatrix clamped(m);
  CHECK(eigendecompose(clamped.matrix()).eigenvalues.minCoeff() >= 0.0);
}

TEST_CASE("Bloch round trip") {
  const Eigen::Vector3d r(0.3, -0.2, 0.5);
  CHECK((bloch_vector(bloch_state(r)) - r).norm() < 1e-15);
  CHECK(kind_of([&] { bloch_state(Eigen::Vector3d(1.0, 0.5, 0.0)); }) == ErrorKind::InvalidBloch);
  CHECK((bloch_state(r).matrix() - oracle::bloch(r.x(), r.y(), r.z())).cwiseAbs().maxCoeff() < 1e-16);
}
