#pragma once

// Random test curves and small state builders.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "prepcost/curve.hpp"
#include "prepcost/random.hpp"

namespace testing_support {

using namespace prepcost;

enum class CurveKind { General, Unitary, Diagonal };

// U(t) Lambda(t) U(t)^dagger with U(t) = exp(-i (H0 t + H1 t^2)) and each
// eigenvalue a positive quadratic in t. Unitary curves keep Lambda fixed,
// diagonal curves keep U fixed.
inline SampleList random_smooth_curve(Eigen::Index dim, int intervals, Engine& rng, CurveKind kind, double horizon = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ComplexMatrix h0 = random_hermitian(dim, rng, 0.8);
  const ComplexMatrix h1 = random_hermitian(dim, rng, 0.5);
  const ComplexMatrix base = haar_unitary(dim, rng);
  RealVector a(dim), b(dim), c(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    a(i) = 0.6 + unit(rng);
    b(i) = 0.5 * (unit(rng) - 0.5);
    c(i) = 0.5 * (unit(rng) - 0.5);
  }
  SampleList out;
  for (int k = 0; k <= intervals; ++k) {
    const double t = horizon * k / intervals;
    const double s = t / horizon;
    RealVector lambda = a;
    if (kind != CurveKind::Unitary) lambda = a + b * s + c * s * s;
    lambda /= lambda.sum();
    ComplexMatrix u = base;
    if (kind != CurveKind::Diagonal) u = unitary_exp(-(t * h0 + t * t * h1)) * base;
    out.times.push_back(t);
    out.states.emplace_back(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
  }
  return out;
}

inline DensityMatrix random_state(Eigen::Index dim, Engine& rng) {
  return random_density_matrix(dim, dim, rng);
}

inline DensityMatrix pure_dm(const ComplexVector& v) { return DensityMatrix(PureState::normalized(v)); }

inline ComplexVector ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v(i++) = a;
  return v;
}

// Kind of the Error raised by f; fails the test if nothing is thrown.
template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

inline std::vector<double> times_of(const StateCurve& c) { return c.times(); }

}  // namespace testing_support
