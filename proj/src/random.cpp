#include "prepcost/random.hpp"

#include <cmath>

namespace prepcost {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Engine restart_engine(std::uint64_t master_seed, std::uint64_t index) {
  return Engine(splitmix64(splitmix64(master_seed) ^ (index * 0xd1b54a32d192ed03ULL)));
}

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

ComplexMatrix haar_unitary(Eigen::Index dim, Engine& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

RealVector dirichlet_flat(Eigen::Index dim, Engine& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVector p(dim);
  for (Eigen::Index i = 0; i < dim; ++i) p(i) = expo(rng);
  return p / p.sum();
}

PureState random_pure_state(Eigen::Index dim, Engine& rng) {
  const ComplexMatrix g = ginibre(dim, 1, rng);
  return PureState::normalized(g.col(0));
}

DensityMatrix random_density_matrix(Eigen::Index dim, Eigen::Index rank, Engine& rng) {
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

ComplexMatrix random_hermitian(Eigen::Index dim, Engine& rng, double scale) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  return scale * 0.5 * (g + g.adjoint());
}

}  // namespace prepcost
