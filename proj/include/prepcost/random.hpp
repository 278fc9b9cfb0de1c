#pragma once

// Seeded random objects. Restart `i` of any optimizer draws from
// `restart_engine(master, i)`, so results do not depend on scheduling.

#include <cstdint>
#include <random>

#include "prepcost/hermitian.hpp"

namespace prepcost {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Engine restart_engine(std::uint64_t master_seed, std::uint64_t index);

// Haar-distributed unitary (QR of a Ginibre matrix with the R-phase fix).
ComplexMatrix haar_unitary(Eigen::Index dim, Engine& rng);
// Uniform point on the probability simplex.
RealVector dirichlet_flat(Eigen::Index dim, Engine& rng);
PureState random_pure_state(Eigen::Index dim, Engine& rng);
// Induced measure: partial trace of a random pure state on dim x rank.
DensityMatrix random_density_matrix(Eigen::Index dim, Eigen::Index rank, Engine& rng);
ComplexMatrix random_hermitian(Eigen::Index dim, Engine& rng, double scale = 1.0);

}  // namespace prepcost
