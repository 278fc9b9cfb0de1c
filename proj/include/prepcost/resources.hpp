#pragma once

// Bures coherence, Bures discord over product bases, the k-local discord
// hierarchy, and the inequality chains tying them to the preparation cost.

#include <cstdint>
#include <vector>

#include "prepcost/prep_cost.hpp"

namespace prepcost {

struct CoherenceOptions {
  int restarts = 16;               // Dirichlet starting points beyond the fixed ones
  std::uint64_t seed = 0x5eedULL;
  int max_iterations = 2000;
  double gap_tolerance = 1e-12;    // duality gap of the simplex problem
  double step_tolerance = 1e-15;   // fidelity improvement per iteration
  bool isospectral_seed = true;    // also start from the best isospectral free state (dim <= 8)
  bool pure_closed_form = true;    // arccos max_i |<i|psi>| for pure targets instead of the solver
};

struct ResourceReport {
  double value = 0.0;      // Bures angle in radians
  double fidelity = 1.0;   // cos(value)
  int restarts_used = 0;
  bool converged = true;
  long evaluations = 0;
  ComplexMatrix basis;                      // argmin basis, columns, original subsystem order
  std::vector<ComplexMatrix> basis_blocks;  // one unitary per block
  std::vector<std::vector<int>> partition;  // subsystem blocks
  RealVector populations;                   // closest incoherent state in `basis`
};

// Bures angle from `target` to the states diagonal in `basis`.
ResourceReport coherence_bures(const DensityMatrix& target, const ReferenceBasis& basis,
                               const CoherenceOptions& options = {});

struct DiscordOptions {
  int restarts = 32;
  std::uint64_t seed = 0x5eedULL;
  bool asymmetric = false;      // optimize the first party only; the second stays in its reference basis
  int max_evaluations = 6000;   // per restart
  double initial_step = 0.3;
  double early_exit = 1e-14;    // stop restarting once 1 - F drops below this
  CoherenceOptions inner{};
};

constexpr Eigen::Index kMaxDiscordDim = 12;
constexpr Eigen::Index kMaxHierarchyDim = 16;
constexpr int kMaxHierarchyParties = 4;

ResourceReport discord_bures(const DensityMatrix& target, const std::vector<int>& dims,
                             const DiscordOptions& options = {});

// Minimum coherence over bases that are products of unitaries acting on
// blocks of at most `k` subsystems.
ResourceReport discord_hierarchy(const DensityMatrix& target, const std::vector<int>& dims, int k,
                                 const DiscordOptions& options = {});

// Set partitions of {0..n-1} with every block of size at most `k`. Blocks
// are sorted and ordered by their smallest element.
std::vector<std::vector<std::vector<int>>> bounded_partitions(int n, int k);

constexpr double kChainSlack = 1e-8;

struct ChainReport {
  double upper = 0.0;          // Q^u upper bound
  double purification = 0.0;   // Q_purif
  double coherence = 0.0;      // C_B
  double coherence_sq = 0.0;   // C_B^2 / T
  double horizon = 1.0;
  double slack_upper = 0.0;    // upper - purification
  double slack_coherence = 0.0;  // purification - coherence_sq
  bool upper_pass = true;
  bool coherence_pass = true;
  CostBracket bracket;
  ResourceReport coherence_report;

  bool pass() const { return upper_pass && coherence_pass; }
};

ChainReport chain_check(const DensityMatrix& target, const ReferenceBasis& basis, double horizon, int intervals = 1000,
                        const CoherenceOptions& options = {});

struct DiscordCostReport {
  ResourceReport discord;
  double discord_sq = 0.0;           // D_B^2 / T
  double purification_argmin = 0.0;  // Q_purif in the discord argmin basis
  double purification_reference = 0.0;  // Q_purif in the computational product basis
  double coherence_reference = 0.0;  // C_B in the computational product basis
  double slack = 0.0;                // purification_argmin - discord_sq
  bool pass = true;
  double horizon = 1.0;
};

DiscordCostReport discord_cost_bound(const DensityMatrix& target, const std::vector<int>& dims, double horizon,
                                     const DiscordOptions& options = {});

// Generalized Gell-Mann matrices: dim^2 - 1 traceless Hermitian generators.
std::vector<ComplexMatrix> gell_mann_generators(Eigen::Index dim);

// Matrix P reordering tensor factors: (P x) lists the factors of x in `order`.
ComplexMatrix subsystem_permutation(const std::vector<int>& dims, const std::vector<int>& order);

}  // namespace prepcost
