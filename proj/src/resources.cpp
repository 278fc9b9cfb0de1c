#include "prepcost/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "prepcost/nelder_mead.hpp"
#include "prepcost/random.hpp"

namespace prepcost {

// ---------------------------------------------------------------- coherence

namespace {

struct SimplexSolve {
  double fidelity = 0.0;
  RealVector p;
  int iterations = 0;
  bool converged = false;
};

// Thin factor L of tau (L L^dagger = tau) over eigenvalues above the state
// square-root floor.
ComplexMatrix thin_factor(const DensityMatrix& tau) {
  const SpectralDecomposition sd = eigendecompose(tau.matrix());
  Eigen::Index rank = 0;
  while (rank < sd.eigenvalues.size() && sd.eigenvalues(rank) > kStateSqrtFloor) ++rank;
  rank = std::max<Eigen::Index>(rank, 1);
  return sd.eigenvectors.leftCols(rank) * sd.eigenvalues.head(rank).cwiseSqrt().cast<Complex>().asDiagonal();
}

// Maximize F(p) = Tr sqrt(L^dagger P L) over the simplex, L a thin factor of
// tau in the basis. With X = L^dagger P L and N = L X^{-1/2} L^dagger the
// gradient is dF/dp_i = N_ii / 2, F = sum_i p_i N_ii, and the update
// p_i <- p_i N_ii^2 / sum(...) cannot lower F (it is the alternating
// maximization of Re Tr(sqrt(P) L W) over p and the partial isometry W).
// When X is badly conditioned the same step is taken through the SVD of
// sqrt(P) L instead.
SimplexSolve maximize_fidelity(const ComplexMatrix& l, RealVector p, int max_iterations, double gap_tol,
                               double step_tol) {
  const Eigen::Index d = l.rows();
  p = p.cwiseMax(0.0);
  p /= p.sum();
  SimplexSolve best;
  best.fidelity = -1.0;
  double previous = -1.0;
  RealVector a(d);  // Re (L W)_ii, the unnormalized square root of the next p
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig;
  for (int it = 0; it < max_iterations; ++it) {
    const ComplexMatrix pl = p.cwiseSqrt().cast<Complex>().asDiagonal() * l;
    eig.compute(pl.adjoint() * pl);
    const RealVector& mu = eig.eigenvalues();
    double f = 0.0;
    if (mu(0) > 1e-8 * mu(mu.size() - 1)) {
      f = mu.cwiseSqrt().sum();
      const ComplexMatrix lv = l * eig.eigenvectors();
      const RealVector inv_root = mu.cwiseSqrt().cwiseInverse();
      for (Eigen::Index i = 0; i < d; ++i) a(i) = std::sqrt(p(i)) * (lv.row(i).cwiseAbs2() * inv_root).value();
    } else {
      Eigen::JacobiSVD<ComplexMatrix> svd(pl, Eigen::ComputeThinU | Eigen::ComputeThinV);
      f = svd.singularValues().sum();
      const ComplexMatrix lw = l * svd.matrixV() * svd.matrixU().adjoint();
      a = lw.diagonal().real();
    }
    if (f > best.fidelity) {
      best.fidelity = f;
      best.p = p;
    }
    best.iterations = it + 1;

    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (p(i) > 0.0) {
        top = std::max(top, a(i) / (2.0 * std::sqrt(p(i))));
      } else if (a(i) > 1e-15) {
        top = std::numeric_limits<double>::infinity();
      }
    }
    if (top - f / 2.0 <= gap_tol) {
      best.converged = true;
      break;
    }
    if (it > 0 && f - previous <= step_tol) {
      best.converged = top - f / 2.0 <= 1e-9;
      break;
    }
    previous = f;
    RealVector next = a.cwiseMax(0.0).cwiseAbs2();
    const double total = next.sum();
    if (!(total > 0.0)) break;
    p = next / total;
  }
  best.fidelity = std::min(best.fidelity, 1.0);
  return best;
}

// Largest eigenvalue above 1 - 1e-12 counts as pure; returns the vector.
std::optional<ComplexVector> pure_vector(const DensityMatrix& rho) {
  const SpectralDecomposition sd = eigendecompose(rho.matrix());
  if (sd.eigenvalues(0) < 1.0 - 1e-12) return std::nullopt;
  return ComplexVector(sd.eigenvectors.col(0));
}

}  // namespace

ResourceReport coherence_bures(const DensityMatrix& target, const ReferenceBasis& basis, const CoherenceOptions& options) {
  const Eigen::Index d = target.dim();
  if (basis.dim() != d) throw Error(ErrorKind::DimensionMismatch, "basis and target dimensions differ");
  ResourceReport report;
  report.basis = basis.matrix();
  report.basis_blocks = {basis.matrix()};
  report.partition = {{0}};

  if (const auto psi = options.pure_closed_form ? pure_vector(target) : std::nullopt) {
    const RealVector amps = (basis.matrix().adjoint() * *psi).cwiseAbs();
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < d; ++i) {
      if (amps(i) > amps(top)) top = i;
    }
    report.fidelity = std::min(1.0, amps(top));
    report.value = std::acos(report.fidelity);
    report.populations = RealVector::Unit(d, top);
    return report;
  }

  const ComplexMatrix s = basis.matrix().adjoint() * thin_factor(target);
  std::vector<RealVector> starts{basis.populations(target)};
  if (options.isospectral_seed && d <= kMaxFreeSetDim) {
    starts.push_back(basis.populations(purification_lower_bound(target, basis, 1.0).free_state));
  }
  for (int r = 0; r < options.restarts; ++r) {
    Engine rng = restart_engine(options.seed, static_cast<std::uint64_t>(r));
    starts.push_back(dirichlet_flat(d, rng));
  }

  SimplexSolve best;
  best.fidelity = -1.0;
  long iterations = 0;
  for (const auto& start : starts) {
    const SimplexSolve run = maximize_fidelity(s, start, options.max_iterations, options.gap_tolerance, options.step_tolerance);
    iterations += run.iterations;
    if (run.fidelity > best.fidelity) best = run;
  }
  report.fidelity = std::clamp(best.fidelity, 0.0, 1.0);
  report.value = std::acos(report.fidelity);
  report.populations = best.p;
  report.converged = best.converged;
  report.restarts_used = static_cast<int>(starts.size());
  report.evaluations = iterations;
  return report;
}

// ---------------------------------------------------------------- helpers

std::vector<ComplexMatrix> gell_mann_generators(Eigen::Index dim) {
  std::vector<ComplexMatrix> out;
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      out.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(j, k) = -i;
      anti(k, j) = i;
      out.push_back(anti);
    }
  }
  for (Eigen::Index l = 1; l < dim; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    out.push_back(diag);
  }
  return out;
}

ComplexMatrix subsystem_permutation(const std::vector<int>& dims, const std::vector<int>& order) {
  const std::size_t n = dims.size();
  if (order.size() != n) throw Error(ErrorKind::InvalidArgument, "order must list every subsystem once");
  std::vector<int> seen(order.begin(), order.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t m = 0; m < n; ++m) {
    if (seen[m] != static_cast<int>(m)) throw Error(ErrorKind::InvalidArgument, "order must list every subsystem once");
  }
  const Eigen::Index total = std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
  ComplexMatrix p = ComplexMatrix::Zero(total, total);
  std::vector<int> digits(n);
  for (Eigen::Index old_index = 0; old_index < total; ++old_index) {
    Eigen::Index rest = old_index;
    for (std::size_t m = n; m-- > 0;) {
      digits[m] = static_cast<int>(rest % dims[m]);
      rest /= dims[m];
    }
    Eigen::Index new_index = 0;
    for (int sub : order) new_index = new_index * dims[static_cast<std::size_t>(sub)] + digits[static_cast<std::size_t>(sub)];
    p(new_index, old_index) = 1.0;
  }
  return p;
}

std::vector<std::vector<std::vector<int>>> bounded_partitions(int n, int k) {
  std::vector<std::vector<std::vector<int>>> out;
  if (n <= 0) return out;
  // restricted growth strings
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  while (true) {
    const int blocks = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<int>> partition(static_cast<std::size_t>(blocks));
    for (int i = 0; i < n; ++i) partition[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])].push_back(i);
    bool ok = true;
    for (const auto& b : partition) ok = ok && static_cast<int>(b.size()) <= k;
    if (ok) out.push_back(std::move(partition));

    int i = n - 1;
    for (; i > 0; --i) {
      const int prefix_max = *std::max_element(label.begin(), label.begin() + i);
      if (label[static_cast<std::size_t>(i)] <= prefix_max) {
        ++label[static_cast<std::size_t>(i)];
        std::fill(label.begin() + i + 1, label.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------- product bases

namespace {

Eigen::Index product(const std::vector<int>& dims, const std::vector<int>& subsystems) {
  Eigen::Index total = 1;
  for (int s : subsystems) total *= dims[static_cast<std::size_t>(s)];
  return total;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// Product-basis coherence of `target` over one partition, searched with
// Nelder-Mead on local exponential coordinates around each starting basis.
class PartitionSearch {
 public:
  PartitionSearch(const DensityMatrix& target, const std::vector<int>& dims, std::vector<std::vector<int>> blocks,
                  std::vector<bool> frozen, const DiscordOptions& options)
      : target_(target), dims_(dims), blocks_(std::move(blocks)), frozen_(std::move(frozen)), options_(options) {
    std::vector<int> order;
    for (const auto& b : blocks_) {
      order.insert(order.end(), b.begin(), b.end());
      block_dims_.push_back(product(dims_, b));
      generators_.push_back(gell_mann_generators(block_dims_.back()));
    }
    perm_ = subsystem_permutation(dims_, order);
    if (const auto psi = pure_vector(target_)) {
      psi_ = perm_ * *psi;
    } else {
      factor_ = perm_ * thin_factor(target_);
    }
  }

  std::size_t blocks() const { return blocks_.size(); }

  // Columns of the product basis in the original subsystem order.
  ComplexMatrix full_basis(const std::vector<ComplexMatrix>& local) const { return perm_.adjoint() * kron_all(local); }

  std::vector<ComplexMatrix> marginal_bases() const {
    std::vector<ComplexMatrix> out;
    for (const auto& b : blocks_) out.push_back(eigendecompose(partial_trace(target_, dims_, b).matrix()).eigenvectors);
    return out;
  }

  std::vector<ComplexMatrix> identity_bases() const {
    std::vector<ComplexMatrix> out;
    for (Eigen::Index d : block_dims_) out.push_back(ComplexMatrix::Identity(d, d));
    return out;
  }

  std::vector<ComplexMatrix> haar_bases(Engine& rng) const {
    std::vector<ComplexMatrix> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      out.push_back(frozen_[b] ? ComplexMatrix::Identity(block_dims_[b], block_dims_[b]) : haar_unitary(block_dims_[b], rng));
    }
    return out;
  }

  // Frozen blocks always sit in their reference basis.
  std::vector<ComplexMatrix> respect_frozen(std::vector<ComplexMatrix> local) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (frozen_[b]) local[b] = ComplexMatrix::Identity(block_dims_[b], block_dims_[b]);
    }
    return local;
  }

  std::vector<ComplexMatrix> apply(const std::vector<ComplexMatrix>& base, const RealVector& theta) const {
    std::vector<ComplexMatrix> out = base;
    Eigen::Index offset = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (frozen_[b]) continue;
      const Eigen::Index d = block_dims_[b];
      ComplexMatrix g = ComplexMatrix::Zero(d, d);
      for (const auto& gen : generators_[b]) g += theta(offset++) * gen;
      out[b] = base[b] * unitary_exp(g);
    }
    return out;
  }

  Eigen::Index parameters() const {
    Eigen::Index n = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (!frozen_[b]) n += static_cast<Eigen::Index>(generators_[b].size());
    }
    return n;
  }

  // 1 - max fidelity to states diagonal in the product basis, with a single
  // simplex solve. The solve starts from the previous optimum when there is
  // one (neighbouring simplex vertices have nearby optima), else from the
  // diagonal; the problem is concave, so only the iteration count depends
  // on the start.
  double objective(const std::vector<ComplexMatrix>& local, RealVector* warm) const {
    const ComplexMatrix w = kron_all(local);
    if (psi_) return 1.0 - (w.adjoint() * *psi_).cwiseAbs().maxCoeff();
    const ComplexMatrix s = w.adjoint() * factor_;
    RealVector start = s.rowwise().squaredNorm();
    if (warm && warm->size() == start.size()) start = *warm;
    const SimplexSolve run = maximize_fidelity(s, start, options_.inner.max_iterations, options_.inner.gap_tolerance,
                                               options_.inner.step_tolerance);
    if (warm) *warm = run.p;
    return 1.0 - run.fidelity;
  }

  struct Outcome {
    std::vector<ComplexMatrix> local;
    double objective = 0.0;
    long evaluations = 0;
    bool converged = false;
  };

  Outcome refine(const std::vector<ComplexMatrix>& base) const {
    const Eigen::Index n = parameters();
    NelderMeadOptions nm;
    nm.initial_step = options_.initial_step;
    nm.max_evaluations = options_.max_evaluations;
    RealVector warm;
    const auto f = [&](const RealVector& theta) { return objective(apply(base, theta), &warm); };
    const NelderMeadResult r = nelder_mead(f, RealVector::Zero(n), nm);
    return Outcome{apply(base, r.x), r.value, r.evaluations, r.converged};
  }

  ResourceReport evaluate(const std::vector<ComplexMatrix>& local) const {
    ResourceReport r = coherence_bures(target_, ReferenceBasis(full_basis(local), loose_unitarity()), options_.inner);
    r.basis_blocks = local;
    r.partition = blocks_;
    return r;
  }

 private:
  static ToleranceConfig loose_unitarity() {
    ToleranceConfig tol;
    tol.unitarity = 1e-8;
    return tol;
  }

  const DensityMatrix& target_;
  std::vector<int> dims_;
  std::vector<std::vector<int>> blocks_;
  std::vector<bool> frozen_;
  const DiscordOptions& options_;
  std::vector<Eigen::Index> block_dims_;
  std::vector<std::vector<ComplexMatrix>> generators_;
  ComplexMatrix perm_;
  ComplexMatrix factor_;  // thin factor of the permuted target
  std::optional<ComplexVector> psi_;
};

// Restart order: caller-provided seeds, the marginal eigenbases, the
// reference basis, then Haar-random bases drawn from restart_engine(seed, r).
ResourceReport search_partition(const PartitionSearch& search, const std::vector<std::vector<ComplexMatrix>>& extra_seeds,
                                const DiscordOptions& options) {
  std::vector<std::vector<ComplexMatrix>> fixed = extra_seeds;
  fixed.push_back(search.respect_frozen(search.marginal_bases()));
  fixed.push_back(search.identity_bases());

  const int total = static_cast<int>(extra_seeds.size()) + std::max(options.restarts, 2);
  std::optional<PartitionSearch::Outcome> best;
  long evaluations = 0;
  int used = 0;
  for (int r = 0; r < total; ++r) {
    std::vector<ComplexMatrix> start;
    if (r < static_cast<int>(fixed.size())) {
      start = fixed[static_cast<std::size_t>(r)];
    } else {
      const int random_index = r - static_cast<int>(extra_seeds.size());
      Engine rng = restart_engine(options.seed, static_cast<std::uint64_t>(random_index));
      start = search.haar_bases(rng);
    }
    PartitionSearch::Outcome run = search.refine(start);
    evaluations += run.evaluations;
    ++used;
    if (!best || run.objective < best->objective) best = std::move(run);
    if (best->objective <= options.early_exit) break;
  }

  ResourceReport report = search.evaluate(best->local);
  report.converged = best->converged;
  for (const auto& seed : fixed) {
    ResourceReport at_seed = search.evaluate(seed);
    if (at_seed.value < report.value) {
      at_seed.converged = report.converged;
      report = std::move(at_seed);
    }
  }
  report.restarts_used = used;
  report.evaluations = evaluations;
  return report;
}

void check_dims(const DensityMatrix& target, const std::vector<int>& dims) {
  if (dims.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one subsystem");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "subsystem dimensions must be positive");
    total *= d;
  }
  if (total != target.dim()) throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions do not multiply to the state dimension");
}

// Block unitary for `coarse` assembled from finer blocks it contains.
ComplexMatrix merge_blocks(const std::vector<int>& dims, const std::vector<int>& coarse,
                           const std::vector<std::vector<int>>& fine_blocks, const std::vector<ComplexMatrix>& fine_local) {
  std::vector<ComplexMatrix> parts;
  std::vector<int> concat;
  for (std::size_t f = 0; f < fine_blocks.size(); ++f) {
    const auto& fb = fine_blocks[f];
    if (!std::includes(coarse.begin(), coarse.end(), fb.begin(), fb.end())) continue;
    parts.push_back(fine_local[f]);
    concat.insert(concat.end(), fb.begin(), fb.end());
  }
  std::vector<int> local_dims, order;
  for (int s : coarse) local_dims.push_back(dims[static_cast<std::size_t>(s)]);
  for (int s : concat) order.push_back(static_cast<int>(std::find(coarse.begin(), coarse.end(), s) - coarse.begin()));
  const ComplexMatrix p = subsystem_permutation(local_dims, order);
  return p.adjoint() * kron_all(parts) * p;
}

bool refines(const std::vector<std::vector<int>>& fine, const std::vector<std::vector<int>>& coarse) {
  for (const auto& fb : fine) {
    bool inside = false;
    for (const auto& cb : coarse) inside = inside || std::includes(cb.begin(), cb.end(), fb.begin(), fb.end());
    if (!inside) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- discord

ResourceReport discord_bures(const DensityMatrix& target, const std::vector<int>& dims, const DiscordOptions& options) {
  if (dims.size() != 2) throw Error(ErrorKind::InvalidArgument, "discord needs exactly two subsystems");
  check_dims(target, dims);
  if (target.dim() > kMaxDiscordDim) throw Error(ErrorKind::DimensionTooLarge, "discord is limited to total dimension 12");
  const PartitionSearch search(target, dims, {{0}, {1}}, {false, options.asymmetric}, options);
  return search_partition(search, {}, options);
}

ResourceReport discord_hierarchy(const DensityMatrix& target, const std::vector<int>& dims, int k, const DiscordOptions& options) {
  check_dims(target, dims);
  const int n = static_cast<int>(dims.size());
  if (n > kMaxHierarchyParties || target.dim() > kMaxHierarchyDim) {
    throw Error(ErrorKind::DimensionTooLarge, "hierarchy is limited to 4 subsystems and total dimension 16");
  }
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "block size must be at least 1");

  if (k >= n) {
    // a single block: the eigenbasis of the target is allowed
    ResourceReport report;
    report.value = 0.0;
    report.fidelity = 1.0;
    report.basis = eigendecompose(target.matrix()).eigenvectors;
    report.basis_blocks = {report.basis};
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    report.partition = {all};
    report.populations = eigendecompose(target.matrix()).eigenvalues;
    return report;
  }

  auto partitions = bounded_partitions(n, k);
  // finest first so coarser partitions can start from their refinements
  std::stable_sort(partitions.begin(), partitions.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<ResourceReport> solved;
  std::optional<std::size_t> best;
  long evaluations = 0;
  int restarts = 0;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    const auto& blocks = partitions[i];
    std::vector<std::vector<ComplexMatrix>> seeds;
    std::optional<std::size_t> finer;
    for (std::size_t j = 0; j < i; ++j) {
      if (refines(partitions[j], blocks) && (!finer || solved[j].value < solved[*finer].value)) finer = j;
    }
    if (finer) {
      std::vector<ComplexMatrix> seed;
      for (const auto& cb : blocks) seed.push_back(merge_blocks(dims, cb, partitions[*finer], solved[*finer].basis_blocks));
      seeds.push_back(std::move(seed));
    }
    const PartitionSearch search(target, dims, blocks, std::vector<bool>(blocks.size(), false), options);
    ResourceReport r = search_partition(search, seeds, options);
    evaluations += r.evaluations;
    restarts += r.restarts_used;
    solved.push_back(std::move(r));
    if (!best || solved.back().value < solved[*best].value) best = i;
  }
  ResourceReport report = solved[*best];
  report.evaluations = evaluations;
  report.restarts_used = restarts;
  return report;
}

// ---------------------------------------------------------------- chains

ChainReport chain_check(const DensityMatrix& target, const ReferenceBasis& basis, double horizon, int intervals,
                        const CoherenceOptions& options) {
  CostBracket bracket = qu_cost_bracket(target, basis, horizon, intervals);
  ResourceReport coherence = coherence_bures(target, basis, options);
  ChainReport out{bracket.upper,
                  bracket.lower,
                  coherence.value,
                  coherence.value * coherence.value / horizon,
                  horizon,
                  0.0,
                  0.0,
                  true,
                  true,
                  std::move(bracket),
                  std::move(coherence)};
  out.slack_upper = out.upper - out.purification;
  out.slack_coherence = out.purification - out.coherence_sq;
  out.upper_pass = out.slack_upper >= -kChainSlack;
  out.coherence_pass = out.slack_coherence >= -kChainSlack;
  return out;
}

DiscordCostReport discord_cost_bound(const DensityMatrix& target, const std::vector<int>& dims, double horizon,
                                     const DiscordOptions& options) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  DiscordCostReport out;
  out.horizon = horizon;
  out.discord = discord_bures(target, dims, options);
  out.discord_sq = out.discord.value * out.discord.value / horizon;
  ToleranceConfig tol;
  tol.unitarity = 1e-8;
  out.purification_argmin = purification_lower_bound(target, ReferenceBasis(out.discord.basis, tol), horizon).value;
  const ReferenceBasis computational = ReferenceBasis::computational(target.dim());
  out.purification_reference = purification_lower_bound(target, computational, horizon).value;
  out.coherence_reference = coherence_bures(target, computational, options.inner).value;
  out.slack = out.purification_argmin - out.discord_sq;
  out.pass = out.slack >= -kChainSlack;
  return out;
}

}  // namespace prepcost
