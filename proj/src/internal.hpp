#pragma once

// Small helpers shared by the library sources.

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

#include "prepcost/hermitian.hpp"

namespace prepcost::detail {

// Groups of indices whose values are within `gap` of a neighbour, largest first.
inline std::vector<std::vector<int>> clusters(const RealVector& values, double gap) {
  std::vector<int> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values(a) > values(b); });
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || values(order[i - 1]) - values(order[i]) >= gap) out.emplace_back();
    out.back().push_back(order[i]);
  }
  return out;
}

inline ComplexMatrix gather(const ComplexMatrix& m, const std::vector<int>& cols) {
  ComplexMatrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
  return out;
}

inline void scatter(ComplexMatrix& m, const std::vector<int>& cols, const ComplexMatrix& block) {
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(cols[c]) = block.col(static_cast<Eigen::Index>(c));
}

// Unitary R maximizing Re Tr(R^dagger M).
inline ComplexMatrix procrustes(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace prepcost::detail
