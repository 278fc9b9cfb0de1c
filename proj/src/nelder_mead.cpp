#include "prepcost/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace prepcost {

namespace {

struct Simplex {
  std::vector<RealVector> x;
  std::vector<double> f;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& start,
                             const NelderMeadOptions& options) {
  const Eigen::Index n = start.size();
  NelderMeadResult result{start, 0.0, 0, false};
  int evals = 0;
  auto eval = [&](const RealVector& x) {
    ++evals;
    return f(x);
  };
  if (n == 0) {
    result.value = eval(start);
    result.evaluations = evals;
    result.converged = true;
    return result;
  }

  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = options.adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double contract = options.adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double shrink = options.adaptive ? 1.0 - 1.0 / dn : 0.5;

  RealVector best_x = start;
  double best_f = eval(start);
  bool converged = false;

  for (int round = 0; round <= options.polish_restarts && evals < options.max_evaluations; ++round) {
    Simplex s;
    s.x.push_back(best_x);
    s.f.push_back(best_f);
    for (Eigen::Index i = 0; i < n; ++i) {
      RealVector v = best_x;
      v(i) += options.initial_step;
      s.f.push_back(eval(v));
      s.x.push_back(std::move(v));
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(n) + 1);
    converged = false;
    while (evals < options.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[order.size() - 2];

      double diameter = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) diameter = std::max(diameter, (s.x[i] - s.x[lo]).cwiseAbs().maxCoeff());
      if (s.f[hi] - s.f[lo] <= options.f_tolerance && diameter <= options.x_tolerance) {
        converged = true;
        break;
      }

      RealVector centroid = RealVector::Zero(n);
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i != hi) centroid += s.x[i];
      }
      centroid /= dn;

      const RealVector xr = centroid + reflect * (centroid - s.x[hi]);
      const double fr = eval(xr);
      if (fr < s.f[lo]) {
        const RealVector xe = centroid + expand * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[hi] = xe;
          s.f[hi] = fe;
        } else {
          s.x[hi] = xr;
          s.f[hi] = fr;
        }
        continue;
      }
      if (fr < s.f[second]) {
        s.x[hi] = xr;
        s.f[hi] = fr;
        continue;
      }
      const bool outside = fr < s.f[hi];
      const RealVector xc = outside ? RealVector(centroid + contract * (xr - centroid))
                                    : RealVector(centroid + contract * (s.x[hi] - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.f[hi])) {
        s.x[hi] = xc;
        s.f[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i == lo) continue;
        s.x[i] = s.x[lo] + shrink * (s.x[i] - s.x[lo]);
        s.f[i] = eval(s.x[i]);
      }
    }
    const auto it = std::min_element(s.f.begin(), s.f.end());
    const std::size_t idx = static_cast<std::size_t>(it - s.f.begin());
    if (s.f[idx] <= best_f) {
      best_f = s.f[idx];
      best_x = s.x[idx];
    }
  }
  result.x = best_x;
  result.value = best_f;
  result.evaluations = evals;
  result.converged = converged;
  return result;
}

}  // namespace prepcost
