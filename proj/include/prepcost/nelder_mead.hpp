#pragma once

// Derivative-free minimization on R^n.

#include <functional>

#include "prepcost/hermitian.hpp"

namespace prepcost {

struct NelderMeadOptions {
  double initial_step = 0.5;
  int max_evaluations = 4000;
  double f_tolerance = 1e-14;  // spread of simplex values
  double x_tolerance = 1e-7;   // largest vertex distance from the best vertex
  bool adaptive = true;        // dimension-dependent coefficients (Gao and Han)
  int polish_restarts = 1;     // fresh simplices built around the optimum
};

struct NelderMeadResult {
  RealVector x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& start,
                             const NelderMeadOptions& options = {});

}  // namespace prepcost
