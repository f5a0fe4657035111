#pragma once

#include <cstddef>
#include <vector>

#include "l1lab/separation_lab.hpp"

namespace l1lab::detail {

// Points carry uniform weight 1/P; columns are value arrays of length P.
struct HullProblem {
  std::size_t points = 0;
  const double* v = nullptr;
  std::vector<const double*> columns;
};

struct LpSolution {
  double distance = 0.0;
  std::vector<double> lambda;
  std::vector<double> dual;  // g with |g| <= 1, pointwise
  std::size_t pivots = 0;
};

// Exact optimum by the dense simplex.
LpSolution solve_hull_lp(const HullProblem& problem);

// <g, v> - max_j |<g, c_j>|, weighted by 1/P; a lower bound for any |g| <= 1.
double dual_lower_bound(const HullProblem& problem, const std::vector<double>& g);

// ||v - sum lambda_j c_j||_1, weighted by 1/P.
double residual_norm(const HullProblem& problem, const std::vector<double>& lambda);

HullDistance hull_frank_wolfe(const HullProblem& problem, const HullOptions& options);

}  // namespace l1lab::detail
