// Dense tableau simplex for
//   min sum_x (r+_x + r-_x)
//   s.t. sum_j c_j(x) (l+_j - l-_j) + r+_x - r-_x = v_x,  sum_j (l+_j + l-_j) + s = 1,
// all variables >= 0. The residual slacks give a feasible starting basis.

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hull_internal.hpp"
#include "l1lab/errors.hpp"

namespace l1lab::detail {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

}  // namespace

LpSolution solve_hull_lp(const HullProblem& problem) {
  const std::size_t P = problem.points;
  const std::size_t k = problem.columns.size();
  const std::size_t rows = P + 1;
  const std::size_t cols = 2 * k + 2 * P + 1;
  const std::size_t rp = 2 * k;       // first r+
  const std::size_t rm = 2 * k + P;   // first r-
  const std::size_t slack = cols - 1;
  const std::size_t width = cols + 1;  // rhs in the last slot

  std::vector<double> tab(rows * width, 0.0);
  std::vector<double> cost(cols, 0.0);
  std::vector<std::size_t> basis(rows);
  for (std::size_t x = 0; x < P; ++x) {
    cost[rp + x] = 1.0;
    cost[rm + x] = 1.0;
  }
  for (std::size_t x = 0; x < P; ++x) {
    const double sigma = problem.v[x] >= 0.0 ? 1.0 : -1.0;
    double* row = &tab[x * width];
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = sigma * problem.columns[j][x];
      row[k + j] = -row[j];
    }
    row[rp + x] = sigma;
    row[rm + x] = -sigma;
    row[cols] = sigma * problem.v[x];
    basis[x] = sigma > 0 ? rp + x : rm + x;
  }
  {
    double* row = &tab[P * width];
    for (std::size_t j = 0; j < 2 * k; ++j) row[j] = 1.0;
    row[slack] = 1.0;
    row[cols] = 1.0;
    basis[P] = slack;
  }

  // reduced costs d_j = c_j - c_B^T T_j, objective in the last slot (negated)
  std::vector<double> d(width, 0.0);
  for (std::size_t j = 0; j < cols; ++j) d[j] = cost[j];
  for (std::size_t r = 0; r < rows; ++r) {
    const double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    const double* row = &tab[r * width];
    for (std::size_t j = 0; j < width; ++j) d[j] -= cb * row[j];
  }

  LpSolution out;
  const std::size_t max_pivots = 50 * (rows + cols);
  // Dantzig pricing; after a run of degenerate pivots, Bland's rule until progress resumes.
  std::size_t degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= 20;
    std::size_t enter = cols;
    double most = -kCostTol;
    for (std::size_t j = 0; j < cols; ++j) {
      if (d[j] < most) {
        enter = j;
        if (bland) break;
        most = d[j];
      }
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double a = tab[r * width + enter];
      if (a <= kPivotTol) continue;
      const double ratio = std::max(tab[r * width + cols], 0.0) / a;
      const double tie = 1e-12 * std::max(1.0, best_ratio);
      if (leave == rows || ratio < best_ratio - tie ||
          (std::abs(ratio - best_ratio) <= tie && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw DomainError("hull LP unbounded");  // cannot happen: feasible set is bounded
    if (++out.pivots > max_pivots) throw CapacityError("simplex pivot budget exhausted");
    degenerate_run = best_ratio <= 1e-13 ? degenerate_run + 1 : 0;

    double* prow = &tab[leave * width];
    const double inv = 1.0 / prow[enter];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double* row = &tab[r * width];
      const double factor = row[enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= factor * prow[j];
      row[enter] = 0.0;
    }
    const double factor = d[enter];
    for (std::size_t j = 0; j < width; ++j) d[j] -= factor * prow[j];
    d[enter] = 0.0;
    basis[leave] = enter;
  }

  std::vector<double> value(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) value[basis[r]] = std::max(tab[r * width + cols], 0.0);
  out.lambda.assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) out.lambda[j] = value[j] - value[k + j];
  out.dual.resize(P);
  for (std::size_t x = 0; x < P; ++x) out.dual[x] = std::clamp(1.0 - d[rp + x], -1.0, 1.0);
  out.distance = residual_norm(problem, out.lambda);
  return out;
}

double dual_lower_bound(const HullProblem& problem, const std::vector<double>& g) {
  const std::size_t P = problem.points;
  double base = 0.0;
  for (std::size_t x = 0; x < P; ++x) base += g[x] * problem.v[x];
  double worst = 0.0;
  for (const double* c : problem.columns) {
    double s = 0.0;
    for (std::size_t x = 0; x < P; ++x) s += g[x] * c[x];
    worst = std::max(worst, std::abs(s));
  }
  return (base - worst) / static_cast<double>(P);
}

double residual_norm(const HullProblem& problem, const std::vector<double>& lambda) {
  const std::size_t P = problem.points;
  double total = 0.0;
  for (std::size_t x = 0; x < P; ++x) {
    double r = problem.v[x];
    for (std::size_t j = 0; j < lambda.size(); ++j) r -= lambda[j] * problem.columns[j][x];
    total += std::abs(r);
  }
  return total / static_cast<double>(P);
}

}  // namespace l1lab::detail
