// Frank-Wolfe over the l_1 ball for the Huber-smoothed residual, with away
// steps, exact line search and continuation in the smoothing width. Each
// iterate yields a dual certificate g = clip(r / mu). When the cube is small
// enough, the active columns seed an exact column-generation finish.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hull_internal.hpp"

namespace l1lab::detail {
namespace {

double clip(double r, double mu) { return std::clamp(r / mu, -1.0, 1.0); }

// d/dgamma of sum_x h_mu(r_x - gamma D_x), up to the 1/P factor
double slope(const std::vector<double>& r, const std::vector<double>& D, double gamma, double mu) {
  double s = 0.0;
  for (std::size_t x = 0; x < r.size(); ++x) s -= clip(r[x] - gamma * D[x], mu) * D[x];
  return s;
}

double line_search(const std::vector<double>& r, const std::vector<double>& D, double gamma_max, double mu) {
  if (slope(r, D, 0.0, mu) >= 0.0) return 0.0;
  if (slope(r, D, gamma_max, mu) <= 0.0) return gamma_max;
  double lo = 0.0, hi = gamma_max;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(r, D, mid, mu) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Atom {
  std::size_t column;  // == k for the origin
  double sign;
};

}  // namespace

HullDistance hull_frank_wolfe(const HullProblem& problem, const HullOptions& options) {
  const std::size_t P = problem.points;
  const std::size_t k = problem.columns.size();
  const double inv_P = 1.0 / static_cast<double>(P);

  HullDistance best;
  best.combination.assign(k, 0.0);
  best.distance = residual_norm(problem, best.combination);
  best.lower = 0.0;

  auto atom_value = [&](const Atom& a, std::size_t x) {
    return a.column == k ? 0.0 : a.sign * problem.columns[a.column][x];
  };
  auto finish = [&](HullDistance& h) {
    h.gap = std::max(0.0, h.distance - h.lower);
    return h;
  };

  if (k == 0 || best.distance <= options.tol) {
    best.lower = k == 0 ? best.distance : 0.0;
    return finish(best);
  }

  // atoms keyed by (column, sign); the origin starts with all the weight
  std::map<std::pair<std::size_t, int>, double> weight;
  weight[{k, 1}] = 1.0;
  std::vector<double> r(problem.v, problem.v + P);  // v - z
  std::vector<double> g(P), D(P), scores(k);
  double mu = 0.5;
  std::size_t it = 0;

  for (; it < options.max_iterations; ++it) {
    for (std::size_t x = 0; x < P; ++x) g[x] = clip(r[x], mu);
    double gv = 0.0;
    for (std::size_t x = 0; x < P; ++x) gv += g[x] * problem.v[x];
    std::size_t fw_col = 0;
    double fw_score = -1.0;
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      const double* c = problem.columns[j];
      for (std::size_t x = 0; x < P; ++x) s += g[x] * c[x];
      scores[j] = s * inv_P;
      if (std::abs(scores[j]) > fw_score) {
        fw_score = std::abs(scores[j]);
        fw_col = j;
      }
    }

    double upper = 0.0;
    for (double rx : r) upper += std::abs(rx);
    upper *= inv_P;
    const double lower = gv * inv_P - fw_score;
    if (upper < best.distance) {
      best.distance = upper;
      for (std::size_t j = 0; j < k; ++j) best.combination[j] = 0.0;
      for (const auto& [key, w] : weight) {
        if (key.first < k) best.combination[key.first] += key.second * w;
      }
    }
    best.lower = std::max(best.lower, lower);
    if (best.distance - best.lower <= options.tol) break;
    if (options.decide_at && (best.distance <= *options.decide_at || best.lower > *options.decide_at)) break;

    // <g, z> over the active atoms, and the away candidate
    double gz = 0.0;
    std::pair<std::size_t, int> away{k, 1};
    double away_score = std::numeric_limits<double>::infinity();
    for (const auto& [key, w] : weight) {
      const double s = key.first == k ? 0.0 : key.second * scores[key.first];
      gz += w * s;
      if (s < away_score) {
        away_score = s;
        away = key;
      }
    }
    const double fw_gap = fw_score - gz;
    const double away_gap = gz - away_score;
    if (std::max(fw_gap, away_gap) <= 0.1 * mu) {
      if (mu <= 1e-13) break;
      mu *= 0.5;
      continue;
    }

    const Atom fw_atom{fw_col, scores[fw_col] >= 0.0 ? 1.0 : -1.0};
    const bool use_fw = fw_gap >= away_gap;
    double gamma_max = 1.0;
    if (use_fw) {
      for (std::size_t x = 0; x < P; ++x) D[x] = atom_value(fw_atom, x) - (problem.v[x] - r[x]);
    } else {
      const double a = weight[away];
      gamma_max = a / (1.0 - a);
      const Atom aw{away.first, static_cast<double>(away.second)};
      for (std::size_t x = 0; x < P; ++x) D[x] = (problem.v[x] - r[x]) - atom_value(aw, x);
    }
    // r = v - z moves by -gamma D
    const double gamma = line_search(r, D, gamma_max, mu);
    if (gamma <= 0.0) {
      if (mu <= 1e-13) break;
      mu *= 0.5;
      continue;
    }
    for (std::size_t x = 0; x < P; ++x) r[x] -= gamma * D[x];
    if (use_fw) {
      for (auto& [key, w] : weight) w *= 1.0 - gamma;
      weight[{fw_atom.column, static_cast<int>(fw_atom.sign)}] += gamma;
    } else {
      for (auto& [key, w] : weight) w *= 1.0 + gamma;
      weight[away] -= gamma;
      if (gamma >= gamma_max || weight[away] <= 1e-15) weight.erase(away);
    }
    std::erase_if(weight, [](const auto& entry) { return entry.second <= 0.0; });
  }
  best.iterations = it;
  if (best.distance - best.lower <= options.tol) return finish(best);
  if (options.decide_at && (best.distance <= *options.decide_at || best.lower > *options.decide_at)) {
    return finish(best);
  }

  // exact finish on a growing set of columns
  if (P * k > kSimplexCapacity || P > 2 * kSimplexAutoPoints) return finish(best);
  std::vector<bool> active(k, false);
  for (const auto& [key, w] : weight) {
    if (key.first < k) active[key.first] = true;
  }
  while (true) {
    HullProblem sub{P, problem.v, {}};
    std::vector<std::size_t> index;
    for (std::size_t j = 0; j < k; ++j) {
      if (active[j]) {
        sub.columns.push_back(problem.columns[j]);
        index.push_back(j);
      }
    }
    LpSolution sol;
    if (!sub.columns.empty()) {
      sol = solve_hull_lp(sub);
    } else {
      sol.distance = residual_norm(problem, std::vector<double>(k, 0.0));
      sol.dual.resize(P);
      for (std::size_t x = 0; x < P; ++x) sol.dual[x] = problem.v[x] >= 0.0 ? 1.0 : -1.0;
    }
    ++best.iterations;
    if (sol.distance < best.distance) {
      best.distance = sol.distance;
      std::fill(best.combination.begin(), best.combination.end(), 0.0);
      for (std::size_t i = 0; i < index.size(); ++i) best.combination[index[i]] = sol.lambda[i];
    }
    best.lower = std::max(best.lower, dual_lower_bound(problem, sol.dual));
    if (best.distance - best.lower <= options.tol) break;

    std::size_t add = k;
    double worst = -1.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (active[j]) continue;
      double s = 0.0;
      for (std::size_t x = 0; x < P; ++x) s += sol.dual[x] * problem.columns[j][x];
      if (std::abs(s) > worst) {
        worst = std::abs(s);
        add = j;
      }
    }
    if (add == k) break;  // all columns in: the LP value is exact
    active[add] = true;
  }
  return finish(best);
}

}  // namespace l1lab::detail
