#pragma once

// Executable form of the operator-norm lower bound
//
//   max_{eps} ||sum eps_i v_i||_q <= C sqrt(N),  min_i ||T v_i||_1 >= eps
//   =>  ||T|| >= (eps / C) N^{(q-p)/(2q)},   T : L_1 -> L_1^{N^{p/2}},
//
// with every intermediate inequality of its duality proof evaluated on the
// finite spaces, and the construction showing the exponent cannot be improved.

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "l1lab/gf2_designs.hpp"
#include "l1lab/hypercube.hpp"
#include "l1lab/lambda_analysis.hpp"
#include "l1lab/operators_l1.hpp"

namespace l1lab {

/// (eps / C) N^{(q-p)/(2q)}. Requires C > 0, eps >= 0, N >= 1, 1 <= p <= q.
double lemma_bound(double C, double epsilon, double N, double p, double q);

enum class Verdict { holds, degenerate };

struct LemmaCertificate {
  std::size_t N = 0;
  double p = 0.0;  // infinity when N = 1
  double q = 0.0;
  double C = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;
  double measured_norm = 0.0;
  // eps N; sum <T* u_i, v_i>; int sup_a |sum (T* u_i)(a) v_i(b)| db;
  // ||T|| int ||sum v_i(b) u_i||_inf db; ||T|| D^{1/q} int ||sum u_i v_i(b)||_q db;
  // ||T|| D^{1/q} (int int |sum u_i(c) v_i(b)|^q)^{1/q}; C ||T|| D^{1/q} sqrt(N).
  std::array<double, 7> chain{};
  Verdict verdict = Verdict::degenerate;
  bool chain_monotone = false;
  bool bound_satisfied = false;
  bool exact_sign_search = false;

  bool consistent() const { return chain_monotone && bound_satisfied; }
  friend bool operator==(const LemmaCertificate&, const LemmaCertificate&) = default;
};

struct LemmaOptions {
  SignSearchOptions sign;
  /// Use this p instead of 2 log D / log N; N^{p/2} must round to D.
  std::optional<double> supplied_p;
};

/// T must map a uniform hypercube source (the cube of `vectors`) to a uniform
/// hypercube target of D points.
LemmaCertificate verify_lemma(const L1Operator& op, std::span<const HypercubeFunction> vectors, double q,
                              const LemmaOptions& options = {});

struct OptimalityReport {
  int q = 0;
  double p = 0.0;
  std::size_t N = 0;
  std::size_t points = 0;      // m = N^{p/2}
  std::size_t characters = 0;  // m^{2/q}
  std::size_t fiber = 0;       // K = N / m^{2/q}
  CharacterFamily family;
  double family_sign_max = 0.0;  // max_eps ||sum eps_j f_j||_q
  double measured_C = 0.0;
  double bound = 0.0;
  double measured_norm = 0.0;
  double ratio = 0.0;
  double b_q = 0.0;
  bool ratio_within_b_q = false;
  bool lemma_holds = false;

  friend bool operator==(const OptimalityReport&, const OptimalityReport&) = default;
};

/// Builds f_1..f_{m^{2/q}} as characters of a q-independent family on the
/// m-point cube, v_i = f_{s(i)} with equal fibres of size K, T = identity, and
/// evaluates the lower bound against the true norm 1.
OptimalityReport optimality_instance(int q, std::size_t N, double p, const SignSearchOptions& sign = {});

/// max_eps ||sum_i eps_i f_{s(i)}||_q for fibres of size K: the sum is convex
/// in the fibre totals y_k in [-K, K], so the maximum sits at y = K * eps'.
double fibre_sign_max(std::span<const HypercubeFunction> characters, std::size_t fiber, double q,
                      const SignSearchOptions& sign = {});

}  // namespace l1lab
