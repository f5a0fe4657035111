#pragma once

// Quantitative Lambda(q) behaviour of character systems: exact moments,
// sign-extremal norms, sampled Lambda constants, and Khintchine constants.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "l1lab/gf2_designs.hpp"
#include "l1lab/hypercube.hpp"

namespace l1lab {

/// sum_i a_i w_{A_i} built through the inverse Walsh transform.
HypercubeFunction synthesize(const CharacterFamily& family, std::span<const double> coeffs);

/// ||sum a_i w_{A_i}||_q for even integer q >= 2. Throws DomainError otherwise.
double moment_norm(const CharacterFamily& family, std::span<const double> coeffs, int q);

/// ((q-1)!!)^{1/q}: the 2k-th moment pairing constant, q = 2k.
double pairing_constant(int q);
/// (q-1)!! for even q.
double double_factorial_odd(int q);

/// Best constant in ||sum a_i r_i||_p <= B_p ||a||_2 for p >= 2 (Gaussian
/// moment sqrt(2) (Gamma((p+1)/2)/sqrt(pi))^{1/p}); 1 for p <= 2.
double khintchine_constant(double p);

enum class SignMode { exact, heuristic, automatic };

struct SignSearchOptions {
  SignMode mode = SignMode::automatic;
  std::uint64_t seed = 0;
  int restarts = 16;
  std::size_t exact_threshold = 20;
};

struct SignSearchResult {
  double value = 0.0;
  std::vector<int> signs;
  bool exact = false;
  std::uint64_t evaluations = 0;

  friend bool operator==(const SignSearchResult&, const SignSearchResult&) = default;
};

/// max over eps in {+-1}^N of ||sum eps_i v_i||_q.
///
/// exact: Gray-code enumeration of the 2^{N-1} patterns with eps_0 = +1, for
/// N <= exact_threshold (CapacityError beyond). heuristic: seeded random
/// restarts plus best-improvement single flips; the value is attained by the
/// reported signs, so it is a certified lower bound. automatic picks exact
/// whenever N is within the threshold.
SignSearchResult max_sign_norm(std::span<const HypercubeFunction> vectors, double q,
                               const SignSearchOptions& options = {});

/// Recomputes ||sum signs_i v_i||_q.
double signed_sum_norm(std::span<const HypercubeFunction> vectors, std::span<const int> signs,
                       double q);

struct LambdaReport {
  double q = 2.0;
  double lower = 0.0;
  std::optional<double> upper;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const LambdaReport&, const LambdaReport&) = default;
};

/// Sampled lower bound on the Lambda(q) constant of a family (all-ones probe,
/// basis probes, then `samples` normalised Gaussian draws) and, for q = 2k with
/// certified 2k-independence, the pairing upper bound.
LambdaReport lambda_constant(const CharacterFamily& family, double q, std::size_t samples,
                             std::uint64_t seed);

/// ||sum a_i r_i||_p exactly, by enumerating all sign patterns (|a| <= 24).
double rademacher_sum_norm(std::span<const double> coeffs, double p);

/// ||r_1 + ... + r_N||_p from the binomial law; any N.
double rademacher_count_norm(std::size_t count, double p);

/// Empirical sup over sampled a of ||sum a_i r_i||_p / ||a||_2 with N
/// Rademachers; the all-ones vector is always the first probe.
double khintchine_estimate(double p, int count, std::size_t trials, std::uint64_t seed);

struct CrossBlockResult {
  bool pass = true;
  double ratio = 0.0;     // ||sum g_k||_p / (sum ||g_k||_p^2)^{1/2}
  double constant = 0.0;  // 2 B_p
};

/// Checks ||sum_k g_k||_p <= 2 B_p (sum_k ||g_k||_p^2)^{1/2} for block
/// combinations g_k on one joint cube. Families must share n and have disjoint
/// supports (DomainError otherwise).
CrossBlockResult cross_block_check(
    const std::vector<std::pair<CharacterFamily, std::vector<double>>>& blocks, double p);

}  // namespace l1lab
