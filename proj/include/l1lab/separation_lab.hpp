#pragma once

// Distances to symmetric convex hulls in L_1 of a finite cube, the survivor
// counting behind the separation argument, and coverage sweeps over n.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l1lab/gf2_designs.hpp"
#include "l1lab/hypercube.hpp"
#include "l1lab/lambda_analysis.hpp"
#include "l1lab/operators_l1.hpp"

namespace l1lab {

enum class HullMethod { simplex, frank_wolfe, automatic };

struct HullOptions {
  HullMethod method = HullMethod::simplex;
  double tol = 1e-7;                     // frank_wolfe gap target
  std::size_t max_iterations = 20000;    // first-order iterations
  /// frank_wolfe stops once the certificate places the distance on one side of this.
  std::optional<double> decide_at;
};

/// Largest 2^n * |columns| accepted by the simplex.
inline constexpr std::size_t kSimplexCapacity = 1'000'000;
/// automatic picks the simplex up to this many points.
inline constexpr std::size_t kSimplexAutoPoints = 1024;

struct HullDistance {
  double distance = 0.0;             // feasible value ||v - sum lambda_j c_j||_1
  std::vector<double> combination;   // lambda, ||lambda||_1 <= 1
  double gap = 0.0;                  // upper - lower
  double lower = 0.0;                // dual certificate
  std::size_t iterations = 0;
};

/// min over ||lambda||_1 <= 1 of ||v - sum_j lambda_j c_j||_{L_1(uniform)}.
HullDistance distance_to_symmetric_hull(const HypercubeFunction& v, std::span<const HypercubeFunction> columns,
                                        const HullOptions& options = {});

/// max over a in A of the hull distance.
double dist_set(std::span<const HypercubeFunction> A, std::span<const HypercubeFunction> columns,
                const HullOptions& options = {});

/// (norm_T / eps)^2 (1 - 2 eps)^{-2}.
double reuse_bound(double norm_T, double epsilon);

/// (1 - 2 eps)^2 (eps / norm_T)^2 N.
double survivor_lower_bound(double norm_T, double epsilon, std::size_t N);

struct SurvivorAnalysis {
  double norm_T = 0.0;
  double f_norm = 0.0;               // ||f||_1, f = |T_n| 1
  double complement_measure = 0.0;   // measure of [f > ||T|| / eps]
  bool markov_holds = false;         // ||f||_1 <= ||T|| and complement <= eps
  std::size_t survivors = 0;         // #{w : ||T_n w||_1 >= 1 - 2 eps}
  std::vector<std::size_t> pairing_counts;  // per w, #{i : <1_E v_i, +-T_n w> >= 1 - 2 eps}
  double reuse_bound = 0.0;
  bool reuse_holds = false;          // every pairing count <= reuse_bound

  friend bool operator==(const SurvivorAnalysis&, const SurvivorAnalysis&) = default;
};

/// Survivor counting for T_n = P_block T. `V_q` lives on the source cube,
/// `targets` on the target cube. Requires 0 < eps < 1/2.
SurvivorAnalysis survivor_analysis(const L1Operator& T, std::span<const HypercubeFunction> V_q, CoordinateSet block,
                                   double epsilon, std::span<const HypercubeFunction> targets = {});

/// Shared counting step given f, ||T|| and the images T_n w.
SurvivorAnalysis survivor_counts(double norm_T, const HypercubeFunction& f, std::span<const HypercubeFunction> images,
                                 double epsilon, std::span<const HypercubeFunction> targets);

/// Character j of block b of a product of independent blocks.
struct SourceCharacter {
  std::size_t block = 0;
  std::uint32_t mask = 0;
  friend bool operator==(const SourceCharacter&, const SourceCharacter&) = default;
};

/// T f = sum_j E[chi_j f] g_j for characters chi_j living on distinct
/// independent blocks, so (chi_j) is distributed as N independent signs and
/// the source cube never needs to be stored.
class SignPatternOperator {
 public:
  SignPatternOperator(std::vector<SourceCharacter> sources, std::vector<HypercubeFunction> images);

  std::size_t size() const { return images_.size(); }
  int target_bits() const { return images_.front().bits(); }
  const std::vector<SourceCharacter>& sources() const { return sources_; }
  const std::vector<HypercubeFunction>& images() const { return images_; }

  /// T w for a character w of one block: g_j if w = chi_j, else 0.
  HypercubeFunction apply_character(const SourceCharacter& w) const;
  /// ||T|| = max over sign patterns of ||sum eps_j g_j||_1.
  SignSearchResult norm(const SignSearchOptions& options) const;
  /// |T| 1 = E_eps |sum eps_j g_j(y)|, pointwise.
  HypercubeFunction modulus_one(std::size_t exact_threshold = 20) const;
  /// The same operator on the N-bit cube of the signs (N <= 16).
  L1Operator materialize() const;

 private:
  std::vector<SourceCharacter> sources_;
  std::vector<HypercubeFunction> images_;
};

struct CoverageStrategy {
  enum class Kind { orthogonal_map, random };
  Kind kind = Kind::orthogonal_map;
  std::uint64_t seed = 0;

  std::string to_string() const;
  static CoverageStrategy parse(const std::string& text);
  friend bool operator==(const CoverageStrategy&, const CoverageStrategy&) = default;
};

struct CoverageOptions {
  SignSearchOptions sign;
  HullOptions hull{HullMethod::automatic, 1e-6, 2000, std::nullopt};  // decide_at defaults to epsilon
};

/// One n of a sweep.
struct CoverageInstance {
  int n = 0;
  std::size_t N_target = 0;       // N(p, n) = 2^{2n/p}
  std::size_t targets = 0;        // |V_p(k_n)| actually built
  std::size_t blocks = 0;         // independent q-blocks
  std::size_t vq_size = 0;        // |V_q|
  std::vector<double> distances;  // per target, feasible hull distance
  std::vector<double> distance_gaps;
  double dist_set = 0.0;
  bool covered = false;           // dist_set <= eps
  double measured_norm = 0.0;
  bool norm_exact = false;
  double lemma_C = 0.0;
  double lemma_p = 0.0;
  double lemma_bound = 0.0;
  bool norm_dominates_bound = false;
  SurvivorAnalysis survivors;
  double survivor_bound = 0.0;    // (1 - 2 eps)^2 (eps / ||T||)^2 targets
  bool survivor_bound_holds = false;  // vacuous when not covered

  friend bool operator==(const CoverageInstance&, const CoverageInstance&) = default;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square in log space
  friend bool operator==(const ExponentFit&, const ExponentFit&) = default;
};

/// Least squares of log y against log x.
ExponentFit fit_exponent(std::span<const double> x, std::span<const double> y);

struct SeparationReport {
  int p = 0;
  int q = 0;
  double epsilon = 0.1;
  CoverageStrategy strategy;
  std::vector<CoverageInstance> instances;
  std::optional<ExponentFit> exponent_fit;  // needs two distinct n

  friend bool operator==(const SeparationReport&, const SeparationReport&) = default;
};

/// Size of the target family at block size n.
std::size_t target_count(int p, int n);

SeparationReport coverage_experiment(int p, int q, std::span<const int> n_list, double epsilon,
                                     const CoverageStrategy& strategy, const CoverageOptions& options = {});

}  // namespace l1lab
