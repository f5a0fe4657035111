#pragma once

// Operators between finite atomic L_1 spaces.
//
// An operator is stored as a target x source matrix acting on densities: the
// source vector f (density w.r.t. the source weights) maps to the target
// density M f. The unit ball of L_1(mu) is the closed convex hull of the
// normalised atoms 1_j / mu_j, so ||T|| = max_j ||M e_j||_{L_1(nu)} / mu_j.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "l1lab/gf2_designs.hpp"
#include "l1lab/hypercube.hpp"

namespace l1lab {

class AtomicMeasureSpace {
 public:
  enum class Kind { probability, counting };

  /// Probability space; weights must be positive and sum to 1 within 1e-12.
  static AtomicMeasureSpace probability(std::vector<double> weights);
  static AtomicMeasureSpace uniform(std::size_t atoms);
  /// Uniform probability on {-1,1}^n in canonical point order.
  static AtomicMeasureSpace hypercube(int n);
  /// l_1-type counting measure on d atoms.
  static AtomicMeasureSpace counting(std::size_t atoms);

  Kind kind() const { return kind_; }
  std::size_t atoms() const { return weights_.size(); }
  double weight(std::size_t j) const { return weights_[j]; }
  std::span<const double> weights() const { return weights_; }

  /// n if this is the uniform probability on 2^n atoms, else nothing.
  std::optional<int> cube_bits() const;

  friend bool operator==(const AtomicMeasureSpace&, const AtomicMeasureSpace&) = default;

 private:
  AtomicMeasureSpace(Kind kind, std::vector<double> weights) : kind_(kind), weights_(std::move(weights)) {}

  Kind kind_;
  std::vector<double> weights_;
};

class L1Operator {
 public:
  L1Operator(AtomicMeasureSpace source, AtomicMeasureSpace target, std::vector<double> matrix);

  static L1Operator zero(AtomicMeasureSpace source, AtomicMeasureSpace target);
  static L1Operator identity(AtomicMeasureSpace space);

  const AtomicMeasureSpace& source() const { return source_; }
  const AtomicMeasureSpace& target() const { return target_; }
  std::size_t rows() const { return target_.atoms(); }
  std::size_t cols() const { return source_.atoms(); }
  double at(std::size_t row, std::size_t col) const { return matrix_[row * cols() + col]; }
  std::span<const double> matrix() const { return matrix_; }

  /// Target density of a source density.
  std::vector<double> apply(std::span<const double> density) const;
  /// Both spaces must be hypercubes.
  HypercubeFunction apply(const HypercubeFunction& f) const;
  /// Column j, i.e. the image of the unit source density at atom j.
  std::vector<double> column(std::size_t j) const;

  friend bool operator==(const L1Operator&, const L1Operator&) = default;

 private:
  AtomicMeasureSpace source_;
  AtomicMeasureSpace target_;
  std::vector<double> matrix_;  // row-major, rows = target atoms
};

/// this o other (apply `inner` first).
L1Operator compose(const L1Operator& outer, const L1Operator& inner);

/// ||T||_{L_1 -> L_1}.
double operator_norm_l1(const L1Operator& op);

/// Entrywise absolute value of the density kernel.
L1Operator modulus(const L1Operator& op);

/// Norm of the adjoint on bounded functions, sup over |g| <= 1 of ||T* g||_inf,
/// evaluated from the explicit adjoint kernel.
double adjoint_norm_linf(const L1Operator& op);

/// Block of joint coordinates together with a family on the block's local cube.
struct PlacedFamily {
  CoordinateSet block;
  CharacterFamily family;  // family.n == block.size()
};

/// J_p: counting measure on sum_k N_k atoms -> uniform probability on the
/// joint n-cube; column (k, i) is character i of family k embedded in block k.
L1Operator build_jp(const std::vector<PlacedFamily>& families, int joint_bits);

/// P_block o T, for T with a hypercube target.
L1Operator project_block(const L1Operator& op, CoordinateSet block);

}  // namespace l1lab
