#pragma once

// Real functions on the discrete cube {-1,1}^n with uniform probability.
//
// Points are encoded as n-bit codes b, little-endian, with coordinate
// x_i = (-1)^{b_i}. Coordinate subsets are masks in the same bit order, so the
// Walsh character w_A takes the value (-1)^{popcount(b & A)} at point b.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace l1lab {

inline constexpr int kMaxCubeBits = 24;

struct CoordinateSet {
  std::uint32_t mask = 0;

  constexpr int size() const { return std::popcount(mask); }
  constexpr bool empty() const { return mask == 0; }
  constexpr bool subset_of(CoordinateSet other) const { return (mask & ~other.mask) == 0; }
  constexpr bool disjoint(CoordinateSet other) const { return (mask & other.mask) == 0; }

  static constexpr CoordinateSet full(int n) {
    return {n >= 32 ? 0xFFFFFFFFu : ((1u << n) - 1u)};
  }
  static constexpr CoordinateSet single(int i) { return {1u << i}; }

  friend constexpr bool operator==(CoordinateSet, CoordinateSet) = default;
};

/// Throws DomainError unless 0 <= n <= kMaxCubeBits.
void check_cube_bits(int n);
/// Throws DomainError unless set.mask < 2^n.
void check_mask(int n, CoordinateSet set);

class HypercubeFunction {
 public:
  /// The zero function on the 0-cube (a single point).
  HypercubeFunction() : n_(0), values_(1, 0.0) {}
  /// The zero function on {-1,1}^n.
  explicit HypercubeFunction(int n);
  /// Takes ownership of 2^n finite values in canonical point order.
  HypercubeFunction(int n, std::vector<double> values);

  static HypercubeFunction constant(int n, double c);

  int bits() const { return n_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t point) const { return values_[point]; }

  HypercubeFunction operator+(const HypercubeFunction& other) const;
  HypercubeFunction operator-(const HypercubeFunction& other) const;
  HypercubeFunction operator*(double scale) const;

  friend bool operator==(const HypercubeFunction&, const HypercubeFunction&) = default;

 private:
  int n_;
  std::vector<double> values_;
};

/// Probability-normalised Walsh coefficients: coeffs[A] = 2^{-n} sum_x f(x) w_A(x).
struct WalshSpectrum {
  int n = 0;
  std::vector<double> coeffs;
};

HypercubeFunction character(int n, CoordinateSet set);

/// Unnormalised in-place Walsh-Hadamard butterfly on a power-of-two array.
void walsh_butterfly(std::span<double> data);

WalshSpectrum fwht_forward(const HypercubeFunction& f);
HypercubeFunction fwht_inverse(const WalshSpectrum& spectrum);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (2^{-n} sum |f|^p)^{1/p}; max |f| for p = infinity. Throws DomainError for p < 1.
double lp_norm(const HypercubeFunction& f, double p);

/// Probability inner product 2^{-n} sum f g.
double inner(const HypercubeFunction& f, const HypercubeFunction& g);

/// P_M f: averages out every coordinate outside M.
HypercubeFunction conditional_expectation(const HypercubeFunction& f, CoordinateSet keep);

/// Scatters the bits of a local mask onto the set bits of block (pdep).
std::uint32_t embed_mask(std::uint32_t local, CoordinateSet block);

}  // namespace l1lab
