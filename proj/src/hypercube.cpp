#include "l1lab/hypercube.hpp"

#include <cmath>
#include <string>

#include "l1lab/errors.hpp"

namespace l1lab {

void check_cube_bits(int n) {
  if (n < 0 || n > kMaxCubeBits) {
    throw DomainError("cube dimension " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxCubeBits) + "]");
  }
}

void check_mask(int n, CoordinateSet set) {
  check_cube_bits(n);
  if ((static_cast<std::uint64_t>(set.mask) >> n) != 0) {
    throw DomainError("coordinate mask " + std::to_string(set.mask) + " out of range for n=" +
                      std::to_string(n));
  }
}

HypercubeFunction::HypercubeFunction(int n) : n_(n) {
  check_cube_bits(n);
  values_.assign(std::size_t{1} << n, 0.0);
}

HypercubeFunction::HypercubeFunction(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  check_cube_bits(n);
  if (values_.size() != (std::size_t{1} << n)) {
    throw DomainError("function on n=" + std::to_string(n) + " needs " +
                      std::to_string(std::size_t{1} << n) + " values, got " +
                      std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("function values must be finite");
  }
}

HypercubeFunction HypercubeFunction::constant(int n, double c) {
  check_cube_bits(n);
  return HypercubeFunction(n, std::vector<double>(std::size_t{1} << n, c));
}

HypercubeFunction HypercubeFunction::operator+(const HypercubeFunction& other) const {
  if (other.n_ != n_) throw DomainError("adding functions on different cubes");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return HypercubeFunction(n_, std::move(out));
}

HypercubeFunction HypercubeFunction::operator-(const HypercubeFunction& other) const {
  if (other.n_ != n_) throw DomainError("subtracting functions on different cubes");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return HypercubeFunction(n_, std::move(out));
}

HypercubeFunction HypercubeFunction::operator*(double scale) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= scale;
  return HypercubeFunction(n_, std::move(out));
}

HypercubeFunction character(int n, CoordinateSet set) {
  check_mask(n, set);
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t b = 0; b < values.size(); ++b) {
    values[b] = (std::popcount(static_cast<std::uint32_t>(b) & set.mask) & 1) ? -1.0 : 1.0;
  }
  return HypercubeFunction(n, std::move(values));
}

void walsh_butterfly(std::span<double> data) {
  const std::size_t len = data.size();
  for (std::size_t half = 1; half < len; half <<= 1) {
    for (std::size_t start = 0; start < len; start += half << 1) {
      for (std::size_t i = start; i < start + half; ++i) {
        const double a = data[i];
        const double b = data[i + half];
        data[i] = a + b;
        data[i + half] = a - b;
      }
    }
  }
}

WalshSpectrum fwht_forward(const HypercubeFunction& f) {
  std::vector<double> coeffs(f.values().begin(), f.values().end());
  walsh_butterfly(coeffs);
  const double scale = std::ldexp(1.0, -f.bits());
  for (double& c : coeffs) c *= scale;
  return {f.bits(), std::move(coeffs)};
}

HypercubeFunction fwht_inverse(const WalshSpectrum& spectrum) {
  check_cube_bits(spectrum.n);
  if (spectrum.coeffs.size() != (std::size_t{1} << spectrum.n)) {
    throw DomainError("spectrum length does not match n");
  }
  std::vector<double> values(spectrum.coeffs);
  walsh_butterfly(values);
  return HypercubeFunction(spectrum.n, std::move(values));
}

double lp_norm(const HypercubeFunction& f, double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("lp_norm requires p >= 1");
  const auto values = f.values();
  if (std::isinf(p)) {
    double best = 0.0;
    for (double v : values) best = std::max(best, std::abs(v));
    return best;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : values) sum += std::abs(v);
    return std::ldexp(sum, -f.bits());
  }
  if (p == 2.0) {
    for (double v : values) sum += v * v;
    return std::sqrt(std::ldexp(sum, -f.bits()));
  }
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(std::ldexp(sum, -f.bits()), 1.0 / p);
}

double inner(const HypercubeFunction& f, const HypercubeFunction& g) {
  if (f.bits() != g.bits()) throw DomainError("inner product of functions on different cubes");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return std::ldexp(sum, -f.bits());
}

HypercubeFunction conditional_expectation(const HypercubeFunction& f, CoordinateSet keep) {
  const int n = f.bits();
  check_mask(n, keep);
  std::vector<double> values(f.values().begin(), f.values().end());
  // Average each dropped coordinate in turn: f <- (f + f o flip_i) / 2.
  for (int i = 0; i < n; ++i) {
    if (keep.mask & (1u << i)) continue;
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t b = 0; b < values.size(); ++b) {
      if (b & bit) continue;
      const double avg = 0.5 * (values[b] + values[b | bit]);
      values[b] = avg;
      values[b | bit] = avg;
    }
  }
  return HypercubeFunction(n, std::move(values));
}

std::uint32_t embed_mask(std::uint32_t local, CoordinateSet block) {
  std::uint32_t out = 0;
  std::uint32_t remaining = block.mask;
  for (std::uint32_t bit = 1; remaining != 0; bit <<= 1) {
    const std::uint32_t lowest = remaining & (~remaining + 1);
    if (local & bit) out |= lowest;
    remaining &= remaining - 1;
  }
  return out;
}

}  // namespace l1lab
