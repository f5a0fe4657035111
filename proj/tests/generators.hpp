#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <vector>

#include "l1lab/hypercube.hpp"
#include "l1lab/operators_l1.hpp"
#include "l1lab/random.hpp"

namespace gen {

inline l1lab::HypercubeFunction gaussian(l1lab::Rng& rng, int n) {
  std::vector<double> v(std::size_t{1} << n);
  for (auto& x : v) x = rng.normal();
  return {n, std::move(v)};
}

inline std::vector<double> gaussian_vector(l1lab::Rng& rng, std::size_t count) {
  std::vector<double> v(count);
  for (auto& x : v) x = rng.normal();
  return v;
}

/// Dense random kernel between two cubes.
inline l1lab::L1Operator random_operator(l1lab::Rng& rng, int source_bits, int target_bits) {
  const std::size_t rows = std::size_t{1} << target_bits, cols = std::size_t{1} << source_bits;
  std::vector<double> m(rows * cols);
  for (auto& x : m) x = rng.normal();
  return {l1lab::AtomicMeasureSpace::hypercube(source_bits), l1lab::AtomicMeasureSpace::hypercube(target_bits),
          std::move(m)};
}

/// Random kernel between arbitrary finite probability spaces.
inline l1lab::L1Operator random_general_operator(l1lab::Rng& rng, std::size_t cols, std::size_t rows) {
  auto weights = [&](std::size_t k) {
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& x : w) s += (x = 0.1 + rng.uniform());
    for (auto& x : w) x /= s;
    return w;
  };
  auto src = weights(cols);
  auto tgt = weights(rows);
  std::vector<double> m(rows * cols);
  for (auto& x : m) x = rng.normal();
  return {l1lab::AtomicMeasureSpace::probability(src), l1lab::AtomicMeasureSpace::probability(tgt), std::move(m)};
}

}  // namespace gen
