#include "l1lab/lambda_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "l1lab/errors.hpp"
#include "l1lab/parallel.hpp"
#include "l1lab/random.hpp"

namespace l1lab {
namespace {

bool is_even_integer(double q) { return q >= 2.0 && q == std::floor(q) && std::fmod(q, 2.0) == 0.0; }

// sum |s_x|^q, or max |s_x| for q = infinity. Monotone in the q-norm, so
// searches compare this and take the root once.
class PowerSum {
 public:
  explicit PowerSum(double q) : q_(q), integer_(q == std::floor(q) && q <= 64.0 ? static_cast<int>(q) : 0) {
    if (std::isnan(q) || q < 1.0) throw DomainError("norm exponent must be >= 1");
  }

  double term(double v) const {
    const double a = std::abs(v);
    if (integer_ > 0) {
      double r = 1.0;
      for (int i = 0; i < integer_; ++i) r *= a;
      return r;
    }
    return std::pow(a, q_);
  }

  double combine(double acc, double t) const { return std::isinf(q_) ? std::max(acc, t) : acc + t; }

  double of(std::span<const double> s) const {
    double acc = 0.0;
    for (double v : s) acc = combine(acc, std::isinf(q_) ? std::abs(v) : term(v));
    return acc;
  }

  double of_flip(std::span<const double> s, std::span<const double> v, double factor) const {
    double acc = 0.0;
    for (std::size_t x = 0; x < s.size(); ++x) {
      const double y = s[x] + factor * v[x];
      acc = combine(acc, std::isinf(q_) ? std::abs(y) : term(y));
    }
    return acc;
  }

  double norm(double acc, std::size_t points) const {
    if (std::isinf(q_)) return acc;
    return std::pow(acc / static_cast<double>(points), 1.0 / q_);
  }

 private:
  double q_;
  int integer_;
};

void check_same_cube(std::span<const HypercubeFunction> vectors) {
  for (const auto& v : vectors) {
    if (v.bits() != vectors.front().bits()) throw DomainError("vectors live on different cubes");
  }
}

std::vector<double> signed_sum(std::span<const HypercubeFunction> vectors, std::span<const int> signs) {
  std::vector<double> s(vectors.front().size(), 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto v = vectors[i].values();
    for (std::size_t x = 0; x < s.size(); ++x) s[x] += signs[i] * v[x];
  }
  return s;
}

struct Best {
  double score = -1.0;
  std::vector<int> signs;
  std::uint64_t evaluations = 0;
};

Best exact_search(std::span<const HypercubeFunction> vectors, const PowerSum& power) {
  const std::size_t count = vectors.size();
  const std::uint64_t total = std::uint64_t{1} << (count - 1);
  const std::size_t chunks = chunk_count(total, 64);
  std::vector<Best> partial(chunks);

  for_each_chunk(total, chunks, [&](const Chunk& chunk) {
    Best& best = partial[chunk.index];
    std::vector<int> signs(count, 1);
    const std::uint64_t gray0 = chunk.begin ^ (chunk.begin >> 1);
    for (std::size_t i = 1; i < count; ++i) signs[i] = (gray0 >> (i - 1)) & 1u ? -1 : 1;
    std::vector<double> s = signed_sum(vectors, signs);
    std::uint64_t best_index = chunk.begin;
    for (std::uint64_t idx = chunk.begin; idx < chunk.end; ++idx) {
      if (idx != chunk.begin) {
        const std::size_t i = static_cast<std::size_t>(std::countr_zero(idx)) + 1;
        const auto v = vectors[i].values();
        const double delta = -2.0 * signs[i];
        for (std::size_t x = 0; x < s.size(); ++x) s[x] += delta * v[x];
        signs[i] = -signs[i];
      }
      const double score = power.of(s);
      ++best.evaluations;
      if (score > best.score) {
        best.score = score;
        best_index = idx;
      }
    }
    const std::uint64_t gray = best_index ^ (best_index >> 1);
    best.signs.assign(count, 1);
    for (std::size_t i = 1; i < count; ++i) best.signs[i] = (gray >> (i - 1)) & 1u ? -1 : 1;
  });

  Best merged;
  for (auto& p : partial) {
    merged.evaluations += p.evaluations;
    if (p.score > merged.score) {
      merged.score = p.score;
      merged.signs = std::move(p.signs);
    }
  }
  return merged;
}

Best local_search(std::span<const HypercubeFunction> vectors, const PowerSum& power,
                  std::uint64_t seed, int restarts) {
  const std::size_t count = vectors.size();
  const auto runs = static_cast<std::size_t>(std::max(restarts, 1));
  const std::size_t chunks = chunk_count(runs, 64);
  std::vector<Best> partial(chunks);

  for_each_chunk(runs, chunks, [&](const Chunk& chunk) {
    Best& best = partial[chunk.index];
    for (std::size_t run = chunk.begin; run < chunk.end; ++run) {
      Rng rng(splitmix64(seed + run));
      std::vector<int> signs(count, 1);
      if (run != 0) {
        for (auto& e : signs) e = rng.sign();
      }
      std::vector<double> s = signed_sum(vectors, signs);
      double score = power.of(s);
      ++best.evaluations;
      while (true) {
        double best_flip = score;
        std::size_t flip = count;
        for (std::size_t i = 0; i < count; ++i) {
          const double candidate = power.of_flip(s, vectors[i].values(), -2.0 * signs[i]);
          ++best.evaluations;
          if (candidate > best_flip * (1.0 + 1e-14)) {
            best_flip = candidate;
            flip = i;
          }
        }
        if (flip == count) break;
        const auto v = vectors[flip].values();
        const double delta = -2.0 * signs[flip];
        for (std::size_t x = 0; x < s.size(); ++x) s[x] += delta * v[x];
        signs[flip] = -signs[flip];
        score = power.of(s);
      }
      if (score > best.score) {
        best.score = score;
        best.signs = signs;
      }
    }
  });

  Best merged;
  for (auto& p : partial) {
    merged.evaluations += p.evaluations;
    if (p.score > merged.score) {
      merged.score = p.score;
      merged.signs = std::move(p.signs);
    }
  }
  return merged;
}

}  // namespace

HypercubeFunction synthesize(const CharacterFamily& family, std::span<const double> coeffs) {
  if (coeffs.size() != family.masks.size()) {
    throw DomainError("coefficient count " + std::to_string(coeffs.size()) + " differs from family size " +
                      std::to_string(family.masks.size()));
  }
  check_cube_bits(family.n);
  WalshSpectrum spectrum{family.n, std::vector<double>(std::size_t{1} << family.n, 0.0)};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    check_mask(family.n, {family.masks[i]});
    spectrum.coeffs[family.masks[i]] += coeffs[i];
  }
  return fwht_inverse(spectrum);
}

double moment_norm(const CharacterFamily& family, std::span<const double> coeffs, int q) {
  if (q < 2 || q % 2 != 0) throw DomainError("moment_norm needs an even integer q >= 2");
  const HypercubeFunction f = synthesize(family, coeffs);
  double sum = 0.0;
  for (double v : f.values()) {
    const double sq = v * v;
    double t = 1.0;
    for (int i = 0; i < q / 2; ++i) t *= sq;
    sum += t;
  }
  return std::pow(std::ldexp(sum, -f.bits()), 1.0 / q);
}

double double_factorial_odd(int q) {
  if (q < 2 || q % 2 != 0) throw DomainError("pairing constant needs an even q >= 2");
  double out = 1.0;
  for (int j = q - 1; j > 1; j -= 2) out *= j;
  return out;
}

double pairing_constant(int q) { return std::pow(double_factorial_odd(q), 1.0 / q); }

double khintchine_constant(double p) {
  if (p <= 2.0) return 1.0;
  if (is_even_integer(p)) return pairing_constant(static_cast<int>(p));
  const double log_moment = std::lgamma((p + 1.0) / 2.0) - 0.5 * std::log(std::numbers::pi);
  return std::sqrt(2.0) * std::exp(log_moment / p);
}

double signed_sum_norm(std::span<const HypercubeFunction> vectors, std::span<const int> signs, double q) {
  if (vectors.empty()) return 0.0;
  if (signs.size() != vectors.size()) throw DomainError("sign pattern length differs from vector count");
  check_same_cube(vectors);
  return lp_norm(HypercubeFunction(vectors.front().bits(), signed_sum(vectors, signs)), q);
}

SignSearchResult max_sign_norm(std::span<const HypercubeFunction> vectors, double q,
                               const SignSearchOptions& options) {
  const PowerSum power(q);
  SignSearchResult result;
  if (vectors.empty()) {
    result.exact = true;
    return result;
  }
  check_same_cube(vectors);
  bool exact = options.mode == SignMode::exact;
  if (options.mode == SignMode::automatic) exact = vectors.size() <= options.exact_threshold;
  if (exact && vectors.size() > options.exact_threshold) {
    throw CapacityError("exact sign enumeration limited to N <= " + std::to_string(options.exact_threshold) +
                        ", got N = " + std::to_string(vectors.size()));
  }
  if (exact && vectors.size() > 63) throw CapacityError("exact sign enumeration needs N <= 63");
  Best best = exact ? exact_search(vectors, power) : local_search(vectors, power, options.seed, options.restarts);
  result.signs = std::move(best.signs);
  result.exact = exact;
  result.evaluations = best.evaluations;
  result.value = signed_sum_norm(vectors, result.signs, q);
  return result;
}

LambdaReport lambda_constant(const CharacterFamily& family, double q, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("lambda_constant needs at least one sample");
  if (std::isnan(q) || q < 1.0) throw DomainError("lambda_constant needs q >= 1");
  const std::size_t count = family.masks.size();
  const std::size_t probes = 1 + count + samples;
  const std::size_t chunks = chunk_count(probes, 64);
  std::vector<double> partial(chunks, 0.0);

  for_each_chunk(probes, chunks, [&](const Chunk& chunk) {
    std::vector<double> a(count);
    for (std::size_t j = chunk.begin; j < chunk.end; ++j) {
      if (j == 0) {
        std::fill(a.begin(), a.end(), 1.0);
      } else if (j <= count) {
        std::fill(a.begin(), a.end(), 0.0);
        a[j - 1] = 1.0;
      } else {
        Rng rng(splitmix64(seed + j));
        for (auto& x : a) x = rng.normal();
      }
      double norm2 = 0.0;
      for (double x : a) norm2 += x * x;
      if (norm2 == 0.0) continue;
      const double ratio = lp_norm(synthesize(family, a), q) / std::sqrt(norm2);
      partial[chunk.index] = std::max(partial[chunk.index], ratio);
    }
  });

  LambdaReport report;
  report.q = q;
  report.samples = samples;
  report.seed = seed;
  for (double r : partial) report.lower = std::max(report.lower, r);
  if (is_even_integer(q) && family.claimed_independence) {
    const auto needed = std::min<std::size_t>(static_cast<std::size_t>(q), count);
    if (static_cast<std::size_t>(*family.claimed_independence) >= needed) {
      report.upper = pairing_constant(static_cast<int>(q));
    }
  }
  return report;
}

double rademacher_sum_norm(std::span<const double> coeffs, double p) {
  const PowerSum power(p);
  const std::size_t count = coeffs.size();
  if (count == 0) return 0.0;
  if (count > 24) throw CapacityError("exact Rademacher enumeration limited to 24 terms");
  // Symmetry eps -> -eps: enumerate eps_0 = +1 only.
  const std::uint64_t total = std::uint64_t{1} << (count - 1);
  std::vector<int> signs(count, 1);
  double s = 0.0;
  for (double a : coeffs) s += a;
  double acc = 0.0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (idx != 0) {
      const std::size_t i = static_cast<std::size_t>(std::countr_zero(idx)) + 1;
      s -= 2.0 * signs[i] * coeffs[i];
      signs[i] = -signs[i];
    }
    acc = power.combine(acc, std::isinf(p) ? std::abs(s) : power.term(s));
  }
  return power.norm(acc, total);
}

double rademacher_count_norm(std::size_t count, double p) {
  const PowerSum power(p);
  if (count == 0) return 0.0;
  if (std::isinf(p)) return static_cast<double>(count);
  long double acc = 0.0L;
  const long double n = static_cast<long double>(count);
  for (std::size_t k = 0; k <= count; ++k) {
    const long double kk = static_cast<long double>(k);
    const long double log_weight =
        std::lgamma(n + 1.0L) - std::lgamma(kk + 1.0L) - std::lgamma(n - kk + 1.0L) - n * std::log(2.0L);
    const long double value = std::abs(n - 2.0L * kk);
    if (value == 0.0L) continue;
    acc += std::exp(log_weight + static_cast<long double>(p) * std::log(value));
  }
  return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

double khintchine_estimate(double p, int count, std::size_t trials, std::uint64_t seed) {
  if (std::isnan(p) || p < 2.0) throw DomainError("khintchine_estimate needs p >= 2");
  if (count < 1) throw DomainError("khintchine_estimate needs at least one Rademacher");
  if (trials < 1) throw DomainError("khintchine_estimate needs at least one trial");
  const auto n = static_cast<std::size_t>(count);
  const std::size_t chunks = chunk_count(trials, 64);
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(trials, chunks, [&](const Chunk& chunk) {
    std::vector<double> a(n);
    for (std::size_t j = chunk.begin; j < chunk.end; ++j) {
      if (j == 0) {
        std::fill(a.begin(), a.end(), 1.0);
      } else {
        Rng rng(splitmix64(seed + j));
        for (auto& x : a) x = rng.normal();
      }
      double norm2 = 0.0;
      for (double x : a) norm2 += x * x;
      if (norm2 == 0.0) continue;
      partial[chunk.index] = std::max(partial[chunk.index], rademacher_sum_norm(a, p) / std::sqrt(norm2));
    }
  });
  return *std::max_element(partial.begin(), partial.end());
}

CrossBlockResult cross_block_check(
    const std::vector<std::pair<CharacterFamily, std::vector<double>>>& blocks, double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("cross_block_check needs p >= 1");
  CrossBlockResult result;
  result.constant = 2.0 * khintchine_constant(p);
  if (blocks.empty()) return result;
  const int n = blocks.front().first.n;
  std::uint32_t used = 0;
  for (const auto& [family, coeffs] : blocks) {
    if (family.n != n) throw DomainError("blocks must share one joint cube");
    std::uint32_t support = 0;
    for (auto m : family.masks) support |= m;
    if (support & used) throw DomainError("blocks share a coordinate");
    used |= support;
  }
  HypercubeFunction total(n);
  double sum_sq = 0.0;
  for (const auto& [family, coeffs] : blocks) {
    const HypercubeFunction g = synthesize(family, coeffs);
    const double norm = lp_norm(g, p);
    sum_sq += norm * norm;
    total = total + g;
  }
  const double lhs = lp_norm(total, p);
  const double rhs = std::sqrt(sum_sq);
  result.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  result.pass = lhs <= result.constant * rhs * (1.0 + 1e-12) + 1e-12;
  return result;
}

}  // namespace l1lab
