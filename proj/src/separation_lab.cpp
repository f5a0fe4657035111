#include "l1lab/separation_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hull_internal.hpp"
#include "l1lab/errors.hpp"
#include "l1lab/parallel.hpp"
#include "l1lab/random.hpp"

namespace l1lab {
namespace {

constexpr double kGrid = 16.0;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
}

detail::HullProblem make_problem(const HypercubeFunction& v, std::span<const HypercubeFunction> columns) {
  detail::HullProblem problem{v.size(), v.values().data(), {}};
  problem.columns.reserve(columns.size());
  for (const auto& c : columns) {
    if (c.bits() != v.bits()) throw DomainError("hull columns live on a different cube");
    problem.columns.push_back(c.values().data());
  }
  return problem;
}

// Mask of a +-character, or nullopt.
std::optional<std::uint32_t> character_mask(const HypercubeFunction& f) {
  const WalshSpectrum spectrum = fwht_forward(f);
  std::optional<std::uint32_t> mask;
  for (std::size_t a = 0; a < spectrum.coeffs.size(); ++a) {
    const double c = spectrum.coeffs[a];
    if (std::abs(c) < 1e-12) continue;
    if (mask || std::abs(std::abs(c) - 1.0) > 1e-12) return std::nullopt;
    mask = static_cast<std::uint32_t>(a);
  }
  return mask;
}

// E |sum_j eps_j a_j| for a_j = weights / kGrid in integers.
double grid_mean_abs(const std::vector<int>& weights) {
  const int total = std::accumulate(weights.begin(), weights.end(), 0);
  std::vector<double> dist(2 * static_cast<std::size_t>(total) + 1, 0.0), next(dist.size());
  dist[total] = 1.0;
  int reach = 0;
  for (int a : weights) {
    if (a == 0) continue;
    std::fill(next.begin() + (total - reach - a), next.begin() + (total + reach + a + 1), 0.0);
    for (int s = total - reach; s <= total + reach; ++s) {
      const double mass = dist[s];
      if (mass == 0.0) continue;
      next[s - a] += 0.5 * mass;
      next[s + a] += 0.5 * mass;
    }
    reach += a;
    std::swap(dist, next);
  }
  double mean = 0.0;
  for (int s = 0; s <= 2 * total; ++s) mean += dist[s] * std::abs(s - total);
  return mean / kGrid;
}

}  // namespace

HullDistance distance_to_symmetric_hull(const HypercubeFunction& v, std::span<const HypercubeFunction> columns,
                                        const HullOptions& options) {
  const detail::HullProblem problem = make_problem(v, columns);
  const std::size_t P = problem.points;
  const std::size_t k = problem.columns.size();
  HullMethod method = options.method;
  if (method == HullMethod::automatic) {
    method = P <= kSimplexAutoPoints && P * std::max<std::size_t>(k, 1) <= kSimplexCapacity ? HullMethod::simplex
                                                                                             : HullMethod::frank_wolfe;
  }
  if (method == HullMethod::frank_wolfe) {
    if (!(options.tol > 0.0)) throw DomainError("frank_wolfe needs tol > 0");
    return detail::hull_frank_wolfe(problem, options);
  }
  if (P * k > kSimplexCapacity) {
    throw CapacityError("simplex needs 2^n * columns <= " + std::to_string(kSimplexCapacity) + ", got " +
                        std::to_string(P * k));
  }
  const detail::LpSolution sol = detail::solve_hull_lp(problem);
  HullDistance out;
  out.distance = sol.distance;
  out.combination = sol.lambda;
  out.lower = detail::dual_lower_bound(problem, sol.dual);
  out.gap = std::max(0.0, out.distance - out.lower);
  out.iterations = sol.pivots;
  return out;
}

double dist_set(std::span<const HypercubeFunction> A, std::span<const HypercubeFunction> columns,
                const HullOptions& options) {
  if (A.empty()) throw DomainError("dist_set needs a nonempty set");
  std::vector<double> d(A.size());
  for_each_chunk(A.size(), chunk_count(A.size(), 64), [&](const Chunk& chunk) {
    for (std::size_t i = chunk.begin; i < chunk.end; ++i) d[i] = distance_to_symmetric_hull(A[i], columns, options).distance;
  });
  return *std::max_element(d.begin(), d.end());
}

double reuse_bound(double norm_T, double epsilon) {
  check_epsilon(epsilon);
  if (!(norm_T > 0.0)) throw DomainError("reuse_bound needs a positive norm");
  const double a = norm_T / epsilon;
  return a * a / ((1.0 - 2.0 * epsilon) * (1.0 - 2.0 * epsilon));
}

double survivor_lower_bound(double norm_T, double epsilon, std::size_t N) {
  check_epsilon(epsilon);
  if (!(norm_T > 0.0)) throw DomainError("survivor_lower_bound needs a positive norm");
  const double a = (1.0 - 2.0 * epsilon) * epsilon / norm_T;
  return a * a * static_cast<double>(N);
}

SurvivorAnalysis survivor_counts(double norm_T, const HypercubeFunction& f, std::span<const HypercubeFunction> images,
                                 double epsilon, std::span<const HypercubeFunction> targets) {
  check_epsilon(epsilon);
  SurvivorAnalysis out;
  out.norm_T = norm_T;
  const std::size_t P = f.size();
  const double inv_P = 1.0 / static_cast<double>(P);
  const double threshold = norm_T / epsilon;
  std::vector<double> in_E(P);
  std::size_t outside = 0;
  double f_sum = 0.0;
  for (std::size_t y = 0; y < P; ++y) {
    f_sum += f[y];
    const bool inside = f[y] <= threshold;
    in_E[y] = inside ? 1.0 : 0.0;
    outside += inside ? 0 : 1;
  }
  out.f_norm = f_sum * inv_P;
  out.complement_measure = static_cast<double>(outside) * inv_P;
  out.markov_holds = out.f_norm <= norm_T + 1e-9 && out.complement_measure <= epsilon + 1e-12;

  const double level = 1.0 - 2.0 * epsilon;
  for (const auto& g : images) {
    if (g.bits() != f.bits()) throw DomainError("image lives on a different cube than f");
    if (lp_norm(g, 1.0) >= level - 1e-12) ++out.survivors;
  }

  // Character targets are read off one transform of 1_E T w per image.
  std::vector<std::optional<std::uint32_t>> masks(targets.size());
  bool all_characters = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].bits() != f.bits()) throw DomainError("target lives on a different cube than f");
    masks[i] = character_mask(targets[i]);
    all_characters = all_characters && masks[i].has_value();
  }
  out.pairing_counts.assign(images.size(), 0);
  if (!targets.empty()) {
    for_each_chunk(images.size(), chunk_count(images.size(), 64), [&](const Chunk& chunk) {
      std::vector<double> restricted(P);
      for (std::size_t w = chunk.begin; w < chunk.end; ++w) {
        const auto& g = images[w];
        bool zero = true;
        for (std::size_t y = 0; y < P; ++y) {
          restricted[y] = in_E[y] * g[y];
          zero = zero && restricted[y] == 0.0;
        }
        if (zero) continue;
        std::size_t count = 0;
        if (all_characters) {
          const WalshSpectrum s = fwht_forward(HypercubeFunction(f.bits(), restricted));
          for (std::size_t i = 0; i < targets.size(); ++i) {
            // <1_E v_i, T w> = sign_i * coefficient at mask_i
            if (std::abs(s.coeffs[*masks[i]]) >= level - 1e-12) ++count;
          }
        } else {
          for (std::size_t i = 0; i < targets.size(); ++i) {
            double acc = 0.0;
            for (std::size_t y = 0; y < P; ++y) acc += targets[i][y] * restricted[y];
            if (std::abs(acc * inv_P) >= level - 1e-12) ++count;
          }
        }
        out.pairing_counts[w] = count;
      }
    });
  }
  out.reuse_bound = norm_T > 0.0 ? reuse_bound(norm_T, epsilon) : 0.0;
  out.reuse_holds = norm_T <= 0.0 || std::all_of(out.pairing_counts.begin(), out.pairing_counts.end(),
                                                 [&](std::size_t c) { return c <= out.reuse_bound; });
  if (norm_T <= 0.0) out.reuse_holds = out.survivors == 0;
  return out;
}

SurvivorAnalysis survivor_analysis(const L1Operator& T, std::span<const HypercubeFunction> V_q, CoordinateSet block,
                                   double epsilon, std::span<const HypercubeFunction> targets) {
  check_epsilon(epsilon);
  const auto source_bits = T.source().cube_bits();
  const auto target_bits = T.target().cube_bits();
  if (!source_bits || !target_bits) throw DomainError("survivor_analysis needs hypercube spaces");
  const L1Operator Tn = project_block(T, block);
  const HypercubeFunction f = modulus(Tn).apply(HypercubeFunction::constant(*source_bits, 1.0));
  std::vector<HypercubeFunction> images;
  images.reserve(V_q.size());
  for (const auto& w : V_q) {
    if (w.bits() != *source_bits) throw DomainError("V_q lives on a different cube than the source");
    images.push_back(Tn.apply(w));
  }
  return survivor_counts(operator_norm_l1(T), f, images, epsilon, targets);
}

SignPatternOperator::SignPatternOperator(std::vector<SourceCharacter> sources, std::vector<HypercubeFunction> images)
    : sources_(std::move(sources)), images_(std::move(images)) {
  if (images_.empty()) throw DomainError("sign-pattern operator needs at least one image");
  if (images_.size() != sources_.size()) throw DomainError("one image per source character");
  for (const auto& g : images_) {
    if (g.bits() != images_.front().bits()) throw DomainError("images live on different cubes");
  }
  std::vector<std::size_t> blocks;
  for (const auto& s : sources_) {
    if (s.mask == 0) throw DomainError("source characters must be nonconstant");
    blocks.push_back(s.block);
  }
  std::sort(blocks.begin(), blocks.end());
  if (std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end()) {
    throw DomainError("source characters must sit on distinct blocks");
  }
}

HypercubeFunction SignPatternOperator::apply_character(const SourceCharacter& w) const {
  for (std::size_t j = 0; j < sources_.size(); ++j) {
    if (sources_[j] == w) return images_[j];
  }
  return HypercubeFunction(target_bits());
}

SignSearchResult SignPatternOperator::norm(const SignSearchOptions& options) const {
  return max_sign_norm(images_, 1.0, options);
}

HypercubeFunction SignPatternOperator::modulus_one(std::size_t exact_threshold) const {
  const std::size_t N = images_.size();
  const std::size_t P = images_.front().size();
  bool on_grid = true;
  double total = 0.0;
  for (const auto& g : images_) {
    for (double a : g.values()) {
      const double s = kGrid * a;
      on_grid = on_grid && std::abs(s - std::round(s)) < 1e-9;
      total = std::max(total, std::abs(s));
    }
  }
  on_grid = on_grid && total * static_cast<double>(N) < 1e7;
  if (!on_grid && N > exact_threshold) {
    throw CapacityError("|T|1 needs images on the 1/16 grid or at most " + std::to_string(exact_threshold) +
                        " images");
  }
  std::vector<double> out(P);
  const std::size_t chunks = chunk_count(P, 64);
  for_each_chunk(P, chunks, [&](const Chunk& chunk) {
    std::map<std::vector<int>, double> cache;
    std::vector<double> a(N);
    for (std::size_t y = chunk.begin; y < chunk.end; ++y) {
      for (std::size_t j = 0; j < N; ++j) a[j] = images_[j][y];
      if (on_grid) {
        std::vector<int> key(N);
        for (std::size_t j = 0; j < N; ++j) key[j] = static_cast<int>(std::lround(std::abs(kGrid * a[j])));
        std::sort(key.begin(), key.end());
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, grid_mean_abs(key)).first;
        out[y] = it->second;
      } else {
        double total = 0.0;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << N); ++s) {
          double acc = 0.0;
          for (std::size_t j = 0; j < N; ++j) acc += ((s >> j) & 1u) ? -a[j] : a[j];
          total += std::abs(acc);
        }
        out[y] = total / std::ldexp(1.0, static_cast<int>(N));
      }
    }
  });
  return HypercubeFunction(target_bits(), std::move(out));
}

L1Operator SignPatternOperator::materialize() const {
  const std::size_t N = images_.size();
  if (N > 16) throw CapacityError("materialize needs at most 16 source characters");
  const int bits = static_cast<int>(N);
  const std::size_t S = std::size_t{1} << bits;
  const std::size_t P = images_.front().size();
  const double mu = 1.0 / static_cast<double>(S);
  std::vector<double> m(P * S, 0.0);
  for (std::size_t x = 0; x < S; ++x) {
    for (std::size_t j = 0; j < N; ++j) {
      const double r = ((x >> j) & 1u) ? -mu : mu;
      for (std::size_t y = 0; y < P; ++y) m[y * S + x] += r * images_[j][y];
    }
  }
  return L1Operator(AtomicMeasureSpace::hypercube(bits), AtomicMeasureSpace::hypercube(target_bits()), std::move(m));
}

std::string CoverageStrategy::to_string() const {
  return kind == Kind::orthogonal_map ? "orthogonal_map" : "random(seed=" + std::to_string(seed) + ")";
}

CoverageStrategy CoverageStrategy::parse(const std::string& text) {
  if (text == "orthogonal_map") return {};
  if (text == "random") return {Kind::random, 0};
  const std::string prefix = "random(seed=";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() + 1 && text.back() == ')') {
    const std::string digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return {Kind::random, std::stoull(digits)};
    }
  }
  throw DomainError("unknown coverage strategy: " + text);
}

ExponentFit fit_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_exponent needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_exponent needs positive data");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw DomainError("fit_exponent needs two distinct abscissae");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::size_t target_count(int p, int n) {
  if (p < 2 || p % 2 != 0) throw DomainError("p must be even and >= 2");
  if (n < 1 || (2 * n) % p != 0) throw DomainError("n must be a positive multiple of p/2");
  const int e = 2 * n / p;
  if (e > 24) throw CapacityError("N(p, n) exceeds 2^24");
  return std::size_t{1} << e;
}

namespace {

bool feasible_n(int p, int q, int n) {
  return n >= 1 && n <= 16 && n % (p / 2) == 0 && n % (q / 2) == 0 && 2 * n / p <= 16 && 2 * n / q >= 1;
}

CoverageInstance run_instance(int p, int q, int n, double epsilon, const CoverageStrategy& strategy,
                              const CoverageOptions& options) {
  CoverageInstance inst;
  inst.n = n;
  inst.N_target = target_count(p, n);

  const CharacterFamily vp = bch_family(FieldSpec::standard(2 * n / p), p / 2);
  const CharacterFamily vq = bch_family(FieldSpec::standard(2 * n / q), q / 2);
  if (!verify_independence(vq, q).pass) {
    throw ConstructionError("block family " + vq.provenance.to_string() + " is not " + std::to_string(q) +
                            "-independent");
  }
  std::vector<HypercubeFunction> targets;
  targets.reserve(vp.size());
  for (auto mask : vp.masks) targets.push_back(character(n, {mask}));
  const std::size_t N = targets.size();
  inst.targets = N;
  inst.blocks = N;
  inst.vq_size = N * vq.size();

  std::vector<SourceCharacter> sources;
  for (std::size_t j = 0; j < N; ++j) sources.push_back({j, vq.masks.front()});

  std::vector<HypercubeFunction> images;
  images.reserve(N);
  if (strategy.kind == CoverageStrategy::Kind::orthogonal_map) {
    images = targets;
  } else {
    Rng rng(splitmix64(strategy.seed + static_cast<std::uint64_t>(n)));
    std::vector<std::size_t> perm(N);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = N; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::uint32_t> spare;
    const std::uint32_t full = n >= 32 ? ~0u : (1u << n) - 1u;
    std::vector<bool> used(std::size_t{full} + 1, false);
    for (auto m : vp.masks) used[m] = true;
    for (std::uint32_t m = 1; m <= full; ++m) {
      if (!used[m]) spare.push_back(m);
    }
    const HypercubeFunction extra =
        spare.empty() ? HypercubeFunction(n) : character(n, {spare[rng.below(spare.size())]});
    static constexpr double kScale[] = {1.0, 1.25, 1.5};
    for (std::size_t j = 0; j < N; ++j) {
      const double sigma = rng.sign();
      const double s = kScale[rng.below(3)];
      const double delta = rng.below(2) ? 0.0625 : 0.0;
      images.push_back(targets[perm[j]] * (sigma * s) + extra * delta);
    }
  }
  const SignPatternOperator op(std::move(sources), std::move(images));

  HullOptions hull = options.hull;
  if (!hull.decide_at) hull.decide_at = epsilon;
  inst.distances.assign(N, 0.0);
  inst.distance_gaps.assign(N, 0.0);
  for_each_chunk(N, chunk_count(N, 64), [&](const Chunk& chunk) {
    for (std::size_t i = chunk.begin; i < chunk.end; ++i) {
      const HullDistance h = distance_to_symmetric_hull(targets[i], op.images(), hull);
      inst.distances[i] = h.distance;
      inst.distance_gaps[i] = h.gap;
    }
  });
  inst.dist_set = *std::max_element(inst.distances.begin(), inst.distances.end());
  inst.covered = inst.dist_set <= epsilon;

  const SignSearchResult norm = op.norm(options.sign);
  inst.measured_norm = norm.value;
  inst.norm_exact = norm.exact;

  const HypercubeFunction f = op.modulus_one(options.sign.exact_threshold);
  inst.survivors = survivor_counts(inst.measured_norm, f, op.images(), epsilon, targets);

  // Lemma on the surviving q-characters: they are independent signs, so
  // max_eps ||sum eps chi||_q is the Rademacher moment of their count.
  std::size_t alive = 0;
  double eps_min = 0.0;
  for (const auto& g : op.images()) {
    const double norm1 = lp_norm(g, 1.0);
    if (norm1 >= 1.0 - 2.0 * epsilon - 1e-12) {
      eps_min = alive == 0 ? norm1 : std::min(eps_min, norm1);
      ++alive;
    }
  }
  if (alive > 0) {
    const double Ns = static_cast<double>(alive);
    inst.lemma_C = rademacher_count_norm(alive, q) / std::sqrt(Ns);
    inst.lemma_p = alive > 1 ? 2.0 * n / std::log2(Ns) : 0.0;
    inst.lemma_bound = eps_min * std::sqrt(Ns) / (inst.lemma_C * std::pow(std::ldexp(1.0, n), 1.0 / q));
  }
  inst.norm_dominates_bound = inst.measured_norm >= inst.lemma_bound - 1e-9;
  inst.survivor_bound = survivor_lower_bound(inst.measured_norm, epsilon, N);
  inst.survivor_bound_holds = !inst.covered || static_cast<double>(inst.survivors.survivors) >= inst.survivor_bound;
  return inst;
}

}  // namespace

SeparationReport coverage_experiment(int p, int q, std::span<const int> n_list, double epsilon,
                                     const CoverageStrategy& strategy, const CoverageOptions& options) {
  if (p < 2 || p % 2 != 0 || q % 2 != 0 || q <= p) throw DomainError("need even p >= 2 and even q > p");
  check_epsilon(epsilon);
  for (int n : n_list) {
    if (!feasible_n(p, q, n)) {
      int largest = 0;
      for (int m = 16; m >= 1; --m) {
        if (feasible_n(p, q, m)) {
          largest = m;
          break;
        }
      }
      throw CapacityError("n = " + std::to_string(n) + " infeasible for (p, q) = (" + std::to_string(p) + ", " +
                          std::to_string(q) + "); largest feasible n is " + std::to_string(largest));
    }
  }

  SeparationReport report;
  report.p = p;
  report.q = q;
  report.epsilon = epsilon;
  report.strategy = strategy;
  for (int n : n_list) report.instances.push_back(run_instance(p, q, n, epsilon, strategy, options));

  std::vector<double> xs, ys;
  for (const auto& inst : report.instances) {
    xs.push_back(static_cast<double>(inst.N_target));
    ys.push_back(inst.measured_norm);
  }
  const bool distinct = std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) != xs.end();
  if (xs.size() >= 2 && distinct && std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; })) {
    report.exponent_fit = fit_exponent(xs, ys);
  }
  return report;
}

}  // namespace l1lab
