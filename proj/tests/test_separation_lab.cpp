#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "l1lab/errors.hpp"
#include "l1lab/lemma_lab.hpp"
#include "l1lab/separation_lab.hpp"

using namespace l1lab;

namespace {

// min over |t| <= 1 of ||v - t c||_1 on a dense grid of t.
double grid_scan(const HypercubeFunction& v, const HypercubeFunction& c, int steps = 4000) {
  double best = INFINITY;
  for (int i = -steps; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    best = std::min(best, lp_norm(v - c * t, 1.0));
  }
  return best;
}

// Grid over the l_1 ball in two coordinates.
double grid_scan2(const HypercubeFunction& v, const HypercubeFunction& a, const HypercubeFunction& b, int steps = 200) {
  double best = INFINITY;
  for (int i = -steps; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    const int rest = steps - std::abs(i);
    for (int j = -rest; j <= rest; ++j) {
      const double t = static_cast<double>(j) / steps;
      best = std::min(best, lp_norm(v - a * s - b * t, 1.0));
    }
  }
  return best;
}

const HullOptions kSimplex{HullMethod::simplex};
const HullOptions kFw{HullMethod::frank_wolfe, 1e-7, 20000};

}  // namespace

TEST_CASE("hull distance examples") {
  Rng rng(61);
  std::vector<HypercubeFunction> cols;
  for (int j = 0; j < 5; ++j) cols.push_back(gen::gaussian(rng, 4));
  for (const auto& opt : {kSimplex, kFw}) {
    CHECK(distance_to_symmetric_hull(HypercubeFunction(4), cols, opt).distance <= 1e-12);
    CHECK(distance_to_symmetric_hull(cols[2], cols, opt).distance <= 1e-7);
    CHECK(distance_to_symmetric_hull(cols[2] * -1.0, cols, opt).distance <= 1e-7);
    const std::vector<HypercubeFunction> one{character(4, {6})};
    const auto h = distance_to_symmetric_hull(character(4, {3}), one, opt);
    CHECK(h.distance == doctest::Approx(grid_scan(character(4, {3}), one[0])).epsilon(1e-9));
    CHECK(h.distance == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("hull distance certificates") {
  Rng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<HypercubeFunction> cols;
    for (std::size_t j = 0; j < 1 + rng.below(10); ++j) cols.push_back(gen::gaussian(rng, n));
    const auto v = gen::gaussian(rng, n);
    const auto s = distance_to_symmetric_hull(v, cols, kSimplex);
    // the reported combination is feasible and attains the value
    double l1 = 0.0;
    HypercubeFunction r = v;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      l1 += std::abs(s.combination[j]);
      r = r - cols[j] * s.combination[j];
    }
    CHECK(l1 <= 1.0 + 1e-9);
    CHECK(lp_norm(r, 1.0) == doctest::Approx(s.distance).epsilon(1e-9));
    CHECK(s.gap <= 1e-9);
    CHECK(s.lower <= s.distance + 1e-12);
    CHECK(s.distance <= lp_norm(v, 1.0) + 1e-12);
  }
}

TEST_CASE("hull distance against a two-column grid") {
  Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = gen::gaussian(rng, 3), b = gen::gaussian(rng, 3), v = gen::gaussian(rng, 3);
    const std::vector<HypercubeFunction> cols{a, b};
    const double lp = distance_to_symmetric_hull(v, cols, kSimplex).distance;
    const double grid = grid_scan2(v, a, b);
    CHECK(lp <= grid + 1e-12);
    // grid spacing 1/200 moves the value by at most (||a||_1 + ||b||_1)/200
    CHECK(grid - lp <= (lp_norm(a, 1.0) + lp_norm(b, 1.0)) / 200.0 + 1e-12);
  }
}

TEST_CASE("simplex and frank-wolfe agree") {
  Rng rng(64);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<HypercubeFunction> cols;
    for (std::size_t j = 0; j < 1 + rng.below(16); ++j) cols.push_back(gen::gaussian(rng, n));
    const auto v = gen::gaussian(rng, n);
    const auto s = distance_to_symmetric_hull(v, cols, kSimplex);
    const auto f = distance_to_symmetric_hull(v, cols, kFw);
    CHECK(std::abs(s.distance - f.distance) <= std::max(1e-6, 2 * kFw.tol));
    CHECK(f.gap <= kFw.tol);
    CHECK(f.lower <= s.distance + 1e-9);
  }
}

TEST_CASE("hull distance is 1-Lipschitz") {
  Rng rng(65);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    std::vector<HypercubeFunction> cols;
    for (std::size_t j = 0; j < 1 + rng.below(6); ++j) cols.push_back(gen::gaussian(rng, n));
    const auto v = gen::gaussian(rng, n);
    const auto w = v + gen::gaussian(rng, n) * 0.3;
    const double dv = distance_to_symmetric_hull(v, cols).distance, dw = distance_to_symmetric_hull(w, cols).distance;
    CHECK(std::abs(dv - dw) <= lp_norm(v - w, 1.0) + 1e-9);
  }
}

TEST_CASE("hull distance errors") {
  const std::vector<HypercubeFunction> cols{character(3, {1})};
  CHECK_THROWS_AS(distance_to_symmetric_hull(character(4, {1}), cols), DomainError);
  CHECK_THROWS_AS(distance_to_symmetric_hull(character(3, {1}), cols, {HullMethod::frank_wolfe, 0.0}), DomainError);
  std::vector<HypercubeFunction> wide(62, HypercubeFunction(14));
  CHECK_THROWS_AS(distance_to_symmetric_hull(HypercubeFunction(14), wide, kSimplex), CapacityError);
}

TEST_CASE("dist_set examples") {
  Rng rng(66);
  std::vector<HypercubeFunction> cols;
  for (int j = 0; j < 4; ++j) cols.push_back(gen::gaussian(rng, 3));
  const std::vector<HypercubeFunction> verts{cols[0], cols[3] * -1.0};
  CHECK(dist_set(verts, cols) <= 1e-9);
  const std::vector<HypercubeFunction> zero{HypercubeFunction(3)};
  CHECK(dist_set(zero, cols) <= 1e-12);

  std::vector<HypercubeFunction> rad;
  for (int i = 0; i < 4; ++i) rad.push_back(character(4, CoordinateSet::single(i)));
  const std::vector<HypercubeFunction> other{character(4, {0b0110})};
  double oracle = 0.0;
  for (const auto& r : rad) oracle = std::max(oracle, grid_scan(r, other[0]));
  CHECK(dist_set(rad, other) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(dist_set(rad, other) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(dist_set({}, cols), DomainError);
}

TEST_CASE("reuse bound") {
  CHECK(reuse_bound(1, 0.1) == doctest::Approx(156.25).epsilon(1e-12));
  CHECK(reuse_bound(2, 0.1) == doctest::Approx(625.0).epsilon(1e-12));
  CHECK(reuse_bound(1, 0.25) == doctest::Approx(64.0).epsilon(1e-12));
  CHECK_THROWS_AS(reuse_bound(1, 0.5), DomainError);
  CHECK_THROWS_AS(reuse_bound(1, 0.0), DomainError);
  CHECK(survivor_lower_bound(1, 0.1, 100) == doctest::Approx(0.64).epsilon(1e-12));
}

TEST_CASE("survivor analysis examples") {
  std::vector<HypercubeFunction> block;
  for (std::uint32_t a = 1; a < 16; ++a) block.push_back(character(4, {a}));

  const auto zero = survivor_analysis(L1Operator::zero(AtomicMeasureSpace::hypercube(4), AtomicMeasureSpace::hypercube(4)),
                                      block, CoordinateSet::full(4), 0.1, block);
  CHECK(zero.f_norm == 0.0);
  CHECK(zero.complement_measure == 0.0);
  CHECK(zero.survivors == 0);

  const auto id = survivor_analysis(L1Operator::identity(AtomicMeasureSpace::hypercube(4)), block,
                                    CoordinateSet::full(4), 0.1, block);
  CHECK(id.survivors == 15);
  CHECK(id.f_norm == doctest::Approx(1.0));
  CHECK(id.markov_holds);
  for (auto c : id.pairing_counts) CHECK(c == 1);
  CHECK(id.reuse_holds);

  CHECK_THROWS_AS(survivor_analysis(L1Operator::identity(AtomicMeasureSpace::hypercube(4)), block, {15}, 0.5),
                  DomainError);
}

TEST_CASE("Markov truncation on random operators") {
  Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    auto T = gen::random_operator(rng, 3, 4);
    // scale to norm 1
    const double norm = operator_norm_l1(T);
    std::vector<double> m(T.matrix().begin(), T.matrix().end());
    for (auto& x : m) x /= norm;
    T = L1Operator(T.source(), T.target(), std::move(m));
    std::vector<HypercubeFunction> vq;
    for (std::uint32_t a = 1; a < 8; ++a) vq.push_back(character(3, {a}));
    const CoordinateSet block{static_cast<std::uint32_t>(rng.below(16))};
    const auto s = survivor_analysis(T, vq, block, 0.1);
    CHECK(s.norm_T == doctest::Approx(1.0));
    CHECK(s.f_norm <= 1.0 + 1e-12);
    CHECK(s.complement_measure <= 0.1);
    CHECK(s.markov_holds);
    // direct measure of [f > 10] from the modulus kernel
    const auto Tn = project_block(T, block);
    const auto f = modulus(Tn).apply(HypercubeFunction::constant(3, 1.0));
    double outside = 0.0;
    for (std::size_t y = 0; y < f.size(); ++y) outside += f[y] > 10.0 ? 1.0 / 16 : 0.0;
    CHECK(s.complement_measure == outside);
  }
}

TEST_CASE("sign-pattern operator agrees with its materialization") {
  Rng rng(68);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t N = 1 + rng.below(8);
    std::vector<SourceCharacter> src;
    std::vector<HypercubeFunction> img;
    for (std::size_t j = 0; j < N; ++j) {
      src.push_back({j, 1u});
      std::vector<double> v(8);
      for (auto& x : v) x = static_cast<double>(static_cast<int>(rng.below(17)) - 8) / 16.0;
      img.emplace_back(3, v);
    }
    const SignPatternOperator op(src, img);
    const auto M = op.materialize();
    SignSearchOptions exact;
    exact.mode = SignMode::exact;
    CHECK(op.norm(exact).value == doctest::Approx(operator_norm_l1(M)).epsilon(1e-12));
    const auto f = op.modulus_one();
    const auto g = modulus(M).apply(HypercubeFunction::constant(static_cast<int>(N), 1.0));
    for (std::size_t y = 0; y < 8; ++y) CHECK(f[y] == doctest::Approx(g[y]).epsilon(1e-12));
    // T chi_j = g_j: chi_j is the j-th Rademacher of the sign cube
    for (std::size_t j = 0; j < N; ++j) {
      const auto image = M.apply(character(static_cast<int>(N), CoordinateSet::single(static_cast<int>(j))));
      for (std::size_t y = 0; y < 8; ++y) CHECK(image[y] == doctest::Approx(img[j][y]).epsilon(1e-12));
      CHECK(op.apply_character(src[j]) == img[j]);
    }
    CHECK(lp_norm(op.apply_character({0, 2u}), kInfinity) == 0.0);
  }
  CHECK_THROWS_AS(SignPatternOperator({{0, 1u}, {0, 2u}}, {character(2, {1}), character(2, {2})}), DomainError);
}

TEST_CASE("modulus of off-grid images by enumeration") {
  Rng rng(69);
  std::vector<SourceCharacter> src;
  std::vector<HypercubeFunction> img;
  for (std::size_t j = 0; j < 6; ++j) {
    src.push_back({j, 3u});
    img.push_back(gen::gaussian(rng, 2));
  }
  const SignPatternOperator op(src, img);
  const auto f = op.modulus_one();
  const auto g = modulus(op.materialize()).apply(HypercubeFunction::constant(6, 1.0));
  for (std::size_t y = 0; y < 4; ++y) CHECK(f[y] == doctest::Approx(g[y]).epsilon(1e-12));
  CHECK_THROWS_AS(op.modulus_one(3), CapacityError);
}

TEST_CASE("strategy strings") {
  CHECK(CoverageStrategy::parse("orthogonal_map").kind == CoverageStrategy::Kind::orthogonal_map);
  CHECK(CoverageStrategy::parse("random(seed=12)").seed == 12);
  CHECK(CoverageStrategy::parse("random(seed=12)").to_string() == "random(seed=12)");
  CHECK_THROWS_AS(CoverageStrategy::parse("greedy"), DomainError);
}

TEST_CASE("exponent fitter") {
  std::vector<double> x{16, 64, 256, 1024}, y;
  for (double v : x) y.push_back(std::pow(v, 0.25));
  const auto fit = fit_exponent(x, y);
  CHECK(std::abs(fit.slope - 0.25) <= 1e-9);
  CHECK(std::abs(fit.intercept) <= 1e-9);
  CHECK(fit.residual <= 1e-12);
  const std::vector<double> one{2.0};
  CHECK_THROWS_AS(fit_exponent(one, one), DomainError);
}

TEST_CASE("coverage experiment") {
  const std::vector<int> none;
  const auto empty = coverage_experiment(4, 8, none, 0.1, {});
  CHECK(empty.instances.empty());
  CHECK_FALSE(empty.exponent_fit.has_value());

  const std::vector<int> n8{8};
  const auto rep = coverage_experiment(4, 8, n8, 0.1, {});
  REQUIRE(rep.instances.size() == 1);
  const auto& inst = rep.instances.front();
  CHECK(inst.N_target == 16);
  CHECK(inst.targets == 15);
  CHECK(inst.covered);
  CHECK(inst.dist_set <= 1e-9);
  CHECK(inst.norm_exact);
  CHECK(inst.norm_dominates_bound);
  CHECK(inst.measured_norm >= inst.lemma_bound);
  CHECK(inst.survivors.survivors == 15);
  CHECK(inst.survivors.survivors <= inst.vq_size);
  CHECK(inst.survivors.markov_holds);
  CHECK(inst.survivor_bound_holds);
  CHECK(inst.lemma_C == doctest::Approx(rademacher_count_norm(15, 8) / std::sqrt(15.0)));

  const auto rnd = coverage_experiment(4, 8, n8, 0.1, CoverageStrategy::parse("random(seed=3)"));
  const auto& ri = rnd.instances.front();
  for (double d : ri.distances) CHECK(d >= 0.0);
  CHECK(ri.survivors.markov_holds);
  CHECK(ri.survivor_bound_holds);
  CHECK(ri.norm_dominates_bound);
  CHECK(rnd == coverage_experiment(4, 8, n8, 0.1, CoverageStrategy::parse("random(seed=3)")));

  const std::vector<int> bad{6};
  CHECK_THROWS_AS(coverage_experiment(4, 8, bad, 0.1, {}), CapacityError);
  CHECK_THROWS_AS(coverage_experiment(4, 4, n8, 0.1, {}), DomainError);
  CHECK_THROWS_AS(coverage_experiment(4, 8, n8, 0.6, {}), DomainError);
}
