#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "generators.hpp"
#include "l1lab/errors.hpp"
#include "l1lab/gf2_designs.hpp"
#include "l1lab/lambda_analysis.hpp"

using namespace l1lab;

namespace {

// Shift-and-add multiply, reducing after every doubling.
std::uint32_t xtime_mul(std::uint32_t a, std::uint32_t b, int m, std::uint32_t poly) {
  std::uint32_t acc = 0;
  for (int i = 0; i < m; ++i) {
    if ((b >> i) & 1u) acc ^= a;
    a <<= 1;
    if ((a >> m) & 1u) a ^= poly;
  }
  return acc;
}

// Brute-force: smallest zero-XOR subset of size <= t, by full subset scan.
std::optional<std::vector<std::uint32_t>> brute_dependency(const std::vector<std::uint32_t>& masks, int t) {
  const std::size_t N = masks.size();
  std::optional<std::vector<std::uint32_t>> best;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << N); ++s) {
    const int r = std::popcount(s);
    if (r > t || (best && r >= static_cast<int>(best->size()))) continue;
    std::uint32_t x = 0;
    for (std::size_t i = 0; i < N; ++i) {
      if ((s >> i) & 1u) x ^= masks[i];
    }
    if (x == 0) {
      std::vector<std::uint32_t> w;
      for (std::size_t i = 0; i < N; ++i) {
        if ((s >> i) & 1u) w.push_back(masks[i]);
      }
      best = w;
    }
  }
  return best;
}

CharacterFamily explicit_family(int n, std::vector<std::uint32_t> masks) {
  CharacterFamily f;
  f.n = n;
  f.masks = std::move(masks);
  return f;
}

}  // namespace

TEST_CASE("field multiplication examples") {
  const FieldSpec gf4(2, 0b111);
  CHECK(gf4.mul(2, 2) == 3);
  const FieldSpec gf8(3, 0b1011);
  CHECK(gf8.mul(4, 4) == 6);
  for (std::uint32_t a = 0; a < 8; ++a) CHECK(gf8.mul(1, a) == a);
  CHECK_THROWS_AS(gf2m_mul(gf8, 8, 1), DomainError);
  CHECK_THROWS_AS(FieldSpec(2, 0b101), DomainError);   // x^2 + 1 = (x + 1)^2
  CHECK_THROWS_AS(FieldSpec(3, 0b111), DomainError);   // wrong degree
}

TEST_CASE("field axioms against shift-and-add") {
  Rng rng(21);
  for (int m = 1; m <= 16; ++m) {
    const FieldSpec f = FieldSpec::standard(m);
    CHECK(is_irreducible(f.polynomial()));
    const std::uint32_t size = 1u << m;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = static_cast<std::uint32_t>(rng.below(size));
      const auto b = static_cast<std::uint32_t>(rng.below(size));
      const auto c = static_cast<std::uint32_t>(rng.below(size));
      CHECK(f.mul(a, b) == xtime_mul(a, b, m, f.polynomial()));
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      CHECK(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
      if (a != 0) CHECK(f.order() % f.element_order(a) == 0);
    }
    CHECK(f.element_order(f.generator()) == f.order());
  }
}

TEST_CASE("bch examples") {
  const auto f = bch_family(FieldSpec::standard(2), 2);
  std::set<std::uint32_t> got(f.masks.begin(), f.masks.end());
  CHECK(got == std::set<std::uint32_t>{5, 6, 7});
  CHECK(f.n == 4);
  CHECK(f.claimed_independence == 4);
  const auto one = bch_family(FieldSpec::standard(1), 1);
  CHECK(one.masks == std::vector<std::uint32_t>{1});
  const auto g16 = bch_family(FieldSpec::standard(4), 2);
  CHECK(g16.size() == 15);
  CHECK(g16.n == 8);
  CHECK(verify_independence(g16, 4).pass);
  CHECK_FALSE(brute_dependency(g16.masks, 4).has_value());
  CHECK_THROWS_AS(bch_family(FieldSpec::standard(13), 2), DomainError);
}

TEST_CASE("bch designed distance for m <= 8, k <= 4") {
  for (int m = 1; m <= 8; ++m) {
    for (int k = 1; k <= 4 && k * m <= 24; ++k) {
      const auto f = bch_family(FieldSpec::standard(m), k);
      CHECK_MESSAGE(verify_independence(f, 2 * k).pass, "m=" << m << " k=" << k);
    }
  }
}

TEST_CASE("rademacher family") {
  CHECK(rademacher_family(1).masks == std::vector<std::uint32_t>{1});
  const auto r3 = rademacher_family(3);
  CHECK(r3.masks == std::vector<std::uint32_t>{1, 2, 4});
  CHECK(verify_independence(r3, 6).pass);
}

TEST_CASE("independence examples") {
  const auto bad = verify_independence(explicit_family(2, {1, 2, 3}), 4);
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(verify_independence(explicit_family(3, {1, 2, 4}), 6).pass);
  CHECK(verify_independence(explicit_family(3, {5, 6, 7}), 4).pass);
}

TEST_CASE("independence agrees with brute force, both methods") {
  Rng rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const std::size_t N = 3 + rng.below(std::min<std::uint64_t>(12, (1u << n) - 3));
    const auto fam = random_family(n, N, rng.next());
    const int t = 2 + 2 * static_cast<int>(rng.below(3));
    const auto oracle = brute_dependency(fam.masks, t);
    for (auto method : {IndependenceMethod::enumerate, IndependenceMethod::meet_in_middle}) {
      const auto res = verify_independence(fam, t, method);
      CHECK(res.pass == !oracle.has_value());
      if (oracle) {
        CHECK(res.witness.size() == oracle->size());
        std::uint32_t x = 0;
        for (auto m : res.witness) x ^= m;
        CHECK(x == 0);
        CHECK(std::is_sorted(res.witness.begin(), res.witness.end()));
      }
    }
  }
}

TEST_CASE("random family") {
  const auto all = random_family(4, 15, 99);
  CHECK(all.masks.size() == 15);
  CHECK(std::set<std::uint32_t>(all.masks.begin(), all.masks.end()).size() == 15);
  const auto a = random_family(8, 10, 7), b = random_family(8, 10, 7);
  CHECK(a == b);
  CHECK(std::set<std::uint32_t>(a.masks.begin(), a.masks.end()).size() == 10);
  CHECK(std::find(a.masks.begin(), a.masks.end(), 0u) == a.masks.end());
  CHECK_FALSE(a.claimed_independence.has_value());
  CHECK(a.provenance.to_string() == "random(seed=7)");
  CHECK_THROWS_AS(random_family(4, 16, 1), DomainError);
}

TEST_CASE("searched family") {
  const auto f = search_family(6, 8, 4);
  CHECK(f.size() == 8);
  CHECK(verify_independence(f, 4).pass);
  CHECK_FALSE(brute_dependency(f.masks, 4).has_value());
  CHECK(f.provenance.to_string() == "search(t=4)");
  CHECK_THROWS_AS(search_family(3, 7, 4), ConstructionError);
}

TEST_CASE("provenance strings round trip") {
  for (const char* s : {"bch(m=4,k=2)", "rademacher", "random(seed=7)", "search(t=4)", "explicit"}) {
    CHECK(Provenance::parse(s).to_string() == s);
  }
  CHECK_THROWS_AS(Provenance::parse("bch(m=4)"), DomainError);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(validate_family(explicit_family(3, {1, 1})), DomainError);
  CHECK_THROWS_AS(validate_family(explicit_family(3, {0, 1})), DomainError);
  CHECK_THROWS_AS(validate_family(explicit_family(3, {8})), DomainError);
}

TEST_CASE("pairing moment bound on independent families") {
  Rng rng(23);
  for (auto [m, k] : {std::pair{4, 2}, std::pair{3, 2}, std::pair{3, 3}, std::pair{2, 4}}) {
    const auto f = bch_family(FieldSpec::standard(m), k);
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = gen::gaussian_vector(rng, f.size());
      double s2 = 0.0;
      for (double x : a) s2 += x * x;
      const double lhs = std::pow(moment_norm(f, a, 2 * k), 2 * k);
      CHECK(lhs <= double_factorial_odd(2 * k) * std::pow(s2, k) * (1 + 1e-12) + 1e-9);
    }
  }
}
