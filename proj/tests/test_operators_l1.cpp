#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "l1lab/errors.hpp"
#include "l1lab/operators_l1.hpp"

using namespace l1lab;

namespace {

double l1_of(const AtomicMeasureSpace& space, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += space.weight(i) * std::abs(f[i]);
  return s;
}

// Oracle: image norms of the normalised atoms, via apply().
double atom_norm(const L1Operator& T) {
  double best = 0.0;
  for (std::size_t j = 0; j < T.cols(); ++j) {
    std::vector<double> e(T.cols(), 0.0);
    e[j] = 1.0 / T.source().weight(j);
    best = std::max(best, l1_of(T.target(), T.apply(e)));
  }
  return best;
}

L1Operator uniform2(std::vector<double> m) {
  return {AtomicMeasureSpace::uniform(2), AtomicMeasureSpace::uniform(2), std::move(m)};
}

}  // namespace

TEST_CASE("measure spaces") {
  CHECK_THROWS_AS(AtomicMeasureSpace::probability({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(AtomicMeasureSpace::probability({1.0, 0.0}), DomainError);
  CHECK(AtomicMeasureSpace::hypercube(3).cube_bits() == 3);
  CHECK(AtomicMeasureSpace::uniform(8).cube_bits() == 3);
  CHECK_FALSE(AtomicMeasureSpace::counting(8).cube_bits().has_value());
  CHECK_THROWS_AS(L1Operator(AtomicMeasureSpace::uniform(2), AtomicMeasureSpace::uniform(2), {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(L1Operator(AtomicMeasureSpace::uniform(1), AtomicMeasureSpace::uniform(1), {NAN}), DomainError);
}

TEST_CASE("norm examples") {
  CHECK(operator_norm_l1(L1Operator::identity(AtomicMeasureSpace::uniform(5))) == 1.0);
  CHECK(operator_norm_l1(L1Operator::identity(AtomicMeasureSpace::hypercube(3))) == 1.0);
  CHECK(operator_norm_l1(uniform2({2, 0, 0, 0})) == 2.0);
  CHECK(operator_norm_l1(L1Operator::zero(AtomicMeasureSpace::uniform(3), AtomicMeasureSpace::uniform(2))) == 0.0);
}

TEST_CASE("norm matches atoms and dominates random densities") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto T = gen::random_general_operator(rng, 1 + rng.below(9), 1 + rng.below(9));
    const double norm = operator_norm_l1(T);
    CHECK(norm == doctest::Approx(atom_norm(T)).epsilon(1e-12));
    for (int s = 0; s < 20; ++s) {
      auto f = gen::gaussian_vector(rng, T.cols());
      const double n1 = l1_of(T.source(), f);
      CHECK(l1_of(T.target(), T.apply(f)) <= norm * n1 * (1 + 1e-12));
    }
  }
}

TEST_CASE("modulus") {
  const auto M = modulus(uniform2({-1, 2, 3, -4}));
  CHECK(std::vector<double>(M.matrix().begin(), M.matrix().end()) == std::vector<double>{1, 2, 3, 4});
  const auto P = uniform2({1, 2, 0, 4});
  CHECK(modulus(P) == P);
}

TEST_CASE("modulus and adjoint keep the norm") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto T = trial % 2 ? gen::random_operator(rng, static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4)))
                             : gen::random_general_operator(rng, 1 + rng.below(8), 1 + rng.below(8));
    const double norm = operator_norm_l1(T);
    CHECK(operator_norm_l1(modulus(T)) == norm);
    CHECK(std::abs(adjoint_norm_linf(T) - norm) <= 1e-12 * std::max(1.0, norm));
  }
  CHECK(adjoint_norm_linf(L1Operator::identity(AtomicMeasureSpace::uniform(4))) == doctest::Approx(1.0));
  CHECK(adjoint_norm_linf(L1Operator::zero(AtomicMeasureSpace::uniform(3), AtomicMeasureSpace::uniform(3))) == 0.0);
}

TEST_CASE("adjoint norm against sign probes") {
  // ||T* g||_inf at g = sign pattern; the sup over the 2^rows sign patterns is the adjoint norm.
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto T = gen::random_general_operator(rng, 1 + rng.below(6), 1 + rng.below(6));
    double best = 0.0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << T.rows()); ++s) {
      for (std::size_t j = 0; j < T.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t y = 0; y < T.rows(); ++y) acc += T.target().weight(y) * T.at(y, j) * (((s >> y) & 1u) ? -1.0 : 1.0);
        best = std::max(best, std::abs(acc) / T.source().weight(j));
      }
    }
    CHECK(adjoint_norm_linf(T) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("composition is submultiplicative") {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = static_cast<int>(rng.below(4)), b = static_cast<int>(rng.below(4)), c = static_cast<int>(rng.below(4));
    const auto S = gen::random_operator(rng, a, b);
    const auto T = gen::random_operator(rng, b, c);
    const auto TS = compose(T, S);
    CHECK(operator_norm_l1(TS) <= operator_norm_l1(T) * operator_norm_l1(S) + 1e-12);
    const auto f = gen::gaussian(rng, a);
    const auto lhs = TS.apply(f), rhs = T.apply(S.apply(f));
    for (std::size_t y = 0; y < lhs.size(); ++y) CHECK(lhs[y] == doctest::Approx(rhs[y]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(compose(gen::random_operator(rng, 1, 2), gen::random_operator(rng, 1, 3)), DomainError);
}

TEST_CASE("J_p construction") {
  CharacterFamily one;
  one.n = 2;
  one.masks = {3};
  const auto J1 = build_jp({{{0b11}, one}}, 2);
  CHECK(J1.cols() == 1);
  CHECK(operator_norm_l1(J1) == 1.0);

  const auto J = build_jp({{{0b0011}, rademacher_family(2)}, {{0b1100}, rademacher_family(2)}}, 4);
  CHECK(J.cols() == 4);
  CHECK(J.rows() == 16);
  CHECK(J.source().kind() == AtomicMeasureSpace::Kind::counting);
  CHECK(operator_norm_l1(J) == 1.0);
  const std::uint32_t expect[] = {1, 2, 4, 8};
  for (std::size_t j = 0; j < 4; ++j) {
    const auto col = J.column(j);
    const auto w = character(4, {expect[j]});
    double mean = 0.0;
    for (std::size_t y = 0; y < 16; ++y) {
      CHECK(col[y] == w[y]);
      mean += col[y] / 16.0;
    }
    CHECK(mean == 0.0);
  }
  CHECK_THROWS_AS(build_jp({{{0b0011}, rademacher_family(2)}, {{0b0110}, rademacher_family(2)}}, 4), DomainError);

  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fam = random_family(3, 1 + rng.below(7), rng.next());
    const auto Jr = build_jp({{{0b111000}, fam}, {{0b000111}, bch_family(FieldSpec::standard(3), 1)}}, 6);
    CHECK(operator_norm_l1(Jr) == 1.0);
  }
}

TEST_CASE("block projection") {
  Rng rng(46);
  const auto T = gen::random_operator(rng, 2, 4);
  CHECK(project_block(T, CoordinateSet::full(4)) == T);
  const auto E = project_block(T, {0});
  for (std::size_t j = 0; j < T.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t y = 0; y < T.rows(); ++y) mean += T.at(y, j) / static_cast<double>(T.rows());
    for (std::size_t y = 0; y < T.rows(); ++y) CHECK(E.at(y, j) == doctest::Approx(mean).epsilon(1e-12));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto R = gen::random_operator(rng, 3, 4);
    const CoordinateSet half{static_cast<std::uint32_t>(rng.below(16))};
    CHECK(operator_norm_l1(project_block(R, half)) <= operator_norm_l1(R) + 1e-12);
  }
  CHECK_THROWS_AS(project_block(T, {16}), DomainError);
}
