#include "l1lab/lemma_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "l1lab/errors.hpp"
#include "l1lab/parallel.hpp"

namespace l1lab {
namespace {

double q_power(double v, double q) { return std::pow(std::abs(v), q); }

CharacterFamily optimality_family(int bits, std::size_t count, int q) {
  if (count > (std::size_t{1} << bits) - 1) {
    throw CapacityError("no family of " + std::to_string(count) + " characters on " + std::to_string(bits) +
                        " coordinates");
  }
  CharacterFamily family;
  if (count <= static_cast<std::size_t>(bits)) {
    family = rademacher_family(bits);
    family.masks.resize(count);
  } else if (const int k = q / 2; bits % k == 0 && bits / k <= 16 &&
                                  (std::size_t{1} << (bits / k)) - 1 >= count) {
    family = bch_family(FieldSpec::standard(bits / k), k);
    family.masks.resize(count);
  } else {
    family = search_family(bits, count, q);
  }
  family.claimed_independence = q;
  return family;
}

}  // namespace

double lemma_bound(double C, double epsilon, double N, double p, double q) {
  if (!(C > 0.0)) throw DomainError("lemma_bound needs C > 0");
  if (epsilon < 0.0) throw DomainError("lemma_bound needs epsilon >= 0");
  if (N < 1.0) throw DomainError("lemma_bound needs N >= 1");
  if (p < 1.0 || q < 1.0) throw DomainError("lemma_bound needs p, q >= 1");
  if (p > q) throw DomainError("lemma_bound needs p <= q");
  return (epsilon / C) * std::pow(N, (q - p) / (2.0 * q));
}

LemmaCertificate verify_lemma(const L1Operator& op, std::span<const HypercubeFunction> vectors, double q,
                              const LemmaOptions& options) {
  if (vectors.empty()) throw DomainError("verify_lemma needs at least one vector");
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) throw DomainError("verify_lemma needs finite q >= 1");
  const auto source_bits = op.source().cube_bits();
  const auto target_bits = op.target().cube_bits();
  if (!source_bits || *source_bits != vectors.front().bits()) {
    throw DomainError("operator source must be the uniform cube carrying the vectors");
  }
  if (!target_bits) throw DomainError("operator target must be a uniform hypercube space");

  const std::size_t N = vectors.size();
  const std::size_t S = op.cols();
  const std::size_t D = op.rows();
  const double dN = static_cast<double>(N);
  const double dD = static_cast<double>(D);

  LemmaCertificate cert;
  cert.N = N;
  cert.q = q;
  cert.p = N > 1 ? 2.0 * std::log2(dD) / std::log2(dN) : kInfinity;
  if (options.supplied_p) {
    const double p = *options.supplied_p;
    if (N > 1 && std::abs(std::pow(dN, p / 2.0) - dD) >= 1.0) {
      throw DomainError("supplied p inconsistent with target dimension: N^{p/2} does not round to D");
    }
    cert.p = p;
  }

  const SignSearchResult sign = max_sign_norm(vectors, q, options.sign);
  cert.exact_sign_search = sign.exact;
  cert.C = sign.value / std::sqrt(dN);
  cert.measured_norm = operator_norm_l1(op);

  // T v_i, epsilon, and the norming functionals u_i = sign(T v_i), sign(0) = +1.
  std::vector<std::vector<double>> images(N);
  std::vector<std::vector<double>> u(N, std::vector<double>(D));
  cert.epsilon = kInfinity;
  double sum_pairings_target = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    images[i] = op.apply(vectors[i].values());
    double norm = 0.0;
    for (std::size_t y = 0; y < D; ++y) {
      norm += op.target().weight(y) * std::abs(images[i][y]);
      u[i][y] = images[i][y] >= 0.0 ? 1.0 : -1.0;
    }
    cert.epsilon = std::min(cert.epsilon, norm);
    sum_pairings_target += norm;
  }
  (void)sum_pairings_target;

  // adjoint images (T* u_i)(a) = sum_y nu_y M_{y a} u_i(y) / mu_a, stored [a][i].
  std::vector<double> dual(S * N, 0.0);
  for (std::size_t y = 0; y < D; ++y) {
    const double nu = op.target().weight(y);
    for (std::size_t a = 0; a < S; ++a) {
      const double m = op.at(y, a);
      if (m == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) dual[a * N + i] += nu * m * u[i][y];
    }
  }
  for (std::size_t a = 0; a < S; ++a) {
    for (std::size_t i = 0; i < N; ++i) dual[a * N + i] /= op.source().weight(a);
  }

  const double norm_T = cert.measured_norm;
  const double root_D = std::pow(dD, 1.0 / q);
  auto& c = cert.chain;
  c[0] = cert.epsilon * dN;

  double pairing = 0.0;
  for (std::size_t a = 0; a < S; ++a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += dual[a * N + i] * vectors[i][a];
    pairing += op.source().weight(a) * acc;
  }
  c[1] = pairing;

  // Per source point b: the sup over a, the sup over target points c, and
  // the target q-moment of sum_i u_i(c) v_i(b).
  const std::size_t chunks = chunk_count(S, 64);
  std::vector<double> sup_dual(chunks, 0.0), sup_target(chunks, 0.0), q_line(chunks, 0.0),
      q_moment(chunks, 0.0);
  for_each_chunk(S, chunks, [&](const Chunk& chunk) {
    std::vector<double> vb(N);
    for (std::size_t b = chunk.begin; b < chunk.end; ++b) {
      const double mu = op.source().weight(b);
      for (std::size_t i = 0; i < N; ++i) vb[i] = vectors[i][b];
      double best = 0.0;
      for (std::size_t a = 0; a < S; ++a) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) acc += dual[a * N + i] * vb[i];
        best = std::max(best, std::abs(acc));
      }
      sup_dual[chunk.index] += mu * best;

      double best_c = 0.0, moment = 0.0;
      for (std::size_t y = 0; y < D; ++y) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) acc += u[i][y] * vb[i];
        best_c = std::max(best_c, std::abs(acc));
        moment += op.target().weight(y) * q_power(acc, q);
      }
      sup_target[chunk.index] += mu * best_c;
      q_line[chunk.index] += mu * std::pow(moment, 1.0 / q);
      q_moment[chunk.index] += mu * moment;
    }
  });
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
  for (std::size_t k = 0; k < chunks; ++k) {
    s2 += sup_dual[k];
    s3 += sup_target[k];
    s4 += q_line[k];
    s5 += q_moment[k];
  }
  c[2] = s2;
  c[3] = norm_T * s3;
  c[4] = norm_T * root_D * s4;
  c[5] = norm_T * root_D * std::pow(s5, 1.0 / q);
  c[6] = cert.C * norm_T * root_D * std::sqrt(dN);

  cert.chain_monotone = true;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    if (c[k] > c[k + 1] + 1e-9) cert.chain_monotone = false;
  }

  if (cert.epsilon == 0.0 || cert.C == 0.0) {
    cert.bound = 0.0;
    cert.verdict = Verdict::degenerate;
  } else if (N == 1) {
    cert.bound = cert.epsilon / cert.C;
    cert.verdict = Verdict::degenerate;
  } else {
    // The chain yields the bound for any p; only p < q gives growth in N.
    cert.bound = (cert.epsilon / cert.C) * std::pow(dN, (q - cert.p) / (2.0 * q));
    cert.verdict = cert.p < q ? Verdict::holds : Verdict::degenerate;
  }
  cert.bound_satisfied = cert.bound <= cert.measured_norm + 1e-9;
  return cert;
}

double fibre_sign_max(std::span<const HypercubeFunction> characters, std::size_t fiber, double q,
                      const SignSearchOptions& sign) {
  return static_cast<double>(fiber) * max_sign_norm(characters, q, sign).value;
}

OptimalityReport optimality_instance(int q, std::size_t N, double p, const SignSearchOptions& sign) {
  if (q < 2 || q % 2 != 0) throw DomainError("optimality_instance needs an even q >= 2");
  if (N < 1) throw DomainError("optimality_instance needs N >= 1");
  if (!(p >= 1.0) || p > q) throw DomainError("optimality_instance needs 1 <= p <= q");

  OptimalityReport report;
  report.q = q;
  report.p = p;
  report.N = N;

  const double points_real = std::pow(static_cast<double>(N), p / 2.0);
  if (points_real > std::ldexp(1.0, kMaxCubeBits) + 0.5) throw CapacityError("m = N^{p/2} exceeds 2^24");
  const auto points = static_cast<std::size_t>(std::llround(points_real));
  if (points < 1 || !std::has_single_bit(points)) {
    throw CapacityError("m = N^{p/2} = " + std::to_string(points_real) + " is not a power of two");
  }
  const int bits = std::countr_zero(points);
  const auto characters =
      static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(points), 2.0 / q)));
  if (characters < 1 || N % characters != 0) {
    throw CapacityError("N is not a multiple of m^{2/q} = " + std::to_string(characters));
  }
  report.points = points;
  report.characters = characters;
  report.fiber = N / characters;
  report.family = optimality_family(bits, characters, q);

  std::vector<HypercubeFunction> f;
  f.reserve(characters);
  for (auto mask : report.family.masks) f.push_back(character(bits, {mask}));
  report.family_sign_max = max_sign_norm(f, q, sign).value;
  const double sign_max = fibre_sign_max(f, report.fiber, q, sign);

  report.measured_C = sign_max / std::sqrt(static_cast<double>(N));
  report.measured_norm = bits <= 12 ? operator_norm_l1(L1Operator::identity(AtomicMeasureSpace::hypercube(bits)))
                                    : 1.0;  // identity on L_1^m
  report.bound = lemma_bound(report.measured_C, 1.0, static_cast<double>(N), p, q);
  report.ratio = report.measured_norm / report.bound;
  report.b_q = pairing_constant(q);
  report.ratio_within_b_q = report.ratio <= report.b_q + 1e-12;
  report.lemma_holds = report.bound <= report.measured_norm + 1e-9;
  return report;
}

}  // namespace l1lab
