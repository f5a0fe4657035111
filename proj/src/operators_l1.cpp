#include "l1lab/operators_l1.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "l1lab/errors.hpp"
#include "l1lab/parallel.hpp"

namespace l1lab {

AtomicMeasureSpace AtomicMeasureSpace::probability(std::vector<double> weights) {
  if (weights.empty()) throw DomainError("measure space needs at least one atom");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("probability weights must be positive and finite");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("probability weights must sum to 1");
  return AtomicMeasureSpace(Kind::probability, std::move(weights));
}

AtomicMeasureSpace AtomicMeasureSpace::uniform(std::size_t atoms) {
  if (atoms == 0) throw DomainError("measure space needs at least one atom");
  return AtomicMeasureSpace(Kind::probability, std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

AtomicMeasureSpace AtomicMeasureSpace::hypercube(int n) {
  check_cube_bits(n);
  return uniform(std::size_t{1} << n);
}

AtomicMeasureSpace AtomicMeasureSpace::counting(std::size_t atoms) {
  if (atoms == 0) throw DomainError("measure space needs at least one atom");
  return AtomicMeasureSpace(Kind::counting, std::vector<double>(atoms, 1.0));
}

std::optional<int> AtomicMeasureSpace::cube_bits() const {
  if (kind_ != Kind::probability || !std::has_single_bit(atoms())) return std::nullopt;
  const double w = 1.0 / static_cast<double>(atoms());
  for (double x : weights_) {
    if (std::abs(x - w) > 1e-15) return std::nullopt;
  }
  const int n = std::countr_zero(atoms());
  if (n > kMaxCubeBits) return std::nullopt;
  return n;
}

L1Operator::L1Operator(AtomicMeasureSpace source, AtomicMeasureSpace target, std::vector<double> matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.size() != source_.atoms() * target_.atoms()) {
    throw DomainError("operator matrix has " + std::to_string(matrix_.size()) + " entries, expected " +
                      std::to_string(source_.atoms() * target_.atoms()));
  }
  for (double v : matrix_) {
    if (!std::isfinite(v)) throw DomainError("operator entries must be finite");
  }
}

L1Operator L1Operator::zero(AtomicMeasureSpace source, AtomicMeasureSpace target) {
  std::vector<double> m(source.atoms() * target.atoms(), 0.0);
  return L1Operator(std::move(source), std::move(target), std::move(m));
}

L1Operator L1Operator::identity(AtomicMeasureSpace space) {
  const std::size_t d = space.atoms();
  std::vector<double> m(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
  return L1Operator(space, space, std::move(m));
}

std::vector<double> L1Operator::apply(std::span<const double> density) const {
  if (density.size() != cols()) throw DomainError("density length differs from source atoms");
  std::vector<double> out(rows(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r) {
    const double* row = matrix_.data() + r * cols();
    double acc = 0.0;
    for (std::size_t c = 0; c < cols(); ++c) acc += row[c] * density[c];
    out[r] = acc;
  }
  return out;
}

HypercubeFunction L1Operator::apply(const HypercubeFunction& f) const {
  const auto target_bits = target_.cube_bits();
  if (!target_bits) throw DomainError("operator target is not a hypercube space");
  return HypercubeFunction(*target_bits, apply(f.values()));
}

std::vector<double> L1Operator::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, j);
  return out;
}

L1Operator compose(const L1Operator& outer, const L1Operator& inner) {
  if (!(outer.source() == inner.target())) throw DomainError("composed operators do not share a middle space");
  const std::size_t rows = outer.rows(), mid = outer.cols(), cols = inner.cols();
  std::vector<double> m(rows * cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < mid; ++k) {
      const double a = outer.at(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) m[r * cols + c] += a * inner.at(k, c);
    }
  }
  return L1Operator(inner.source(), outer.target(), std::move(m));
}

double operator_norm_l1(const L1Operator& op) {
  const std::size_t cols = op.cols();
  const std::size_t chunks = chunk_count(cols, 64);
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(cols, chunks, [&](const Chunk& chunk) {
    for (std::size_t c = chunk.begin; c < chunk.end; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < op.rows(); ++r) acc += op.target().weight(r) * std::abs(op.at(r, c));
      partial[chunk.index] = std::max(partial[chunk.index], acc / op.source().weight(c));
    }
  });
  double best = 0.0;
  for (double v : partial) best = std::max(best, v);
  return best;
}

L1Operator modulus(const L1Operator& op) {
  std::vector<double> m(op.matrix().begin(), op.matrix().end());
  for (double& v : m) v = std::abs(v);
  return L1Operator(op.source(), op.target(), std::move(m));
}

double adjoint_norm_linf(const L1Operator& op) {
  // <g, T f>_nu = <T* g, f>_mu gives (T* g)_j = sum_y nu_y M_{y j} g_y / mu_j.
  const std::size_t rows = op.rows(), cols = op.cols();
  std::vector<double> adjoint(cols * rows);
  for (std::size_t y = 0; y < rows; ++y) {
    for (std::size_t j = 0; j < cols; ++j) {
      adjoint[j * rows + y] = op.target().weight(y) * op.at(y, j) / op.source().weight(j);
    }
  }
  // On L_inf the norm is the largest row sum, attained at g = sign(row).
  double best = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t y = 0; y < rows; ++y) {
      const double a = adjoint[j * rows + y];
      acc += (a >= 0.0 ? 1.0 : -1.0) * a;
    }
    best = std::max(best, acc);
  }
  return best;
}

L1Operator build_jp(const std::vector<PlacedFamily>& families, int joint_bits) {
  check_cube_bits(joint_bits);
  std::uint32_t used = 0;
  std::size_t columns = 0;
  for (const auto& placed : families) {
    check_mask(joint_bits, placed.block);
    if (placed.block.mask & used) throw DomainError("J_p blocks overlap");
    used |= placed.block.mask;
    if (placed.family.n != placed.block.size()) {
      throw DomainError("family dimension differs from its block size");
    }
    validate_family(placed.family);
    columns += placed.family.size();
  }
  if (columns == 0) throw DomainError("J_p needs at least one character");
  const std::size_t points = std::size_t{1} << joint_bits;
  std::vector<double> m(points * columns);
  std::size_t col = 0;
  for (const auto& placed : families) {
    for (auto local : placed.family.masks) {
      const std::uint32_t mask = embed_mask(local, placed.block);
      for (std::size_t x = 0; x < points; ++x) {
        m[x * columns + col] = (std::popcount(static_cast<std::uint32_t>(x) & mask) & 1) ? -1.0 : 1.0;
      }
      ++col;
    }
  }
  return L1Operator(AtomicMeasureSpace::counting(columns), AtomicMeasureSpace::hypercube(joint_bits),
                    std::move(m));
}

L1Operator project_block(const L1Operator& op, CoordinateSet block) {
  const auto bits = op.target().cube_bits();
  if (!bits) throw DomainError("project_block needs a hypercube target");
  check_mask(*bits, block);
  std::vector<double> m(op.matrix().size());
  for (std::size_t c = 0; c < op.cols(); ++c) {
    const HypercubeFunction projected = conditional_expectation(HypercubeFunction(*bits, op.column(c)), block);
    for (std::size_t r = 0; r < op.rows(); ++r) m[r * op.cols() + c] = projected[r];
  }
  return L1Operator(op.source(), op.target(), std::move(m));
}

}  // namespace l1lab
