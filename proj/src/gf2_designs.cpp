#include "l1lab/gf2_designs.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "l1lab/errors.hpp"
#include "l1lab/hypercube.hpp"
#include "l1lab/random.hpp"

namespace l1lab {
namespace {

constexpr std::array<std::uint32_t, 17> kPrimitive = {
    0,        // unused
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

int poly_degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = poly_degree(m);
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) a ^= m << (da - dm);
  return a;
}

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 0; i < r; ++i) out = out * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

// Calls visit(indices, xor) for every r-subset of masks in lexicographic order;
// stops when visit returns true.
bool for_each_subset(const std::vector<std::uint32_t>& masks, std::size_t r,
                     const std::function<bool(const std::vector<std::size_t>&, std::uint32_t)>& visit) {
  std::vector<std::size_t> idx(r);
  std::function<bool(std::size_t, std::size_t, std::uint32_t)> rec =
      [&](std::size_t depth, std::size_t start, std::uint32_t acc) -> bool {
    if (depth == r) return visit(idx, acc);
    for (std::size_t i = start; i + (r - depth) <= masks.size(); ++i) {
      idx[depth] = i;
      if (rec(depth + 1, i + 1, acc ^ masks[i])) return true;
    }
    return false;
  };
  return rec(0, 0, 0);
}

std::vector<std::uint32_t> witness_from(const std::vector<std::uint32_t>& masks,
                                        const std::vector<std::size_t>& idx) {
  std::vector<std::uint32_t> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(masks[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<std::uint32_t>> zero_subset_enumerate(const std::vector<std::uint32_t>& masks,
                                                                std::size_t r) {
  std::optional<std::vector<std::uint32_t>> found;
  for_each_subset(masks, r, [&](const std::vector<std::size_t>& idx, std::uint32_t acc) {
    if (acc != 0) return false;
    found = witness_from(masks, idx);
    return true;
  });
  return found;
}

// A zero-XOR r-subset splits into disjoint halves of sizes ceil(r/2), floor(r/2)
// with equal XOR; tabulate the smaller half and probe with the larger.
std::optional<std::vector<std::uint32_t>> zero_subset_mitm(const std::vector<std::uint32_t>& masks,
                                                           std::size_t r) {
  const std::size_t big = (r + 1) / 2;
  const std::size_t small = r / 2;
  if (binomial(masks.size(), small) > 5e7) {
    throw CapacityError("independence check table exceeds 5e7 half-subsets");
  }
  std::vector<std::size_t> flat;  // small-subset indices, `small` per entry
  std::unordered_multimap<std::uint32_t, std::size_t> table;
  for_each_subset(masks, small, [&](const std::vector<std::size_t>& idx, std::uint32_t acc) {
    table.emplace(acc, flat.size() / std::max<std::size_t>(small, 1));
    flat.insert(flat.end(), idx.begin(), idx.end());
    return false;
  });
  std::optional<std::vector<std::uint32_t>> found;
  for_each_subset(masks, big, [&](const std::vector<std::size_t>& idx, std::uint32_t acc) {
    auto [lo, hi] = table.equal_range(acc);
    for (auto it = lo; it != hi; ++it) {
      const std::size_t* other = flat.data() + it->second * small;
      bool disjoint = true;
      for (std::size_t a = 0; a < small && disjoint; ++a) {
        disjoint = std::find(idx.begin(), idx.end(), other[a]) == idx.end();
      }
      if (!disjoint) continue;
      std::vector<std::size_t> all(idx);
      all.insert(all.end(), other, other + small);
      found = witness_from(masks, all);
      return true;
    }
    return false;
  });
  return found;
}

}  // namespace

std::uint32_t standard_polynomial(int m) {
  if (m < 1 || m > 16) throw DomainError("field degree must be in [1, 16]");
  return kPrimitive[static_cast<std::size_t>(m)];
}

bool is_irreducible(std::uint32_t poly) {
  const int deg = poly_degree(poly);
  if (deg < 1) return false;
  for (std::uint64_t d = 2; poly_degree(d) <= deg / 2; ++d) {
    if (poly_mod(poly, d) == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(int m, std::uint32_t irreducible) : m_(m), poly_(irreducible) {
  if (m < 1 || m > 16) throw DomainError("field degree must be in [1, 16]");
  if (poly_degree(irreducible) != m) throw DomainError("field polynomial degree differs from m");
  if (!is_irreducible(irreducible)) throw DomainError("field polynomial is reducible");
}

FieldSpec FieldSpec::standard(int m) { return FieldSpec(m, standard_polynomial(m)); }

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const {
  std::uint64_t product = 0;
  for (std::uint64_t x = a; b != 0; b >>= 1, x <<= 1) {
    if (b & 1u) product ^= x;
  }
  return static_cast<std::uint32_t>(poly_mod(product, poly_));
}

std::uint32_t FieldSpec::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t result = 1;
  while (e != 0) {
    if (e & 1u) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint32_t FieldSpec::element_order(std::uint32_t a) const {
  if (a == 0 || a > order()) throw DomainError("order of a non-unit");
  std::uint32_t x = a;
  for (std::uint32_t k = 1;; ++k, x = mul(x, a)) {
    if (x == 1) return k;
  }
}

std::uint32_t FieldSpec::generator() const {
  for (std::uint32_t a = 1; a <= order(); ++a) {
    if (element_order(a) == order()) return a;
  }
  throw ConstructionError("no primitive element found");
}

std::uint32_t gf2m_mul(const FieldSpec& spec, std::uint32_t a, std::uint32_t b) {
  if ((a >> spec.degree()) != 0 || (b >> spec.degree()) != 0) {
    throw DomainError("field code out of range");
  }
  return spec.mul(a, b);
}

std::string Provenance::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::bch:
      std::snprintf(buf, sizeof buf, "bch(m=%d,k=%d)", m, k);
      return buf;
    case Kind::rademacher:
      return "rademacher";
    case Kind::random:
      std::snprintf(buf, sizeof buf, "random(seed=%llu)", static_cast<unsigned long long>(seed));
      return buf;
    case Kind::search:
      std::snprintf(buf, sizeof buf, "search(t=%d)", order);
      return buf;
    case Kind::explicit_list:
      break;
  }
  return "explicit";
}

Provenance Provenance::parse(const std::string& text) {
  Provenance p;
  unsigned long long seed = 0;
  if (std::sscanf(text.c_str(), "bch(m=%d,k=%d)", &p.m, &p.k) == 2) {
    p.kind = Kind::bch;
  } else if (text == "rademacher") {
    p.kind = Kind::rademacher;
  } else if (std::sscanf(text.c_str(), "random(seed=%llu)", &seed) == 1) {
    p.kind = Kind::random;
    p.seed = seed;
  } else if (std::sscanf(text.c_str(), "search(t=%d)", &p.order) == 1) {
    p.kind = Kind::search;
  } else if (text == "explicit") {
    p.kind = Kind::explicit_list;
  } else {
    throw DomainError("unknown family provenance '" + text + "'");
  }
  return p;
}

void validate_family(const CharacterFamily& family) {
  check_cube_bits(family.n);
  std::unordered_set<std::uint32_t> seen;
  for (auto m : family.masks) {
    if (m == 0) throw DomainError("family contains the constant character");
    check_mask(family.n, {m});
    if (!seen.insert(m).second) throw DomainError("family contains a repeated mask");
  }
}

CharacterFamily bch_family(const FieldSpec& spec, int k) {
  const int m = spec.degree();
  if (k < 1) throw DomainError("bch half-exponent k must be >= 1");
  if (k * m > kMaxCubeBits) throw DomainError("bch family needs k*m <= 24 coordinates");
  const std::uint32_t alpha = spec.generator();
  if (spec.element_order(alpha) != spec.order()) throw ConstructionError("field has no generator");

  CharacterFamily family;
  family.n = k * m;
  family.provenance = {Provenance::Kind::bch, m, k, 0, 0};
  family.claimed_independence = 2 * k;
  for (std::uint32_t j = 0; j < spec.order(); ++j) {
    const std::uint32_t base = spec.pow(alpha, j);
    std::uint32_t mask = 0;
    for (int i = 0; i < k; ++i) {
      mask |= spec.pow(base, static_cast<std::uint64_t>(2 * i + 1)) << (i * m);
    }
    family.masks.push_back(mask);
  }
  return family;
}

CharacterFamily rademacher_family(int n) {
  check_cube_bits(n);
  CharacterFamily family;
  family.n = n;
  family.provenance.kind = Provenance::Kind::rademacher;
  for (int i = 0; i < n; ++i) family.masks.push_back(1u << i);
  // Independent at every order; order n already covers every subset.
  family.claimed_independence = n + (n % 2);
  return family;
}

CharacterFamily random_family(int n, std::size_t count, std::uint64_t seed) {
  check_cube_bits(n);
  const std::uint64_t universe = (std::uint64_t{1} << n) - 1;
  if (count > universe) throw DomainError("random family larger than the number of nonzero masks");
  Rng rng(seed);
  // Floyd's sampling of `count` values from {1, ..., universe}.
  std::unordered_set<std::uint32_t> chosen;
  for (std::uint64_t j = universe - count + 1; j <= universe && count > 0; ++j) {
    const auto t = static_cast<std::uint32_t>(1 + rng.below(j));
    if (!chosen.insert(t).second) chosen.insert(static_cast<std::uint32_t>(j));
  }
  CharacterFamily family;
  family.n = n;
  family.masks.assign(chosen.begin(), chosen.end());
  std::sort(family.masks.begin(), family.masks.end());
  family.provenance = {Provenance::Kind::random, 0, 0, seed, 0};
  return family;
}

CharacterFamily search_family(int n, std::size_t count, int t) {
  check_cube_bits(n);
  if (n > 16) throw CapacityError("family search limited to n <= 16");
  if (t < 1) throw DomainError("independence order must be >= 1");
  const std::uint32_t universe = (1u << n) - 1;

  // layers[s] holds the XOR of every s-subset of the chosen masks, s <= t-1;
  // a candidate is admissible iff it is none of them.
  std::vector<std::vector<std::uint32_t>> layers(static_cast<std::size_t>(t));
  layers[0].push_back(0);
  std::vector<std::uint32_t> hits(std::size_t{universe} + 1, 0);
  hits[0] = 1;
  std::vector<std::uint32_t> chosen;
  std::size_t budget = 20'000'000;

  std::function<bool(std::uint32_t)> extend = [&](std::uint32_t start) -> bool {
    if (chosen.size() == count) return true;
    for (std::uint32_t x = start; x <= universe; ++x) {
      if (budget-- == 0) throw ConstructionError("family search budget exhausted");
      if (hits[x] != 0) continue;
      std::vector<std::size_t> old_sizes;
      for (auto& layer : layers) old_sizes.push_back(layer.size());
      for (std::size_t s = layers.size() - 1; s >= 1; --s) {
        for (std::size_t i = 0; i < old_sizes[s - 1]; ++i) {
          const std::uint32_t v = layers[s - 1][i] ^ x;
          layers[s].push_back(v);
          ++hits[v];
        }
      }
      chosen.push_back(x);
      if (extend(x + 1)) return true;
      chosen.pop_back();
      for (std::size_t s = 1; s < layers.size(); ++s) {
        for (std::size_t i = old_sizes[s]; i < layers[s].size(); ++i) --hits[layers[s][i]];
        layers[s].resize(old_sizes[s]);
      }
    }
    return false;
  };
  if (!extend(1)) {
    throw ConstructionError("no " + std::to_string(count) + " masks on " + std::to_string(n) +
                            " coordinates with independence order " + std::to_string(t));
  }
  CharacterFamily family;
  family.n = n;
  family.masks = chosen;
  family.provenance = {Provenance::Kind::search, 0, 0, 0, t};
  family.claimed_independence = t % 2 == 0 ? t : t - 1;
  return family;
}

IndependenceResult verify_independence(const CharacterFamily& family, int t,
                                       IndependenceMethod method) {
  if (t < 1) throw DomainError("independence order must be >= 1");
  const auto& masks = family.masks;
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(t), masks.size());
  for (std::size_t r = 1; r <= top; ++r) {
    bool enumerate = method == IndependenceMethod::enumerate;
    if (method == IndependenceMethod::automatic) enumerate = binomial(masks.size(), r) <= 1e7;
    const auto found = enumerate ? zero_subset_enumerate(masks, r) : zero_subset_mitm(masks, r);
    if (found) return {false, *found};
  }
  return {true, {}};
}

IndependenceResult verify_independence(const CharacterFamily& family, int t) {
  return verify_independence(family, t, IndependenceMethod::automatic);
}

int gf2_rank(const std::vector<std::uint32_t>& masks) {
  std::array<std::uint32_t, 32> basis{};  // basis[b] has leading bit b
  int rank = 0;
  for (std::uint32_t v : masks) {
    for (int b = 31; b >= 0 && v != 0; --b) {
      if (!(v & (1u << b))) continue;
      if (basis[static_cast<std::size_t>(b)] == 0) {
        basis[static_cast<std::size_t>(b)] = v;
        ++rank;
        v = 0;
      } else {
        v ^= basis[static_cast<std::size_t>(b)];
      }
    }
  }
  return rank;
}

}  // namespace l1lab
