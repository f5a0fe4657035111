#pragma once

// GF(2^m) arithmetic and character families with certified independence.
//
// A family of characters is t-independent when no r <= t distinct masks XOR
// to zero. For even t = 2k this makes every 2k-th moment of a linear
// combination equal to the Rademacher one, hence a Lambda(2k) system with the
// pairing constant ((2k-1)!!)^{1/2k}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace l1lab {

class FieldSpec {
 public:
  /// Validates that `irreducible` has degree m and is irreducible over GF(2).
  FieldSpec(int m, std::uint32_t irreducible);

  /// Field from the shipped table of primitive polynomials, 1 <= m <= 16.
  static FieldSpec standard(int m);

  int degree() const { return m_; }
  std::uint32_t polynomial() const { return poly_; }
  std::uint32_t order() const { return (1u << m_) - 1u; }  // of the multiplicative group

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// Multiplicative order of a nonzero element.
  std::uint32_t element_order(std::uint32_t a) const;
  /// Smallest code whose multiplicative order is 2^m - 1.
  std::uint32_t generator() const;

 private:
  int m_;
  std::uint32_t poly_;
};

/// Primitive polynomial code for degree m (bit i = coefficient of x^i).
std::uint32_t standard_polynomial(int m);
/// Trial division by every polynomial of degree 1..deg/2.
bool is_irreducible(std::uint32_t poly);

/// Checked multiply: throws DomainError if a or b is not a field code.
std::uint32_t gf2m_mul(const FieldSpec& spec, std::uint32_t a, std::uint32_t b);

struct Provenance {
  enum class Kind { bch, rademacher, random, search, explicit_list };
  Kind kind = Kind::explicit_list;
  int m = 0;               // bch
  int k = 0;               // bch
  std::uint64_t seed = 0;  // random
  int order = 0;           // search

  std::string to_string() const;
  static Provenance parse(const std::string& text);
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct CharacterFamily {
  int n = 0;
  std::vector<std::uint32_t> masks;
  Provenance provenance;
  std::optional<int> claimed_independence;

  std::size_t size() const { return masks.size(); }
  friend bool operator==(const CharacterFamily&, const CharacterFamily&) = default;
};

/// Throws DomainError if masks are zero, repeated, or outside the n-cube.
void validate_family(const CharacterFamily& family);

/// Masks (a^j, a^{3j}, ..., a^{(2k-1)j}), j = 0..2^m-2, for the generator a;
/// the first field code sits in the lowest m bits. 2k-independent.
CharacterFamily bch_family(const FieldSpec& spec, int k);

/// The n coordinate characters.
CharacterFamily rademacher_family(int n);

/// N distinct nonzero masks drawn uniformly without replacement, sorted.
CharacterFamily random_family(int n, std::size_t count, std::uint64_t seed);

/// Greedy depth-first search, in increasing mask order, for `count` masks on
/// the n-cube with independence order t. Throws ConstructionError if none exists.
CharacterFamily search_family(int n, std::size_t count, int t);

struct IndependenceResult {
  bool pass = true;
  std::vector<std::uint32_t> witness;  // minimal zero-XOR subset on failure, ascending
  friend bool operator==(const IndependenceResult&, const IndependenceResult&) = default;
};

/// Pass iff no r distinct masks with 1 <= r <= t XOR to zero.
IndependenceResult verify_independence(const CharacterFamily& family, int t);

enum class IndependenceMethod { automatic, enumerate, meet_in_middle };
IndependenceResult verify_independence(const CharacterFamily& family, int t,
                                       IndependenceMethod method);

/// Rank over GF(2) of the masks.
int gf2_rank(const std::vector<std::uint32_t>& masks);

}  // namespace l1lab
