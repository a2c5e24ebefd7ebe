#pragma once

// Linear algebra over GF(2) on vectors packed into 64-bit words.
//
// Bit j of a Vec is coordinate j. Subspaces are kept in reduced echelon form
// where every basis vector owns its lowest set bit (its pivot) and no other
// basis vector touches that bit. Reducing a vector against such a basis is a
// linear map whose image is a canonical coset representative, which is what
// the quotient groups of the library use as element names.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace endo::gf2 {

using Vec = std::uint64_t;

inline int weight(Vec v) { return std::popcount(v); }
inline int dot(Vec a, Vec b) { return std::popcount(a & b) & 1; }
inline Vec lowest_bit(Vec v) { return v & (~v + 1); }
inline bool test(Vec v, int i) { return ((v >> i) & 1U) != 0; }
inline Vec unit(int i) { return Vec{1} << i; }
inline Vec mask(int n) { return n >= 64 ? ~Vec{0} : (Vec{1} << n) - 1; }

// Bits rendered as a 0/1 string, coordinate 0 first.
std::string to_bits(Vec v, int n);
// Inverse of to_bits. Throws std::invalid_argument on bad characters.
Vec from_bits(const std::string& s);

class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(const std::vector<Vec>& generators);

  // Adds v to the span. Returns true when the dimension grew.
  bool insert(Vec v);
  Vec reduce(Vec v) const;
  bool contains(Vec v) const { return reduce(v) == 0; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::uint64_t order() const { return std::uint64_t{1} << basis_.size(); }
  // Basis sorted by pivot, unique for the subspace.
  std::vector<Vec> basis() const;
  std::vector<Vec> elements() const;

  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  bool subset_of(const Subspace& other) const;
  bool operator==(const Subspace& other) const;

 private:
  std::vector<Vec> basis_;
};

// Kernel of the linear map GF(2)^ncols -> GF(2)^64 sending e_j to images[j].
std::vector<Vec> kernel(const std::vector<Vec>& images);

// Rank of a list of vectors.
int rank(const std::vector<Vec>& vs);

// All 2^dim combinations of the given vectors, in binary counting order.
std::vector<Vec> span_elements(const std::vector<Vec>& gens);

}  // namespace endo::gf2
