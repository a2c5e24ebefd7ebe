#pragma once

// Arthur's constants i^θ(S), e^θ(S) and σ(S) for products of complex
// classical groups, computed exactly from signed-permutation models of their
// Weyl groups and from the ±1-eigenvalue classification of elliptic classes.
//
// A shape is a list of factors. A factor of type O carries the component it
// stands for: the identity component SO(m), or the det = -1 coset when
// `outer` is set. GLSwap of size k is the non-identity component of
// (GL(k) × GL(k)) ⋊ ⟨θ⟩ with θ(g, h) = (ᵗh⁻¹, ᵗg⁻¹).

#include <cstdint>
#include <string>
#include <vector>

#include "endo/rational.hpp"

namespace endo {

enum class FactorType { GL, Sp, SO, O, Torus, GLSwap };

struct ShapeFactor {
  FactorType type = FactorType::SO;
  int size = 0;  // matrix size; torus rank for Torus; k for GLSwap
  bool outer = false;
  bool operator==(const ShapeFactor&) const = default;
  auto operator<=>(const ShapeFactor&) const = default;
};

struct ReductiveShape {
  std::vector<ShapeFactor> factors;

  // Syntax: factors joined by '*', each one of GLk, Spk (k even), SOm, Om,
  // Om- (outer coset), Tk, GLxGLk. "1" or the empty string is the trivial
  // group.
  static ReductiveShape parse(const std::string& text);
  std::string to_string() const;
  // Sorted factors with trivial ones dropped; the memoization key.
  ReductiveShape canonical() const;
  bool connected() const;
  // Rank of a maximal torus.
  int torus_rank() const;
  bool operator==(const ReductiveShape&) const = default;
};

int factor_rank(const ShapeFactor& f);
// Order of the Weyl group of the identity component of the factor.
std::uint64_t factor_weyl_order(const ShapeFactor& f);
std::uint64_t weyl_order(const ReductiveShape& s);

struct FactorElement {
  std::vector<int> perm;  // image of each coordinate
  std::vector<int> sign;  // ±1 per coordinate
};

struct WeylElementRec {
  std::vector<FactorElement> factors;
  // Matrix of the action on the cocharacter span, row-major, rank × rank.
  std::vector<int> matrix;
  int rank = 0;
};

constexpr std::uint64_t kDefaultMaxWeylOrder = 1000000;

// Elements of the coset W^θ(S). Throws Error("weylconst.too_large") when the
// coset size exceeds max_order.
std::vector<WeylElementRec> weyl_enumerate(const ReductiveShape& s,
                                           std::uint64_t max_order = kDefaultMaxWeylOrder);

// det(w - 1) of an element, by fraction-free elimination.
long long det_w_minus_1(const WeylElementRec& w);
// (-1)^{number of positive roots sent to negative roots}.
int s0_sign(const ReductiveShape& s, const WeylElementRec& w);

Rational i_theta(const ReductiveShape& s, std::uint64_t max_order = kDefaultMaxWeylOrder);

struct EllipticClassRec {
  // Per factor the (+1, -1) eigenvalue multiplicities.
  std::vector<std::pair<int, int>> eigen;
  // Identity component of the centralizer in S⁰, as a connected shape.
  ReductiveShape centralizer;
  std::uint64_t pi0_order = 1;  // |π₀ Cent(s, S⁰)|
  bool central = false;         // s central in S⁰ and lying in S⁰
};

std::vector<EllipticClassRec> elliptic_classes(const ReductiveShape& s);

// σ of a connected shape; memoized and safe to call from several threads.
Rational sigma(const ReductiveShape& s, std::uint64_t max_order = kDefaultMaxWeylOrder);
Rational e_theta(const ReductiveShape& s, std::uint64_t max_order = kDefaultMaxWeylOrder);

// |Z(S)| for a connected shape; 0 stands for an infinite center.
std::uint64_t center_order(const ReductiveShape& s);

}  // namespace endo
