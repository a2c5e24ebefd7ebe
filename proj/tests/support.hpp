#pragma once

// Builders and exhaustive parameter sweeps shared by the unit tests and the
// acceptance binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "endo/params.hpp"

namespace endo::testing {

inline CharSpace global_space(int dim) { return CharSpace{false, "", dim}; }

inline Constituent orth(const std::string& label, int dim, gf2::Vec chr, int mult = 1, int factor = 0) {
  return Constituent{SimpleParam{label, dim, Duality::Orth, chr}, mult, factor};
}

inline Constituent symp(const std::string& label, int dim, int mult = 2, int factor = 0) {
  return Constituent{SimpleParam{label, dim, Duality::Symp, 0}, mult, factor};
}

inline Constituent pair(const std::string& label, int dim, int mult = 1, int factor = 0) {
  return Constituent{SimpleParam{label, dim, Duality::Pair, 0}, mult, factor};
}

// One constituent type of a sweep: everything but the label.
struct ConstituentType {
  int dim = 1;
  Duality duality = Duality::Orth;
  gf2::Vec chr = 0;
  int mult = 1;
};

struct SweepBounds {
  int max_r = 3;     // number of constituents
  int max_l = 2;     // multiplicity bound
  int max_n = 3;     // dimension bound of each simple constituent
  int char_dim = 2;  // the universe has 2^char_dim characters
};

inline std::vector<ConstituentType> constituent_types(const SweepBounds& b) {
  std::vector<ConstituentType> out;
  for (int n = 1; n <= b.max_n; ++n) {
    for (int l = 1; l <= b.max_l; ++l) {
      for (gf2::Vec c = 0; c < (gf2::Vec{1} << b.char_dim); ++c) out.push_back({n, Duality::Orth, c, l});
      if (n % 2 == 0 && l % 2 == 0) out.push_back({n, Duality::Symp, 0, l});
      out.push_back({n, Duality::Pair, 0, l});
    }
  }
  return out;
}

// Target chosen by the parity of the total dimension: Sp(2n) when it is odd,
// SO(2n, det) when it is even. Returns false when no valid target exists
// (odd total dimension with a nontrivial determinant, or dimension zero).
inline bool target_for(const std::vector<Constituent>& cs, int char_dim, GroupSpec& out) {
  int dim = 0;
  gf2::Vec det = 0;
  for (const Constituent& c : cs) {
    dim += (c.simple.duality == Duality::Pair ? 2 : 1) * c.mult * c.simple.dim;
    if (c.simple.duality == Duality::Orth && c.mult % 2 == 1) det ^= c.simple.central_char;
  }
  if (dim == 0) return false;
  if (dim % 2 == 1) {
    if (det != 0) return false;
    out = make_sp((dim - 1) / 2, global_space(char_dim));
  } else {
    out = make_so(dim / 2, det, global_space(char_dim));
  }
  return true;
}

// Calls f on every valid parameter built from a multiset of at most max_r
// constituent types. Labels are c1, c2, ... in type order.
inline std::uint64_t for_each_parameter(const SweepBounds& b, const std::function<void(const Parameter&)>& f) {
  const std::vector<ConstituentType> types = constituent_types(b);
  std::uint64_t count = 0;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) {
      std::vector<Constituent> cs;
      for (std::size_t k = 0; k < pick.size(); ++k) {
        const ConstituentType& t = types[pick[k]];
        cs.push_back(Constituent{SimpleParam{"c" + std::to_string(k + 1), t.dim, t.duality, t.chr}, t.mult, 0});
      }
      GroupSpec g;
      if (target_for(cs, b.char_dim, g)) {
        f(make_parameter(g, cs));
        ++count;
      }
    }
    if (static_cast<int>(pick.size()) == b.max_r) return;
    for (std::size_t t = start; t < types.size(); ++t) {
      pick.push_back(t);
      rec(t);
      pick.pop_back();
    }
  };
  rec(0);
  return count;
}

}  // namespace endo::testing
