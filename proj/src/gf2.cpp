#include "endo/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace endo::gf2 {

std::string to_bits(Vec v, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (test(v, i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

Vec from_bits(const std::string& s) {
  if (s.size() > 64) throw std::invalid_argument("bit string longer than 64");
  Vec v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      v |= unit(static_cast<int>(i));
    } else if (s[i] != '0') {
      throw std::invalid_argument("bit string must contain only 0 and 1: '" + s + "'");
    }
  }
  return v;
}

Subspace::Subspace(const std::vector<Vec>& generators) {
  for (Vec g : generators) insert(g);
}

Vec Subspace::reduce(Vec v) const {
  for (Vec b : basis_) {
    if (v & lowest_bit(b)) v ^= b;
  }
  return v;
}

bool Subspace::insert(Vec v) {
  Vec r = reduce(v);
  if (r == 0) return false;
  const Vec p = lowest_bit(r);
  for (Vec& b : basis_) {
    if (b & p) b ^= r;
  }
  basis_.push_back(r);
  return true;
}

std::vector<Vec> Subspace::basis() const {
  std::vector<Vec> out = basis_;
  std::sort(out.begin(), out.end(), [](Vec a, Vec b) { return lowest_bit(a) < lowest_bit(b); });
  return out;
}

std::vector<Vec> Subspace::elements() const {
  std::vector<Vec> out = span_elements(basis());
  std::sort(out.begin(), out.end());
  return out;
}

Subspace Subspace::sum(const Subspace& other) const {
  Subspace out = *this;
  for (Vec b : other.basis_) out.insert(b);
  return out;
}

Subspace Subspace::intersect(const Subspace& other) const {
  // Parametrize this space by its basis and keep the coordinates whose image
  // reduces to zero modulo the other space.
  std::vector<Vec> images;
  images.reserve(basis_.size());
  for (Vec b : basis_) images.push_back(other.reduce(b));
  Subspace out;
  for (Vec c : kernel(images)) {
    Vec v = 0;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      if (test(c, static_cast<int>(j))) v ^= basis_[j];
    }
    out.insert(v);
  }
  return out;
}

bool Subspace::subset_of(const Subspace& other) const {
  return std::all_of(basis_.begin(), basis_.end(), [&](Vec b) { return other.contains(b); });
}

bool Subspace::operator==(const Subspace& other) const {
  return basis() == other.basis();
}

std::vector<Vec> kernel(const std::vector<Vec>& images) {
  if (images.size() > 64) throw std::invalid_argument("kernel: more than 64 columns");
  struct Row {
    Vec image;
    Vec coords;
  };
  std::vector<Row> pivots;
  std::vector<Vec> out;
  for (std::size_t j = 0; j < images.size(); ++j) {
    Row r{images[j], unit(static_cast<int>(j))};
    for (const Row& p : pivots) {
      if (r.image & lowest_bit(p.image)) {
        r.image ^= p.image;
        r.coords ^= p.coords;
      }
    }
    if (r.image == 0) {
      out.push_back(r.coords);
      continue;
    }
    const Vec bit = lowest_bit(r.image);
    for (Row& p : pivots) {
      if (p.image & bit) {
        p.image ^= r.image;
        p.coords ^= r.coords;
      }
    }
    pivots.push_back(r);
  }
  return out;
}

int rank(const std::vector<Vec>& vs) { return Subspace(vs).dim(); }

std::vector<Vec> span_elements(const std::vector<Vec>& gens) {
  if (gens.size() > 30) throw std::invalid_argument("span_elements: span too large to list");
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << gens.size());
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << gens.size()); ++m) {
    Vec v = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if ((m >> j) & 1U) v ^= gens[j];
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace endo::gf2
