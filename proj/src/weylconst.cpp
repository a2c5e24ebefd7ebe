#include "endo/weylconst.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "endo/error.hpp"

namespace endo {

namespace {

bool trivial_factor(const ShapeFactor& f) {
  if (f.outer) return false;
  switch (f.type) {
    case FactorType::SO:
    case FactorType::O:
      return f.size <= 1;
    default:
      return f.size == 0;
  }
}

std::uint64_t factorial(int k) {
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

int factor_rank(const ShapeFactor& f) {
  switch (f.type) {
    case FactorType::GL:
    case FactorType::Torus:
      return f.size;
    case FactorType::Sp:
    case FactorType::SO:
    case FactorType::O:
      return f.size / 2;
    case FactorType::GLSwap:
      return 2 * f.size;
  }
  return 0;
}

std::uint64_t factor_weyl_order(const ShapeFactor& f) {
  const int k = f.size / 2;
  switch (f.type) {
    case FactorType::GL:
      return factorial(f.size);
    case FactorType::Torus:
      return 1;
    case FactorType::Sp:
      return (std::uint64_t{1} << k) * factorial(k);
    case FactorType::SO:
    case FactorType::O:
      if (f.size % 2) return (std::uint64_t{1} << k) * factorial(k);
      return k == 0 ? 1 : (std::uint64_t{1} << (k - 1)) * factorial(k);
    case FactorType::GLSwap:
      return factorial(f.size) * factorial(f.size);
  }
  return 1;
}

std::uint64_t weyl_order(const ReductiveShape& s) {
  std::uint64_t n = 1;
  for (const ShapeFactor& f : s.factors) n *= factor_weyl_order(f);
  return n;
}

ReductiveShape ReductiveShape::parse(const std::string& text) {
  ReductiveShape s;
  if (text.empty() || text == "1") return s;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, '*')) {
    ShapeFactor f;
    std::string rest;
    auto starts = [&](const std::string& p) {
      if (tok.rfind(p, 0) != 0) return false;
      rest = tok.substr(p.size());
      return true;
    };
    if (starts("GLxGL")) {
      f.type = FactorType::GLSwap;
    } else if (starts("GL")) {
      f.type = FactorType::GL;
    } else if (starts("Sp")) {
      f.type = FactorType::Sp;
    } else if (starts("SO")) {
      f.type = FactorType::SO;
    } else if (starts("O")) {
      f.type = FactorType::O;
      if (!rest.empty() && rest.back() == '-') {
        f.outer = true;
        rest.pop_back();
      }
    } else if (starts("T")) {
      f.type = FactorType::Torus;
    } else {
      throw Error("weylconst.bad_shape", "unknown factor '" + tok + "' in shape '" + text + "'");
    }
    if (rest.empty() || rest.size() > 3 ||
        !std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
      throw Error("weylconst.bad_shape", "factor '" + tok + "' needs a size");
    }
    f.size = std::atoi(rest.c_str());
    if (f.type == FactorType::Sp && f.size % 2) {
      throw Error("weylconst.bad_shape", "symplectic factor '" + tok + "' has odd size");
    }
    if (f.type == FactorType::O && f.outer && f.size == 0) {
      throw Error("weylconst.bad_shape", "O0 has no outer component");
    }
    s.factors.push_back(f);
  }
  return s;
}

std::string ReductiveShape::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (const ShapeFactor& f : factors) {
    if (!out.empty()) out += "*";
    switch (f.type) {
      case FactorType::GL:
        out += "GL";
        break;
      case FactorType::Sp:
        out += "Sp";
        break;
      case FactorType::SO:
        out += "SO";
        break;
      case FactorType::O:
        out += "O";
        break;
      case FactorType::Torus:
        out += "T";
        break;
      case FactorType::GLSwap:
        out += "GLxGL";
        break;
    }
    out += std::to_string(f.size);
    if (f.outer) out += "-";
  }
  return out;
}

ReductiveShape ReductiveShape::canonical() const {
  ReductiveShape s;
  for (ShapeFactor f : factors) {
    if (f.type == FactorType::O && !f.outer) f.type = FactorType::SO;
    if (!trivial_factor(f)) s.factors.push_back(f);
  }
  std::sort(s.factors.begin(), s.factors.end());
  return s;
}

bool ReductiveShape::connected() const {
  return std::none_of(factors.begin(), factors.end(),
                      [](const ShapeFactor& f) { return f.outer || f.type == FactorType::GLSwap; });
}

int ReductiveShape::torus_rank() const {
  int r = 0;
  for (const ShapeFactor& f : factors) r += factor_rank(f);
  return r;
}

namespace {

enum class SignRule { Any, Even, Odd, None };

std::vector<FactorElement> signed_permutations(int k, SignRule rule) {
  std::vector<FactorElement> out;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
      const int neg = std::popcount(mask);
      if (rule == SignRule::None && mask) continue;
      if (rule == SignRule::Even && neg % 2) continue;
      if (rule == SignRule::Odd && neg % 2 == 0) continue;
      FactorElement e;
      e.perm = perm;
      e.sign.assign(static_cast<std::size_t>(k), 1);
      for (int i = 0; i < k; ++i) {
        if (mask & (1U << i)) e.sign[static_cast<std::size_t>(i)] = -1;
      }
      out.push_back(std::move(e));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<FactorElement> factor_elements(const ShapeFactor& f) {
  const int k = f.size / 2;
  switch (f.type) {
    case FactorType::GL:
      return signed_permutations(f.size, SignRule::None);
    case FactorType::Torus: {
      FactorElement e;
      e.perm.resize(static_cast<std::size_t>(f.size));
      std::iota(e.perm.begin(), e.perm.end(), 0);
      e.sign.assign(static_cast<std::size_t>(f.size), 1);
      return {e};
    }
    case FactorType::Sp:
      return signed_permutations(k, SignRule::Any);
    case FactorType::SO:
    case FactorType::O:
      if (f.size % 2) return signed_permutations(k, SignRule::Any);
      return signed_permutations(k, f.outer ? SignRule::Odd : SignRule::Even);
    case FactorType::GLSwap: {
      // (x, y) ↦ (-P y, -Q x): coordinate i of the first half goes to
      // k + Q(i) and coordinate j of the second half goes to P(j).
      const int m = f.size;
      const std::vector<FactorElement> perms = signed_permutations(m, SignRule::None);
      std::vector<FactorElement> out;
      for (const FactorElement& p : perms) {
        for (const FactorElement& q : perms) {
          FactorElement e;
          e.perm.resize(static_cast<std::size_t>(2 * m));
          e.sign.assign(static_cast<std::size_t>(2 * m), -1);
          for (int i = 0; i < m; ++i) {
            e.perm[static_cast<std::size_t>(i)] = m + q.perm[static_cast<std::size_t>(i)];
            e.perm[static_cast<std::size_t>(m + i)] = p.perm[static_cast<std::size_t>(i)];
          }
          out.push_back(std::move(e));
        }
      }
      return out;
    }
  }
  return {};
}

// Positive roots of a factor in its local coordinates.
std::vector<std::vector<int>> positive_roots(const ShapeFactor& f) {
  std::vector<std::vector<int>> roots;
  const int r = factor_rank(f);
  auto type_a = [&](int offset, int n) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::vector<int> a(static_cast<std::size_t>(r), 0);
        a[static_cast<std::size_t>(offset + i)] = 1;
        a[static_cast<std::size_t>(offset + j)] = -1;
        roots.push_back(a);
      }
    }
  };
  switch (f.type) {
    case FactorType::Torus:
      break;
    case FactorType::GL:
      type_a(0, r);
      break;
    case FactorType::GLSwap:
      type_a(0, f.size);
      type_a(f.size, f.size);
      break;
    case FactorType::Sp:
    case FactorType::SO:
    case FactorType::O:
      for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
          for (int sgn : {-1, 1}) {
            std::vector<int> a(static_cast<std::size_t>(r), 0);
            a[static_cast<std::size_t>(i)] = 1;
            a[static_cast<std::size_t>(j)] = sgn;
            roots.push_back(a);
          }
        }
        const int c = f.type == FactorType::Sp ? 2 : 1;
        if (f.type == FactorType::Sp || f.size % 2) {
          std::vector<int> a(static_cast<std::size_t>(r), 0);
          a[static_cast<std::size_t>(i)] = c;
          roots.push_back(a);
        }
      }
      break;
  }
  return roots;
}

// Strictly dominant test vector: (n, n-1, ..., 1) on each simple block.
std::vector<int> dominant_vector(const ShapeFactor& f) {
  const int r = factor_rank(f);
  std::vector<int> h(static_cast<std::size_t>(r));
  const int block = f.type == FactorType::GLSwap ? f.size : r;
  for (int i = 0; i < r; ++i) h[static_cast<std::size_t>(i)] = block - (i % std::max(block, 1));
  return h;
}

}  // namespace

std::vector<WeylElementRec> weyl_enumerate(const ReductiveShape& s, std::uint64_t max_order) {
  const std::uint64_t order = weyl_order(s);
  if (order > max_order) {
    throw Error("weylconst.too_large", "Weyl coset of " + s.to_string() + " has " + std::to_string(order) +
                                           " elements, above the bound " + std::to_string(max_order));
  }
  std::vector<std::vector<FactorElement>> lists;
  std::vector<int> offsets;
  int rank = 0;
  for (const ShapeFactor& f : s.factors) {
    lists.push_back(factor_elements(f));
    offsets.push_back(rank);
    rank += factor_rank(f);
  }
  std::vector<WeylElementRec> out;
  out.reserve(order);
  std::vector<std::size_t> idx(lists.size(), 0);
  while (true) {
    WeylElementRec w;
    w.rank = rank;
    w.matrix.assign(static_cast<std::size_t>(rank * rank), 0);
    for (std::size_t f = 0; f < lists.size(); ++f) {
      const FactorElement& e = lists[f][idx[f]];
      w.factors.push_back(e);
      for (std::size_t i = 0; i < e.perm.size(); ++i) {
        const int col = offsets[f] + static_cast<int>(i);
        const int row = offsets[f] + e.perm[i];
        w.matrix[static_cast<std::size_t>(row * rank + col)] = e.sign[i];
      }
    }
    out.push_back(std::move(w));
    std::size_t f = 0;
    for (; f < lists.size(); ++f) {
      if (++idx[f] < lists[f].size()) break;
      idx[f] = 0;
    }
    if (f == lists.size()) break;
  }
  return out;
}

long long det_w_minus_1(const WeylElementRec& w) {
  const int n = w.rank;
  if (n == 0) return 1;
  std::vector<long long> a(w.matrix.begin(), w.matrix.end());
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i * n + i)] -= 1;
  auto at = [&](int r, int c) -> long long& { return a[static_cast<std::size_t>(r * n + c)]; };
  long long prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

int s0_sign(const ReductiveShape& s, const WeylElementRec& w) {
  int flips = 0;
  for (std::size_t f = 0; f < s.factors.size(); ++f) {
    const FactorElement& e = w.factors[f];
    const std::vector<int> h = dominant_vector(s.factors[f]);
    for (const std::vector<int>& root : positive_roots(s.factors[f])) {
      long long pairing = 0;
      for (std::size_t i = 0; i < root.size(); ++i) {
        pairing += static_cast<long long>(e.sign[i]) * root[i] * h[static_cast<std::size_t>(e.perm[i])];
      }
      if (pairing < 0) ++flips;
    }
  }
  return flips % 2 ? -1 : 1;
}

Rational i_theta(const ReductiveShape& s, std::uint64_t max_order) {
  const std::vector<WeylElementRec> ws = weyl_enumerate(s, max_order);
  // Tally of s⁰(w) by |det(w - 1)| over regular elements.
  std::map<long long, long long> tally;
  for (const WeylElementRec& w : ws) {
    const long long d = det_w_minus_1(w);
    if (d == 0) continue;
    tally[std::llabs(d)] += s0_sign(s, w);
  }
  Rational sum = 0;
  for (const auto& [d, count] : tally) sum += Rational(static_cast<long>(count)) / Rational(static_cast<long>(d));
  sum /= Rational(static_cast<unsigned long>(ws.size()));
  sum.canonicalize();
  return sum;
}

std::uint64_t center_order(const ReductiveShape& s) {
  std::uint64_t z = 1;
  for (const ShapeFactor& f : s.canonical().factors) {
    switch (f.type) {
      case FactorType::GL:
      case FactorType::Torus:
      case FactorType::GLSwap:
        return 0;
      case FactorType::Sp:
        z *= 2;
        break;
      case FactorType::SO:
      case FactorType::O:
        if (f.size == 2) return 0;
        if (f.size % 2 == 0) z *= 2;
        break;
    }
  }
  return z;
}

std::vector<EllipticClassRec> elliptic_classes(const ReductiveShape& s) {
  struct Option {
    std::pair<int, int> eigen;
    std::vector<ShapeFactor> cent;
    std::uint64_t pi0 = 1;
    bool central = false;
  };
  std::vector<std::vector<Option>> per_factor;
  for (const ShapeFactor& f : s.factors) {
    std::vector<Option> opts;
    if (trivial_factor(f)) {
      opts.push_back(Option{{f.size, 0}, {}, 1, true});
      per_factor.push_back(opts);
      continue;
    }
    switch (f.type) {
      case FactorType::GL:
      case FactorType::Torus:
      case FactorType::GLSwap:
        // Every centralizer keeps a central torus.
        return {};
      case FactorType::Sp:
        for (int b = 0; b <= f.size; b += 2) {
          const int a = f.size - b;
          opts.push_back(Option{{a, b},
                                {ShapeFactor{FactorType::Sp, a, false}, ShapeFactor{FactorType::Sp, b, false}},
                                1,
                                a == 0 || b == 0});
        }
        break;
      case FactorType::SO:
      case FactorType::O:
        for (int b = f.outer ? 1 : 0; b <= f.size; b += 2) {
          const int a = f.size - b;
          opts.push_back(Option{{a, b},
                                {ShapeFactor{FactorType::SO, a, false}, ShapeFactor{FactorType::SO, b, false}},
                                static_cast<std::uint64_t>(a >= 1 && b >= 1 ? 2 : 1),
                                !f.outer && (a == 0 || b == 0)});
        }
        break;
    }
    per_factor.push_back(opts);
  }
  std::vector<EllipticClassRec> out;
  std::vector<std::size_t> idx(per_factor.size(), 0);
  while (true) {
    EllipticClassRec rec;
    rec.central = true;
    for (std::size_t f = 0; f < per_factor.size(); ++f) {
      const Option& o = per_factor[f][idx[f]];
      rec.eigen.push_back(o.eigen);
      rec.centralizer.factors.insert(rec.centralizer.factors.end(), o.cent.begin(), o.cent.end());
      rec.pi0_order *= o.pi0;
      rec.central = rec.central && o.central;
    }
    rec.centralizer = rec.centralizer.canonical();
    out.push_back(std::move(rec));
    std::size_t f = 0;
    for (; f < per_factor.size(); ++f) {
      if (++idx[f] < per_factor[f].size()) break;
      idx[f] = 0;
    }
    if (f == per_factor.size()) break;
  }
  return out;
}

namespace {

std::mutex sigma_mutex;
std::map<std::string, Rational>& sigma_memo() {
  static std::map<std::string, Rational> memo;
  return memo;
}

}  // namespace

Rational sigma(const ReductiveShape& shape, std::uint64_t max_order) {
  const ReductiveShape s = shape.canonical();
  if (!s.connected()) throw Error("weylconst.not_connected", "sigma needs a connected shape, got " + s.to_string());
  const std::string key = s.to_string();
  {
    std::lock_guard<std::mutex> lock(sigma_mutex);
    auto it = sigma_memo().find(key);
    if (it != sigma_memo().end()) return it->second;
  }
  Rational value = 0;
  const std::uint64_t z = center_order(s);
  if (z != 0) {
    // e(S) = i(S), with the central classes contributing |Z(S)| σ(S).
    Rational rest = i_theta(s, max_order);
    std::uint64_t central = 0;
    for (const EllipticClassRec& c : elliptic_classes(s)) {
      if (c.central) {
        ++central;
        continue;
      }
      if (c.centralizer.torus_rank() >= s.torus_rank() && weyl_order(c.centralizer) >= weyl_order(s)) {
        throw Error("weylconst.internal", "centralizer does not shrink for " + key);
      }
      rest -= sigma(c.centralizer, max_order) / Rational(static_cast<unsigned long>(c.pi0_order));
    }
    if (central != z) throw Error("weylconst.internal", "central class count differs from |Z| for " + key);
    value = rest / Rational(static_cast<unsigned long>(z));
    value.canonicalize();
  }
  std::lock_guard<std::mutex> lock(sigma_mutex);
  sigma_memo().emplace(key, value);
  return value;
}

Rational e_theta(const ReductiveShape& s, std::uint64_t max_order) {
  Rational sum = 0;
  for (const EllipticClassRec& c : elliptic_classes(s)) {
    sum += sigma(c.centralizer, max_order) / Rational(static_cast<unsigned long>(c.pi0_order));
  }
  sum.canonicalize();
  return sum;
}

}  // namespace endo
