#include "endo/params.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "endo/compgroup.hpp"
#include "endo/error.hpp"

namespace endo {

std::string to_string(Family f) { return f == Family::Sp ? "Sp" : "SO"; }

std::string to_string(Duality d) {
  switch (d) {
    case Duality::Orth:
      return "orth";
    case Duality::Symp:
      return "symp";
    case Duality::Pair:
      return "pair";
  }
  return "?";
}

std::string to_string(Theta t) { return t == Theta::Id ? "id" : "theta0"; }

std::vector<GroupSpec> GroupSpec::simple_factors() const {
  if (factors.empty()) return {*this};
  return factors;
}

int GroupSpec::dual_dim() const {
  if (!factors.empty()) {
    int n = 0;
    for (const GroupSpec& f : factors) n += f.dual_dim();
    return n;
  }
  return family == Family::Sp ? 2 * rank + 1 : 2 * rank;
}

std::string GroupSpec::name() const {
  std::string out;
  if (!factors.empty()) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      GroupSpec f = factors[i];
      f.similitude = false;
      if (i) out += "x";
      out += f.name();
    }
    return similitude ? "G(" + out + ")" : out;
  }
  if (family == Family::Sp) {
    out = "Sp(" + std::to_string(2 * rank) + ")";
  } else {
    out = "SO(" + std::to_string(2 * rank) + "," + gf2::to_bits(eta, chars.dim) + ")";
  }
  return similitude ? "G" + out : out;
}

GroupSpec make_sp(int n, const CharSpace& chars, bool similitude) {
  GroupSpec g;
  g.family = Family::Sp;
  g.rank = n;
  g.similitude = similitude;
  g.chars = chars;
  return g;
}

GroupSpec make_so(int n, gf2::Vec eta, const CharSpace& chars, bool similitude) {
  GroupSpec g;
  g.family = Family::SOeven;
  g.rank = n;
  g.eta = eta;
  g.similitude = similitude;
  g.chars = chars;
  return g;
}

GroupSpec make_product(std::vector<GroupSpec> factors, bool similitude) {
  if (factors.empty()) throw Error("params.bad_factor", "a product group needs at least one factor");
  GroupSpec g;
  g.similitude = similitude;
  g.chars = factors.front().chars;
  for (GroupSpec& f : factors) {
    if (f.is_product()) throw Error("params.bad_factor", "nested products are not supported");
    if (!(f.chars == g.chars)) throw Error("params.bad_factor", "factors use different character spaces");
    f.similitude = false;
  }
  g.factors = std::move(factors);
  return g;
}

Parameter make_parameter(GroupSpec target, std::vector<Constituent> constituents) {
  std::sort(constituents.begin(), constituents.end(), [](const Constituent& a, const Constituent& b) {
    return std::tie(a.factor, a.simple.dim, a.simple.duality, a.simple.label) <
           std::tie(b.factor, b.simple.dim, b.simple.duality, b.simple.label);
  });
  return Parameter{std::move(target), std::move(constituents)};
}

void validate(const Parameter& phi) {
  const std::vector<GroupSpec> factors = phi.target.simple_factors();
  std::vector<int> dims(factors.size(), 0);
  std::vector<gf2::Vec> dets(factors.size(), 0);
  // A constituent split between the factors of an endoscopic group keeps its
  // label on both sides, so labels are unique per factor.
  std::set<std::pair<int, std::string>> labels;
  for (const Constituent& c : phi.constituents) {
    const SimpleParam& s = c.simple;
    if (!labels.insert({c.factor, s.label}).second) {
      throw Error("params.duplicate_label", "duplicate constituent label " + s.label);
    }
    if (c.mult < 1) throw Error("params.bad_multiplicity", "multiplicity must be at least 1 for " + s.label);
    if (s.dim < 1) throw Error("params.dimension", "constituent " + s.label + " has dimension < 1");
    if (c.factor < 0 || c.factor >= static_cast<int>(factors.size())) {
      throw Error("params.bad_factor", "constituent " + s.label + " refers to a missing factor");
    }
    if (s.duality == Duality::Symp && s.dim % 2 != 0) {
      throw Error("params.odd_symplectic_dim", "symplectic constituent " + s.label + " has odd dimension");
    }
    if (s.duality == Duality::Symp && c.mult % 2 != 0) {
      throw Error("params.odd_symplectic_multiplicity",
                  "odd symplectic multiplicity for constituent " + s.label);
    }
    if (s.duality == Duality::Symp && s.central_char != 0) {
      throw Error("params.symplectic_char", "symplectic constituent " + s.label + " must have trivial central character");
    }
    if (s.central_char & ~gf2::mask(phi.target.chars.dim)) {
      throw Error("params.char_space", "central character of " + s.label + " lies outside the character space");
    }
    const auto f = static_cast<std::size_t>(c.factor);
    dims[f] += (s.duality == Duality::Pair ? 2 : 1) * c.mult * s.dim;
    if (s.duality == Duality::Orth && c.mult % 2 == 1) dets[f] ^= s.central_char;
  }
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (dims[f] != factors[f].dual_dim()) {
      throw Error("params.dimension", "dimension mismatch for " + factors[f].name() + ": constituents give " +
                                          std::to_string(dims[f]) + ", dual group needs " +
                                          std::to_string(factors[f].dual_dim()));
    }
    const gf2::Vec expected = factors[f].family == Family::Sp ? 0 : factors[f].eta;
    if (dets[f] != expected) {
      throw Error("params.determinant", "determinant of the parameter differs from the discriminant of " +
                                            factors[f].name());
    }
  }
}

IndexPartition index_partition(const Parameter& phi) {
  IndexPartition p;
  for (const Constituent& c : phi.constituents) {
    switch (c.simple.duality) {
      case Duality::Orth:
        (c.mult % 2 ? p.orth_odd : p.orth_even).push_back(c.simple.label);
        break;
      case Duality::Symp:
        p.symp.push_back(c.simple.label);
        break;
      case Duality::Pair:
        p.pairs.push_back(c.simple.label);
        break;
    }
  }
  return p;
}

bool is_discrete(const Parameter& phi) {
  return std::all_of(phi.constituents.begin(), phi.constituents.end(), [](const Constituent& c) {
    return c.simple.duality == Duality::Orth && c.mult == 1;
  });
}

bool is_elliptic(const Parameter& phi, Theta theta) {
  if (theta == Theta::Theta0) {
    if (phi.target.is_product() || phi.target.family != Family::SOeven) {
      throw Error("params.theta0_sp", "theta0 is only defined for a special even orthogonal target");
    }
  }
  bool necessary = true;
  bool some_odd_dim = false;
  for (const Constituent& c : phi.constituents) {
    if (c.simple.duality != Duality::Orth || c.mult > 2) necessary = false;
    if (c.simple.duality == Duality::Orth && c.simple.dim % 2 == 1) some_odd_dim = true;
  }
  if (theta == Theta::Theta0 && !some_odd_dim) necessary = false;
  if (!necessary) return false;
  return has_finite_centralizer(phi, theta);
}

int m_phi(const Parameter& phi) {
  const std::vector<GroupSpec> factors = phi.target.simple_factors();
  int m = 1;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (factors[f].family != Family::SOeven) continue;
    bool all_even = true;
    for (const Constituent& c : phi.constituents) {
      if (c.factor == static_cast<int>(f) && c.simple.duality == Duality::Orth && c.simple.dim % 2 == 1) {
        all_even = false;
      }
    }
    if (all_even) m *= 2;
  }
  return m;
}

std::vector<LeviShape> enumerate_levi_shapes(int n) {
  if (n < 0) throw Error("params.rank", "negative rank");
  std::vector<LeviShape> out;
  std::vector<int> parts;
  // Partitions of k with parts at most `max`, largest parts first.
  std::function<void(int, int, int)> rec = [&](int remaining, int max, int k) {
    if (remaining == 0) {
      out.push_back(LeviShape{parts, n - k});
      return;
    }
    for (int p = std::min(remaining, max); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p, k);
      parts.pop_back();
    }
  };
  for (int k = 0; k <= n; ++k) rec(k, k, k);
  return out;
}

LeviSupport levi_support(const Parameter& phi) {
  if (is_discrete(phi)) throw Error("params.already_discrete", "parameter is already discrete");
  LeviSupport out;
  std::vector<GroupSpec> factors = phi.target.simple_factors();
  std::vector<int> peeled(factors.size(), 0);
  std::vector<Constituent> remaining;
  for (const Constituent& c : phi.constituents) {
    int blocks = 0;
    int keep = 0;
    switch (c.simple.duality) {
      case Duality::Orth:
        blocks = c.mult / 2;
        keep = c.mult % 2;
        break;
      case Duality::Symp:
        blocks = c.mult / 2;
        break;
      case Duality::Pair:
        blocks = c.mult;
        break;
    }
    for (int b = 0; b < blocks; ++b) {
      out.gl_blocks.push_back(c.simple.dim);
      out.gl_labels.push_back(c.simple.label);
    }
    peeled[static_cast<std::size_t>(c.factor)] += blocks * c.simple.dim;
    if (keep) {
      Constituent r = c;
      r.mult = keep;
      remaining.push_back(r);
    }
  }
  for (std::size_t f = 0; f < factors.size(); ++f) factors[f].rank -= peeled[f];
  GroupSpec target;
  if (phi.target.is_product()) {
    target = make_product(factors, phi.target.similitude);
  } else {
    target = factors.front();
  }
  out.phi_minus = make_parameter(target, remaining);
  return out;
}

SimpleParam twist(const SimpleParam& s, gf2::Vec chi) {
  SimpleParam out = s;
  if (s.duality == Duality::Orth && s.dim % 2 == 1) out.central_char ^= chi;
  return out;
}

}  // namespace endo
