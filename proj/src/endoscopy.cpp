#include "endo/endoscopy.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "endo/charfield.hpp"
#include "endo/compgroup.hpp"
#include "endo/error.hpp"

namespace endo {

GroupSpec EndoDatum::group() const { return make_product({comp_I, comp_II}, similitude); }

std::string EndoDatum::name() const {
  std::string out = group().name();
  if (twist == Theta::Theta0) {
    const int d = ambient.chars.dim;
    out += "[" + gf2::to_bits(char_I, d) + "," + gf2::to_bits(char_II, d) + "]";
  }
  if (similitude) out += " omega=" + gf2::to_bits(omega, ambient.chars.dim);
  return out;
}

namespace {

void require_simple(const GroupSpec& g) {
  if (g.is_product()) throw Error("endoscopy.unsupported", "endoscopic data are tabulated for simple groups only");
}

void require_theta(const GroupSpec& g, Theta theta) {
  if (theta == Theta::Theta0 && g.family != Family::SOeven) {
    throw Error("endoscopy.theta0_sp", "theta0 twisting needs a special even orthogonal ambient group");
  }
}

// SO(0) only exists split, and split SO(2) is a torus, so neither of the
// corresponding rows is elliptic.
bool so_allowed(int n, gf2::Vec eta) {
  if (n == 0) return eta == 0;
  if (n == 1) return eta != 0;
  return true;
}

gf2::Vec datum_character(const EndoDatum& d) {
  return d.ambient.family == Family::Sp ? d.char_II : d.char_I;
}

EndoDatum finish(EndoDatum d) {
  d.similitude = d.ambient.similitude;
  d.comp_I.similitude = false;
  d.comp_II.similitude = false;
  d.omega = d.similitude ? x_group(d.ambient).canonical(datum_character(d)) : 0;
  return d;
}

// Puts the two components of an unordered pair in increasing (rank, char)
// order. Returns true when they were swapped.
bool order_pair(EndoDatum& d) {
  if (std::tie(d.comp_II.rank, d.char_II) < std::tie(d.comp_I.rank, d.char_I)) {
    std::swap(d.comp_I, d.comp_II);
    std::swap(d.char_I, d.char_II);
    return true;
  }
  return false;
}

}  // namespace

std::vector<EndoDatum> enumerate_elliptic(const GroupSpec& g, Theta theta, const std::vector<gf2::Vec>& universe) {
  require_simple(g);
  require_theta(g, theta);
  std::set<gf2::Vec> chars;
  for (gf2::Vec c : universe) {
    if (c & ~gf2::mask(g.chars.dim)) throw Error("endoscopy.char_space", "universe character outside the space");
    chars.insert(c);
  }
  const int n = g.rank;
  std::vector<EndoDatum> out;
  std::set<std::tuple<int, gf2::Vec, int, gf2::Vec>> seen;
  auto push = [&](EndoDatum d) {
    if (g.family == Family::SOeven) order_pair(d);
    if (seen.insert({d.comp_I.rank, d.char_I, d.comp_II.rank, d.char_II}).second) out.push_back(finish(d));
  };
  for (int n1 = n; n1 >= 0; --n1) {
    for (gf2::Vec eta : chars) {
      EndoDatum d;
      d.ambient = g;
      d.twist = theta;
      if (g.family == Family::Sp) {
        const int n2 = n - n1;
        if (!so_allowed(n2, eta)) continue;
        d.comp_I = make_sp(n1, g.chars);
        d.comp_II = make_so(n2, eta, g.chars);
        d.char_II = eta;
      } else if (theta == Theta::Id) {
        const int n2 = n - n1;
        if (!so_allowed(n1, eta) || !so_allowed(n2, eta ^ g.eta)) continue;
        d.comp_I = make_so(n1, eta, g.chars);
        d.comp_II = make_so(n2, eta ^ g.eta, g.chars);
        d.char_I = eta;
        d.char_II = eta ^ g.eta;
      } else {
        const int n2 = n - n1 - 1;
        if (n2 < 0) continue;
        d.comp_I = make_sp(n1, g.chars);
        d.comp_II = make_sp(n2, g.chars);
        d.char_I = eta;
        d.char_II = eta ^ g.eta;
      }
      push(d);
    }
  }
  return out;
}

EndoDatum lift_to_similitude(const EndoDatum& d) {
  EndoDatum l = d;
  l.ambient.similitude = true;
  return finish(l);
}

EndoPair endoscopic_pair(const Parameter& phi, gf2::Vec x, Theta theta) {
  validate(phi);
  const GroupSpec& g = phi.target;
  require_simple(g);
  require_theta(g, theta);
  const OrthBasis b = orth_basis(phi);
  if (x & ~b.all()) throw Error("compgroup.bad_element", "element outside GF(2)^{I_O}");

  gf2::Vec v = x;
  if (g.family == Family::Sp) {
    // Exactly one of x and its complement has even determinant parity.
    if (gf2::dot(v, b.n_odd)) v ^= b.l_odd;
  } else {
    const int want = theta == Theta::Id ? 0 : 1;
    if (gf2::dot(v, b.n_odd) != want) {
      throw Error("endoscopy.not_in_component", "element does not lie in the " + to_string(theta) + " component");
    }
    v = gf2::Subspace({b.l_odd}).reduce(v);
  }

  std::vector<Constituent> minus;
  std::vector<Constituent> plus;
  int dim_minus = 0;
  int dim_plus = 0;
  gf2::Vec eta_minus = 0;
  int k = 0;
  for (const Constituent& c : phi.constituents) {
    int to_plus = c.mult;
    if (c.simple.duality == Duality::Orth) {
      if (gf2::test(v, k)) {
        Constituent m = c;
        m.mult = 1;
        m.factor = 0;
        minus.push_back(m);
        dim_minus += c.simple.dim;
        eta_minus ^= c.simple.central_char;
        to_plus = c.mult - 1;
      }
      ++k;
    }
    if (to_plus > 0) {
      Constituent p = c;
      p.mult = to_plus;
      p.factor = 0;
      plus.push_back(p);
      dim_plus += (c.simple.duality == Duality::Pair ? 2 : 1) * to_plus * c.simple.dim;
    }
  }
  auto twisted = [](std::vector<Constituent> cs, gf2::Vec chi) {
    for (Constituent& c : cs) c.simple = twist(c.simple, chi);
    return cs;
  };

  EndoDatum d;
  d.ambient = g;
  d.twist = theta;
  std::vector<Constituent> first;
  std::vector<Constituent> second;
  if (g.family == Family::Sp) {
    d.comp_I = make_sp((dim_plus - 1) / 2, g.chars);
    d.comp_II = make_so(dim_minus / 2, eta_minus, g.chars);
    d.char_II = eta_minus;
    first = twisted(plus, eta_minus);
    second = minus;
  } else if (theta == Theta::Id) {
    d.comp_I = make_so(dim_minus / 2, eta_minus, g.chars);
    d.comp_II = make_so(dim_plus / 2, eta_minus ^ g.eta, g.chars);
    d.char_I = eta_minus;
    d.char_II = eta_minus ^ g.eta;
    first = minus;
    second = plus;
  } else {
    d.comp_I = make_sp((dim_minus - 1) / 2, g.chars);
    d.comp_II = make_sp((dim_plus - 1) / 2, g.chars);
    d.char_I = eta_minus;
    d.char_II = eta_minus ^ g.eta;
    first = twisted(minus, eta_minus);
    second = twisted(plus, eta_minus ^ g.eta);
  }
  if (g.family == Family::SOeven && order_pair(d)) std::swap(first, second);
  d = finish(d);

  EndoPair r;
  r.datum = d;
  r.rep = v;
  r.phi_I = make_parameter(d.comp_I, first);
  r.phi_II = make_parameter(d.comp_II, second);
  for (Constituent& c : second) c.factor = 1;
  std::vector<Constituent> all = first;
  all.insert(all.end(), second.begin(), second.end());
  r.phi_prime = make_parameter(d.group(), all);
  validate(r.phi_I);
  validate(r.phi_II);
  validate(r.phi_prime);
  return r;
}

namespace {

// Special even orthogonal factors whose dual center {±1} is a finite part of
// Z(Ĝ)^Γ: rank at least 2, or rank 1 with a nontrivial discriminant (Γ then
// acts on the dual torus by inversion).
bool finite_even(const GroupSpec& f) {
  if (f.family != Family::SOeven) return false;
  if (f.rank == 1 && f.eta == 0) throw Error("endoscopy.unsupported", "split SO(2) component is not elliptic");
  return f.rank >= 2 || (f.rank == 1 && f.eta != 0);
}

// Number of subsets W of the listed factors with Σ_{k∈W} tag_k = 0, where a
// tag is a character plus one extra bit. For a classical group every subset
// counts; for a similitude group the components of Z(Ĝ̃)^Γ are the subsets
// whose characters (and θ-twist bits) cancel.
std::uint64_t count_components(const std::vector<gf2::Vec>& tags, bool similitude) {
  std::uint64_t count = 0;
  for (gf2::Vec w = 0; w < (gf2::Vec{1} << tags.size()); ++w) {
    gf2::Vec sum = 0;
    for (std::size_t k = 0; k < tags.size(); ++k) {
      if (gf2::test(w, static_cast<int>(k))) sum ^= tags[k];
    }
    if (!similitude || sum == 0) ++count;
  }
  return count;
}

}  // namespace

CenterData center_data(const EndoDatum& d) {
  require_simple(d.ambient);
  CenterData c;
  const int tbit = d.ambient.chars.dim;
  std::vector<gf2::Vec> amb_tags;
  if (finite_even(d.ambient)) {
    gf2::Vec tag = d.ambient.eta;
    if (d.twist == Theta::Theta0) tag |= gf2::unit(tbit);
    amb_tags.push_back(tag);
  }
  std::vector<gf2::Vec> endo_tags;
  for (const GroupSpec* f : {&d.comp_I, &d.comp_II}) {
    if (finite_even(*f)) endo_tags.push_back(f->eta);
  }
  c.z_gamma_order = count_components(amb_tags, d.similitude);
  c.z_gamma_order_endo = count_components(endo_tags, d.similitude);

  // Image of Z(Ĝ)^{Γ} in Z(Ĝ′)^Γ: the ambient -1 is -1 on every component.
  std::set<gf2::Vec> image;
  for (gf2::Vec w = 0; w < (gf2::Vec{1} << amb_tags.size()); ++w) {
    gf2::Vec sum = 0;
    if (w) sum = amb_tags.front();
    if (d.similitude && sum != 0) continue;
    image.insert(w ? gf2::mask(static_cast<int>(endo_tags.size())) : 0);
  }
  if (c.z_gamma_order_endo % image.size() != 0) {
    throw Error("endoscopy.unsupported", "center image does not divide the endoscopic center");
  }
  c.zbar_order = c.z_gamma_order_endo / image.size();
  c.kappa_order = 1;

  const int n1 = d.comp_I.rank;
  const int n2 = d.comp_II.rank;
  if (d.ambient.family == Family::Sp) {
    c.out_order = n2 >= 1 ? 2 : 1;
  } else if (d.twist == Theta::Id) {
    c.out_order = (n1 >= 1 && n2 >= 1) ? 2 : 1;
    if (n1 == n2 && n1 >= 1 && d.char_I == d.char_II) c.out_order *= 2;
  } else {
    c.out_order = (n1 == n2 && d.ambient.eta == 0) ? 2 : 1;
  }
  return c;
}

Rational iota(const EndoDatum& d) {
  const CenterData c = center_data(d);
  Rational r(static_cast<unsigned long>(c.z_gamma_order),
             static_cast<unsigned long>(c.z_gamma_order_endo * c.out_order * c.kappa_order));
  r.canonicalize();
  return r;
}

Rational iota_simplified(const EndoDatum& d) {
  if (!d.similitude) throw Error("endoscopy.unsupported", "the three-factor formula applies to similitude data");
  const CenterData c = center_data(d);
  Rational r(1UL, static_cast<unsigned long>(c.zbar_order * c.out_order * c.kappa_order));
  r.canonicalize();
  return r;
}

}  // namespace endo
