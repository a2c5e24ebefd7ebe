#include "endo/compgroup.hpp"

#include <algorithm>
#include <set>

#include "endo/endoscopy.hpp"
#include "endo/error.hpp"

namespace endo {

OrthBasis orth_basis(const Parameter& phi) {
  OrthBasis b;
  if (phi.target.is_product()) {
    for (const GroupSpec& f : phi.target.factors) b.factor_is_so.push_back(f.family == Family::SOeven);
  } else {
    b.factor_is_so.push_back(phi.target.family == Family::SOeven);
  }
  b.factor_mask.assign(b.factor_is_so.size(), 0);
  const std::size_t n = phi.constituents.size();
  b.constituent.reserve(n);
  b.labels.reserve(n);
  b.dims.reserve(n);
  b.mults.reserve(n);
  b.factor.reserve(n);
  b.etas.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Constituent& c = phi.constituents[i];
    if (c.simple.duality != Duality::Orth) continue;
    const int k = b.size++;
    if (k >= 64) throw Error("compgroup.too_large", "more than 64 orthogonal constituents");
    b.constituent.push_back(static_cast<int>(i));
    b.labels.push_back(c.simple.label);
    b.dims.push_back(c.simple.dim);
    b.mults.push_back(c.mult);
    b.factor.push_back(c.factor);
    b.etas.push_back(c.simple.central_char);
    if (c.simple.dim % 2) b.n_odd |= gf2::unit(k);
    if (c.mult % 2) b.l_odd |= gf2::unit(k);
    b.factor_mask.at(static_cast<std::size_t>(c.factor)) |= gf2::unit(k);
  }
  return b;
}

CentralizerShape centralizer_shape(const Parameter& phi) {
  CentralizerShape s;
  const OrthBasis b = orth_basis(phi);
  for (const Constituent& c : phi.constituents) {
    CentFactor f;
    f.size = c.mult;
    f.dim = c.simple.dim;
    f.label = c.simple.label;
    f.kind = c.simple.duality == Duality::Orth ? CentKind::O
             : c.simple.duality == Duality::Symp ? CentKind::Sp
                                                  : CentKind::GL;
    s.factors.push_back(f);
  }
  s.plus_kernel = b.n_odd != 0;
  s.center_order2 = std::any_of(b.factor_is_so.begin(), b.factor_is_so.end(), [](bool x) { return x; });
  return s;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::S:
      return "S";
    case Variant::Sbar:
      return "Sbar";
    case Variant::SbarSigma0:
      return "SbarSigma0";
    case Variant::Stilde:
      return "Stilde";
  }
  return "?";
}

ComponentGroup::ComponentGroup(Variant variant, std::vector<std::string> labels, gf2::Subspace preimage,
                               gf2::Subspace relations)
    : variant_(variant), labels_(std::move(labels)), preimage_(std::move(preimage)), relations_(std::move(relations)) {
  if (!relations_.subset_of(preimage_)) {
    throw Error("compgroup.internal", "relation vector outside the component subspace");
  }
}

std::uint64_t ComponentGroup::order() const {
  return std::uint64_t{1} << (preimage_.dim() - relations_.dim());
}

std::vector<gf2::Vec> ComponentGroup::elements() const {
  std::set<gf2::Vec> out;
  for (gf2::Vec v : gf2::span_elements(preimage_.basis())) out.insert(canonical(v));
  return {out.begin(), out.end()};
}

namespace {

gf2::Vec eta_product(const OrthBasis& b, gf2::Vec x) {
  gf2::Vec chi = 0;
  for (int k = 0; k < b.size; ++k) {
    if (gf2::test(x, k)) chi ^= b.etas[static_cast<std::size_t>(k)];
  }
  return chi;
}

// Kernel inside V of the stacked functionals: per factor the determinant
// parity (when `keep` says so) and optionally the character map into X.
gf2::Subspace constrained_subspace(const OrthBasis& b, const std::vector<bool>& keep_parity,
                                   const CharClassGroup* x, const Parameter* phi) {
  std::vector<gf2::Vec> images(static_cast<std::size_t>(b.size), 0);
  const int char_bits = x ? x->ambient_dim() : 0;
  for (int k = 0; k < b.size; ++k) {
    gf2::Vec img = 0;
    if (x) img = x->canonical(b.etas[static_cast<std::size_t>(k)]);
    const auto f = static_cast<std::size_t>(b.factor[static_cast<std::size_t>(k)]);
    if (keep_parity[f] && gf2::test(b.n_odd, k)) img |= gf2::unit(char_bits + static_cast<int>(f));
    images[static_cast<std::size_t>(k)] = img;
  }
  (void)phi;
  return gf2::Subspace(gf2::kernel(images));
}

gf2::Subspace center_relations(const OrthBasis& b) {
  gf2::Subspace r;
  for (std::size_t f = 0; f < b.factor_mask.size(); ++f) {
    if (b.factor_is_so[f]) r.insert(b.odd_in(f));
  }
  return r;
}

}  // namespace

ComponentGroup component_group(const Parameter& phi, Variant variant) {
  const OrthBasis b = orth_basis(phi);
  std::vector<bool> keep(b.factor_mask.size(), true);
  if (variant == Variant::SbarSigma0) {
    for (std::size_t f = 0; f < keep.size(); ++f) keep[f] = !b.factor_is_so[f];
  }
  gf2::Subspace preimage;
  if (variant == Variant::Stilde) {
    const CharClassGroup x = x_group(phi.target);
    preimage = constrained_subspace(b, keep, &x, &phi);
  } else {
    preimage = constrained_subspace(b, keep, nullptr, nullptr);
  }
  gf2::Subspace relations;
  if (variant != Variant::S) relations = center_relations(b);
  return ComponentGroup(variant, b.labels, preimage, relations);
}

std::vector<gf2::Vec> theta0_component(const Parameter& phi) {
  if (phi.target.is_product() || phi.target.family != Family::SOeven) {
    throw Error("compgroup.theta0_sp", "theta0 component requested for a target that is not special even orthogonal");
  }
  const OrthBasis b = orth_basis(phi);
  const gf2::Subspace rel = center_relations(b);
  std::set<gf2::Vec> out;
  for (gf2::Vec v = 0; v <= b.all(); ++v) {
    if (gf2::dot(v, b.n_odd) == 1) out.insert(rel.reduce(v));
    if (v == b.all()) break;
  }
  return {out.begin(), out.end()};
}

PartitionPair canonical_pair(const OrthBasis& b, PartitionPair p) {
  for (std::size_t f = 0; f < b.factor_mask.size(); ++f) {
    const gf2::Vec odd = b.odd_in(f);
    if (odd == 0) continue;
    if (p.S & gf2::lowest_bit(odd)) p.S ^= odd;
  }
  return p;
}

PartitionGroup p_phi(const Parameter& phi, bool sigma0) {
  const OrthBasis b = orth_basis(phi);
  PartitionGroup g;
  g.sigma0 = sigma0;
  std::set<PartitionPair> classes;
  const gf2::Vec odd = b.l_odd;
  const gf2::Vec even = b.all() & ~b.l_odd;
  // Enumerate S ⊆ I_O_odd and T ⊆ I_O_even as independent subset walks.
  for (gf2::Vec S = 0;; S = (S - odd) & odd) {
    for (gf2::Vec T = 0;; T = (T - even) & even) {
      bool ok = true;
      if (!sigma0) {
        for (std::size_t f = 0; f < b.factor_mask.size(); ++f) {
          if (!b.factor_is_so[f]) continue;
          int n_sum = 0;
          for (int k = 0; k < b.size; ++k) {
            if (gf2::test((S | T) & b.factor_mask[f], k)) n_sum += b.dims[static_cast<std::size_t>(k)];
          }
          if (n_sum % 2) ok = false;
        }
      }
      if (ok) classes.insert(canonical_pair(b, PartitionPair{S, T}));
      if (T == even) break;
    }
    if (S == odd) break;
  }
  g.classes.assign(classes.begin(), classes.end());
  return g;
}

PartitionPair c_map(const Parameter& phi, gf2::Vec x) {
  const OrthBasis b = orth_basis(phi);
  if (x & ~b.all()) throw Error("compgroup.bad_element", "element outside GF(2)^{I_O}");
  return canonical_pair(b, PartitionPair{x & b.l_odd, x & ~b.l_odd});
}

std::string pair_to_string(const OrthBasis& b, const PartitionPair& p) {
  auto set_str = [&](gf2::Vec v) {
    std::string s = "{";
    bool first = true;
    for (int k = 0; k < b.size; ++k) {
      if (!gf2::test(v, k)) continue;
      if (!first) s += ",";
      s += b.labels[static_cast<std::size_t>(k)];
      first = false;
    }
    return s + "}";
  };
  return "(" + set_str(p.S) + "," + set_str(p.T) + ")";
}

gf2::Vec alpha(const Parameter& phi, gf2::Vec x) {
  const OrthBasis b = orth_basis(phi);
  if (x & ~b.all()) throw Error("compgroup.bad_element", "element outside GF(2)^{I_O}");
  return x_group(phi.target).canonical(eta_product(b, x));
}

gf2::Vec alpha_p(const Parameter& phi, const PartitionPair& p) {
  return x_group(phi.target).canonical(eta_product(orth_basis(phi), p.S | p.T));
}

gf2::Subspace alpha_image(const Parameter& phi, Variant variant) {
  const ComponentGroup g = component_group(phi, variant);
  const OrthBasis b = orth_basis(phi);
  const CharClassGroup x = x_group(phi.target);
  std::vector<gf2::Vec> gens;
  for (gf2::Vec v : g.preimage().basis()) gens.push_back(x.canonical(eta_product(b, v)));
  return x.preimage(gens);
}

StildeReport s_tilde(const Parameter& phi) {
  StildeReport r;
  const OrthBasis b = orth_basis(phi);
  r.group = component_group(phi, Variant::Stilde);
  r.kernel_linear = r.group.elements();
  const ComponentGroup sbar = component_group(phi, Variant::Sbar);
  const CharClassGroup x = x_group(phi.target);
  const gf2::Vec trivial = x.canonical(0);
  std::set<gf2::Vec> pulled;
  for (const PartitionPair& p : p_phi(phi, false).classes) {
    if (x.canonical(eta_product(b, p.S | p.T)) != trivial) continue;
    r.p_tilde.push_back(p);
    // Inverse of c: restore the determinant parity on symplectic factors by
    // complementing S there, then take the canonical representative.
    gf2::Vec v = p.vec();
    for (std::size_t f = 0; f < b.factor_mask.size(); ++f) {
      if (b.factor_is_so[f]) continue;
      if (gf2::dot(v & b.factor_mask[f], b.n_odd)) v ^= b.odd_in(f);
    }
    if (!sbar.contains(v)) throw Error("compgroup.internal", "pulled-back partition outside S_phi");
    pulled.insert(sbar.canonical(v));
  }
  r.p_tilde_as_vectors.assign(pulled.begin(), pulled.end());
  r.exact = r.p_tilde_as_vectors == r.kernel_linear && r.p_tilde.size() == r.group.order();
  return r;
}

TrivialityTest stilde_is_trivial_test(const Parameter& phi) {
  const OrthBasis b = orth_basis(phi);
  gf2::Subspace allowed;
  for (std::size_t f = 0; f < b.factor_mask.size(); ++f) allowed.insert(b.odd_in(f));
  const gf2::Vec trivial = x_group(phi.target).canonical(0);
  TrivialityTest t;
  for (gf2::Vec v = 0; v <= b.all(); ++v) {
    const PartitionPair p{v & b.l_odd, v & ~b.l_odd};
    if (alpha_p(phi, p) == trivial && !allowed.contains(v)) {
      t.trivial = false;
      t.witness = p;
      return t;
    }
    if (v == b.all()) break;
  }
  return t;
}

bool has_finite_centralizer(const Parameter& phi, Theta theta) {
  const OrthBasis b = orth_basis(phi);
  for (const Constituent& c : phi.constituents) {
    // Sp(l) and GL(l) blocks keep a torus in every semisimple centralizer.
    if (c.simple.duality != Duality::Orth) return false;
  }
  if (theta == Theta::Theta0 && (phi.target.is_product() || phi.target.family != Family::SOeven)) {
    throw Error("params.theta0_sp", "theta0 is only defined for a special even orthogonal target");
  }
  for (gf2::Vec v = 0; v <= b.all(); ++v) {
    bool in_component = true;
    if (theta == Theta::Id) {
      for (gf2::Vec m : b.factor_mask) {
        if (gf2::dot(v & m, b.n_odd)) in_component = false;
      }
    } else {
      in_component = gf2::dot(v, b.n_odd) == 1;
    }
    if (in_component) {
      // In block k the class (a, b) has det (-1)^b and centralizer
      // SO(a) x SO(b) in the identity component; finite iff a, b <= 1.
      bool finite = true;
      for (int k = 0; k < b.size && finite; ++k) {
        const int l = b.mults[static_cast<std::size_t>(k)];
        bool found = false;
        for (int bb = 0; bb <= l; ++bb) {
          const int aa = l - bb;
          if ((bb % 2) != static_cast<int>(gf2::test(v, k))) continue;
          if (aa <= 1 && bb <= 1) found = true;
        }
        finite = found;
      }
      if (finite) return true;
    }
    if (v == b.all()) break;
  }
  return false;
}

InductionReport consistency_on_induction_check(const Parameter& phi, Theta theta, const PartitionPair& split) {
  validate(phi);
  if (phi.target.is_product()) throw Error("compgroup.precondition", "product targets are not covered");
  if (!is_elliptic(phi, theta)) throw Error("compgroup.precondition", "parameter is not elliptic for theta");
  if (s_tilde(phi).group.order() != 1) throw Error("compgroup.precondition", "S of the lifted parameter is not trivial");
  const IndexPartition ip = index_partition(phi);
  InductionReport r;
  if (phi.target.family == Family::Sp) {
    r.condition = "symplectic";
  } else if (phi.target.eta != 0) {
    r.condition = "orthogonal, nontrivial discriminant";
  } else if (ip.orth_odd.empty() || ip.orth_even.empty()) {
    r.condition = "orthogonal, split, one index class empty";
  } else {
    throw Error("compgroup.precondition",
                "split orthogonal target with both odd and even multiplicity indices present");
  }
  const EndoPair ep = endoscopic_pair(phi, split.vec(), theta);
  r.stilde_I = s_tilde(ep.phi_I).group.order();
  r.stilde_II = s_tilde(ep.phi_II).group.order();
  r.ok = r.stilde_I == 1 && r.stilde_II == 1;
  r.detail = ep.datum.name();
  return r;
}

}  // namespace endo
