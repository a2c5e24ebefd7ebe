#include "endo/ledger.hpp"

#include <algorithm>
#include <map>

#include "endo/error.hpp"

namespace endo {

Rational c_tilde(const Parameter& phi) {
  const ComponentGroup st = component_group(phi, Variant::Stilde);
  Rational r(static_cast<unsigned long>(m_phi(phi)), static_cast<unsigned long>(st.order()));
  r.canonicalize();
  return r;
}

ReductiveShape component_shape(const Parameter& phi, gf2::Vec v) {
  ReductiveShape s;
  int k = 0;
  for (const Constituent& c : phi.constituents) {
    switch (c.simple.duality) {
      case Duality::Orth:
        s.factors.push_back(ShapeFactor{FactorType::O, c.mult, gf2::test(v, k)});
        ++k;
        break;
      case Duality::Symp:
        s.factors.push_back(ShapeFactor{FactorType::Sp, c.mult, false});
        break;
      case Duality::Pair:
        s.factors.push_back(ShapeFactor{FactorType::GL, c.mult, false});
        break;
    }
  }
  return s;
}

ReductiveShape identity_shape(const Parameter& phi) { return component_shape(phi, 0).canonical(); }

namespace {

// The center Z(Ĝ)^Γ is generated by z_f = -1 on each special even orthogonal
// factor f. Elements of Z are masks over those generators.
struct CenterModel {
  std::vector<std::size_t> so_factors;
  std::vector<gf2::Vec> component;  // component of S_φ containing z_f

  std::size_t order() const { return std::size_t{1} << so_factors.size(); }
  gf2::Vec component_of(std::size_t mask) const {
    gf2::Vec c = 0;
    for (std::size_t j = 0; j < so_factors.size(); ++j) {
      if (mask & (std::size_t{1} << j)) c ^= component[j];
    }
    return c;
  }
};

CenterModel center_model(const OrthBasis& b) {
  CenterModel z;
  for (std::size_t f = 0; f < b.factor_mask.size(); ++f) {
    if (!b.factor_is_so[f]) continue;
    z.so_factors.push_back(f);
    z.component.push_back(b.odd_in(f));
  }
  return z;
}

void require_component(const Parameter& phi, const OrthBasis& b, Theta theta, gf2::Vec x) {
  if (x & ~b.all()) throw Error("ledger.not_in_component", "element outside GF(2)^{I_O}");
  if (theta == Theta::Theta0) {
    if (phi.target.is_product() || phi.target.family != Family::SOeven) {
      throw Error("params.theta0_sp", "theta0 is only defined for a special even orthogonal target");
    }
    if (gf2::dot(x, b.n_odd) != 1) throw Error("ledger.not_in_component", "element is not in the theta0 component");
    return;
  }
  for (gf2::Vec m : b.factor_mask) {
    if (gf2::dot(x & m, b.n_odd)) throw Error("ledger.not_in_component", "element is not in the identity component");
  }
}

// An S_φ⁰-conjugacy class of elliptic elements: (+1, -1) eigenvalue
// multiplicities per block of the centralizer, in constituent order.
using EigenData = std::vector<std::pair<int, int>>;

struct BlockInfo {
  bool orth = false;
  bool symp = false;
  int factor = 0;
};

}  // namespace

std::uint64_t center_in_identity(const Parameter& phi) {
  const OrthBasis b = orth_basis(phi);
  const CenterModel z = center_model(b);
  std::uint64_t n = 0;
  for (std::size_t m = 0; m < z.order(); ++m) {
    if (z.component_of(m) == 0) ++n;
  }
  return n;
}

Rational sigma_sbar0(const Parameter& phi, std::uint64_t max_order) {
  Rational r = sigma(identity_shape(phi), max_order) * Rational(static_cast<unsigned long>(center_in_identity(phi)));
  r.canonicalize();
  return r;
}

Rational i_phi(const Parameter& phi, Theta theta, gf2::Vec x, std::uint64_t max_order) {
  const OrthBasis b = orth_basis(phi);
  require_component(phi, b, theta, x);
  return i_theta(component_shape(phi, x), max_order);
}

Rational e_prime_phi(const Parameter& phi, Theta theta, gf2::Vec x, std::uint64_t max_order) {
  const OrthBasis b = orth_basis(phi);
  require_component(phi, b, theta, x);
  const CenterModel z = center_model(b);

  std::vector<BlockInfo> blocks;
  for (const Constituent& c : phi.constituents) {
    // GL blocks keep a central torus in every centralizer, so no class of
    // the component is elliptic.
    if (c.simple.duality == Duality::Pair) return 0;
    blocks.push_back(BlockInfo{c.simple.duality == Duality::Orth, c.simple.duality == Duality::Symp, c.factor});
  }

  // Classes of S_φ⁰ in every S_φ-component over the component x of the
  // quotient, i.e. in C_{x + comp(z)} for z ∈ Z.
  std::set<gf2::Vec> comps;
  for (std::size_t m = 0; m < z.order(); ++m) comps.insert(x ^ z.component_of(m));
  std::set<EigenData> classes;
  for (gf2::Vec v : comps) {
    std::vector<std::vector<std::pair<int, int>>> options;
    int k = 0;
    for (std::size_t i = 0; i < phi.constituents.size(); ++i) {
      const int l = phi.constituents[i].mult;
      std::vector<std::pair<int, int>> opts;
      if (blocks[i].orth) {
        for (int bb = gf2::test(v, k) ? 1 : 0; bb <= l; bb += 2) opts.emplace_back(l - bb, bb);
        ++k;
      } else {
        for (int bb = 0; bb <= l; bb += 2) opts.emplace_back(l - bb, bb);
      }
      options.push_back(opts);
    }
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
      EigenData e;
      for (std::size_t i = 0; i < options.size(); ++i) e.push_back(options[i][idx[i]]);
      classes.insert(e);
      std::size_t i = 0;
      for (; i < options.size(); ++i) {
        if (++idx[i] < options[i].size()) break;
        idx[i] = 0;
      }
      if (i == options.size()) break;
    }
  }

  auto act = [&](std::size_t mask, EigenData e) {
    for (std::size_t j = 0; j < z.so_factors.size(); ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (static_cast<std::size_t>(blocks[i].factor) == z.so_factors[j]) std::swap(e[i].first, e[i].second);
      }
    }
    return e;
  };
  // z lies in Cent(s, S⁰)⁰ iff on every block it touches both eigenspaces
  // have even dimension (-1 on SO(odd) has determinant -1); Sp blocks always
  // contain -1.
  auto in_cent0 = [&](std::size_t mask, const EigenData& e) {
    if (z.component_of(mask) != 0) return false;
    for (std::size_t j = 0; j < z.so_factors.size(); ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (static_cast<std::size_t>(blocks[i].factor) != z.so_factors[j] || !blocks[i].orth) continue;
        if (e[i].first % 2 || e[i].second % 2) return false;
      }
    }
    return true;
  };

  EigenData identity;
  for (const Constituent& c : phi.constituents) identity.emplace_back(c.mult, 0);
  const bool drop_identity = theta == Theta::Id && classes.count(identity) != 0;
  std::set<EigenData> identity_orbit;
  if (drop_identity) {
    for (std::size_t m = 0; m < z.order(); ++m) identity_orbit.insert(act(m, identity));
  }

  const std::uint64_t s0_z = center_in_identity(phi);
  std::set<EigenData> done;
  Rational total = 0;
  for (const EigenData& e : classes) {
    if (done.count(e)) continue;
    std::uint64_t stab = 0;
    for (std::size_t m = 0; m < z.order(); ++m) {
      const EigenData ze = act(m, e);
      done.insert(ze);
      if (ze == e) ++stab;
    }
    if (identity_orbit.count(e)) continue;

    ReductiveShape cent;
    std::uint64_t pi0 = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto [a, bb] = e[i];
      if (blocks[i].orth) {
        cent.factors.push_back(ShapeFactor{FactorType::SO, a, false});
        cent.factors.push_back(ShapeFactor{FactorType::SO, bb, false});
        if (a >= 1 && bb >= 1) pi0 *= 2;
      } else {
        cent.factors.push_back(ShapeFactor{FactorType::Sp, a, false});
        cent.factors.push_back(ShapeFactor{FactorType::Sp, bb, false});
      }
    }
    cent = cent.canonical();
    // Only classes with a finite center of Cent(s, S⁰)⁰ contribute: σ of
    // the identity component vanishes otherwise.
    if (center_order(cent) == 0) continue;
    std::uint64_t cent0_z = 0;
    for (std::size_t m = 0; m < z.order(); ++m) {
      if (in_cent0(m, e)) ++cent0_z;
    }
    const Rational sigma_bar = sigma(cent, max_order) * Rational(static_cast<unsigned long>(cent0_z));
    Rational pi0_bar(static_cast<unsigned long>(stab * pi0 * cent0_z), static_cast<unsigned long>(s0_z));
    pi0_bar.canonicalize();
    total += sigma_bar / pi0_bar;
  }
  total.canonicalize();
  return total;
}

std::vector<LedgerRow> check_ledger(const Parameter& phi, Theta theta, std::optional<gf2::Vec> omega,
                                    std::uint64_t max_order) {
  validate(phi);
  const OrthBasis b = orth_basis(phi);
  std::vector<gf2::Vec> xs;
  if (theta == Theta::Id) {
    xs = component_group(phi, Variant::Sbar).elements();
  } else {
    xs = theta0_component(phi);
  }
  const Rational sig = sigma_sbar0(phi, max_order);
  std::vector<LedgerRow> rows;
  for (gf2::Vec x : xs) {
    const gf2::Vec w = alpha(phi, x);
    if (omega && *omega != w) continue;
    LedgerRow r;
    r.x = x;
    r.x_pair = pair_to_string(b, c_map(phi, x));
    r.omega = w;
    r.i_val = i_phi(phi, theta, x, max_order);
    r.e_val = e_prime_phi(phi, theta, x, max_order);
    const bool identity_row = theta == Theta::Id && x == 0;
    r.sigma_term = identity_row ? sig : Rational(0);
    r.balanced = r.i_val - r.e_val == r.sigma_term;
    if (!r.balanced) {
      throw Error("ledger.imbalance", "ledger identity fails at x=" + r.x_pair + ": i=" + to_string(r.i_val) +
                                          " e'=" + to_string(r.e_val) + " sigma term=" + to_string(r.sigma_term));
    }
    rows.push_back(r);
  }
  return rows;
}

Rational stable_multiplicity_coeff(const Parameter& phi, std::uint64_t max_order) {
  Rational r = c_tilde(phi) * sigma_sbar0(phi, max_order);
  r.canonicalize();
  return r;
}

std::uint64_t arthur_multiplicity(const Parameter& phi, gf2::Vec eps) {
  validate(phi);
  const ComponentGroup s = component_group(phi, Variant::Sbar);
  for (gf2::Vec r : s.relations().basis()) {
    if (gf2::dot(eps, r)) throw Error("ledger.bad_character", "character is not trivial on the center relation");
  }
  // m_φ |𝒮_φ|⁻¹ Σ_x ε(x), summed over the group.
  long long sum = 0;
  const std::vector<gf2::Vec> xs = s.elements();
  for (gf2::Vec x : xs) sum += gf2::dot(eps, x) ? -1 : 1;
  const long long total = static_cast<long long>(m_phi(phi)) * sum;
  if (total % static_cast<long long>(xs.size()) != 0) {
    throw Error("ledger.internal", "multiplicity is not an integer");
  }
  return static_cast<std::uint64_t>(total / static_cast<long long>(xs.size()));
}

std::uint64_t similitude_multiplicity(const Parameter& phi, const gf2::Subspace& y_pi, std::uint64_t sigma_y_order) {
  validate(phi);
  const gf2::Subspace image = alpha_image(phi, Variant::Sbar);
  if (!image.subset_of(y_pi)) throw Error("ledger.containment", "alpha(S_phi) is not contained in Y(pi)");
  const std::uint64_t m = static_cast<std::uint64_t>(m_phi(phi));
  if (sigma_y_order == 0 || m % sigma_y_order != 0) {
    throw Error("ledger.sigma_y", "|Sigma_Y| must divide m_phi");
  }
  return (m / sigma_y_order) * (y_pi.order() / image.order());
}

PacketStats packet_orbit_stats(const Parameter& phi) {
  validate(phi);
  PacketStats p;
  p.s_phi_order = component_group(phi, Variant::Sbar).order();
  p.orbit_count = component_group(phi, Variant::Stilde).order();
  p.orbit_size = p.s_phi_order / p.orbit_count;
  const CharClassGroup x = x_group(phi.target);
  p.x_pi_order = alpha_image(phi, Variant::Sbar).order() / x.modulus().order();
  return p;
}

namespace {

GroupSpec localize_group(const GlobalCharModel& model, const GroupSpec& g, int place) {
  const PlaceModel& pm = model.places()[static_cast<std::size_t>(place)];
  CharSpace cs{true, pm.id, pm.local_rank};
  if (g.is_product()) {
    std::vector<GroupSpec> fs;
    for (const GroupSpec& f : g.factors) fs.push_back(localize_group(model, f, place));
    return make_product(fs, g.similitude);
  }
  GroupSpec out = g;
  out.chars = cs;
  out.eta = g.family == Family::SOeven ? model.localize(g.eta, place) : 0;
  return out;
}

}  // namespace

Parameter localize_parameter(const GlobalCharModel& model, const Parameter& phi, const std::string& place,
                             const std::vector<LocalProfile>& profiles) {
  if (phi.target.chars.local) throw Error("ledger.profile", "parameter is already local");
  const int p = model.place_index(place);
  std::map<std::string, Constituent> merged;
  for (const Constituent& c : phi.constituents) {
    const LocalProfile* prof = nullptr;
    for (const LocalProfile& lp : profiles) {
      if (lp.place == place && lp.constituent == c.simple.label) prof = &lp;
    }
    std::vector<LocalPiece> pieces;
    if (prof) {
      pieces = prof->pieces;
    } else if (c.simple.duality == Duality::Orth && c.simple.dim == 1) {
      const gf2::Vec loc = model.localize(c.simple.central_char, p);
      pieces.push_back(LocalPiece{"<" + gf2::to_bits(loc, model.local_rank(p)) + ">", 1, Duality::Orth, loc, 1});
    } else {
      throw Error("ledger.profile", "place " + place + ": constituent " + c.simple.label + " has no localization");
    }
    const std::string where = "place " + place + ", constituent " + c.simple.label +
                              (prof && prof->line ? " (line " + std::to_string(prof->line) + ")" : "");
    int dim = 0;
    for (const LocalPiece& pc : pieces) {
      if (pc.mult < 1) throw Error("ledger.profile", where + ": piece multiplicity must be positive");
      dim += (pc.duality == Duality::Pair ? 2 : 1) * pc.dim * pc.mult;
    }
    const int want = (c.simple.duality == Duality::Pair ? 2 : 1) * c.simple.dim;
    if (dim != want) {
      throw Error("ledger.profile", where + ": pieces have total dimension " + std::to_string(dim) + ", expected " +
                                        std::to_string(want));
    }
    for (const LocalPiece& pc : pieces) {
      Constituent lc;
      lc.simple = SimpleParam{pc.label, pc.dim, pc.duality, pc.central_char};
      lc.mult = pc.mult * c.mult;
      lc.factor = c.factor;
      auto it = merged.find(pc.label);
      if (it == merged.end()) {
        merged.emplace(pc.label, lc);
      } else if (it->second.simple == lc.simple && it->second.factor == lc.factor) {
        it->second.mult += lc.mult;
      } else {
        throw Error("ledger.profile", where + ": piece " + pc.label + " conflicts with an earlier piece");
      }
    }
  }
  std::vector<Constituent> cs;
  for (auto& [label, c] : merged) cs.push_back(c);
  Parameter local = make_parameter(localize_group(model, phi.target, p), cs);
  try {
    validate(local);
  } catch (const Error& e) {
    throw Error("ledger.profile", "place " + place + ": localized parameter is invalid: " + e.what());
  }
  return local;
}

namespace {

// Returns (chain, local subgroups) for one variant.
GroupChain build_chain(const GlobalCharModel& model, const Parameter& phi, const std::vector<Parameter>& locals,
                       Variant variant, const std::set<std::string>& exceptions,
                       std::vector<gf2::Subspace>& local_out) {
  GroupChain ch;
  ch.global = alpha_image(phi, variant);
  local_out.clear();
  for (const Parameter& lp : locals) local_out.push_back(alpha_image(lp, variant));
  ch.product_all = aut_product_group(model, local_out, {});
  ch.product_almost = aut_product_group(model, local_out, exceptions);
  ch.chain_ok = ch.global.subset_of(ch.product_all) && ch.product_all.subset_of(ch.product_almost);
  ch.multiplicity_one = ch.global == ch.product_all;
  ch.strong_multiplicity_one = ch.product_all == ch.product_almost;
  for (gf2::Vec v : ch.product_all.basis()) {
    if (!ch.global.contains(v)) {
      ch.witness_multiplicity_one = v;
      break;
    }
  }
  for (gf2::Vec v : ch.product_almost.basis()) {
    if (!ch.product_all.contains(v)) {
      ch.witness_strong = v;
      break;
    }
  }
  return ch;
}

}  // namespace

MultiplicityOneReport multiplicity_one_checks(const GlobalCharModel& model, const Parameter& phi,
                                              const std::vector<LocalProfile>& profiles,
                                              const std::set<std::string>& exceptions) {
  validate(phi);
  if (phi.target.chars.dim != model.rank()) {
    throw Error("ledger.profile", "parameter characters do not match the global model");
  }
  for (const std::string& u : exceptions) model.place_index(u);
  MultiplicityOneReport r;
  std::vector<Parameter> locals;
  for (const PlaceModel& pm : model.places()) {
    r.places.push_back(pm.id);
    locals.push_back(localize_parameter(model, phi, pm.id, profiles));
  }
  r.plain = build_chain(model, phi, locals, Variant::Sbar, exceptions, r.local_plain);
  r.sigma0 = build_chain(model, phi, locals, Variant::SbarSigma0, exceptions, r.local_sigma0);
  if (!r.plain.chain_ok || !r.sigma0.chain_ok) {
    throw Error("ledger.chain", "the subgroup chain fails to be increasing");
  }
  return r;
}

namespace {

std::vector<int> place_offsets(const GlobalCharModel& model) {
  std::vector<int> off;
  int o = 0;
  for (const PlaceModel& p : model.places()) {
    off.push_back(o);
    o += p.local_rank;
  }
  return off;
}

}  // namespace

gf2::Subspace SmoInstance::bbar() const {
  const std::vector<int> off = place_offsets(*model);
  gf2::Subspace s;
  for (std::size_t v = 0; v < bbar_local.size(); ++v) {
    for (gf2::Vec b : bbar_local[v].basis()) s.insert(b << off[v]);
  }
  return s;
}

gf2::Subspace SmoInstance::a() const {
  const std::vector<int> off = place_offsets(*model);
  const int u_index = model->place_index(u);
  gf2::Subspace s;
  for (int bit = 0; bit < model->total_local_bits(); ++bit) {
    if (bit >= off[static_cast<std::size_t>(u_index)] && bit < off[static_cast<std::size_t>(u_index)] + model->local_rank(u_index)) {
      continue;
    }
    s.insert(gf2::unit(bit));
  }
  return s;
}

gf2::Subspace SmoInstance::b_f() const {
  gf2::Subspace s;
  for (gf2::Vec r : model->rows()) s.insert(r);
  return s;
}

gf2::Subspace SmoInstance::a_f() const { return a().intersect(b_f()); }

SmoInstance smo_instance_from_parameter(const GlobalCharModel& model, const Parameter& phi,
                                        const std::vector<LocalProfile>& profiles, const std::string& u) {
  validate(phi);
  model.place_index(u);
  SmoInstance inst;
  inst.model = &model;
  inst.u = u;
  for (std::size_t v = 0; v < model.places().size(); ++v) {
    const Parameter local = localize_parameter(model, phi, model.places()[v].id, profiles);
    const gf2::Subspace alpha_v = alpha_image(local, Variant::SbarSigma0);
    // Annihilator of α_v under the dot product on local coordinates.
    std::vector<gf2::Vec> images;
    const int width = model.local_rank(static_cast<int>(v));
    for (int j = 0; j < width; ++j) {
      gf2::Vec img = 0;
      int col = 0;
      for (gf2::Vec a : alpha_v.basis()) {
        if (gf2::test(a, j)) img |= gf2::unit(col);
        ++col;
      }
      images.push_back(img);
    }
    inst.bbar_local.push_back(gf2::Subspace(gf2::kernel(images)));
  }
  return inst;
}

SmoResult smo_at_place_criterion(const SmoInstance& inst) {
  if (!inst.model) throw Error("ledger.smo", "instance has no model");
  if (inst.bbar_local.size() != inst.model->places().size()) {
    throw Error("ledger.smo", "one local subgroup per place is required");
  }
  const gf2::Subspace bbar = inst.bbar();
  const gf2::Subspace a = inst.a();
  const gf2::Subspace bf = inst.b_f();
  const gf2::Subspace af = inst.a_f();
  if (!(af == a.intersect(bf))) throw Error("ledger.smo", "A_F differs from A ∩ B_F");

  SmoResult r;
  // Index form: A ∩ B̄B_F = A ∩ B̄A_F.
  r.index_criterion = a.intersect(bbar.sum(bf)) == a.intersect(bbar.sum(af));

  // Lifting form, by enumeration: every x ∈ B̄ that some z ∈ B_F moves into
  // A is moved into A by some y ∈ B̄ ∩ B_F.
  const std::vector<gf2::Vec> bf_elems = bf.elements();
  const std::vector<gf2::Vec> good = bbar.intersect(bf).elements();
  r.lifting_criterion = true;
  for (gf2::Vec x : bbar.elements()) {
    const bool moved = std::any_of(bf_elems.begin(), bf_elems.end(), [&](gf2::Vec z) { return a.contains(x ^ z); });
    if (!moved) continue;
    const bool ok = std::any_of(good.begin(), good.end(), [&](gf2::Vec y) { return a.contains(x ^ y); });
    if (!ok) {
      r.lifting_criterion = false;
      r.witness = x;
      break;
    }
  }
  if (r.index_criterion != r.lifting_criterion) {
    throw Error("ledger.smo_inconsistent", "the index and lifting criteria disagree");
  }
  r.holds = r.index_criterion;
  return r;
}

}  // namespace endo
