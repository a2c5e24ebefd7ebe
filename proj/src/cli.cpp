#include "endo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "endo/compgroup.hpp"
#include "endo/endoscopy.hpp"
#include "endo/error.hpp"
#include "endo/ledger.hpp"
#include "endo/specfile.hpp"
#include "endo/weylconst.hpp"

namespace endo {

using json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct Options {
  std::string input;
  std::string format = "json";
  std::string exception_places;
  std::uint64_t max_weyl_order = kDefaultMaxWeylOrder;
  std::string theta = "id";
  std::string shape;
  std::string param;
  std::string group;
  std::string place;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string bits(gf2::Vec v, int n) { return n == 0 ? "" : gf2::to_bits(v, n); }

json subspace_json(const gf2::Subspace& s, int n) {
  json a = json::array();
  for (gf2::Vec v : s.elements()) a.push_back(bits(v, n));
  return a;
}

Theta parse_theta(const std::string& t) { return t == "theta0" ? Theta::Theta0 : Theta::Id; }

std::string read_input(const Options& o) {
  if (o.input.empty()) throw UsageError("--input is required for this command");
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw Error("spec.io", "cannot read " + o.input);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<const SpecParam*> selected_params(const SpecModel& m, const Options& o) {
  std::vector<const SpecParam*> out;
  if (!o.param.empty()) {
    out.push_back(&m.param(o.param));
  } else {
    for (const SpecParam& p : m.params) out.push_back(&p);
  }
  return out;
}

json constituents_json(const Parameter& phi) {
  json a = json::array();
  for (const Constituent& c : phi.constituents) {
    a.push_back(json{{"label", c.simple.label},
                     {"dim", c.simple.dim},
                     {"type", to_string(c.simple.duality)},
                     {"char", bits(c.simple.central_char, phi.target.chars.dim)},
                     {"mult", c.mult},
                     {"factor", c.factor}});
  }
  return a;
}

json analyze_param(const SpecParam& sp) {
  const Parameter& phi = sp.phi;
  const int d = phi.target.chars.dim;
  const OrthBasis b = orth_basis(phi);
  const bool simple_so = !phi.target.is_product() && phi.target.family == Family::SOeven;
  json r;
  r["label"] = sp.label;
  r["group"] = phi.target.name();
  r["constituents"] = constituents_json(phi);
  r["discrete"] = is_discrete(phi);
  r["elliptic"] = json{{"id", is_elliptic(phi, Theta::Id)},
                       {"theta0", simple_so ? json(is_elliptic(phi, Theta::Theta0)) : json(nullptr)}};
  r["m_phi"] = m_phi(phi);
  const ComponentGroup s = component_group(phi, Variant::S);
  const ComponentGroup sbar = component_group(phi, Variant::Sbar);
  const ComponentGroup sig = component_group(phi, Variant::SbarSigma0);
  const PartitionGroup p = p_phi(phi, false);
  const PartitionGroup ps = p_phi(phi, true);
  const StildeReport st = s_tilde(phi);
  r["orders"] = json{{"S", s.order()},
                     {"Sbar", sbar.order()},
                     {"SbarSigma0", sig.order()},
                     {"Stilde", st.group.order()},
                     {"P", p.size()},
                     {"PSigma0", ps.size()},
                     {"Ptilde", st.p_tilde.size()}};
  r["bijection"] = sbar.order() == p.size() && sig.order() == ps.size();
  r["exact_sequence"] = st.exact;
  json classes = json::array();
  for (gf2::Vec x : sbar.elements()) {
    classes.push_back(json{{"x", bits(x, b.size)},
                           {"pair", pair_to_string(b, c_map(phi, x))},
                           {"alpha", bits(alpha(phi, x), d)}});
  }
  r["classes"] = classes;
  r["alpha_image"] = subspace_json(alpha_image(phi, Variant::Sbar), d);
  const TrivialityTest tt = stilde_is_trivial_test(phi);
  r["stilde_trivial_test"] = json{{"trivial", tt.trivial},
                                  {"witness", tt.witness ? json(pair_to_string(b, *tt.witness)) : json(nullptr)}};
  r["c_tilde"] = to_string(c_tilde(phi));
  const PacketStats ps2 = packet_orbit_stats(phi);
  r["packet"] = json{{"orbit_size", ps2.orbit_size}, {"orbit_count", ps2.orbit_count}, {"x_pi_order", ps2.x_pi_order}};
  return r;
}

json cmd_analyze(const SpecModel& m, const Options& o) {
  json a = json::array();
  for (const SpecParam* p : selected_params(m, o)) a.push_back(analyze_param(*p));
  return json{{"params", a}};
}

json datum_json(const EndoDatum& d) {
  const int n = d.ambient.chars.dim;
  json j{{"name", d.name()},
         {"components", json::array({d.comp_I.name(), d.comp_II.name()})},
         {"chars", json::array({bits(d.char_I, n), bits(d.char_II, n)})},
         {"omega", d.similitude ? json(bits(d.omega, n)) : json(nullptr)},
         {"iota", to_string(iota(d))}};
  j["iota_simplified"] = d.similitude ? json(to_string(iota_simplified(d))) : json(nullptr);
  return j;
}

json cmd_endoscopy(const SpecModel& m, const Options& o) {
  const Theta theta = parse_theta(o.theta);
  json a = json::array();
  for (const SpecGroup& g : m.groups) {
    if (!o.group.empty() && g.label != o.group) continue;
    if (g.group.is_product()) continue;
    std::vector<gf2::Vec> universe;
    for (gf2::Vec c = 0; c < (gf2::Vec{1} << g.group.chars.dim); ++c) universe.push_back(c);
    json data = json::array();
    for (const EndoDatum& d : enumerate_elliptic(g.group, theta, universe)) data.push_back(datum_json(d));
    a.push_back(json{{"group", g.label}, {"name", g.group.name()}, {"theta", to_string(theta)}, {"data", data}});
  }
  if (!o.group.empty() && a.empty()) m.group(o.group);
  return json{{"groups", a}};
}

json cmd_constants(const Options& o) {
  if (o.shape.empty()) throw UsageError("--shape is required for constants");
  const ReductiveShape s = ReductiveShape::parse(o.shape);
  json r;
  r["shape"] = s.to_string();
  r["weyl_order"] = weyl_order(s);
  r["i"] = to_string(i_theta(s, o.max_weyl_order));
  r["e"] = to_string(e_theta(s, o.max_weyl_order));
  r["sigma"] = s.connected() ? json(to_string(sigma(s, o.max_weyl_order))) : json(nullptr);
  r["elliptic_classes"] = elliptic_classes(s).size();
  return r;
}

json cmd_ledger(const SpecModel& m, const Options& o) {
  const Theta theta = parse_theta(o.theta);
  json a = json::array();
  for (const SpecParam* sp : selected_params(m, o)) {
    const Parameter& phi = sp->phi;
    const int d = phi.target.chars.dim;
    const OrthBasis b = orth_basis(phi);
    json entry{{"label", sp->label}, {"theta", to_string(theta)}};
    const bool applicable = theta == Theta::Id || (!phi.target.is_product() && phi.target.family == Family::SOeven);
    if (!applicable) {
      if (!o.param.empty()) throw Error("params.theta0_sp", "theta0 needs a special even orthogonal target");
      entry["skipped"] = "theta0 needs a special even orthogonal target";
      a.push_back(entry);
      continue;
    }
    json rows = json::array();
    for (const LedgerRow& row : check_ledger(phi, theta, std::nullopt, o.max_weyl_order)) {
      rows.push_back(json{{"x", bits(row.x, b.size)},
                          {"pair", row.x_pair},
                          {"omega", bits(row.omega, d)},
                          {"i", to_string(row.i_val)},
                          {"e_prime", to_string(row.e_val)},
                          {"sigma_term", to_string(row.sigma_term)},
                          {"balanced", row.balanced}});
    }
    entry["sigma_sbar0"] = to_string(sigma_sbar0(phi, o.max_weyl_order));
    entry["stable_coefficient"] = to_string(stable_multiplicity_coeff(phi, o.max_weyl_order));
    entry["rows"] = rows;
    entry["summary"] = "OK";
    a.push_back(entry);
  }
  return json{{"params", a}};
}

std::set<std::string> parse_places(const std::string& list) {
  std::set<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

json chain_json(const GroupChain& c, int n) {
  return json{{"global", subspace_json(c.global, n)},
              {"product_all", subspace_json(c.product_all, n)},
              {"product_almost", subspace_json(c.product_almost, n)},
              {"chain_ok", c.chain_ok},
              {"multiplicity_one", c.multiplicity_one},
              {"strong_multiplicity_one", c.strong_multiplicity_one},
              {"witness_multiplicity_one",
               c.witness_multiplicity_one ? json(bits(*c.witness_multiplicity_one, n)) : json(nullptr)},
              {"witness_strong", c.witness_strong ? json(bits(*c.witness_strong, n)) : json(nullptr)}};
}

json cmd_multiplicity(const SpecModel& m, const Options& o) {
  const std::set<std::string> u = parse_places(o.exception_places);
  json a = json::array();
  for (const SpecParam* sp : selected_params(m, o)) {
    if (sp->phi.target.chars.local) continue;
    const MultiplicityOneReport r = multiplicity_one_checks(m.model, sp->phi, m.profiles, u);
    const int n = m.model.rank();
    json locals = json::array();
    for (std::size_t v = 0; v < r.places.size(); ++v) {
      const int w = m.model.local_rank(static_cast<int>(v));
      locals.push_back(json{{"place", r.places[v]},
                            {"plain", subspace_json(r.local_plain[v], w)},
                            {"sigma0", subspace_json(r.local_sigma0[v], w)}});
    }
    a.push_back(json{{"label", sp->label},
                     {"exceptions", json(std::vector<std::string>(u.begin(), u.end()))},
                     {"plain", chain_json(r.plain, n)},
                     {"sigma0", chain_json(r.sigma0, n)},
                     {"local", locals}});
  }
  return json{{"params", a}};
}

json cmd_smo(const SpecModel& m, const Options& o) {
  const std::string u = o.place.empty() ? m.model.places().front().id : o.place;
  json a = json::array();
  for (const SpecParam* sp : selected_params(m, o)) {
    if (sp->phi.target.chars.local) continue;
    const SmoInstance inst = smo_instance_from_parameter(m.model, sp->phi, m.profiles, u);
    const SmoResult r = smo_at_place_criterion(inst);
    const int n = m.model.total_local_bits();
    a.push_back(json{{"label", sp->label},
                     {"u", u},
                     {"bbar", subspace_json(inst.bbar(), n)},
                     {"holds", r.holds},
                     {"index_criterion", r.index_criterion},
                     {"lifting_criterion", r.lifting_criterion},
                     {"witness", r.witness ? json(bits(*r.witness, n)) : json(nullptr)}});
  }
  return json{{"params", a}};
}

void render_text(const json& j, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        out << pad << k << ":\n";
        render_text(v, indent + 2, out);
      } else {
        out << pad << k << ": " << (v.is_structured() ? v.dump() : scalar(v)) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const json& v : j) {
      if (v.is_structured() && !v.empty()) {
        out << pad << "-\n";
        render_text(v, indent + 2, out);
      } else {
        out << pad << "- " << (v.is_structured() ? v.dump() : scalar(v)) << "\n";
      }
    }
  } else {
    out << pad << scalar(j) << "\n";
  }
}

void add_options(CLI::App* sub, Options& o, bool needs_input) {
  auto* in = sub->add_option("--input", o.input, "parameter specification file");
  if (needs_input) in->check(CLI::ExistingFile);
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--max-weyl-order", o.max_weyl_order, "bound on Weyl group enumeration")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Component groups, endoscopic data and multiplicity coefficients"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;
  auto* analyze = app.add_subcommand("analyze", "component groups and partition model of each parameter");
  add_options(analyze, o, true);
  analyze->add_option("--param", o.param, "only this parameter");

  auto* endoscopy = app.add_subcommand("endoscopy", "elliptic endoscopic data and Kottwitz coefficients");
  add_options(endoscopy, o, true);
  endoscopy->add_option("--group", o.group, "only this group");
  endoscopy->add_option("--theta", o.theta, "twist")->check(CLI::IsMember({"id", "theta0"}));

  auto* constants = app.add_subcommand("constants", "Weyl-group constants i, e and sigma of a shape");
  add_options(constants, o, false);
  constants->add_option("--shape", o.shape, "shape such as Sp2*O3");

  auto* ledger = app.add_subcommand("ledger", "ledger rows i - e' for every component element");
  add_options(ledger, o, true);
  ledger->add_option("--param", o.param, "only this parameter");
  ledger->add_option("--theta", o.theta, "twist")->check(CLI::IsMember({"id", "theta0"}));

  auto* multiplicity = app.add_subcommand("multiplicity", "multiplicity one and strong multiplicity one checks");
  add_options(multiplicity, o, true);
  multiplicity->add_option("--param", o.param, "only this parameter");
  multiplicity->add_option("--exception-places", o.exception_places, "comma separated exception set U");

  auto* smo = app.add_subcommand("smo", "one-place strong multiplicity one criterion");
  add_options(smo, o, true);
  smo->add_option("--param", o.param, "only this parameter");
  smo->add_option("--place", o.place, "distinguished place u (default: first place)");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out;
    std::ostringstream o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    json result;
    std::string digest_source;
    if (command == "constants") {
      digest_source = o.shape;
      result = cmd_constants(o);
    } else {
      digest_source = read_input(o);
      const SpecModel m = parse_spec(digest_source);
      if (command == "analyze") {
        result = cmd_analyze(m, o);
      } else if (command == "endoscopy") {
        result = cmd_endoscopy(m, o);
      } else if (command == "ledger") {
        result = cmd_ledger(m, o);
      } else if (command == "multiplicity") {
        result = cmd_multiplicity(m, o);
      } else {
        result = cmd_smo(m, o);
      }
    }
    json env{{"command", command}, {"version", kVersion}, {"input_digest", fnv1a_hex(digest_source)},
             {"result", result}};
    if (o.format == "json") {
      out << env.dump(2) << "\n";
    } else {
      render_text(env, 0, out);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace endo
