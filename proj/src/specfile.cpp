#include "endo/specfile.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "endo/error.hpp"

namespace endo {

const SpecParam& SpecModel::param(const std::string& label) const {
  for (const SpecParam& p : params) {
    if (p.label == label) return p;
  }
  throw Error("spec.unknown_label", "no [param] named " + label);
}

const SpecGroup& SpecModel::group(const std::string& label) const {
  for (const SpecGroup& g : groups) {
    if (g.label == label) return g;
  }
  throw Error("spec.unknown_label", "no [group] named " + label);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Record {
  std::string section;
  int line = 0;
  std::map<std::string, Entry> kv;
};

[[noreturn]] void fail(int line, const std::string& code, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

int parse_int(const Entry& e, const std::string& key) {
  const std::string& v = e.value;
  if (v.empty() || v.size() > 6 || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    fail(e.line, "spec.syntax", key + " must be a non-negative integer, got '" + v + "'");
  }
  return std::stoi(v);
}

class Parser {
 public:
  SpecModel run(const std::string& text) {
    std::vector<Record> records;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      const std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(lineno, "spec.syntax", "unterminated section header");
        records.push_back(Record{line.substr(1, line.size() - 2), lineno, {}});
        continue;
      }
      if (records.empty()) fail(lineno, "spec.syntax", "key=value line outside any section");
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(lineno, "spec.syntax", "expected key=value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) fail(lineno, "spec.syntax", "empty key");
      if (!records.back().kv.emplace(key, Entry{trim(line.substr(eq + 1)), lineno}).second) {
        fail(lineno, "spec.syntax", "key '" + key + "' given twice");
      }
    }
    for (const Record& r : records) {
      if (r.section == "place") {
        place(r);
      } else if (r.section == "globalchar") {
        globalchar(r);
      } else if (r.section == "group") {
        build_model(r.line);
        group(r);
      } else if (r.section == "simple") {
        build_model(r.line);
        simple(r);
      } else if (r.section == "param") {
        build_model(r.line);
        param(r);
      } else if (r.section == "profile") {
        build_model(r.line);
        profile(r);
      } else {
        fail(r.line, "spec.syntax", "unknown section [" + r.section + "]");
      }
    }
    build_model(lineno);
    return std::move(out_);
  }

 private:
  SpecModel out_;
  bool built_ = false;
  std::string builtin_;
  std::vector<PlaceModel> places_;
  std::vector<gf2::Vec> rows_;
  std::vector<std::string> row_labels_;
  std::set<std::string> group_labels_;
  std::set<std::string> param_labels_;

  static void allow(const Record& r, std::initializer_list<const char*> keys) {
    for (const auto& [k, e] : r.kv) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(e.line, "spec.syntax", "unknown key '" + k + "' in [" + r.section + "]");
      }
    }
  }

  static const Entry& need(const Record& r, const std::string& key) {
    auto it = r.kv.find(key);
    if (it == r.kv.end()) fail(r.line, "spec.syntax", "[" + r.section + "] needs " + key + "=");
    return it->second;
  }

  static const Entry* maybe(const Record& r, const std::string& key) {
    auto it = r.kv.find(key);
    return it == r.kv.end() ? nullptr : &it->second;
  }

  void place(const Record& r) {
    if (built_) fail(r.line, "spec.syntax", "[place] sections must come before groups and parameters");
    allow(r, {"builtin", "id", "kind"});
    if (const Entry* b = maybe(r, "builtin")) {
      if (r.kv.size() != 1) fail(r.line, "spec.syntax", "builtin= excludes other keys");
      if (b->value != "three" && b->value != "four") fail(b->line, "spec.syntax", "builtin must be three or four");
      if (!builtin_.empty() || !places_.empty()) fail(r.line, "spec.syntax", "builtin model mixed with other places");
      builtin_ = b->value;
      return;
    }
    if (!builtin_.empty()) fail(r.line, "spec.syntax", "builtin model mixed with other places");
    const Entry& id = need(r, "id");
    const Entry& kind = need(r, "kind");
    if (kind.value != "finite" && kind.value != "real") fail(kind.line, "spec.syntax", "kind must be finite or real");
    for (const PlaceModel& p : places_) {
      if (p.id == id.value) fail(id.line, "spec.duplicate", "duplicate place " + id.value);
    }
    places_.push_back(make_place(id.value, kind.value == "real" ? PlaceKind::Real : PlaceKind::Finite));
  }

  bool custom() const { return !places_.empty(); }

  int custom_bits() const {
    int n = 0;
    for (const PlaceModel& p : places_) n += p.local_rank;
    return n;
  }

  void add_char(const Entry& label, gf2::Vec coords) {
    for (const auto& [l, c] : out_.global_chars) {
      if (l == label.value) fail(label.line, "spec.duplicate", "duplicate global character " + label.value);
    }
    out_.global_chars.emplace_back(label.value, coords);
  }

  void globalchar(const Record& r) {
    allow(r, {"label", "row", "expr"});
    const Entry& label = need(r, "label");
    const Entry* row = maybe(r, "row");
    const Entry* expr = maybe(r, "expr");
    if ((row == nullptr) == (expr == nullptr)) fail(r.line, "spec.syntax", "[globalchar] needs exactly one of row=, expr=");
    if (expr) {
      if (custom() && !built_) {
        add_char(label, global_expr(*expr, static_cast<int>(rows_.size())));
      } else {
        build_model(r.line);
        add_char(label, global_expr(*expr, out_.model.rank()));
      }
      return;
    }
    gf2::Vec bits = 0;
    try {
      bits = gf2::from_bits(row->value);
    } catch (const std::invalid_argument&) {
      fail(row->line, "spec.syntax", "row must be a 0/1 string");
    }
    if (custom() && !built_) {
      if (static_cast<int>(row->value.size()) != custom_bits()) {
        fail(row->line, "spec.syntax", "row must have " + std::to_string(custom_bits()) + " bits");
      }
      rows_.push_back(bits);
      row_labels_.push_back(label.value);
      add_char(label, gf2::unit(static_cast<int>(rows_.size()) - 1));
      return;
    }
    build_model(r.line);
    if (static_cast<int>(row->value.size()) != out_.model.total_local_bits()) {
      fail(row->line, "spec.syntax", "row must have " + std::to_string(out_.model.total_local_bits()) + " bits");
    }
    for (gf2::Vec c : out_.model.all_characters()) {
      if (out_.model.adelic(c) == bits) {
        add_char(label, c);
        return;
      }
    }
    fail(row->line, "spec.not_global", "row " + row->value + " is not a global character of the model");
  }

  void build_model(int line) {
    if (built_) return;
    try {
      if (custom()) {
        out_.model = GlobalCharModel(places_, rows_, row_labels_);
        out_.model_name = "custom";
      } else {
        out_.model = builtin_ == "four" ? GlobalCharModel::builtin_four_place() : GlobalCharModel::builtin_three_place();
        out_.model_name = builtin_.empty() ? "three" : builtin_;
        std::vector<std::pair<std::string, gf2::Vec>> gens;
        for (int g = 0; g < out_.model.rank(); ++g) {
          gens.emplace_back(out_.model.generator_labels()[static_cast<std::size_t>(g)], gf2::unit(g));
        }
        out_.global_chars.insert(out_.global_chars.begin(), gens.begin(), gens.end());
      }
    } catch (const Error& e) {
      fail(line, e.code(), e.what());
    }
    built_ = true;
  }

  gf2::Vec lookup_global(const std::string& label, int line) const {
    for (const auto& [l, c] : out_.global_chars) {
      if (l == label) return c;
    }
    fail(line, "spec.unknown_label", "unknown global character '" + label + "'");
  }

  gf2::Vec global_expr(const Entry& e, int dim) const {
    return char_expr(e, CharSpace{false, "", dim});
  }

  // "1", "#bits" in the coordinates of the space, or a product of global
  // character labels (localized for a local space).
  gf2::Vec char_expr(const Entry& e, const CharSpace& space) const {
    const std::string& v = e.value;
    if (v == "1") return 0;
    if (!v.empty() && v[0] == '#') {
      gf2::Vec bits = 0;
      try {
        bits = gf2::from_bits(v.substr(1));
      } catch (const std::invalid_argument&) {
        fail(e.line, "spec.syntax", "bad bit string '" + v + "'");
      }
      if (static_cast<int>(v.size()) - 1 != space.dim) {
        fail(e.line, "spec.syntax", "bit string '" + v + "' needs " + std::to_string(space.dim) + " bits");
      }
      return bits;
    }
    gf2::Vec coords = 0;
    for (const std::string& part : split(v, '*')) {
      if (part.empty()) fail(e.line, "spec.syntax", "empty factor in '" + v + "'");
      coords ^= lookup_global(part, e.line);
    }
    if (!space.local) return coords;
    return out_.model.localize(coords, out_.model.place_index(space.place));
  }

  CharSpace scope(const Record& r) const {
    const Entry* s = maybe(r, "scope");
    if (!s || s->value == "global") return CharSpace{false, "", out_.model.rank()};
    if (s->value.rfind("local:", 0) == 0) {
      const std::string place = s->value.substr(6);
      int idx = 0;
      try {
        idx = out_.model.place_index(place);
      } catch (const Error& e) {
        fail(s->line, e.code(), e.what());
      }
      return CharSpace{true, place, out_.model.local_rank(idx)};
    }
    fail(s->line, "spec.syntax", "scope must be global or local:<place>");
  }

  bool flag(const Entry* e) const {
    if (!e) return false;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(e->line, "spec.syntax", "expected true or false");
  }

  void group(const Record& r) {
    allow(r, {"label", "family", "rank", "similitude", "eta", "scope", "factors"});
    const Entry& label = need(r, "label");
    if (!group_labels_.insert(label.value).second) fail(label.line, "spec.duplicate", "duplicate group " + label.value);
    const bool sim = flag(maybe(r, "similitude"));
    SpecGroup g{label.value, r.line, {}};
    if (const Entry* f = maybe(r, "factors")) {
      if (maybe(r, "family") || maybe(r, "rank") || maybe(r, "eta") || maybe(r, "scope")) {
        fail(r.line, "spec.syntax", "a product group takes only label, factors and similitude");
      }
      std::vector<GroupSpec> fs;
      for (const std::string& name : split(f->value, ',')) {
        const SpecGroup* found = nullptr;
        for (const SpecGroup& sg : out_.groups) {
          if (sg.label == name) found = &sg;
        }
        if (!found) fail(f->line, "spec.unknown_label", "unknown group '" + name + "'");
        fs.push_back(found->group);
      }
      try {
        g.group = make_product(fs, sim);
      } catch (const Error& e) {
        fail(f->line, e.code(), e.what());
      }
    } else {
      const Entry& family = need(r, "family");
      const int rank = parse_int(need(r, "rank"), "rank");
      const CharSpace cs = scope(r);
      if (family.value == "Sp") {
        if (maybe(r, "eta")) fail(need(r, "eta").line, "spec.syntax", "Sp groups take no eta");
        g.group = make_sp(rank, cs, sim);
      } else if (family.value == "SOeven") {
        const Entry* eta = maybe(r, "eta");
        g.group = make_so(rank, eta ? char_expr(*eta, cs) : 0, cs, sim);
      } else {
        fail(family.line, "spec.syntax", "family must be Sp or SOeven");
      }
    }
    out_.groups.push_back(g);
  }

  void simple(const Record& r) {
    allow(r, {"label", "dim", "type", "char", "scope"});
    const Entry& label = need(r, "label");
    if (out_.simples.count(label.value)) fail(label.line, "spec.duplicate", "duplicate simple parameter " + label.value);
    SimpleParam s;
    s.label = label.value;
    s.dim = parse_int(need(r, "dim"), "dim");
    const Entry& type = need(r, "type");
    if (type.value == "orth") {
      s.duality = Duality::Orth;
    } else if (type.value == "symp") {
      s.duality = Duality::Symp;
    } else if (type.value == "pair") {
      s.duality = Duality::Pair;
    } else {
      fail(type.line, "spec.syntax", "type must be orth, symp or pair");
    }
    const CharSpace cs = scope(r);
    if (const Entry* c = maybe(r, "char")) s.central_char = char_expr(*c, cs);
    out_.simples.emplace(s.label, s);
    out_.simple_scopes.emplace(s.label, cs);
  }

  void param(const Record& r) {
    allow(r, {"label", "group", "constituents"});
    const Entry& label = need(r, "label");
    if (!param_labels_.insert(label.value).second) fail(label.line, "spec.duplicate", "duplicate parameter " + label.value);
    const Entry& gname = need(r, "group");
    const SpecGroup* g = nullptr;
    for (const SpecGroup& sg : out_.groups) {
      if (sg.label == gname.value) g = &sg;
    }
    if (!g) fail(gname.line, "spec.unknown_label", "unknown group '" + gname.value + "'");
    const Entry& cons = need(r, "constituents");
    std::vector<Constituent> cs;
    for (const std::string& item : split(cons.value, ',')) {
      Constituent c;
      std::string name = item;
      const auto at = name.find('@');
      if (at != std::string::npos) {
        c.factor = parse_int(Entry{name.substr(at + 1), cons.line}, "factor");
        name = name.substr(0, at);
      }
      const auto colon = name.find(':');
      if (colon != std::string::npos) {
        c.mult = parse_int(Entry{name.substr(colon + 1), cons.line}, "multiplicity");
        name = name.substr(0, colon);
      }
      auto it = out_.simples.find(name);
      if (it == out_.simples.end()) fail(cons.line, "spec.unknown_label", "unknown simple parameter '" + name + "'");
      if (!(out_.simple_scopes.at(name) == g->group.chars)) {
        fail(cons.line, "params.char_space", "simple parameter " + name + " lives in a different character space");
      }
      c.simple = it->second;
      cs.push_back(c);
    }
    SpecParam p{label.value, gname.value, r.line, make_parameter(g->group, cs)};
    try {
      validate(p.phi);
    } catch (const Error& e) {
      fail(r.line, e.code(), "[param] " + label.value + ": " + e.what());
    }
    out_.params.push_back(p);
  }

  void profile(const Record& r) {
    allow(r, {"param", "place", "constituent", "pieces"});
    const Entry& pname = need(r, "param");
    const Entry& place = need(r, "place");
    const Entry& cname = need(r, "constituent");
    const Entry& pieces = need(r, "pieces");
    const SpecParam* p = nullptr;
    for (const SpecParam& sp : out_.params) {
      if (sp.label == pname.value) p = &sp;
    }
    if (!p) fail(pname.line, "spec.unknown_label", "unknown parameter '" + pname.value + "'");
    if (p->phi.target.chars.local) fail(pname.line, "spec.syntax", "profiles apply to global parameters only");
    try {
      out_.model.place_index(place.value);
    } catch (const Error& e) {
      fail(place.line, e.code(), e.what());
    }
    const bool known = std::any_of(p->phi.constituents.begin(), p->phi.constituents.end(),
                                   [&](const Constituent& c) { return c.simple.label == cname.value; });
    if (!known) fail(cname.line, "spec.unknown_label", "parameter has no constituent '" + cname.value + "'");
    for (const LocalProfile& lp : out_.profiles) {
      if (lp.place == place.value && lp.constituent == cname.value && lp.line) {
        fail(r.line, "spec.duplicate", "second profile for " + cname.value + " at " + place.value);
      }
    }
    LocalProfile lp;
    lp.place = place.value;
    lp.constituent = cname.value;
    lp.line = r.line;
    for (const std::string& item : split(pieces.value, ',')) {
      std::string name = item;
      int mult = 1;
      const auto colon = name.find(':');
      if (colon != std::string::npos) {
        mult = parse_int(Entry{name.substr(colon + 1), pieces.line}, "multiplicity");
        name = name.substr(0, colon);
      }
      auto it = out_.simples.find(name);
      if (it == out_.simples.end()) fail(pieces.line, "spec.unknown_label", "unknown simple parameter '" + name + "'");
      const CharSpace& cs = out_.simple_scopes.at(name);
      if (!cs.local || cs.place != place.value) {
        fail(pieces.line, "spec.syntax", "piece " + name + " must have scope local:" + place.value);
      }
      const SimpleParam& s = it->second;
      lp.pieces.push_back(LocalPiece{s.label, s.dim, s.duality, s.central_char, mult});
    }
    out_.profiles.push_back(lp);
  }
};

}  // namespace

SpecModel parse_spec(const std::string& text) { return Parser().run(text); }

SpecModel parse_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("spec.io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace endo
