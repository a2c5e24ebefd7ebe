#pragma once

// Reader for parameter specification files. The grammar is documented in
// README.md; every diagnostic names the offending line.

#include <map>
#include <string>
#include <vector>

#include "endo/charfield.hpp"
#include "endo/ledger.hpp"
#include "endo/params.hpp"

namespace endo {

struct SpecParam {
  std::string label;
  std::string group;
  int line = 0;
  Parameter phi;
};

struct SpecGroup {
  std::string label;
  int line = 0;
  GroupSpec group;
};

struct SpecModel {
  GlobalCharModel model;
  std::string model_name;  // "three", "four" or "custom"
  std::vector<std::pair<std::string, gf2::Vec>> global_chars;
  std::vector<SpecGroup> groups;
  std::map<std::string, SimpleParam> simples;
  std::map<std::string, CharSpace> simple_scopes;
  std::vector<SpecParam> params;
  std::vector<LocalProfile> profiles;

  const SpecParam& param(const std::string& label) const;
  const SpecGroup& group(const std::string& label) const;
};

// Errors keep the code of the underlying failure and prefix the message with
// "line N: ". Syntax problems use the code "spec.syntax".
SpecModel parse_spec(const std::string& text);
SpecModel parse_spec_file(const std::string& path);

}  // namespace endo
