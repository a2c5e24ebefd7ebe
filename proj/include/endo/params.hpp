#pragma once

// Formal self-dual parameters ⊞ l_i φ_i and the groups they map into.
//
// Characters (discriminants, central characters) are GF(2) coordinates in a
// character space: either the global characters of a model (coordinates over
// its generators) or the local group at one place.

#include <string>
#include <vector>

#include "endo/gf2.hpp"

namespace endo {

enum class Family { Sp, SOeven };
enum class Duality { Orth, Symp, Pair };
enum class Theta { Id, Theta0 };

std::string to_string(Family f);
std::string to_string(Duality d);
std::string to_string(Theta t);

struct CharSpace {
  bool local = false;
  std::string place;  // only for local spaces
  int dim = 0;
  bool operator==(const CharSpace&) const = default;
};

struct GroupSpec {
  Family family = Family::Sp;
  int rank = 0;
  bool similitude = false;
  gf2::Vec eta = 0;
  CharSpace chars;
  // Non-empty for product groups; the product carries the similitude flag and
  // the factors carry family, rank and discriminant.
  std::vector<GroupSpec> factors;

  bool is_product() const { return !factors.empty(); }
  std::vector<GroupSpec> simple_factors() const;
  // Dimension of the standard representation of the dual group.
  int dual_dim() const;
  std::string name() const;
  bool operator==(const GroupSpec&) const = default;
};

GroupSpec make_sp(int n, const CharSpace& chars, bool similitude = false);
GroupSpec make_so(int n, gf2::Vec eta, const CharSpace& chars, bool similitude = false);
GroupSpec make_product(std::vector<GroupSpec> factors, bool similitude = false);

struct SimpleParam {
  std::string label;
  int dim = 1;
  Duality duality = Duality::Orth;
  gf2::Vec central_char = 0;
  bool operator==(const SimpleParam&) const = default;
};

struct Constituent {
  SimpleParam simple;
  int mult = 1;
  int factor = 0;  // index into target.simple_factors()
  bool operator==(const Constituent&) const = default;
};

struct Parameter {
  GroupSpec target;
  std::vector<Constituent> constituents;  // kept in canonical order
};

// Sorts constituents by (factor, dim, duality, label).
Parameter make_parameter(GroupSpec target, std::vector<Constituent> constituents);

// Throws Error with codes params.dimension, params.odd_symplectic_multiplicity,
// params.determinant, params.odd_symplectic_dim, params.duplicate_label,
// params.bad_multiplicity, params.bad_factor, params.pair_char.
void validate(const Parameter& phi);

struct IndexPartition {
  std::vector<std::string> orth_odd;
  std::vector<std::string> orth_even;
  std::vector<std::string> symp;
  std::vector<std::string> pairs;
};

IndexPartition index_partition(const Parameter& phi);
bool is_discrete(const Parameter& phi);
bool is_elliptic(const Parameter& phi, Theta theta);
int m_phi(const Parameter& phi);

struct LeviShape {
  std::vector<int> gl;  // nonincreasing
  int n_minus = 0;
  bool operator==(const LeviShape&) const = default;
};

std::vector<LeviShape> enumerate_levi_shapes(int n);

struct LeviSupport {
  std::vector<int> gl_blocks;          // one GL(N_i) per peeled pair of copies
  std::vector<std::string> gl_labels;  // the constituent each block came from
  Parameter phi_minus;                 // discrete parameter on G₋
};

LeviSupport levi_support(const Parameter& phi);

// Twist of a simple parameter by a quadratic character.
SimpleParam twist(const SimpleParam& s, gf2::Vec chi);

}  // namespace endo
