#pragma once

// Component groups of centralizers of parameters and their partition model.
//
// Elements live in V = GF(2)^{I_O}: bit k is the component choice (det = -1)
// in the O(l_k) factor of the k-th orthogonal constituent, in canonical order.
// Each variant is a quotient P / R of a subspace P of V by a relation
// subspace R. Canonical representatives come from reduced echelon reduction
// by R, which clears the bit of the first odd-multiplicity label of every
// factor.

#include <optional>
#include <string>
#include <vector>

#include "endo/charfield.hpp"
#include "endo/gf2.hpp"
#include "endo/params.hpp"

namespace endo {

// Coordinates of V attached to a parameter.
struct OrthBasis {
  std::vector<int> constituent;  // index into phi.constituents
  std::vector<std::string> labels;
  std::vector<int> dims;
  std::vector<int> mults;
  std::vector<int> factor;
  std::vector<gf2::Vec> etas;
  int size = 0;
  gf2::Vec n_odd = 0;                 // bit k iff N_k odd
  gf2::Vec l_odd = 0;                 // bit k iff l_k odd
  std::vector<gf2::Vec> factor_mask;  // per simple factor of the target
  std::vector<bool> factor_is_so;

  gf2::Vec all() const { return gf2::mask(size); }
  // Indicator of I_O_odd inside factor f.
  gf2::Vec odd_in(std::size_t f) const { return l_odd & factor_mask[f]; }
};

OrthBasis orth_basis(const Parameter& phi);

enum class CentKind { O, Sp, GL };

struct CentFactor {
  CentKind kind = CentKind::O;
  int size = 0;  // l_i
  int dim = 0;   // N_i
  std::string label;
};

struct CentralizerShape {
  std::vector<CentFactor> factors;
  bool plus_kernel = false;    // the determinant character cuts S_φ down
  bool center_order2 = false;  // Z(Ĝ)^Γ = {±1} is divided out
};

CentralizerShape centralizer_shape(const Parameter& phi);

enum class Variant { S, Sbar, SbarSigma0, Stilde };
std::string to_string(Variant v);

class ComponentGroup {
 public:
  ComponentGroup() = default;
  ComponentGroup(Variant variant, std::vector<std::string> labels, gf2::Subspace preimage,
                 gf2::Subspace relations);

  Variant variant() const { return variant_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const gf2::Subspace& preimage() const { return preimage_; }
  const gf2::Subspace& relations() const { return relations_; }
  std::uint64_t order() const;
  gf2::Vec canonical(gf2::Vec v) const { return relations_.reduce(v); }
  bool contains(gf2::Vec v) const { return preimage_.contains(v); }
  // Canonical representatives, sorted.
  std::vector<gf2::Vec> elements() const;

 private:
  Variant variant_ = Variant::S;
  std::vector<std::string> labels_;
  gf2::Subspace preimage_;
  gf2::Subspace relations_;
};

ComponentGroup component_group(const Parameter& phi, Variant variant);

// The θ₀-component of the Σ₀ group of a special even orthogonal target:
// representatives v with odd Σ_{v_k=1} N_k, modulo the center relation.
std::vector<gf2::Vec> theta0_component(const Parameter& phi);

struct PartitionPair {
  gf2::Vec S = 0;  // subset of I_O_odd, as bits of V
  gf2::Vec T = 0;  // subset of I_O_even
  gf2::Vec vec() const { return S | T; }
  bool operator==(const PartitionPair&) const = default;
  auto operator<=>(const PartitionPair&) const = default;
};

struct PartitionGroup {
  bool sigma0 = false;
  std::vector<PartitionPair> classes;  // canonical pairs, sorted
  std::size_t size() const { return classes.size(); }
};

// Canonical form of (S, T) under S ~ S^c, applied per factor.
PartitionPair canonical_pair(const OrthBasis& b, PartitionPair p);
PartitionGroup p_phi(const Parameter& phi, bool sigma0);
PartitionPair c_map(const Parameter& phi, gf2::Vec x);
std::string pair_to_string(const OrthBasis& b, const PartitionPair& p);

// α(x) as the canonical class in x_group(target), for any v in V.
gf2::Vec alpha(const Parameter& phi, gf2::Vec x);
gf2::Vec alpha_p(const Parameter& phi, const PartitionPair& p);
// Preimage in the character space of α applied to a variant, including the
// modulus of X.
gf2::Subspace alpha_image(const Parameter& phi, Variant variant);

struct StildeReport {
  ComponentGroup group;
  std::vector<gf2::Vec> kernel_linear;       // canonical reps of ker α
  std::vector<PartitionPair> p_tilde;        // combinatorial 𝒫_φ̃
  std::vector<gf2::Vec> p_tilde_as_vectors;  // the same classes pulled back through c
  bool exact = false;
};

StildeReport s_tilde(const Parameter& phi);

struct TrivialityTest {
  bool trivial = true;
  std::optional<PartitionPair> witness;
};

TrivialityTest stilde_is_trivial_test(const Parameter& phi);

struct InductionReport {
  bool ok = false;
  std::string condition;  // which hypothesis of the statement applies
  std::string detail;
  std::uint64_t stilde_I = 0;
  std::uint64_t stilde_II = 0;
};

// Throws Error("compgroup.precondition", ...) when the hypotheses fail.
InductionReport consistency_on_induction_check(const Parameter& phi, Theta theta, const PartitionPair& split);

// Brute-force search for s in the θ-component of S_φ whose centralizer in
// S_φ⁰ is finite.
bool has_finite_centralizer(const Parameter& phi, Theta theta);

}  // namespace endo
