#pragma once

// Coefficients of the stable multiplicity ledger, multiplicity formulas, and
// the (strong) multiplicity one checks for global parameters.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "endo/charfield.hpp"
#include "endo/compgroup.hpp"
#include "endo/params.hpp"
#include "endo/rational.hpp"
#include "endo/weylconst.hpp"

namespace endo {

Rational c_tilde(const Parameter& phi);

// Shape of the component C_v of the centralizer S_φ: O(l_k) blocks in the
// coset given by v_k, Sp(l_i) blocks, GL(l_j) blocks.
ReductiveShape component_shape(const Parameter& phi, gf2::Vec v);
// Identity component of S_φ as a connected shape.
ReductiveShape identity_shape(const Parameter& phi);
// |S_φ⁰ ∩ Z(Ĝ)^Γ|.
std::uint64_t center_in_identity(const Parameter& phi);
// σ of the identity component of the quotient by Z(Ĝ)^Γ.
Rational sigma_sbar0(const Parameter& phi, std::uint64_t max_order = kDefaultMaxWeylOrder);

// x is any vector of the θ-component; throws Error("ledger.not_in_component")
// otherwise.
Rational i_phi(const Parameter& phi, Theta theta, gf2::Vec x, std::uint64_t max_order = kDefaultMaxWeylOrder);
Rational e_prime_phi(const Parameter& phi, Theta theta, gf2::Vec x,
                     std::uint64_t max_order = kDefaultMaxWeylOrder);

struct LedgerRow {
  gf2::Vec x = 0;  // canonical representative
  std::string x_pair;
  gf2::Vec omega = 0;
  Rational i_val;
  Rational e_val;
  Rational sigma_term;
  bool balanced = false;
};

// Rows for every x of the θ-component (restricted to α(x) = ω when given),
// ordered by x. Throws Error("ledger.imbalance") naming the first row whose
// identity fails.
std::vector<LedgerRow> check_ledger(const Parameter& phi, Theta theta, std::optional<gf2::Vec> omega = std::nullopt,
                                    std::uint64_t max_order = kDefaultMaxWeylOrder);

Rational stable_multiplicity_coeff(const Parameter& phi, std::uint64_t max_order = kDefaultMaxWeylOrder);

// ε is the character x ↦ ⟨eps, x⟩ of the component group 𝒮_φ. Throws
// Error("ledger.bad_character") when it is not trivial on the relations.
std::uint64_t arthur_multiplicity(const Parameter& phi, gf2::Vec eps);

// y_pi is the preimage of Y(π̃) in the character space (it must contain the
// modulus). Throws Error("ledger.containment") or Error("ledger.sigma_y").
std::uint64_t similitude_multiplicity(const Parameter& phi, const gf2::Subspace& y_pi, std::uint64_t sigma_y_order);

struct PacketStats {
  std::uint64_t orbit_size = 1;
  std::uint64_t orbit_count = 1;
  std::uint64_t s_phi_order = 1;
  std::uint64_t x_pi_order = 1;  // |α(𝒮_φ)|, the size of each restriction
};

PacketStats packet_orbit_stats(const Parameter& phi);

struct LocalPiece {
  std::string label;
  int dim = 1;
  Duality duality = Duality::Orth;
  gf2::Vec central_char = 0;  // local coordinates
  int mult = 1;
};

// Localization of one global constituent at one place. Constituents of
// dimension one that are orthogonal localize automatically.
struct LocalProfile {
  std::string place;
  std::string constituent;
  std::vector<LocalPiece> pieces;
  int line = 0;  // source line for diagnostics, 0 when built in code
};

Parameter localize_parameter(const GlobalCharModel& model, const Parameter& phi, const std::string& place,
                             const std::vector<LocalProfile>& profiles);

struct GroupChain {
  gf2::Subspace global;          // α(𝒮_φ), preimage in global coordinates
  gf2::Subspace product_all;     // ∏^aut over every place
  gf2::Subspace product_almost;  // ∏^aut over places outside U
  bool chain_ok = false;
  bool multiplicity_one = false;
  bool strong_multiplicity_one = false;
  std::optional<gf2::Vec> witness_multiplicity_one;
  std::optional<gf2::Vec> witness_strong;
};

struct MultiplicityOneReport {
  GroupChain plain;
  GroupChain sigma0;
  std::vector<std::string> places;
  std::vector<gf2::Subspace> local_plain;
  std::vector<gf2::Subspace> local_sigma0;
};

MultiplicityOneReport multiplicity_one_checks(const GlobalCharModel& model, const Parameter& phi,
                                              const std::vector<LocalProfile>& profiles,
                                              const std::set<std::string>& exceptions);

// Toy model of the one-place criterion. Everything lives in the adelic
// coordinates of the model: B_F is the image of the global characters,
// A = {a : a_u = 0}, A_F = A ∩ B_F, and B̄ = ⊕_v B̄_v.
struct SmoInstance {
  const GlobalCharModel* model = nullptr;
  std::string u;
  std::vector<gf2::Subspace> bbar_local;  // indexed like model->places()

  gf2::Subspace bbar() const;
  gf2::Subspace a() const;
  gf2::Subspace b_f() const;
  gf2::Subspace a_f() const;
};

// B̄_v = α(𝒮^{Σ₀}_{φ_v})^⊥ under the dot product of local coordinates.
SmoInstance smo_instance_from_parameter(const GlobalCharModel& model, const Parameter& phi,
                                        const std::vector<LocalProfile>& profiles, const std::string& u);

struct SmoResult {
  bool holds = false;
  bool index_criterion = false;
  bool lifting_criterion = false;
  std::optional<gf2::Vec> witness;  // x ∈ B̄ without a good y
};

// Throws Error("ledger.smo_inconsistent") if the two criteria disagree.
SmoResult smo_at_place_criterion(const SmoInstance& inst);

}  // namespace endo
