#pragma once

// Elliptic endoscopic data of Sp(2n), SO(2n, η) and their similitude lifts,
// the correspondence (φ, x) ↦ (G′, φ′), and Kottwitz coefficients.

#include <cstdint>
#include <string>
#include <vector>

#include "endo/gf2.hpp"
#include "endo/params.hpp"
#include "endo/rational.hpp"

namespace endo {

struct EndoDatum {
  GroupSpec ambient;
  Theta twist = Theta::Id;
  // Canonical class of the datum character in x_group(ambient); 0 unless the
  // ambient group is a similitude group.
  gf2::Vec omega = 0;
  GroupSpec comp_I;
  GroupSpec comp_II;
  // Discriminant data of the two components: (1, η) for Sp ambient,
  // (η₁, η₁η′) for SO(2n, η′), and the twisting pair (η, ηη′) for θ₀.
  gf2::Vec char_I = 0;
  gf2::Vec char_II = 0;
  bool similitude = false;

  // The endoscopic group as a product of the two components.
  GroupSpec group() const;
  std::string name() const;
  bool operator==(const EndoDatum&) const = default;
};

// Every isomorphism class of elliptic datum, in deterministic order. The
// universe lists the candidate characters (coordinates in the ambient space).
// Throws Error("endoscopy.theta0_sp") for θ₀ with a symplectic ambient.
std::vector<EndoDatum> enumerate_elliptic(const GroupSpec& g, Theta theta, const std::vector<gf2::Vec>& universe);

// Same datum list for the similitude lift of g.
EndoDatum lift_to_similitude(const EndoDatum& d);

struct EndoPair {
  EndoDatum datum;
  gf2::Vec rep = 0;  // representative of x actually used
  Parameter phi_I;   // parameter of datum.comp_I
  Parameter phi_II;  // parameter of datum.comp_II
  // The same parameter on the product group datum.group().
  Parameter phi_prime;
};

// x is any vector of GF(2)^{I_O} in the requested component; both members of
// a complementary pair give the same result. Throws
// Error("endoscopy.not_in_component") when x does not lie in the θ-component.
EndoPair endoscopic_pair(const Parameter& phi, gf2::Vec x, Theta theta);

struct CenterData {
  std::uint64_t z_gamma_order = 1;       // |π₀ Z(Ĝ)^Γ| for the ambient group
  std::uint64_t z_gamma_order_endo = 1;  // the same for the endoscopic group
  std::uint64_t zbar_order = 1;          // |Z̄(Ĝ′)^Γ|
  std::uint64_t kappa_order = 1;         // |π₀ κ_{G^θ}| and its index term
  std::uint64_t out_order = 1;           // |Out_G(G′)|
};

// Throws Error("endoscopy.unsupported") for components outside the table.
CenterData center_data(const EndoDatum& d);

// Four-factor formula with trivial Ker¹ terms.
Rational iota(const EndoDatum& d);
// Three-factor formula for similitude data with θ = id or θ₀; throws
// Error("endoscopy.unsupported") for classical ambient groups.
Rational iota_simplified(const EndoDatum& d);

}  // namespace endo
