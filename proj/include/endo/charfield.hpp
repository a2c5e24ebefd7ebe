#pragma once

// Finite model of local and global quadratic characters.
//
// A local group at a place is GF(2)^local_rank (real places: the sign
// character; finite places: unramified and ramified generators). A global
// model is a finite list of places together with independent generator rows
// living in the direct sum of the local groups; the span of the rows is the
// group of global quadratic characters. Global characters are addressed by
// their coordinates over the generator basis.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "endo/gf2.hpp"

namespace endo {

enum class PlaceKind { Real, Finite };

struct PlaceModel {
  std::string id;
  PlaceKind kind = PlaceKind::Finite;
  int local_rank = 2;
  std::vector<std::string> basis_labels;
};

PlaceModel make_place(const std::string& id, PlaceKind kind);

struct LocalQuadChar {
  std::string place;
  gf2::Vec coords = 0;
  bool operator==(const LocalQuadChar&) const = default;
};

class GlobalCharModel;

struct GlobalQuadChar {
  const GlobalCharModel* model = nullptr;
  gf2::Vec coords = 0;
};

class GlobalCharModel {
 public:
  GlobalCharModel() = default;
  // Rows are written in concatenated local coordinates, places in order, and
  // inside a place the basis labels in order.
  GlobalCharModel(std::vector<PlaceModel> places, std::vector<gf2::Vec> rows,
                  std::vector<std::string> generator_labels = {});

  const std::vector<PlaceModel>& places() const { return places_; }
  const std::vector<gf2::Vec>& rows() const { return rows_; }
  const std::vector<std::string>& generator_labels() const { return labels_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  int total_local_bits() const { return total_bits_; }
  int place_index(const std::string& id) const;
  int local_rank(int place) const { return places_.at(static_cast<std::size_t>(place)).local_rank; }

  // Segment of generator row `gen` at a place.
  gf2::Vec row_segment(int gen, int place) const;
  // Localization of a character given by generator coordinates.
  gf2::Vec localize(gf2::Vec coords, int place) const;
  LocalQuadChar localize(const GlobalQuadChar& chi, const std::string& place) const;
  // Full adelic image of a character in concatenated local coordinates.
  gf2::Vec adelic(gf2::Vec coords) const;

  // Every global character, as generator coordinates 0 .. 2^rank - 1.
  std::vector<gf2::Vec> all_characters() const;
  // True when every local character at the place is a localization.
  bool surjective_at(int place) const;

  static GlobalCharModel builtin_three_place();
  static GlobalCharModel builtin_four_place();

 private:
  std::vector<PlaceModel> places_;
  std::vector<gf2::Vec> rows_;
  std::vector<std::string> labels_;
  std::vector<int> offsets_;
  int total_bits_ = 0;
};

// Characters modulo a subgroup. Elements are named by the canonical coset
// representative obtained from reduced echelon reduction.
class CharClassGroup {
 public:
  CharClassGroup() = default;
  CharClassGroup(int ambient_dim, gf2::Subspace modulus);

  int ambient_dim() const { return ambient_dim_; }
  const gf2::Subspace& modulus() const { return modulus_; }
  gf2::Vec canonical(gf2::Vec chi) const { return modulus_.reduce(chi); }
  bool same(gf2::Vec a, gf2::Vec b) const { return modulus_.contains(a ^ b); }
  std::uint64_t order() const;
  std::vector<gf2::Vec> elements() const;
  // Preimage in the ambient group of the subgroup generated by the classes.
  gf2::Subspace preimage(const std::vector<gf2::Vec>& generators) const;

 private:
  int ambient_dim_ = 0;
  gf2::Subspace modulus_;
};

struct GroupSpec;

// The twisting character group X (or Y globally) of the similitude lift of g:
// all quadratic characters of g's character space modulo the span of the
// discriminant characters of its special even orthogonal factors.
CharClassGroup x_group(const GroupSpec& g);

// {ω : localize(ω, v) ∈ local_subgroups[v] for every place v not in U}.
// local_subgroups is indexed like model.places(); entries for places in U are
// ignored. The result is a subspace of generator coordinates.
gf2::Subspace aut_product_group(const GlobalCharModel& model,
                                const std::vector<gf2::Subspace>& local_subgroups,
                                const std::set<std::string>& exceptions);

}  // namespace endo
