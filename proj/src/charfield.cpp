#include "endo/charfield.hpp"

#include <algorithm>

#include "endo/error.hpp"
#include "endo/params.hpp"

namespace endo {

PlaceModel make_place(const std::string& id, PlaceKind kind) {
  PlaceModel p;
  p.id = id;
  p.kind = kind;
  if (kind == PlaceKind::Real) {
    p.local_rank = 1;
    p.basis_labels = {"sign"};
  } else {
    p.local_rank = 2;
    p.basis_labels = {"unramified", "ramified"};
  }
  return p;
}

GlobalCharModel::GlobalCharModel(std::vector<PlaceModel> places, std::vector<gf2::Vec> rows,
                                 std::vector<std::string> generator_labels)
    : places_(std::move(places)), rows_(std::move(rows)), labels_(std::move(generator_labels)) {
  std::set<std::string> seen;
  for (const PlaceModel& p : places_) {
    const int expected = p.kind == PlaceKind::Real ? 1 : 2;
    if (p.local_rank != expected) {
      throw Error("model.local_rank", "place " + p.id + " has local rank " +
                                          std::to_string(p.local_rank) + ", expected " +
                                          std::to_string(expected));
    }
    if (!seen.insert(p.id).second) throw Error("model.duplicate_place", "duplicate place id " + p.id);
    offsets_.push_back(total_bits_);
    total_bits_ += p.local_rank;
  }
  if (total_bits_ > 64) throw Error("model.too_large", "more than 64 local coordinates");
  if (rows_.size() > 16) throw Error("model.too_large", "more than 16 generators");
  for (gf2::Vec r : rows_) {
    if (r & ~gf2::mask(total_bits_)) throw Error("model.row_width", "generator row wider than the place set");
  }
  if (gf2::rank(rows_) != static_cast<int>(rows_.size())) {
    throw Error("model.dependent_generators", "generator rows are not GF(2)-independent");
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < rows_.size(); ++i) labels_.push_back("g" + std::to_string(i + 1));
  }
  if (labels_.size() != rows_.size()) throw Error("model.labels", "one label per generator required");
}

int GlobalCharModel::place_index(const std::string& id) const {
  for (std::size_t i = 0; i < places_.size(); ++i) {
    if (places_[i].id == id) return static_cast<int>(i);
  }
  throw Error("charfield.unknown_place", "place not in model: " + id);
}

gf2::Vec GlobalCharModel::row_segment(int gen, int place) const {
  const auto p = static_cast<std::size_t>(place);
  return (rows_.at(static_cast<std::size_t>(gen)) >> offsets_.at(p)) & gf2::mask(places_[p].local_rank);
}

gf2::Vec GlobalCharModel::localize(gf2::Vec coords, int place) const {
  gf2::Vec out = 0;
  for (int g = 0; g < rank(); ++g) {
    if (gf2::test(coords, g)) out ^= row_segment(g, place);
  }
  return out;
}

LocalQuadChar GlobalCharModel::localize(const GlobalQuadChar& chi, const std::string& place) const {
  return LocalQuadChar{place, localize(chi.coords, place_index(place))};
}

gf2::Vec GlobalCharModel::adelic(gf2::Vec coords) const {
  gf2::Vec out = 0;
  for (int g = 0; g < rank(); ++g) {
    if (gf2::test(coords, g)) out ^= rows_[static_cast<std::size_t>(g)];
  }
  return out;
}

std::vector<gf2::Vec> GlobalCharModel::all_characters() const {
  std::vector<gf2::Vec> out;
  for (gf2::Vec c = 0; c < (gf2::Vec{1} << rank()); ++c) out.push_back(c);
  return out;
}

bool GlobalCharModel::surjective_at(int place) const {
  std::vector<gf2::Vec> segs;
  for (int g = 0; g < rank(); ++g) segs.push_back(row_segment(g, place));
  return gf2::rank(segs) == local_rank(place);
}

// Built-in models. Bit strings list local coordinates place by place:
// finite places (unramified, ramified), real places (sign).
//
//   three-place model, places p1 p2 p3 (finite) and inf (real)
//            p1  p2  p3  inf
//     g1     10  01  11  1
//     g2     01  11  10  0
//
//   four-place model, places p1 p2 p3 p4 (finite) and inf (real)
//            p1  p2  p3  p4  inf
//     g1     10  01  10  11  1
//     g2     01  10  00  01  1
//
// In the three-place model localization is bijective at every finite place.
// In the four-place model it is bijective at p1, p2, p4 and has rank one at p3.
namespace {

GlobalCharModel from_strings(const std::vector<PlaceModel>& places,
                             const std::vector<std::string>& rows) {
  std::vector<gf2::Vec> vs;
  for (const std::string& r : rows) vs.push_back(gf2::from_bits(r));
  return GlobalCharModel(places, vs);
}

}  // namespace

GlobalCharModel GlobalCharModel::builtin_three_place() {
  return from_strings({make_place("p1", PlaceKind::Finite), make_place("p2", PlaceKind::Finite),
                       make_place("p3", PlaceKind::Finite), make_place("inf", PlaceKind::Real)},
                      {"1001111", "0111100"});
}

GlobalCharModel GlobalCharModel::builtin_four_place() {
  return from_strings({make_place("p1", PlaceKind::Finite), make_place("p2", PlaceKind::Finite),
                       make_place("p3", PlaceKind::Finite), make_place("p4", PlaceKind::Finite),
                       make_place("inf", PlaceKind::Real)},
                      {"100110111", "011000011"});
}

CharClassGroup::CharClassGroup(int ambient_dim, gf2::Subspace modulus)
    : ambient_dim_(ambient_dim), modulus_(std::move(modulus)) {}

std::uint64_t CharClassGroup::order() const {
  return std::uint64_t{1} << (ambient_dim_ - modulus_.dim());
}

std::vector<gf2::Vec> CharClassGroup::elements() const {
  std::vector<gf2::Vec> out;
  for (gf2::Vec c = 0; c < (gf2::Vec{1} << ambient_dim_); ++c) {
    if (canonical(c) == c) out.push_back(c);
  }
  return out;
}

gf2::Subspace CharClassGroup::preimage(const std::vector<gf2::Vec>& generators) const {
  gf2::Subspace out = modulus_;
  for (gf2::Vec g : generators) out.insert(g);
  return out;
}

CharClassGroup x_group(const GroupSpec& g) {
  gf2::Subspace modulus;
  for (const GroupSpec& f : g.simple_factors()) {
    if (f.family == Family::SOeven) modulus.insert(f.eta);
  }
  return CharClassGroup(g.chars.dim, modulus);
}

gf2::Subspace aut_product_group(const GlobalCharModel& model,
                                const std::vector<gf2::Subspace>& local_subgroups,
                                const std::set<std::string>& exceptions) {
  if (local_subgroups.size() != model.places().size()) {
    throw Error("charfield.subgroups", "one local subgroup per place is required");
  }
  // Stack the maps c -> reduce_{W_v}(localize(c, v)) for v outside U and take
  // the common kernel. Each reduction is linear because W_v is kept reduced.
  std::vector<gf2::Vec> images(static_cast<std::size_t>(model.rank()), 0);
  int shift = 0;
  for (std::size_t v = 0; v < model.places().size(); ++v) {
    const int width = model.local_rank(static_cast<int>(v));
    if (exceptions.count(model.places()[v].id) == 0) {
      for (int g = 0; g < model.rank(); ++g) {
        const gf2::Vec local = local_subgroups[v].reduce(model.row_segment(g, static_cast<int>(v)));
        images[static_cast<std::size_t>(g)] |= local << shift;
      }
    }
    shift += width;
  }
  return gf2::Subspace(gf2::kernel(images));
}

}  // namespace endo
