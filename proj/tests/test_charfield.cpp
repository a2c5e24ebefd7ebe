#include <doctest.h>

#include <random>

#include "endo/charfield.hpp"
#include "endo/error.hpp"
#include "endo/params.hpp"

using namespace endo;
using gf2::Vec;

namespace {

std::vector<gf2::Subspace> random_local_subgroups(const GlobalCharModel& m, std::mt19937_64& rng) {
  std::vector<gf2::Subspace> out;
  for (std::size_t v = 0; v < m.places().size(); ++v) {
    const Vec width = gf2::mask(m.local_rank(static_cast<int>(v)));
    out.emplace_back(std::vector<Vec>{rng() & width, (rng() % 3 == 0) ? (rng() & width) : 0});
  }
  return out;
}

// {ω : localize(ω, v) ∈ W_v for v ∉ U} by enumerating every character.
std::set<Vec> brute_aut(const GlobalCharModel& m, const std::vector<gf2::Subspace>& w, const std::set<std::string>& u) {
  std::set<Vec> out;
  for (Vec c : m.all_characters()) {
    bool ok = true;
    for (std::size_t v = 0; v < m.places().size(); ++v) {
      if (u.count(m.places()[v].id)) continue;
      ok = ok && w[v].contains(m.localize(c, static_cast<int>(v)));
    }
    if (ok) out.insert(c);
  }
  return out;
}

std::set<Vec> as_set(const gf2::Subspace& s) {
  const std::vector<Vec> e = s.elements();
  return {e.begin(), e.end()};
}

}  // namespace

TEST_SUITE("charfield") {
  TEST_CASE("places carry the local rank of their kind") {
    CHECK(make_place("p", PlaceKind::Finite).local_rank == 2);
    CHECK(make_place("p", PlaceKind::Finite).basis_labels == std::vector<std::string>{"unramified", "ramified"});
    CHECK(make_place("r", PlaceKind::Real).local_rank == 1);
    CHECK(make_place("r", PlaceKind::Real).basis_labels == std::vector<std::string>{"sign"});
  }

  TEST_CASE("model construction rejects bad input") {
    const std::vector<PlaceModel> ps{make_place("a", PlaceKind::Finite), make_place("b", PlaceKind::Real)};
    CHECK_THROWS_AS(GlobalCharModel(ps, {0b101, 0b101}), Error);
    CHECK_THROWS_AS(GlobalCharModel(ps, {0b1000}), Error);
    CHECK_THROWS_AS(GlobalCharModel({ps[0], ps[0]}, {}), Error);
    const GlobalCharModel m(ps, {0b101});
    CHECK(m.generator_labels() == std::vector<std::string>{"g1"});
    CHECK_THROWS_WITH_AS(m.place_index("zz"), "place not in model: zz", Error);
  }

  TEST_CASE("localization of the trivial character is trivial") {
    const GlobalCharModel m = GlobalCharModel::builtin_three_place();
    for (std::size_t v = 0; v < m.places().size(); ++v) CHECK(m.localize(0, static_cast<int>(v)) == 0);
  }

  TEST_CASE("generator g1 localizes to its stored row segment at p1") {
    const GlobalCharModel m = GlobalCharModel::builtin_three_place();
    CHECK(m.localize(0b01, m.place_index("p1")) == gf2::from_bits("10"));
    const LocalQuadChar l = m.localize(GlobalQuadChar{&m, 0b01}, "p1");
    CHECK(l == LocalQuadChar{"p1", gf2::from_bits("10")});
  }

  TEST_CASE("g1 + g2 at p2 is the sum of the two stored segments") {
    const GlobalCharModel m = GlobalCharModel::builtin_three_place();
    // Segments at p2: g1 = 01, g2 = 11.
    CHECK(m.localize(0b11, m.place_index("p2")) == (gf2::from_bits("01") ^ gf2::from_bits("11")));
  }

  TEST_CASE("localization is linear in the character") {
    for (const GlobalCharModel& m : {GlobalCharModel::builtin_three_place(), GlobalCharModel::builtin_four_place()}) {
      for (Vec a : m.all_characters()) {
        for (Vec b : m.all_characters()) {
          for (std::size_t v = 0; v < m.places().size(); ++v) {
            const int p = static_cast<int>(v);
            CHECK(m.localize(a ^ b, p) == (m.localize(a, p) ^ m.localize(b, p)));
          }
          CHECK(m.adelic(a ^ b) == (m.adelic(a) ^ m.adelic(b)));
        }
      }
    }
  }

  TEST_CASE("surjectivity of the built-in models") {
    const GlobalCharModel three = GlobalCharModel::builtin_three_place();
    for (const char* p : {"p1", "p2", "p3"}) CHECK(three.surjective_at(three.place_index(p)));
    const GlobalCharModel four = GlobalCharModel::builtin_four_place();
    CHECK(four.surjective_at(four.place_index("p1")));
    CHECK(four.surjective_at(four.place_index("p2")));
    CHECK_FALSE(four.surjective_at(four.place_index("p3")));
    CHECK(four.surjective_at(four.place_index("p4")));
  }

  TEST_CASE("x_group of similitude groups at a finite place") {
    const CharSpace local{true, "p1", 2};
    CHECK(x_group(make_sp(2, local, true)).order() == 4);
    CHECK(x_group(make_so(2, 0b01, local, true)).order() == 2);
    CHECK(x_group(make_so(2, 0, local, true)).order() == 4);
  }

  TEST_CASE("class group arithmetic has exponent two") {
    const CharClassGroup x(3, gf2::Subspace({0b101}));
    CHECK(x.order() == 4);
    const std::vector<Vec> el = x.elements();
    CHECK(el.size() == 4);
    for (Vec a : el) {
      CHECK(x.canonical(a ^ a) == 0);
      CHECK(x.canonical(a ^ 0) == a);
      for (Vec b : el) {
        CHECK(x.canonical(a ^ b) == x.canonical(b ^ a));
        for (Vec c : el) CHECK(x.canonical(x.canonical(a ^ b) ^ c) == x.canonical(a ^ x.canonical(b ^ c)));
      }
    }
    CHECK(x.same(0b101, 0));
    CHECK(x.preimage({0b010}).order() == 4);
  }

  TEST_CASE("aut product with full local groups is everything") {
    const GlobalCharModel m = GlobalCharModel::builtin_three_place();
    std::vector<gf2::Subspace> full;
    for (std::size_t v = 0; v < m.places().size(); ++v) {
      full.emplace_back(std::vector<Vec>{gf2::mask(m.local_rank(static_cast<int>(v)))});
      full.back().insert(1);
    }
    CHECK(aut_product_group(m, full, {}).order() == 4);
  }

  TEST_CASE("aut product with trivial local groups is the localization kernel") {
    for (const GlobalCharModel& m : {GlobalCharModel::builtin_three_place(), GlobalCharModel::builtin_four_place()}) {
      const std::vector<gf2::Subspace> triv(m.places().size());
      CHECK(as_set(aut_product_group(m, triv, {})) == brute_aut(m, triv, {}));
      CHECK(aut_product_group(m, triv, {}).order() == 1);
    }
  }

  TEST_CASE("exception at the only unconstrained place changes nothing") {
    const GlobalCharModel m = GlobalCharModel::builtin_three_place();
    std::vector<gf2::Subspace> w(m.places().size());
    w[0] = gf2::Subspace({0b01, 0b10});
    CHECK(aut_product_group(m, w, {"p1"}) == aut_product_group(m, w, {}));
  }

  TEST_CASE("aut product agrees with enumeration and is monotone in U") {
    std::mt19937_64 rng(17);
    for (const GlobalCharModel& m : {GlobalCharModel::builtin_three_place(), GlobalCharModel::builtin_four_place()}) {
      for (int trial = 0; trial < 200; ++trial) {
        const std::vector<gf2::Subspace> w = random_local_subgroups(m, rng);
        std::set<std::string> u;
        std::set<std::string> bigger;
        for (const PlaceModel& p : m.places()) {
          if (rng() % 3 == 0) u.insert(p.id);
          if (u.count(p.id) || rng() % 2 == 0) bigger.insert(p.id);
        }
        const gf2::Subspace small = aut_product_group(m, w, u);
        CHECK(as_set(small) == brute_aut(m, w, u));
        CHECK(small.subset_of(aut_product_group(m, w, bigger)));
      }
    }
  }
}
