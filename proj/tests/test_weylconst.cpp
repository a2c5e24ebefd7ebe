#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "endo/error.hpp"
#include "endo/weylconst.hpp"

using namespace endo;

namespace {

enum class RootType { A, C, D };

// Independent evaluation of i for one classical factor: enumerate signed
// permutations of k coordinates, count inverted positive roots directly and
// take det(w - 1) by exact rational elimination.
Rational det_exact(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// sign_parity: -1 any, 0 even number of sign changes, 1 odd number.
Rational reference_i(RootType type, int k, int sign_parity) {
  if (k == 0) return 1;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Rational sum = 0;
  long count = 0;
  do {
    const int sign_choices = type == RootType::A ? 1 : (1 << k);
    for (int sm = 0; sm < sign_choices; ++sm) {
      if (sign_parity >= 0 && __builtin_popcount(static_cast<unsigned>(sm)) % 2 != sign_parity) continue;
      ++count;
      auto image = [&](int i) {  // w(e_i) = s_i e_{perm(i)}
        return std::pair<int, int>{perm[static_cast<std::size_t>(i)], ((sm >> i) & 1) ? -1 : 1};
      };
      // A root a e_i + b e_j (i < j) or 2 e_i is negative when its leading
      // nonzero coefficient is negative.
      auto negative = [&](std::vector<int> v) {
        for (int x : v) {
          if (x != 0) return x < 0;
        }
        return false;
      };
      int inverted = 0;
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          for (int b : {-1, 1}) {
            if (type == RootType::A && b == 1) continue;
            std::vector<int> v(static_cast<std::size_t>(k), 0);
            const auto [pi, si] = image(i);
            const auto [pj, sj] = image(j);
            v[static_cast<std::size_t>(pi)] += si;
            v[static_cast<std::size_t>(pj)] += b * sj;
            inverted += negative(v);
          }
        }
        if (type == RootType::C) {
          std::vector<int> v(static_cast<std::size_t>(k), 0);
          const auto [pi, si] = image(i);
          v[static_cast<std::size_t>(pi)] = si;
          inverted += negative(v);
        }
      }
      std::vector<std::vector<Rational>> m(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k), 0));
      for (int i = 0; i < k; ++i) {
        const auto [pi, si] = image(i);
        m[static_cast<std::size_t>(pi)][static_cast<std::size_t>(i)] += si;
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -= 1;
      }
      const Rational d = det_exact(m);
      if (d == 0) continue;
      sum += Rational(inverted % 2 ? -1 : 1) / abs(d);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Inner and outer cosets both have the size of the identity component's group.
  return sum / Rational(count);
}

ReductiveShape shape(const std::string& s) { return ReductiveShape::parse(s); }

std::uint64_t factorial(int k) { return k <= 1 ? 1 : static_cast<std::uint64_t>(k) * factorial(k - 1); }

}  // namespace

TEST_SUITE("weylconst") {
  TEST_CASE("shape syntax round trips") {
    for (const char* s : {"Sp2*O4-", "GL3", "SO5", "T2*Sp4", "GLxGL2", "O3-"}) CHECK(shape(s).to_string() == s);
    CHECK(shape("1").factors.empty());
    CHECK(shape("").factors.empty());
    CHECK_THROWS_AS(shape("Sp3"), Error);
    CHECK_THROWS_AS(shape("XY2"), Error);
    CHECK_THROWS_AS(shape("O0-"), Error);
    CHECK(shape("SO4*Sp2").canonical() == shape("Sp2*SO4").canonical());
    CHECK(shape("Sp2*O4-").connected() == false);
    CHECK(shape("Sp2*SO4").connected());
    CHECK(shape("T2*GL3").torus_rank() == 5);
  }

  TEST_CASE("Weyl group sizes") {
    CHECK(weyl_enumerate(shape("Sp2")).size() == 2);
    CHECK(weyl_enumerate(shape("SO4")).size() == 4);
    CHECK(weyl_enumerate(shape("O4-")).size() == 4);
    CHECK(weyl_enumerate(shape("GL3")).size() == 6);
    for (int k = 1; k <= 5; ++k) {
      const std::uint64_t bc = (std::uint64_t{1} << k) * factorial(k);
      CHECK(weyl_order(shape("Sp" + std::to_string(2 * k))) == bc);
      CHECK(weyl_order(shape("SO" + std::to_string(2 * k + 1))) == bc);
      CHECK(weyl_order(shape("SO" + std::to_string(2 * k))) == bc / 2);
      CHECK(weyl_order(shape("GL" + std::to_string(k))) == factorial(k));
      CHECK(weyl_enumerate(shape("O" + std::to_string(2 * k) + "-")).size() == bc / 2);
    }
  }

  TEST_CASE("enumeration is duplicate free with the right sign parity") {
    for (const char* s : {"SO6", "O6-", "Sp6", "GL4", "SO4*O4-"}) {
      const std::vector<WeylElementRec> els = weyl_enumerate(shape(s));
      std::set<std::vector<int>> seen;
      int rank = 0;
      for (const ShapeFactor& f : shape(s).factors) rank += factor_rank(f);
      for (const WeylElementRec& w : els) {
        seen.insert(w.matrix);
        CHECK(w.rank == rank);
      }
      CHECK(seen.size() == els.size());
    }
    for (const WeylElementRec& w : weyl_enumerate(shape("SO6"))) {
      CHECK(std::count(w.factors[0].sign.begin(), w.factors[0].sign.end(), -1) % 2 == 0);
    }
    for (const WeylElementRec& w : weyl_enumerate(shape("O6-"))) {
      CHECK(std::count(w.factors[0].sign.begin(), w.factors[0].sign.end(), -1) % 2 == 1);
    }
  }

  TEST_CASE("size bound is enforced") {
    CHECK_THROWS_WITH_AS(weyl_enumerate(shape("Sp8"), 100), doctest::Contains("384"), Error);
  }

  TEST_CASE("det(w - 1) of the reflection of Sp(2)") {
    for (const WeylElementRec& w : weyl_enumerate(shape("Sp2"))) {
      const long long d = det_w_minus_1(w);
      CHECK((d == 0 || d == -2 || d == 2));
      if (w.factors[0].sign[0] == -1) CHECK(std::llabs(d) == 2);
    }
  }

  TEST_CASE("i on the basic shapes") {
    CHECK(i_theta(shape("1")) == 1);
    CHECK(i_theta(shape("GL1")) == 0);
    CHECK(i_theta(shape("Sp2")) == make_rational(-1, 4));
  }

  TEST_CASE("i agrees with the independent signed-permutation reference") {
    for (int k = 1; k <= 4; ++k) {
      const std::string ks = std::to_string(k);
      CHECK(i_theta(shape("Sp" + std::to_string(2 * k))) == reference_i(RootType::C, k, -1));
      CHECK(i_theta(shape("SO" + std::to_string(2 * k + 1))) == reference_i(RootType::C, k, -1));
      CHECK(i_theta(shape("O" + std::to_string(2 * k + 1) + "-")) == reference_i(RootType::C, k, -1));
      CHECK(i_theta(shape("SO" + std::to_string(2 * k))) == reference_i(RootType::D, k, 0));
      CHECK(i_theta(shape("O" + std::to_string(2 * k) + "-")) == reference_i(RootType::D, k, 1));
      CHECK(i_theta(shape("GL" + ks)) == reference_i(RootType::A, k, -1));
    }
  }

  TEST_CASE("pinned constants") {
    struct Row {
      const char* shape;
      long in, id;
      long sn, sd;
    };
    // Hand recursion for Sp2: i = -1/4, both classes central, e = 2 sigma.
    const Row rows[] = {{"1", 1, 1, 1, 1},         {"Sp2", -1, 4, -1, 8},     {"SO3", -1, 4, -1, 4},
                        {"SO4", 1, 16, 1, 32},     {"Sp4", 5, 32, 9, 128},    {"SO5", 5, 32, 9, 64},
                        {"SO6", -1, 16, -1, 32},   {"Sp2*Sp2", 1, 16, 1, 64}, {"SO8", 59, 1024, 117, 4096},
                        {"Sp6", -15, 128, -51, 1024}};
    for (const Row& r : rows) {
      CAPTURE(r.shape);
      CHECK(i_theta(shape(r.shape)) == make_rational(r.in, r.id));
      CHECK(e_theta(shape(r.shape)) == make_rational(r.in, r.id));
      CHECK(sigma(shape(r.shape)) == make_rational(r.sn, r.sd));
    }
    CHECK(i_theta(shape("O2-")) == make_rational(1, 2));
    CHECK(i_theta(shape("O6-")) == make_rational(11, 64));
    CHECK(e_theta(shape("O4-")) == make_rational(-1, 4));
  }

  TEST_CASE("elliptic classes") {
    const std::vector<EllipticClassRec> sp2 = elliptic_classes(shape("Sp2"));
    REQUIRE(sp2.size() == 2);
    for (const EllipticClassRec& c : sp2) {
      CHECK(c.central);
      CHECK(c.centralizer == shape("Sp2"));
    }
    CHECK(elliptic_classes(shape("GL2")).empty());
    std::set<std::pair<int, int>> o2;
    for (const char* s : {"O2", "O2-"}) {
      for (const EllipticClassRec& c : elliptic_classes(shape(s))) o2.insert(c.eigen[0]);
    }
    CHECK(o2 == std::set<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}});
    for (const EllipticClassRec& c : elliptic_classes(shape("O2-"))) CHECK(c.pi0_order == 2);
  }

  TEST_CASE("sigma vanishes exactly on infinite centers") {
    CHECK(sigma(shape("1")) == 1);
    for (const char* s : {"GL1", "GL2", "T1*Sp2", "SO2", "SO2*Sp2", "GL2*SO3"}) {
      CAPTURE(s);
      CHECK(center_order(shape(s)) == 0);
      CHECK(sigma(shape(s)) == 0);
    }
    CHECK(center_order(shape("Sp2")) == 2);
    CHECK(center_order(shape("SO3")) == 1);
    CHECK(center_order(shape("SO4")) == 2);
    CHECK_THROWS_AS(sigma(shape("O4-")), Error);
  }

  TEST_CASE("i vanishes with a central torus") {
    for (const char* s : {"GL2", "T1*Sp2", "SO2*SO3", "GL1*O4-"}) CHECK(i_theta(shape(s)) == 0);
  }

  TEST_CASE("multiplicativity over direct products") {
    const char* fs[] = {"Sp2", "SO3", "SO4", "O4-", "O3-", "Sp4", "O2-"};
    for (const char* a : fs) {
      for (const char* b : fs) {
        const ReductiveShape ab = shape(std::string(a) + "*" + b);
        CHECK(i_theta(ab) == i_theta(shape(a)) * i_theta(shape(b)));
        CHECK(e_theta(ab) == e_theta(shape(a)) * e_theta(shape(b)));
        if (ab.connected()) CHECK(sigma(ab) == sigma(shape(a)) * sigma(shape(b)));
      }
    }
  }

  TEST_CASE("central quotients rescale sigma by the order of the kernel") {
    // SO3 = Sp2/{±1}, SO4 = (Sp2 x Sp2)/{±1}, SO3 x SO3 = SO4/{±1}, SO5 = Sp4/{±1}.
    CHECK(sigma(shape("Sp2")) == sigma(shape("SO3")) / 2);
    CHECK(sigma(shape("Sp2*Sp2")) == sigma(shape("SO4")) / 2);
    CHECK(sigma(shape("SO4")) == sigma(shape("SO3*SO3")) / 2);
    CHECK(sigma(shape("Sp4")) == sigma(shape("SO5")) / 2);
  }

  TEST_CASE("sigma is consistent under concurrent callers") {
    const std::vector<std::string> shapes{"Sp6", "SO7", "SO8", "Sp4*SO4", "SO6*Sp2"};
    std::vector<Rational> serial;
    for (const std::string& s : shapes) serial.push_back(sigma(shape(s)));
    std::vector<std::vector<Rational>> results(4);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < results.size(); ++t) {
      threads.emplace_back([&, t] {
        for (const std::string& s : shapes) results[t].push_back(sigma(shape(s)));
      });
    }
    for (std::thread& th : threads) th.join();
    for (const std::vector<Rational>& r : results) CHECK(r == serial);
  }
}
