#include <doctest.h>

#include <cmath>
#include <set>

#include "rip/oracle.hpp"

using namespace rip;

namespace {

std::uint64_t n_structures(int n, int m, int theta) { return count(EnumConfig{n, m, {theta, PairPolicy::Any, true}}); }

}  // namespace

TEST_CASE("small counts") {
  CHECK(n_structures(1, 0, 3) == 1);
  CHECK(n_structures(1, 1, 3) == 2);
  CHECK(n_structures(2, 1, 1) == 3);
  CHECK(n_structures(5, 0, 3) == 2);
  CHECK(n_structures(2, 1, 0) == 4);
  CHECK(n_structures(0, 0, 3) == 1);
}

TEST_CASE("the enumerated structures for n=2, m=1, theta=1") {
  std::set<std::vector<Arc>> seen;
  EnumConfig cfg{2, 1, {1, PairPolicy::Any, true}};
  enumerate(cfg, Strand::wildcard(StrandId::R, 2), Strand::wildcard(StrandId::S, 1),
            [&](const JointStructure& j) { seen.insert(j.ext_arcs()); });
  CHECK(seen == std::set<std::vector<Arc>>{{}, {Arc::ext(1, 1)}, {Arc::ext(2, 1)}});
}

TEST_CASE("no duplicates and every structure is valid") {
  EnumConfig cfg{5, 5, {1, PairPolicy::Any, true}};
  std::set<std::string> seen;
  std::uint64_t total = enumerate(cfg, Strand::wildcard(StrandId::R, 5), Strand::wildcard(StrandId::S, 5),
                                  [&](const JointStructure& j) {
                                    if (validate(j, cfg.fold)) FAIL("invalid " << to_string(j));
                                    seen.insert(to_string(j));
                                  });
  CHECK(seen.size() == total);
}

TEST_CASE("recursive enumeration matches the all-matchings generator") {
  for (int theta : {0, 1, 3}) {
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        EnumConfig cfg{n, m, {theta, PairPolicy::Any, true}};
        const Strand r = Strand::wildcard(StrandId::R, n), s = Strand::wildcard(StrandId::S, m);
        std::set<std::string> a, b;
        enumerate(cfg, r, s, [&](const JointStructure& j) { a.insert(to_string(j)); });
        enumerate_matchings(cfg, r, s, [&](const JointStructure& j) { b.insert(to_string(j)); });
        CHECK_MESSAGE(a == b, "n=" << n << " m=" << m << " theta=" << theta);
      }
    }
  }
}

TEST_CASE("partition function and pairing probabilities") {
  const Strand a(StrandId::R, "A"), u(StrandId::S, "U");
  CHECK(brute_partition(a, u, EnergyModel::unit_weight()) == 2.0);
  CHECK(brute_bpp(a, u, EnergyModel::unit_weight()).p_rs(1, 1) == 0.5);

  const Strand r5(StrandId::R, "GAAAC"), empty(StrandId::S, "");
  CHECK(brute_bpp(r5, empty, EnergyModel::unit_weight(3)).p_rr(1, 5) == 0.5);
  EnergyModel hp = EnergyModel::unit_weight(3);
  hp.hairpin_override = [](StrandId, int i, int j) { return i == 1 && j == 5 ? kDefaultKT : 0.0; };
  CHECK(brute_partition(r5, empty, hp) == doctest::Approx(1 + std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("oracle probabilities are normalized per vertex") {
  EnergyParams p;
  p.theta = 0;
  p.alpha1 = 0.3;
  p.beta2 = -0.4;
  p.sigma0 = 0.7;
  p.hairpin_const = -0.2;
  const Strand r(StrandId::R, "ACGUA"), s(StrandId::S, "GGUC");
  const auto b = brute_bpp(r, s, EnergyModel(p));
  for (int i = 1; i <= 5; ++i) {
    double sum = b.unpaired_r[static_cast<size_t>(i - 1)];
    for (int j = 1; j <= 5; ++j) sum += b.p_rr(i, j);
    for (int h = 1; h <= 4; ++h) sum += b.p_rs(i, h);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("the structure cap is enforced") {
  EnumConfig cfg{6, 6, {0, PairPolicy::Any, true}, 100};
  CHECK_THROWS_AS(count(cfg), ResourceError);
}
