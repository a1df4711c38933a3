#include <doctest.h>

#include <cmath>
#include <random>

#include "rip/energy.hpp"
#include "rip/oracle.hpp"
#include "rip/verify.hpp"

using namespace rip;

namespace {

JointStructure js(int n, int m, std::vector<Arc> r, std::vector<Arc> s, std::vector<Arc> e) {
  return JointStructure(Strand::wildcard(StrandId::R, n), Strand::wildcard(StrandId::S, m), std::move(r),
                        std::move(s), std::move(e));
}

std::vector<Loop> non_exterior(const JointStructure& j) {
  std::vector<Loop> out;
  for (auto& l : loops_of(j)) {
    if (l.kind != LoopKind::Exterior) out.push_back(l);
  }
  return out;
}

// Parameters that are multiples of 1/8, so every sum is exact.
EnergyModel dyadic(std::mt19937_64& g) {
  std::uniform_int_distribution<int> d(-16, 16);
  EnergyParams p;
  p.theta = 0;
  p.alpha1 = d(g) / 8.0;
  p.alpha2 = d(g) / 8.0;
  p.alpha3 = d(g) / 8.0;
  p.beta1 = d(g) / 8.0;
  p.beta2 = d(g) / 8.0;
  p.beta3 = d(g) / 8.0;
  p.sigma0 = d(g) / 8.0;
  p.sigma = 0.5;
  p.gamma = d(g) / 8.0;
  p.hybrid_pair = d(g) / 8.0;
  p.hairpin_const = d(g) / 8.0;
  p.hairpin_per_base = d(g) / 8.0;
  p.interior_const = d(g) / 8.0;
  p.interior_per_base = d(g) / 8.0;
  return EnergyModel(p);
}

}  // namespace

TEST_CASE("loop classification") {
  const auto hp = non_exterior(js(5, 0, {Arc::r(1, 5)}, {}, {}));
  REQUIRE(hp.size() == 1);
  CHECK(hp[0].kind == LoopKind::Hairpin);

  const auto hy = non_exterior(js(2, 2, {}, {}, {Arc::ext(1, 1), Arc::ext(2, 2)}));
  REQUIRE(hy.size() == 1);
  CHECK(hy[0].kind == LoopKind::Hybrid);
  CHECK(hy[0].members.size() == 2);

  const auto ks = non_exterior(js(10, 2, {Arc::r(1, 10)}, {}, {Arc::ext(3, 2)}));
  REQUIRE(ks.size() == 1);
  CHECK(ks[0].kind == LoopKind::Kissing);
}

TEST_CASE("structure energies") {
  EnergyParams p;
  p.theta = 0;
  p.alpha1 = 1.5;
  p.alpha2 = 0.25;
  p.alpha3 = 0.125;
  p.hairpin_const = 2;
  EnergyModel m(p);
  CHECK(structure_energy(JointStructure::empty(4, 4), m) == 0);
  CHECK(structure_energy(js(5, 0, {Arc::r(1, 5)}, {}, {}), m) == m.hairpin(StrandId::R, 1, 5));

  const auto multi = js(11, 0, {Arc::r(1, 11), Arc::r(3, 5), Arc::r(7, 9)}, {}, {});
  double expect = p.alpha1 + 3 * p.alpha2 + 3 * p.alpha3;
  expect += 2 * m.hairpin(StrandId::R, 3, 5);
  CHECK(structure_energy(multi, m) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("boltzmann weights") {
  CHECK(boltzmann(js(5, 0, {Arc::r(1, 5)}, {}, {}), EnergyModel::unit_weight()) == 1.0);
  EnergyParams p;
  p.hairpin_const = kDefaultKT;
  CHECK(boltzmann(js(5, 0, {Arc::r(1, 5)}, {}, {}), EnergyModel(p)) == doctest::Approx(0.367879441171442));
}

TEST_CASE("parameter files") {
  const auto m = EnergyModel::parse("# test\nkT = 1.5\ntheta = 1\nalpha1 = 2 # trailing\npair_policy = canonical\n");
  CHECK(m.params().kT == 1.5);
  CHECK(m.params().theta == 1);
  CHECK(m.params().alpha1 == 2);
  CHECK(m.params().pair_policy == PairPolicy::Canonical);
  CHECK_THROWS_AS(EnergyModel::parse("bogus = 1\n"), InputError);
  CHECK_THROWS_AS(EnergyModel::parse("alpha1 = x\n"), InputError);
  CHECK_THROWS_AS(EnergyModel::parse("sigma = 0\n"), InputError);
  CHECK_THROWS_AS(EnergyModel::parse("kT = -1\n"), InputError);
  CHECK_THROWS_AS(EnergyModel::load("/nonexistent/params.txt"), InputError);
}

TEST_CASE("additivity, boltzmann identity and tree walk agree on every structure") {
  std::mt19937_64 g(11);
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= 5; ++m) {
      const auto model = dyadic(g);
      EnumConfig cfg{n, m, model.config()};
      enumerate(cfg, Strand::wildcard(StrandId::R, n), Strand::wildcard(StrandId::S, m),
                [&](const JointStructure& j) {
                  double sum = 0;
                  for (const auto& l : loops_of(j)) sum += loop_energy(l, model);
                  const double e = structure_energy(j, model);
                  if (sum != e) FAIL("additivity: " << to_string(j));
                  if (tree_energy(decompose(j), model) != e) FAIL("tree walk: " << to_string(j));
                  if (boltzmann(j, model) != std::exp(-e / model.params().kT)) FAIL("weight: " << to_string(j));
                });
    }
  }
}

TEST_CASE("every vertex is an arc end or unpaired in exactly one loop") {
  EnumConfig cfg{5, 4, {0, PairPolicy::Any, true}};
  enumerate(cfg, Strand::wildcard(StrandId::R, 5), Strand::wildcard(StrandId::S, 4), [&](const JointStructure& j) {
    std::vector<int> r(6, 0), s(5, 0);
    for (const Arc& a : j.r_arcs()) r[a.a] += 1, r[a.b] += 1;
    for (const Arc& a : j.s_arcs()) s[a.a] += 1, s[a.b] += 1;
    for (const Arc& a : j.ext_arcs()) r[a.a] += 1, s[a.b] += 1;
    for (const auto& l : loops_of(j)) {
      if (l.kind == LoopKind::Hybrid) continue;
      auto& v = l.strand == StrandId::R ? r : s;
      for (int u : l.unpaired) v[u] += 1;
    }
    for (int i = 1; i <= 5; ++i) {
      if (r[i] != 1) FAIL("R vertex " << i << " in " << to_string(j));
    }
    for (int h = 1; h <= 4; ++h) {
      if (s[h] != 1) FAIL("S vertex " << h << " in " << to_string(j));
    }
  });
}

TEST_CASE("unit weights sum to the structure count") {
  EnumConfig cfg{4, 4, {1, PairPolicy::Any, true}};
  double z = 0;
  enumerate(cfg, Strand::wildcard(StrandId::R, 4), Strand::wildcard(StrandId::S, 4),
            [&](const JointStructure& j) { z += boltzmann(j, EnergyModel::unit_weight(1)); });
  CHECK(z == static_cast<double>(count(cfg)));
}
