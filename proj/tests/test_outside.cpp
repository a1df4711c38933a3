#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rip/oracle.hpp"
#include "rip/outside.hpp"
#include "rip/verify.hpp"

using namespace rip;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

void check_normalized(const BppMatrices& b, double tol) {
  for (int i = 1; i <= b.n; ++i) {
    double s = b.unpaired_r[static_cast<size_t>(i - 1)];
    for (int j = 1; j <= b.n; ++j) s += b.p_rr(i, j);
    for (int h = 1; h <= b.m; ++h) s += b.p_rs(i, h);
    CHECK(std::fabs(s - 1) <= tol);
  }
  for (int h = 1; h <= b.m; ++h) {
    double s = b.unpaired_s[static_cast<size_t>(h - 1)];
    for (int l = 1; l <= b.m; ++l) s += b.p_ss(h, l);
    for (int i = 1; i <= b.n; ++i) s += b.p_rs(i, h);
    CHECK(std::fabs(s - 1) <= tol);
  }
}

}  // namespace

TEST_CASE("single-strand pairing probabilities") {
  const Strand s(StrandId::R, "GAAAC");
  auto p = secondary_bpp(s, EnergyModel::unit_weight(3), mccaskill(s, EnergyModel::unit_weight(3)));
  CHECK(p[0 * 5 + 4] == doctest::Approx(0.5).epsilon(1e-15));

  EnergyModel hp = EnergyModel::unit_weight(3);
  hp.hairpin_override = [](StrandId, int i, int j) { return i == 1 && j == 5 ? kDefaultKT : 0.0; };
  p = secondary_bpp(s, hp, mccaskill(s, hp));
  CHECK(p[4] == doctest::Approx(std::exp(-1.0) / (1 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(p[0 * 5 + 3] == 0.0);
  CHECK(p[1 * 5 + 4] == 0.0);
}

TEST_CASE("single-strand probabilities match the oracle") {
  std::mt19937_64 g(21);
  for (int len = 1; len <= 9; ++len) {
    const auto m = random_model(g, 1);
    const Strand s(StrandId::R, random_bases(g, len));
    const auto b = brute_bpp(s, Strand(StrandId::S, ""), m);
    CHECK(max_diff(secondary_bpp(s, m, mccaskill(s, m)), b.rr) < 1e-12);
  }
}

TEST_CASE("joint probabilities on one bond") {
  const auto b = joint_bpp(Strand(StrandId::R, "A"), Strand(StrandId::S, "U"), EnergyModel::unit_weight());
  CHECK(b.p_rs(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.unpaired_r[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("joint probabilities match the oracle") {
  std::mt19937_64 g(17);
  for (int theta : {0, 1}) {
    for (int n = 0; n <= 5; ++n) {
      for (int m = 0; m <= 5; ++m) {
        const auto model = random_model(g, theta);
        const Strand r(StrandId::R, random_bases(g, n)), s(StrandId::S, random_bases(g, m));
        const auto dp = joint_bpp(r, s, model);
        const auto bf = brute_bpp(r, s, model);
        CHECK(max_diff(dp.rr, bf.rr) < 1e-9);
        CHECK(max_diff(dp.ss, bf.ss) < 1e-9);
        CHECK(max_diff(dp.rs, bf.rs) < 1e-9);
        CHECK(max_diff(dp.unpaired_r, bf.unpaired_r) < 1e-9);
        CHECK(max_diff(dp.unpaired_s, bf.unpaired_s) < 1e-9);
      }
    }
  }
}

TEST_CASE("without R-S bonds the joint matrices reduce to single strands") {
  std::mt19937_64 g(8);
  auto m = random_model(g, 1);
  m.params().intermolecular = false;
  const Strand r(StrandId::R, random_bases(g, 10)), s(StrandId::S, random_bases(g, 9));
  const auto b = joint_bpp(r, s, m);
  CHECK(*std::max_element(b.rs.begin(), b.rs.end()) == 0.0);
  CHECK(max_diff(b.rr, secondary_bpp(r, m, mccaskill(r, m))) < 1e-12);
  CHECK(max_diff(b.ss, secondary_bpp(s, m, mccaskill(s, m))) < 1e-12);
}

TEST_CASE("normalization and bounds on larger folds") {
  std::mt19937_64 g(4);
  for (int k = 0; k < 3; ++k) {
    const auto m = random_model(g, 3);
    const auto b = joint_bpp(Strand(StrandId::R, random_bases(g, 12)), Strand(StrandId::S, random_bases(g, 11)), m);
    check_normalized(b, 1e-9);
    for (const auto* v : {&b.rr, &b.ss, &b.rs}) {
      for (double x : *v) CHECK((x >= -1e-12 && x <= 1 + 1e-9));
    }
  }
}

TEST_CASE("mirror-symmetric inputs give mirror-equal matrices") {
  EnergyParams p;
  p.theta = 1;
  p.alpha2 = 0.3;
  p.beta1 = -0.4;
  p.sigma0 = 0.2;
  p.hairpin_const = 0.5;
  const EnergyModel m(p);
  const std::string seq = "GCAUGC";
  const auto b = joint_bpp(Strand(StrandId::R, seq), Strand(StrandId::S, seq), m);
  for (int i = 1; i <= 6; ++i) {
    for (int j = 1; j <= 6; ++j) {
      CHECK(std::fabs(b.p_rr(i, j) - b.p_ss(i, j)) < 1e-9);
      CHECK(std::fabs(b.p_rs(i, j) - b.p_rs(j, i)) < 1e-9);
    }
  }
}

TEST_CASE("subclass usage equals expected grammar node counts") {
  std::mt19937_64 g(31);
  const auto model = random_model(g, 0);
  const Strand r(StrandId::R, random_bases(g, 5)), s(StrandId::S, random_bases(g, 5));
  const double z = brute_partition(r, s, model);
  std::map<std::string, double> expect;
  enumerate(EnumConfig{5, 5, model.config()}, r, s, [&](const JointStructure& j) {
    for (const auto& [k, v] : subclass_counts(decompose(j))) expect[k] += boltzmann(j, model) / z * v;
  });
  const auto res = fold(r, s, model);
  for (const auto& name : kSubclasses) CHECK(res.subclass_usage.at(name) == doctest::Approx(expect[name]).epsilon(1e-9));
}
