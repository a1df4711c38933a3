#include <doctest.h>

#include <cmath>
#include <random>

#include "rip/inside.hpp"
#include "rip/oracle.hpp"
#include "rip/verify.hpp"

using namespace rip;

namespace {

Strand wr(int n) { return Strand::wildcard(StrandId::R, n); }
Strand ws(int m) { return Strand::wildcard(StrandId::S, m); }

FoldOptions inside_only() {
  FoldOptions o;
  o.outside = false;
  return o;
}

}  // namespace

TEST_CASE("single-strand tables") {
  const auto t = mccaskill(Strand(StrandId::R, "AAAAA"), EnergyModel::unit_weight(3));
  CHECK(t.q == 2.0);
  for (int i = 1; i <= 6; ++i) CHECK(t.at(t.qs, i, i - 1) == 1.0);

  std::mt19937_64 g(3);
  for (int len = 1; len <= 8; ++len) {
    const auto m = random_model(g, 1);
    const Strand s(StrandId::R, random_bases(g, len));
    const double z = brute_partition(s, Strand(StrandId::S, ""), m);
    CHECK(mccaskill(s, m).q == doctest::Approx(z).epsilon(1e-12));
  }
}

TEST_CASE("fold on the smallest inputs") {
  CHECK(fold(wr(1), ws(1), EnergyModel::unit_weight()).q == 2.0);
  CHECK(fold(wr(2), ws(1), EnergyModel::unit_weight(1)).q == 3.0);
  CHECK(fold(wr(0), ws(0), EnergyModel::unit_weight()).q == 1.0);
}

TEST_CASE("count_dp") {
  CHECK(count_dp(1, 1, 0) == 2);
  CHECK(count_dp(1, 1, 3) == 2);
  CHECK(count_dp(5, 0, 3) == 2);
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= 5; ++m) {
      CHECK(count_dp(n, m, 1) == count(EnumConfig{n, m, {1, PairPolicy::Any, true}}));
    }
  }
}

TEST_CASE("partition function matches the oracle under random energies") {
  std::mt19937_64 g(5);
  for (int theta : {0, 1, 3}) {
    for (int n = 0; n <= 5; ++n) {
      for (int m = 0; m <= 5; ++m) {
        const auto model = random_model(g, theta);
        const Strand r(StrandId::R, random_bases(g, n)), s(StrandId::S, random_bases(g, m));
        const double z = brute_partition(r, s, model);
        CHECK_MESSAGE(fold(r, s, model, inside_only()).q == doctest::Approx(z).epsilon(1e-9),
                      "n=" << n << " m=" << m << " theta=" << theta);
      }
    }
  }
}

TEST_CASE("canonical pairing") {
  EnergyModel m = EnergyModel::unit_weight(0);
  m.params().pair_policy = PairPolicy::Canonical;
  const Strand r(StrandId::R, "GACU"), s(StrandId::S, "CUGA");
  CHECK(fold(r, s, m).q == brute_partition(r, s, m));
}

TEST_CASE("without R-S bonds the ensemble factorizes") {
  std::mt19937_64 g(9);
  for (int k = 0; k < 5; ++k) {
    auto m = random_model(g, 1);
    m.params().intermolecular = false;
    const Strand r(StrandId::R, random_bases(g, 9)), s(StrandId::S, random_bases(g, 7));
    const double qr = mccaskill(r, m).q, qs = mccaskill(s, m).q;
    CHECK(fold(r, s, m, inside_only()).q == doctest::Approx(qr * qs).epsilon(1e-12));
  }
}

TEST_CASE("unit-weight monotonicity and R-S symmetry") {
  for (int n = 1; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const auto a = fold(wr(n), ws(m), EnergyModel::unit_weight(1), inside_only()).q;
      const auto b = fold(wr(n - 1), ws(m), EnergyModel::unit_weight(1), inside_only()).q;
      const auto c = fold(wr(m), ws(n), EnergyModel::unit_weight(1), inside_only()).q;
      CHECK(a >= b);
      CHECK(a == c);
    }
  }
}

TEST_CASE("symmetric energy models give mirror-equal partition functions") {
  EnergyParams p;
  p.theta = 1;
  p.alpha1 = 0.4;
  p.alpha3 = -0.2;
  p.beta1 = 0.3;
  p.beta2 = -0.1;
  p.sigma0 = 0.5;
  p.sigma = 0.75;
  p.gamma = 0.2;
  p.hairpin_const = 0.6;
  p.interior_per_base = 0.1;
  const EnergyModel m(p);
  const std::string a = "ACGUAGC", b = "GGUACU";
  const double q1 = fold(Strand(StrandId::R, a), Strand(StrandId::S, b), m).q;
  const double q2 = fold(Strand(StrandId::R, b), Strand(StrandId::S, a), m).q;
  CHECK(q1 == doctest::Approx(q2).epsilon(1e-12));
}

TEST_CASE("parallel fill gives identical results") {
  std::mt19937_64 g(2);
  const auto m = random_model(g, 1);
  const Strand r(StrandId::R, random_bases(g, 9)), s(StrandId::S, random_bases(g, 8));
  FoldOptions par;
  par.parallel = true;
  par.threads = 3;
  const auto a = fold(r, s, m), b = fold(r, s, m, par);
  CHECK(a.q == b.q);
  CHECK(a.bpp->rs == b.bpp->rs);
}

TEST_CASE("table accounting and memory budget") {
  CHECK(table_entries(30, 30) == static_cast<std::size_t>(kFourIndexTables) * 465 * 465);
  const double formula = kFourIndexTables * 30.0 * 30 * 30 * 30 / 4;
  CHECK(std::fabs(table_entries(30, 30) / formula - 1) < 0.1);
  CHECK(required_bytes(10, 10, true) > required_bytes(10, 10, false));
  FoldOptions tiny;
  tiny.mem_budget_mb = 1;
  CHECK_THROWS_AS(fold(wr(20), ws(20), EnergyModel::unit_weight(), tiny), ResourceError);
  const auto res = fold(wr(4), ws(3), EnergyModel::unit_weight());
  CHECK(res.table_entries == table_entries(4, 3));
}

TEST_CASE("unknown corruption targets are refused") {
  FoldOptions o;
  o.corrupt = "Nope";
  CHECK_THROWS_AS(fold(wr(2), ws(2), EnergyModel::unit_weight(), o), UsageError);
}
