#include <doctest.h>

#include "rip/model.hpp"

using namespace rip;

namespace {

JointStructure js(int n, int m, std::vector<Arc> r, std::vector<Arc> s, std::vector<Arc> e) {
  return JointStructure(Strand::wildcard(StrandId::R, n), Strand::wildcard(StrandId::S, m), std::move(r),
                        std::move(s), std::move(e));
}

const FoldConfig kTheta0{0, PairPolicy::Any, true};

}  // namespace

TEST_CASE("strands reject unknown bases and keep 1-based access") {
  Strand r(StrandId::R, "ACGU");
  CHECK(r.length() == 4);
  CHECK(r.at(1) == 'A');
  CHECK(r.at(4) == 'U');
  CHECK_THROWS_AS(Strand(StrandId::R, "AXC"), InputError);
  CHECK(is_nucleotide('N'));
  CHECK_FALSE(is_nucleotide('X'));
  CHECK(Strand(StrandId::R, "acgt").bases() == "ACGU");
}

TEST_CASE("pair admissibility") {
  CHECK(pair_admissible('A', 'U', PairPolicy::Canonical));
  CHECK(pair_admissible('G', 'U', PairPolicy::Canonical));
  CHECK_FALSE(pair_admissible('A', 'G', PairPolicy::Canonical));
  CHECK(pair_admissible('A', 'G', PairPolicy::Any));
}

TEST_CASE("validate accepts the empty structure") {
  CHECK_FALSE(validate(JointStructure::empty(3, 3), FoldConfig{}).has_value());
}

TEST_CASE("crossing exterior arcs are an external pseudoknot") {
  const auto v = validate(js(3, 3, {}, {}, {Arc::ext(1, 2), Arc::ext(2, 1)}), kTheta0);
  REQUIRE(v.has_value());
  CHECK(v->kind == ViolationKind::ExternalPseudoknot);
}

TEST_CASE("zig-zag example is rejected and each end arc removal fixes it") {
  const std::vector<Arc> r{Arc::r(1, 5)}, s{Arc::s(3, 6)};
  const auto v = validate(js(6, 6, r, s, {Arc::ext(2, 2), Arc::ext(4, 4), Arc::ext(6, 5)}), kTheta0);
  REQUIRE(v.has_value());
  CHECK(v->kind == ViolationKind::ZigZag);
  CHECK_FALSE(validate(js(6, 6, r, s, {Arc::ext(4, 4), Arc::ext(6, 5)}), kTheta0).has_value());
  CHECK_FALSE(validate(js(6, 6, r, s, {Arc::ext(2, 2), Arc::ext(4, 4)}), kTheta0).has_value());
}

TEST_CASE("other violation kinds") {
  CHECK(validate(js(4, 2, {Arc::r(1, 3)}, {}, {Arc::ext(1, 1)}), kTheta0)->kind == ViolationKind::VertexReuse);
  CHECK(validate(js(6, 0, {Arc::r(1, 4), Arc::r(2, 6)}, {}, {}), kTheta0)->kind == ViolationKind::InteriorCrossing);
  CHECK(validate(js(4, 0, {Arc::r(1, 4)}, {}, {}), FoldConfig{3, PairPolicy::Any, true})->kind ==
        ViolationKind::HairpinTooSmall);
  const JointStructure ag(Strand(StrandId::R, "A"), Strand(StrandId::S, "G"), {}, {}, {Arc::ext(1, 1)});
  CHECK(validate(ag, FoldConfig{0, PairPolicy::Canonical, true})->kind == ViolationKind::InadmissiblePair);
  CHECK_FALSE(validate(ag, kTheta0).has_value());
}

TEST_CASE("out-of-range indices are a usage error") {
  CHECK_THROWS_AS(validate(js(2, 2, {}, {}, {Arc::ext(3, 1)}), kTheta0), UsageError);
}

TEST_CASE("validate is deterministic") {
  const auto a = js(6, 6, {Arc::r(1, 5)}, {Arc::s(3, 6)}, {Arc::ext(2, 2), Arc::ext(4, 4), Arc::ext(6, 5)});
  const auto v1 = validate(a, kTheta0), v2 = validate(a, kTheta0);
  CHECK(v1->kind == v2->kind);
  CHECK(v1->witness == v2->witness);
}

TEST_CASE("ancestors of an exterior arc") {
  const auto a = ancestors(js(6, 6, {Arc::r(1, 6), Arc::r(2, 4)}, {Arc::s(2, 6), Arc::s(3, 5)}, {Arc::ext(3, 4)}),
                           Arc::ext(3, 4));
  CHECK(a.r_ancestors == std::vector<Arc>{Arc::r(1, 6), Arc::r(2, 4)});
  CHECK(a.s_ancestors == std::vector<Arc>{Arc::s(2, 6), Arc::s(3, 5)});
  CHECK(a.r_parent == Arc::r(2, 4));
  CHECK(a.s_parent == Arc::s(3, 5));

  const auto none = ancestors(js(1, 1, {}, {}, {Arc::ext(1, 1)}), Arc::ext(1, 1));
  CHECK(none.r_ancestors.empty());
  CHECK_FALSE(none.r_parent.has_value());
  CHECK_FALSE(none.s_parent.has_value());

  const auto deep = ancestors(js(8, 1, {Arc::r(1, 8), Arc::r(2, 6), Arc::r(3, 5)}, {}, {Arc::ext(4, 1)}),
                              Arc::ext(4, 1));
  CHECK(deep.r_ancestors.size() == 3);
  CHECK(deep.r_parent == Arc::r(3, 5));
  CHECK_THROWS_AS(ancestors(js(2, 2, {}, {}, {}), Arc::ext(1, 1)), UsageError);
}

TEST_CASE("subsumption relation") {
  SUBCASE("R-arc subsumes S-arc") {
    const auto a = js(8, 6, {Arc::r(1, 8)}, {Arc::s(1, 4)}, {Arc::ext(2, 2), Arc::ext(3, 3), Arc::ext(6, 6)});
    CHECK(subsumes(a, Arc::r(1, 8), Arc::s(1, 4)) == Subsumption::RSubsumesS);
  }
  SUBCASE("equivalent arcs") {
    const auto a = js(5, 4, {Arc::r(2, 5)}, {Arc::s(1, 4)}, {Arc::ext(3, 2), Arc::ext(4, 3)});
    CHECK(subsumes(a, Arc::r(2, 5), Arc::s(1, 4)) == Subsumption::Equivalent);
  }
  SUBCASE("shared descendants only inside the R-arc") {
    const auto a = js(8, 4, {Arc::r(1, 8)}, {Arc::s(1, 4)}, {Arc::ext(2, 2), Arc::ext(3, 3)});
    CHECK(subsumes(a, Arc::r(1, 8), Arc::s(1, 4)) == Subsumption::Equivalent);
  }
  SUBCASE("independent arcs") {
    const auto a = js(8, 8, {Arc::r(1, 4)}, {Arc::s(5, 8)}, {Arc::ext(2, 2), Arc::ext(6, 6)});
    CHECK(subsumes(a, Arc::r(1, 4), Arc::s(5, 8)) == Subsumption::Independent);
  }
  SUBCASE("zig-zag pair is neither") {
    const auto a = js(6, 6, {Arc::r(1, 5)}, {Arc::s(3, 6)}, {Arc::ext(2, 2), Arc::ext(4, 4), Arc::ext(6, 5)});
    CHECK(subsumes(a, Arc::r(1, 5), Arc::s(3, 6)) == Subsumption::Neither);
  }
}

TEST_CASE("arc sets are kept sorted so insertion order is irrelevant") {
  const auto a = js(8, 0, {Arc::r(2, 6), Arc::r(1, 8)}, {}, {});
  const auto b = js(8, 0, {Arc::r(1, 8), Arc::r(2, 6)}, {}, {});
  CHECK(a.same_arcs(b));
  CHECK(a.contains(Arc::r(2, 6)));
}
