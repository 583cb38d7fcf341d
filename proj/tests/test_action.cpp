#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germs/action.hpp"
#include "germs/fuzz.hpp"
#include "germs/suites.hpp"
#include "oracles.hpp"

using namespace germs;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }
using Spec = LeafSpace::BranchSpec;

LeafSpace siblings() {
  return LeafSpace({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}, Spec{"b2", "root", R(0)}},
                   Side::Negative);
}

LeafSpace one_child() {
  return LeafSpace({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}}, Side::Negative);
}

harness::Example example(const std::string& name) {
  auto c = harness::SuiteConfig::defaults(GERMS_DATA_DIR);
  for (const auto& p : c.examples)
    if (p.name == name) return harness::load_example(p);
  throw std::runtime_error("no example " + name);
}

}  // namespace

TEST_CASE("validation") {
  LeafSpace L = siblings();
  CHECK_FALSE(validate_homeo(L, Homeo::identity(L)));
  Homeo swap{"s", {0, 2, 1}, {PLMap(), PLMap(), PLMap()}};
  CHECK_FALSE(validate_homeo(L, swap));

  HomeoDraft bad;
  bad.name = "r";
  RawPL flip;
  flip.left_slope = R(-1);
  flip.right_slope = R(-1);
  bad.branch_pl = {{"root", flip}};
  try {
    build_homeo(L, bad);
    FAIL("reversing map accepted");
  } catch (const HomeoValidationError& e) {
    CHECK(e.violation.kind == "orientation");
  }

  // Moving the departure without moving the branches breaks compatibility.
  Homeo shift = Homeo::uniform(L, PLMap::translation(R(1)), "t");
  CHECK(validate_homeo(L, shift)->kind == "compatibility");
  Homeo twice{"x", {1, 1, 2}, {PLMap(), PLMap(), PLMap()}};
  CHECK(validate_homeo(L, twice)->kind == "bijection");
}

TEST_CASE("application") {
  LeafSpace line = LeafSpace::line();
  Homeo t = Homeo::uniform(line, PLMap::translation(R(1)), "t");
  CHECK(apply_homeo(line, t, Point{0, R(0)}) == Point{0, R(1)});
  LeafSpace L = siblings();
  Homeo swap{"s", {0, 2, 1}, {PLMap(), PLMap(), PLMap()}};
  for (long k = -5; k <= 0; ++k) CHECK(apply_homeo(L, swap, Point{1, R(k, 2)}) == Point{2, R(k, 2)});
  CHECK(apply_homeo(L, swap, Point{1, R(3)}) == Point{0, R(3)});
}

TEST_CASE("overlap ray") {
  LeafSpace L = one_child();
  Homeo s{"s", {1, 0}, {PLMap(), PLMap()}};
  CHECK(overlap_ray(L, s, Embedding::root_chart(L)) == R(0));
  LeafSpace line = LeafSpace::line();
  CHECK_FALSE(overlap_ray(line, Homeo::uniform(line, PLMap::translation(R(1)), "t"), Embedding::root_chart(line)));

  // The root carried into a grandchild two departures down.
  LeafSpace G({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}, Spec{"b2", "b1", R(2)}},
              Side::Negative);
  Homeo into{"g", {2, 1, 0}, {PLMap(), PLMap(), PLMap()}};
  CHECK(overlap_ray(G, into, Embedding::root_chart(G)) == R(2));
  CHECK(apply_homeo(G, into, Point{0, R(2)}).branch == 2);
  CHECK(apply_homeo(G, into, Point{0, R(5, 2)}).branch == 0);
}

TEST_CASE("induced germ") {
  LeafSpace line = LeafSpace::line();
  Embedding e = Embedding::root_chart(line);
  CHECK(induced_germ(line, Homeo::uniform(line, PLMap::translation(R(1)), "t"), e) == Germ(R(1), R(1)));
  LeafSpace L = one_child();
  Homeo s{"s", {1, 0}, {PLMap(), PLMap()}};
  CHECK(induced_germ(L, s, Embedding::root_chart(L)).is_identity());
  RawPL raw;
  raw.knots = {{R(0), R(0)}};
  raw.right_slope = R(2);
  PLMap F = pl_normalize(raw);
  Homeo d{"d", {0, 1}, {F, F}};
  REQUIRE_FALSE(validate_homeo(L, d));
  CHECK(induced_germ(L, d, Embedding::root_chart(L)) == Germ(R(2), R(0)));
}

TEST_CASE("words") {
  LeafSpace line = LeafSpace::line();
  Action A(line, std::vector<Homeo>{Homeo::uniform(line, PLMap::translation(R(1)), "f"),
                                    Homeo::uniform(line, PLMap::affine(R(2), R(0)), "g")});
  CHECK(induced_germ(A, Word::parse("f g")) == Germ(R(2), R(1)));
  CHECK(germ_mul(Germ(R(1), R(1)), Germ(R(2), R(0))) == Germ(R(2), R(1)));
  CHECK(A.apply(Word::parse("f g"), Point{0, R(3)}) == Point{0, R(7)});
  CHECK(induced_germ(A, Word()).is_identity());
  CHECK(induced_germ(A, Word::parse("g g^-1")).is_identity());
  CHECK(evaluate_d_word(A, Word::parse("f g^-1 f f")).agree());
  CHECK_THROWS_AS(A.evaluate(Word::parse("z")), ActionError);
}

TEST_CASE("nontriviality witness") {
  LeafSpace line = LeafSpace::line();
  Embedding e = Embedding::root_chart(line);
  auto m = nontriviality_witness(line, Homeo::uniform(line, PLMap::translation(R(1)), "t"), e, R(100));
  REQUIRE(m);
  CHECK(*m > R(100));
  CHECK_FALSE(nontriviality_witness(line, Homeo::identity(line), e, R(0)));

  RawPL raw;
  raw.knots = {{R(-3), R(-5)}, {R(0), R(0)}};
  raw.left_slope = R(1);
  raw.right_slope = R(1);
  Homeo low = Homeo::uniform(line, pl_normalize(raw), "low");
  CHECK_FALSE(nontriviality_witness(line, low, e, R(0)));
  CHECK(induced_germ(line, low, e).is_identity());
}

TEST_CASE("bundled examples") {
  harness::Example e1 = example("e1");
  CHECK(induced_germ(e1.action, Word::parse("t t t")) == Germ(R(1), R(3)));
  harness::Example e2 = example("e2");
  for (const Word& w : word_ball(e2.action.generator_names(), 4)) {
    CHECK(induced_germ(e2.action, w).is_identity());
    CHECK_FALSE(harness::check_trivial_d(e2.action.space(), e2.action.evaluate(w)));
  }
  harness::Example e3 = example("e3");
  CHECK(e3.action.space().size() == 3);
  CHECK(classify(e3.action.space()) == LeafSpaceKind::OneSidedNegative);
}

TEST_CASE("random homeomorphisms: soundness of apply, overlap, d") {
  for (std::uint64_t i = 0; i < 150; ++i) {
    Fuzzer fz(case_seed(13, 4, i));
    LeafSpace L = fz.leafspace();
    Homeo f = fz.homeo(L, "f"), g = fz.homeo(L, "g");
    REQUIRE_FALSE(validate_homeo(L, f));
    Homeo fg = compose(f, g);
    CHECK_FALSE(validate_homeo(L, fg));
    Homeo fi = inverse(f);
    for (BranchIndex b = 0; b < static_cast<BranchIndex>(L.size()); ++b) {
      for (long k = -12; k <= 12; ++k) {
        Point p = canonical_point(L, Point{b, R(k, 3)});
        Point direct = apply_homeo(L, fg, p);
        CHECK(direct == apply_homeo(L, f, apply_homeo(L, g, p)));
        auto o = oracle::apply(L, f, p.branch, oracle::q(p.coord));
        Point fp = apply_homeo(L, f, p);
        CHECK(fp.branch == o.first);
        CHECK(oracle::q(fp.coord) == o.second);
        CHECK(apply_homeo(L, fi, fp) == p);
      }
    }
    for (const Homeo* h : {&f, &g, &fg}) {
      CHECK_FALSE(harness::check_overlap(L, *h));
      CHECK_FALSE(harness::check_g0_independence(L, *h));
      CHECK_FALSE(harness::check_nontriviality(L, *h));
    }
    Embedding e = Embedding::root_chart(L);
    CHECK(induced_germ(L, fg, e) == germ_mul(induced_germ(L, f, e), induced_germ(L, g, e)));
  }
}

TEST_CASE("homomorphism on the bundled examples") {
  for (const char* name : {"e1", "e2", "e3"}) {
    harness::Example ex = example(name);
    for (std::uint64_t i = 0; i < 60; ++i) {
      Fuzzer fz(case_seed(17, 5, i));
      Word w1 = fz.word(ex.action.generator_names(), 6), w2 = fz.word(ex.action.generator_names(), 6);
      CHECK_FALSE(harness::check_d_homomorphism(ex.action, w1, w2));
      Homeo full = ex.action.evaluate(w1 * w2);
      for (BranchIndex b = 0; b < static_cast<BranchIndex>(ex.action.space().size()); ++b) {
        Action::ChartMap c = ex.action.chart_map(w1 * w2, b);
        CHECK(c.image == full.branch_map[static_cast<std::size_t>(b)]);
        CHECK(c.map == full.branch_pl[static_cast<std::size_t>(b)]);
      }
      // letterwise application agrees with the composed homeomorphism
      Point p{0, fz.rational(5)};
      CHECK(ex.action.apply(w1 * w2, p) == apply_homeo(ex.action.space(), ex.action.evaluate(w1 * w2), p));
    }
  }
}
