#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "germs/fuzz.hpp"
#include "germs/leafspace.hpp"
#include "oracles.hpp"

using namespace germs;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

using Spec = LeafSpace::BranchSpec;

LeafSpace one_child(Side side = Side::Negative) {
  return LeafSpace({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}}, side);
}

LeafSpace two_children() {
  return LeafSpace({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}, Spec{"b2", "root", R(0)}},
                   Side::Negative);
}

LeafSpace chain() {
  return LeafSpace({Spec{"root", std::nullopt, std::nullopt}, Spec{"b1", "root", R(0)}, Spec{"b2", "b1", R(-1)}},
                   Side::Negative);
}

}  // namespace

TEST_CASE("canonical points") {
  LeafSpace L = one_child();
  CHECK(canonical_point(L, Point{1, R(5)}) == Point{0, R(5)});
  CHECK(canonical_point(L, Point{1, R(0)}) == Point{1, R(0)});
  LeafSpace C = chain();
  CHECK(canonical_point(C, Point{2, R(7)}) == Point{0, R(7)});
  CHECK(canonical_point(C, Point{2, R(-1, 2)}) == Point{1, R(-1, 2)});
  CHECK(canonical_point(C, Point{2, R(-1)}) == Point{2, R(-1)});
}

TEST_CASE("non-separated points") {
  LeafSpace L = one_child();
  CHECK(non_separated(L, Point{0, R(0)}) == std::vector<Point>{Point{1, R(0)}});
  CHECK(non_separated(L, Point{0, R(3)}).empty());
  LeafSpace T = two_children();
  auto ns = non_separated(T, Point{1, R(0)});
  std::sort(ns.begin(), ns.end());
  CHECK(ns == std::vector<Point>{Point{0, R(0)}, Point{2, R(0)}});
}

TEST_CASE("classification and ends") {
  CHECK(classify(LeafSpace::line()) == LeafSpaceKind::Line);
  CHECK(classify(one_child()) == LeafSpaceKind::OneSidedNegative);
  CHECK(classify(one_child(Side::Positive)) == LeafSpaceKind::OneSidedPositive);
  CHECK(negative_ends(LeafSpace::line()) == std::vector<BranchIndex>{0});
  CHECK(negative_ends(two_children()).size() == 3);
  LeafSpace four({Spec{"root", std::nullopt, std::nullopt}, Spec{"a", "root", R(0)}, Spec{"b", "a", R(-1)},
                  Spec{"c", "b", R(-2)}},
                 Side::Negative);
  CHECK(negative_ends(four).size() == four.size());
}

TEST_CASE("validation names the offending branch") {
  auto msg = [](std::vector<Spec> specs) {
    try {
      LeafSpace L(std::move(specs), Side::Negative);
    } catch (const LeafSpaceError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg({Spec{"root", std::nullopt, std::nullopt}, Spec{"x", "nowhere", R(0)}}).find("'x'") != std::string::npos);
  CHECK(msg({Spec{"root", std::nullopt, std::nullopt}, Spec{"x", "root", std::nullopt}}).find("'x'") !=
        std::string::npos);
  CHECK(msg({Spec{"root", std::nullopt, std::nullopt}, Spec{"root", "root", R(1)}}).find("duplicate") !=
        std::string::npos);
  CHECK(msg({Spec{"a", "b", R(0)}, Spec{"b", "a", R(0)}}) != "");
}

TEST_CASE("random spaces: gluing, canonical points, non-separation") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    Fuzzer fz(case_seed(9, 1, i));
    LeafSpace L = fz.leafspace();
    auto n = static_cast<BranchIndex>(L.size());
    for (BranchIndex u = 0; u < n; ++u)
      for (BranchIndex v = 0; v < n; ++v) {
        auto g = L.glue(u, v);
        auto o = oracle::glue(L, u, v);
        REQUIRE(g.has_value() == o.has_value());
        if (g) CHECK(oracle::q(*g) == *o);
        CHECK(L.glue(v, u) == g);
      }
    for (BranchIndex b = 0; b < n; ++b) {
      for (long k = -20; k <= 20; ++k) {
        Point p{b, R(k, 2)};
        Point c = canonical_point(L, p);
        auto o = oracle::canonical(L, b, oracle::q(p.coord));
        CHECK(c.branch == o.first);
        CHECK(oracle::q(c.coord) == o.second);
        CHECK(canonical_point(L, c) == c);
        CHECK(c.coord == p.coord);
        CHECK(L.chart_contains(b, c));
        for (const Point& s : non_separated(L, c)) {
          CHECK(s.coord == c.coord);
          CHECK(s != c);
          auto back = non_separated(L, s);
          CHECK(std::find(back.begin(), back.end(), c) != back.end());
        }
      }
    }
    if (L.size() == 1) CHECK(classify(L) == LeafSpaceKind::Line);
    else CHECK(classify(L) == LeafSpaceKind::OneSidedNegative);
  }
}
