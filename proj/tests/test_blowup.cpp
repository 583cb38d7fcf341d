#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "germs/blowup.hpp"
#include "germs/fuzz.hpp"
#include "germs/suites.hpp"
#include "oracles.hpp"

using namespace germs;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::string data(const std::string& rel) { return std::string(GERMS_DATA_DIR) + "/" + rel; }

harness::Example example(const std::string& name, const std::string& blowup_file = "blowup.json") {
  harness::ExamplePaths p{name, data(name + "/leafspace.json"), data(name + "/action.json"),
                          data(name + "/" + blowup_file)};
  return harness::load_example(p);
}

// Exponent n when w is k^n as a reduced word.
std::optional<int> k_power(const Word& w) {
  int n = 0;
  for (const Letter& l : w.letters()) {
    if (l.name != "k") return std::nullopt;
    n += l.exponent;
  }
  return n;
}

mpq_class phi_power(const RawPL& phi, const RawPL& phi_inv, int n, mpq_class t) {
  for (int i = 0; i < n; ++i) t = oracle::eval_raw(phi, t);
  for (int i = 0; i > n; --i) t = oracle::eval_raw(phi_inv, t);
  return t;
}

}  // namespace

TEST_CASE("orbit enumeration") {
  LeafSpace line = LeafSpace::line();
  BlowupSpace trivial = build_blowup(Action(line, std::vector<Homeo>{}), Point{0, R(0)}, 5);
  CHECK(trivial.orbit().size() == 1);
  CHECK(trivial.chart_intervals() == 1);

  harness::Example e1 = example("e1");
  BlowupSpace B = build_blowup(e1.action, Point{0, R(0)}, 3);
  std::set<Rational> coords;
  for (const OrbitPoint& p : B.orbit()) coords.insert(p.point.coord);
  CHECK(coords == std::set<Rational>{R(-3), R(-2), R(-1), R(0), R(1), R(2), R(3)});
  for (const OrbitPoint& p : B.orbit()) {
    CHECK(e1.action.apply(p.rep, B.marked()) == p.point);
    CHECK(static_cast<int>(p.rep.length()) == p.depth);
  }
  CHECK(classify(B) == classify(line));
}

TEST_CASE("alpha on the marked interval") {
  harness::Example e3 = example("e3");
  BlownAction A = harness::bind_example_blowup(e3);
  BlownPoint mid = A.marked_midpoint();
  CHECK(*mid.t == R(1, 2));
  BlownPoint q = A.alpha(Word::parse("k"), mid);
  CHECK(q.base == mid.base);
  CHECK(*q.t == R(3, 4));
  CHECK(A.alpha(Word(), mid) == mid);
  CHECK(alpha_apply(A, Word::parse("k^-1 k"), mid) == mid);
}

TEST_CASE("alpha matches the twist formula") {
  harness::Example e3 = example("e3");
  BlownAction A = harness::bind_example_blowup(e3);
  // In the file's chart, [0,1] knots are (0,0), (1/2,3/4), (1,1).
  RawPL unit;
  unit.knots = {{R(0), R(0)}, {R(1, 2), R(3, 4)}, {R(1), R(1)}};
  RawPL unit_inv;
  unit_inv.knots = {{R(0), R(0)}, {R(3, 4), R(1, 2)}, {R(1), R(1)}};

  const BlowupSpace& B = A.space();
  std::size_t checked = 0;
  for (const OrbitPoint& p : B.orbit()) {
    if (p.depth > 2) continue;
    for (const Word& h : word_ball(e3.action.generator_names(), 2)) {
      Point hp = e3.action.apply(h, p.point);
      const OrbitPoint* target = B.find(hp);
      REQUIRE(target);
      Word twist = target->rep.inverse() * h * p.rep;
      auto n = k_power(twist);
      REQUIRE_MESSAGE(n, "twist " << twist.str() << " is not a power of k");
      for (const Rational& t : {R(0), R(1, 8), R(1, 2), R(2, 3), R(1)}) {
        BlownPoint got = A.alpha(h, BlownPoint::interval(p.point, t));
        CHECK(got.base == hp);
        CHECK(oracle::q(*got.t) == phi_power(unit, unit_inv, *n, oracle::q(t)));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("action law") {
  harness::Example e1 = example("e1");
  BlownAction A1 = harness::bind_example_blowup(e1);
  auto samples = sample_points(A1, SampleSpec{2, 9, 100, 4});
  CHECK(samples.size() >= 100);
  for (const BlownPoint& q : samples) CHECK_FALSE(check_alpha_law(A1, Word(), Word(), q));
  CHECK(validate_alpha_action(A1, samples, 4).ok());

  harness::Example e3 = example("e3");
  BlownAction A3 = harness::bind_example_blowup(e3);
  auto s3 = sample_points(A3, SampleSpec{1, 5, 40, 3});
  CHECK(validate_alpha_action(A3, s3, 3).ok());
  std::vector<Rational> ts{R(0), R(1, 4), R(1, 2), R(3, 4), R(1)};
  for (const OrbitPoint& p : A3.space().orbit())
    if (p.depth <= 1)
      for (const Word& h : word_ball(e3.action.generator_names(), 2))
        CHECK_FALSE(harness::check_alpha_orientation(A3, h, p.point, ts));
}

TEST_CASE("corrupted coset representative is caught") {
  harness::Example bad = example("e3", "blowup_fault_coset.json");
  BlownAction A = harness::bind_example_blowup(bad);
  auto samples = sample_points(A, SampleSpec{1, 3, 20, 3});
  AlphaCheck c = validate_alpha_action(A, samples, 3);
  REQUIRE_FALSE(c.ok());
  CHECK(c.counterexample->reason.find("coset") != std::string::npos);
}

TEST_CASE("stabilizer") {
  harness::Example e3 = example("e3");
  StabilizerCheck ok = stabilizer_check(harness::bind_example_blowup(e3), 5);
  CHECK(ok.ok());
  CHECK(ok.words == 4 + 12 + 36 + 108 + 324);
  harness::Example bad = example("e3", "blowup_fault_phi.json");
  StabilizerCheck fail = stabilizer_check(harness::bind_example_blowup(bad), 5);
  REQUIRE(fail.fixing_word);
  CHECK(fail.fixing_word->str() == "k");
}

TEST_CASE("orbit search") {
  harness::Example e1 = example("e1");
  BlownAction A = harness::bind_example_blowup(e1);
  auto w = positive_ray_orbit_search(A, R(5), 8);
  REQUIRE(w);
  CHECK(*w == Word::parse("t t t t t t"));
  auto none = positive_ray_orbit_search(A, R(-1), 8);
  REQUIRE(none);
  CHECK(none->empty());
  CHECK_FALSE(positive_ray_orbit_search(A, R(100), 8));
}

TEST_CASE("injectivity certificate") {
  harness::Example e3 = example("e3");
  BlownAction A = harness::bind_example_blowup(e3);
  InjectivityCheck c = injectivity_certificate(A, 3, {R(0), R(1000), R(1000000)});
  CHECK(c.ok());
  CHECK(c.words == 4 + 12 + 36);
  for (const Word& w : word_ball(e3.action.generator_names(), 3)) {
    if (w.empty()) continue;
    Germ g = blown_germ(A, w);
    CHECK_FALSE(g.is_identity());
    auto m = blown_witness(A, w, R(1000));
    REQUIRE(m);
    CHECK(*m > R(1000));
  }
  harness::Example e1 = example("e1");
  CHECK(injectivity_certificate(harness::bind_example_blowup(e1), 5, {R(0), R(1000)}).ok());
}

TEST_CASE("random finite spaces keep their branching type") {
  for (std::size_t i = 0; i < 40; ++i) CHECK_FALSE(harness::check_structural_case(99, i));
}
