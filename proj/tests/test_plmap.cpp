#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germs/fuzz.hpp"
#include "germs/plmap.hpp"
#include "oracles.hpp"

using namespace germs;

namespace {

// F: identity on x <= 0, slope 2 on x >= 0.
PLMap F() {
  RawPL raw;
  raw.knots = {{Rational(0), Rational(0)}};
  raw.left_slope = Rational(1);
  raw.right_slope = Rational(2);
  return pl_normalize(raw);
}

Rational R(long n, long d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("evaluation") {
  CHECK(PLMap::translation(R(1))(R(5)) == R(6));
  CHECK(F()(R(-3)) == R(-3));
  CHECK(F()(R(3)) == R(6));
  CHECK(pl_eval(F(), R(1, 2)) == R(1));
}

TEST_CASE("composition") {
  PLMap t = PLMap::translation(R(1));
  CHECK(pl_compose(t, t) == PLMap::translation(R(2)));

  PLMap d = PLMap::affine(R(2), R(0));
  PLMap dt = pl_compose(d, t);
  CHECK(dt == PLMap::affine(R(2), R(2)));
  for (long x : {-1, 0, 1, 2}) CHECK(dt(R(x)) == R(2 * x + 2));

  PLMap ft = pl_compose(F(), t);
  REQUIRE(ft.knots().size() == 1);
  CHECK(ft.knots()[0].x == R(-1));
  for (const Rational& x : {R(-5), R(-2), R(-1), R(-1, 2), R(0), R(3)}) {
    Rational expect = x < R(-1) ? x + R(1) : R(2) * x + R(2);
    CHECK(ft(x) == expect);
    CHECK(ft(x) == oracle::eval(F(), oracle::eval(t, x)));
  }
}

TEST_CASE("inverse") {
  CHECK(pl_invert(PLMap::translation(R(1))) == PLMap::translation(R(-1)));
  CHECK(pl_invert(PLMap::affine(R(2), R(0))) == PLMap::affine(R(1, 2), R(0)));
  PLMap g = pl_invert(F());
  CHECK(g.left_slope() == R(1));
  CHECK(g.right_slope() == R(1, 2));
  REQUIRE(g.knots().size() == 1);
  CHECK(g.knots()[0] == Knot{R(0), R(0)});
  for (const Rational& x : oracle::probes({&g}))
    CHECK(oracle::eval(F(), oracle::eval(g, x)) == x);
}

TEST_CASE("normalization") {
  RawPL spurious;
  spurious.knots = {{R(1), R(2)}, {R(3), R(6)}};
  spurious.left_slope = R(2);
  spurious.right_slope = R(2);
  PLMap s = pl_normalize(spurious);
  CHECK(s.is_affine());
  CHECK(s == PLMap::affine(R(2), R(0)));

  CHECK(pl_normalize(F().raw()) == F());

  RawPL collinear;
  collinear.knots = {{R(-1), R(-1)}, {R(0), R(0)}, {R(1), R(2)}, {R(2), R(4)}};
  collinear.left_slope = R(1);
  collinear.right_slope = R(2);
  PLMap m = pl_normalize(collinear);
  CHECK(m == F());
  for (long n = -40; n <= 40; ++n) CHECK(m(R(n, 8)) == oracle::r(oracle::eval_raw(collinear, oracle::q(R(n, 8)))));

  RawPL bad;
  bad.knots = {{R(0), R(1)}, {R(1), R(0)}};
  CHECK_THROWS_AS(pl_normalize(bad), InvalidHomeomorphism);
  RawPL flat;
  flat.left_slope = R(0);
  CHECK_THROWS_AS(pl_normalize(flat), InvalidHomeomorphism);
}

TEST_CASE("affine tail") {
  AffineTail f = affine_tail(F());
  CHECK(f.slope == R(2));
  CHECK(f.offset == R(0));
  CHECK(f.threshold == R(0));
  AffineTail t = affine_tail(PLMap::translation(R(1)));
  CHECK(t.slope == R(1));
  CHECK(t.offset == R(1));
  AffineTail c = affine_tail(pl_compose(F(), PLMap::translation(R(1))));
  CHECK(c.slope == R(2));
  CHECK(c.offset == R(2));
  CHECK(c.threshold == R(-1));
}

TEST_CASE("reflections") {
  PLMap f = pl_reflect(F());
  for (const Rational& x : oracle::probes({&f})) CHECK(f(x) == -F()(-x));
  CHECK(pl_reflect(f) == F());
  RawPL unit;
  unit.knots = {{R(0), R(0)}, {R(1, 2), R(3, 4)}, {R(1), R(1)}};
  unit.left_slope = R(3, 2);
  unit.right_slope = R(1, 2);
  PLMap u = pl_normalize(unit);
  PLMap v = pl_reflect_unit(u);
  CHECK(v(R(1, 2)) == R(1, 4));
  CHECK(pl_reflect_unit(v) == u);
}

TEST_CASE("random maps: monotone, composition, inverse, normal form, tail") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    Fuzzer fz(case_seed(7, 1, i));
    PLMap f = fz.plmap(), g = fz.plmap();
    PLMap fg = pl_compose(f, g);
    PLMap fi = pl_invert(f);
    auto xs = oracle::probes({&f, &g});
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const Rational& x = xs[k];
      if (k > 0) CHECK(f(xs[k - 1]) < f(x));
      CHECK(f(x) == oracle::eval(f, x));
      CHECK(fg(x) == oracle::eval(f, oracle::eval(g, x)));
      CHECK(fi(f(x)) == x);
      CHECK(f.inverse_at(f(x)) == x);
    }
    CHECK(pl_normalize(f.raw()) == f);
    for (std::size_t k = 1; k < f.knots().size(); ++k) CHECK(f.knots()[k - 1].x < f.knots()[k].x);
    // canonical: every knot is a real bend
    for (std::size_t k = 0; k < f.knots().size(); ++k) {
      const Knot& kn = f.knots()[k];
      Rational left = k == 0 ? f.left_slope() : (kn.y - f.knots()[k - 1].y) / (kn.x - f.knots()[k - 1].x);
      Rational right = f.slope_right_of(kn.x);
      CHECK(left != right);
    }
    AffineTail t = affine_tail(f);
    for (const Rational& x : {t.threshold, t.threshold + R(1, 3), t.threshold + R(50)})
      CHECK(f(x) == t.slope * x + t.offset);
  }
}

TEST_CASE("agreement from a point") {
  PLMap f = F();
  Fuzzer fz(3);
  PLMap g = fz.mutate_below(f, R(-10));
  CHECK(pl_agree_from(f, g, R(-10)));
  for (long x = -10; x <= 10; ++x) CHECK(f(R(x)) == g(R(x)));
  CHECK_FALSE(pl_agree_from(f, PLMap::translation(R(1)), R(0)));
}
