#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "germs/rational.hpp"

namespace germs {

// Raised when data does not describe an orientation-preserving PL
// homeomorphism of the line.
class InvalidHomeomorphism : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Knot {
  Rational x;
  Rational y;
  friend bool operator==(const Knot&, const Knot&) = default;
};

// Unvalidated PL data as read from a file or produced by a generator.
// An empty knot list means a global affine map through `anchor`.
struct RawPL {
  std::vector<Knot> knots;
  Rational left_slope{1};
  Rational right_slope{1};
  Knot anchor{Rational(0), Rational(0)};
};

// f(x) = slope * x + offset for every x >= threshold.
struct AffineTail {
  Rational slope;
  Rational offset;
  Rational threshold;
};

// Orientation-preserving piecewise-linear homeomorphism of the line with
// finitely many breakpoints. Always held in canonical form: no knot has equal
// incoming and outgoing slope, and an affine map has no knots at all.
class PLMap {
 public:
  // Identity.
  PLMap() = default;

  static PLMap affine(const Rational& slope, const Rational& offset);
  static PLMap translation(const Rational& by) { return affine(Rational(1), by); }
  static PLMap identity() { return PLMap(); }

  const std::vector<Knot>& knots() const { return knots_; }
  const Rational& left_slope() const { return left_slope_; }
  const Rational& right_slope() const { return right_slope_; }
  bool is_affine() const { return knots_.empty(); }
  bool is_identity() const { return knots_.empty() && slope_ == 1 && offset_.is_zero(); }

  // Only meaningful when is_affine().
  const Rational& affine_offset() const { return offset_; }

  Rational operator()(const Rational& x) const;
  Rational inverse_at(const Rational& y) const;

  // Slope of the piece immediately to the right of x.
  Rational slope_right_of(const Rational& x) const;

  RawPL raw() const;

  friend bool operator==(const PLMap&, const PLMap&) = default;

 private:
  friend PLMap pl_normalize(const RawPL& raw);

  std::vector<Knot> knots_;
  Rational left_slope_{1};
  Rational right_slope_{1};
  // Affine case: f(x) = slope_ * x + offset_.
  Rational slope_{1};
  Rational offset_{0};
};

Rational pl_eval(const PLMap& f, const Rational& x);

// Canonical form of raw data. Throws InvalidHomeomorphism for knots that are
// not strictly increasing in x or y, or for non-positive slopes.
PLMap pl_normalize(const RawPL& raw);

// f o g.
PLMap pl_compose(const PLMap& f, const PLMap& g);

PLMap pl_invert(const PLMap& f);

AffineTail affine_tail(const PLMap& f);

// True when f and g coincide on [from, +inf).
bool pl_agree_from(const PLMap& f, const PLMap& g, const Rational& from);

// x -> -f(-x); moves a map into the mirrored chart.
PLMap pl_reflect(const PLMap& f);

// x -> 1 - f(1 - x); mirrored chart of the unit interval.
PLMap pl_reflect_unit(const PLMap& f);

std::string to_string(const PLMap& f);

}  // namespace germs
