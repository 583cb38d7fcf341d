#include "germs/plmap.hpp"

#include <algorithm>
#include <sstream>

namespace germs {

namespace {

// Index of the first knot with x > value.
std::size_t upper_index(const std::vector<Knot>& knots, const Rational& value) {
  auto it = std::upper_bound(knots.begin(), knots.end(), value,
                             [](const Rational& v, const Knot& k) { return v < k.x; });
  return static_cast<std::size_t>(it - knots.begin());
}

}  // namespace

PLMap PLMap::affine(const Rational& slope, const Rational& offset) {
  RawPL raw;
  raw.left_slope = slope;
  raw.right_slope = slope;
  raw.anchor = {Rational(0), offset};
  return pl_normalize(raw);
}

Rational PLMap::operator()(const Rational& x) const {
  if (knots_.empty()) return slope_ * x + offset_;
  if (x <= knots_.front().x) return knots_.front().y + left_slope_ * (x - knots_.front().x);
  if (x >= knots_.back().x) return knots_.back().y + right_slope_ * (x - knots_.back().x);
  std::size_t i = upper_index(knots_, x);
  const Knot& lo = knots_[i - 1];
  const Knot& hi = knots_[i];
  return lo.y + (hi.y - lo.y) / (hi.x - lo.x) * (x - lo.x);
}

Rational PLMap::inverse_at(const Rational& y) const {
  if (knots_.empty()) return (y - offset_) / slope_;
  if (y <= knots_.front().y) return knots_.front().x + (y - knots_.front().y) / left_slope_;
  if (y >= knots_.back().y) return knots_.back().x + (y - knots_.back().y) / right_slope_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                             [](const Rational& v, const Knot& k) { return v < k.y; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  return lo.x + (hi.x - lo.x) / (hi.y - lo.y) * (y - lo.y);
}

Rational PLMap::slope_right_of(const Rational& x) const {
  if (knots_.empty()) return slope_;
  std::size_t i = upper_index(knots_, x);
  if (i == 0) return left_slope_;
  if (i == knots_.size()) return right_slope_;
  return (knots_[i].y - knots_[i - 1].y) / (knots_[i].x - knots_[i - 1].x);
}

RawPL PLMap::raw() const {
  RawPL r;
  r.knots = knots_;
  r.left_slope = left_slope_;
  r.right_slope = right_slope_;
  if (knots_.empty()) r.anchor = {Rational(0), offset_};
  return r;
}

Rational pl_eval(const PLMap& f, const Rational& x) { return f(x); }

PLMap pl_normalize(const RawPL& raw) {
  if (raw.left_slope.sign() <= 0 || raw.right_slope.sign() <= 0)
    throw InvalidHomeomorphism("orientation: tail slope must be positive");
  for (std::size_t i = 1; i < raw.knots.size(); ++i) {
    if (!(raw.knots[i - 1].x < raw.knots[i].x))
      throw InvalidHomeomorphism("breakpoints must be strictly increasing");
    if (!(raw.knots[i - 1].y < raw.knots[i].y))
      throw InvalidHomeomorphism("orientation: values must be strictly increasing");
  }

  PLMap f;
  if (raw.knots.empty()) {
    if (raw.left_slope != raw.right_slope)
      throw InvalidHomeomorphism("affine map needs equal tail slopes");
    f.slope_ = raw.left_slope;
    f.left_slope_ = f.right_slope_ = raw.left_slope;
    f.offset_ = raw.anchor.y - raw.left_slope * raw.anchor.x;
    return f;
  }

  // Slopes of every piece, tails included: slopes[i] is the slope left of knot i.
  const auto& k = raw.knots;
  std::vector<Rational> slopes;
  slopes.reserve(k.size() + 1);
  slopes.push_back(raw.left_slope);
  for (std::size_t i = 1; i < k.size(); ++i) slopes.push_back((k[i].y - k[i - 1].y) / (k[i].x - k[i - 1].x));
  slopes.push_back(raw.right_slope);

  for (std::size_t i = 0; i < k.size(); ++i)
    if (slopes[i] != slopes[i + 1]) f.knots_.push_back(k[i]);

  f.left_slope_ = raw.left_slope;
  f.right_slope_ = raw.right_slope;
  if (f.knots_.empty()) {
    f.slope_ = raw.left_slope;
    f.offset_ = k.front().y - raw.left_slope * k.front().x;
  }
  return f;
}

PLMap pl_compose(const PLMap& f, const PLMap& g) {
  std::vector<Rational> xs;
  for (const Knot& kn : g.knots()) xs.push_back(kn.x);
  for (const Knot& kn : f.knots()) xs.push_back(g.inverse_at(kn.x));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  RawPL raw;
  raw.left_slope = f.left_slope() * g.left_slope();
  raw.right_slope = f.right_slope() * g.right_slope();
  if (xs.empty()) {
    raw.anchor = {Rational(0), f(g(Rational(0)))};
  } else {
    raw.knots.reserve(xs.size());
    for (auto& x : xs) raw.knots.push_back({x, f(g(x))});
  }
  return pl_normalize(raw);
}

PLMap pl_invert(const PLMap& f) {
  RawPL raw;
  raw.left_slope = Rational(1) / f.left_slope();
  raw.right_slope = Rational(1) / f.right_slope();
  if (f.is_affine()) {
    raw.anchor = {f.affine_offset(), Rational(0)};
  } else {
    for (const Knot& kn : f.knots()) raw.knots.push_back({kn.y, kn.x});
  }
  return pl_normalize(raw);
}

AffineTail affine_tail(const PLMap& f) {
  if (f.is_affine()) return {f.right_slope(), f.affine_offset(), Rational(0)};
  const Knot& last = f.knots().back();
  return {f.right_slope(), last.y - f.right_slope() * last.x, last.x};
}

bool pl_agree_from(const PLMap& f, const PLMap& g, const Rational& from) {
  if (f.right_slope() != g.right_slope()) return false;
  if (f(from) != g(from)) return false;
  for (const PLMap* m : {&f, &g})
    for (const Knot& kn : m->knots())
      if (kn.x > from && f(kn.x) != g(kn.x)) return false;
  return true;
}

PLMap pl_reflect(const PLMap& f) {
  RawPL raw;
  raw.left_slope = f.right_slope();
  raw.right_slope = f.left_slope();
  if (f.is_affine()) {
    raw.anchor = {Rational(0), -f.affine_offset()};
  } else {
    for (auto it = f.knots().rbegin(); it != f.knots().rend(); ++it) raw.knots.push_back({-it->x, -it->y});
  }
  return pl_normalize(raw);
}

PLMap pl_reflect_unit(const PLMap& f) {
  const Rational one(1);
  RawPL raw;
  raw.left_slope = f.right_slope();
  raw.right_slope = f.left_slope();
  if (f.is_affine()) {
    raw.anchor = {Rational(0), one - f(one)};
  } else {
    for (auto it = f.knots().rbegin(); it != f.knots().rend(); ++it) raw.knots.push_back({one - it->x, one - it->y});
  }
  return pl_normalize(raw);
}

std::string to_string(const PLMap& f) {
  std::ostringstream os;
  if (f.is_affine()) {
    os << "x -> " << f.right_slope() << "*x + " << f.affine_offset();
    return os.str();
  }
  os << "[" << f.left_slope() << "]";
  for (const Knot& kn : f.knots()) os << " (" << kn.x << "," << kn.y << ")";
  os << " [" << f.right_slope() << "]";
  return os.str();
}

}  // namespace germs
