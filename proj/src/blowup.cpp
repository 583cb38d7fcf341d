#include "germs/blowup.hpp"

#include <algorithm>
#include <set>

namespace germs {

namespace {

std::vector<Letter> alphabet_of(const std::vector<std::string>& names) {
  std::vector<Letter> out;
  for (const auto& n : names) {
    out.push_back({n, 1});
    out.push_back({n, -1});
  }
  return out;
}

}  // namespace

BlowupSpace::BlowupSpace(Action action, Point marked, int depth)
    : action_(std::move(action)), marked_(std::move(marked)), depth_(depth) {
  if (depth_ < 0) throw std::invalid_argument("blow-up depth must be non-negative");
  if (canonical_point(base(), marked_) != marked_)
    throw LeafSpaceError("marked point " + to_string(base(), marked_) + " is not canonical");

  orbit_.push_back(OrbitPoint{marked_, Word(), 0});
  lookup_.emplace(marked_, 0);
  std::vector<std::size_t> level{0};
  const auto alphabet = alphabet_of(action_.generator_names());
  for (int d = 1; d <= depth_; ++d) {
    std::vector<std::size_t> next;
    for (const Letter& l : alphabet) {
      Word lw({l});
      for (std::size_t idx : level) {
        Word w = lw * orbit_[idx].rep;
        if (static_cast<int>(w.length()) != d) continue;
        Point p = action_.apply(lw, orbit_[idx].point);
        if (lookup_.count(p)) continue;
        lookup_.emplace(p, orbit_.size());
        next.push_back(orbit_.size());
        orbit_.push_back(OrbitPoint{p, std::move(w), d});
      }
    }
    level = std::move(next);
  }

  for (const OrbitPoint& o : orbit_)
    if (o.point.branch == base().root()) chart_marks_.push_back(o.point.coord);
  std::sort(chart_marks_.begin(), chart_marks_.end());
}

const OrbitPoint* BlowupSpace::find(const Point& p) const {
  auto it = lookup_.find(p);
  return it == lookup_.end() ? nullptr : &orbit_[it->second];
}

Rational BlowupSpace::to_chart(const BlownPoint& q) const {
  if (q.base.branch != base().root())
    throw LeafSpaceError("point " + to_string(base(), q) + " is outside the blown-up root chart");
  const Rational& x = q.base.coord;
  auto below = static_cast<long>(std::lower_bound(chart_marks_.begin(), chart_marks_.end(), x) - chart_marks_.begin());
  if (q.t) {
    if (!is_marked(q.base)) throw LeafSpaceError("interval point over an unmarked point");
    return x + Rational(below) + *q.t;
  }
  if (is_marked(q.base)) throw LeafSpaceError("plain point " + to_string(base(), q.base) + " is blown up");
  return x + Rational(below);
}

BlownPoint BlowupSpace::from_chart(const Rational& X) const {
  // Interval i occupies [m_i + i, m_i + i + 1]; these starts increase with i.
  std::size_t lo = 0, hi = chart_marks_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (chart_marks_[mid] + Rational(static_cast<long>(mid)) <= X) lo = mid + 1;
    else hi = mid;
  }
  if (lo == 0) return BlownPoint::plain(Point{base().root(), X});
  std::size_t i = lo - 1;
  Rational start = chart_marks_[i] + Rational(static_cast<long>(i));
  if (X <= start + Rational(1)) return BlownPoint::interval(Point{base().root(), chart_marks_[i]}, X - start);
  return BlownPoint::plain(Point{base().root(), X - Rational(static_cast<long>(i + 1))});
}

BlowupSpace build_blowup(const Action& action, const Point& marked, int depth) {
  return BlowupSpace(action, marked, depth);
}

// Blowing up points never creates or removes branches.
LeafSpaceKind classify(const BlowupSpace& B) { return classify(B.base()); }

BlownAction::BlownAction(BlowupSpace B, StabilizerData S) : B_(std::move(B)), S_(std::move(S)) {
  const Action& act = B_.action();
  auto check_word = [&](const Word& w, const std::string& what) {
    for (const Letter& l : w.letters())
      if (!act.has_generator(l.name))
        throw StabilizerDataError(what + " uses undeclared generator '" + l.name + "'");
  };

  std::set<std::string> k_names;
  for (const KGenerator& k : S_.k_generators) {
    if (!k_names.insert(k.name).second) throw StabilizerDataError("duplicate K generator '" + k.name + "'");
    check_word(k.word, "K generator '" + k.name + "'");
    if (act.apply(k.word, B_.marked()) != B_.marked())
      throw StabilizerDataError("K generator '" + k.name + "' does not fix the marked point");
    auto it = S_.phi.find(k.name);
    if (it == S_.phi.end()) throw StabilizerDataError("no phi image for K generator '" + k.name + "'");
    const PLMap& f = it->second;
    if (f(Rational(0)) != Rational(0) || f(Rational(1)) != Rational(1))
      throw StabilizerDataError("phi(" + k.name + ") must fix 0 and 1");
    phi_inv_.emplace(k.name, pl_invert(f));
  }
  for (const auto& [name, f] : S_.phi)
    if (!k_names.count(name)) throw StabilizerDataError("phi given for unknown K generator '" + name + "'");

  for (const auto& [word, rep] : S_.coset_table) {
    check_word(word, "coset table word");
    check_word(rep, "coset representative");
    Point p = act.apply(word, B_.marked());
    const OrbitPoint* o = B_.find(p);
    if (!o) throw StabilizerDataError("coset table word '" + word.str() + "' leaves the blown-up orbit");
    if (p == B_.marked() && !rep.empty())
      throw StabilizerDataError("the representative of K itself must be the empty word");
    rep_override_[static_cast<std::size_t>(o - B_.orbit().data())] = rep;
  }

  // Table of K-words by their reduced image in G, shortlex-first wins.
  const std::size_t m = S_.k_generators.size();
  if (m == 0) {
    k_search_length_ = 0;
  } else {
    std::size_t count = 1, layer = 2 * m;
    int len = 0;
    while (len < 64 && count + layer <= 50000) {
      count += layer;
      layer *= (2 * m - 1);
      ++len;
    }
    k_search_length_ = len;
  }
  std::vector<std::string> names;
  std::map<std::string, const Word*> image;
  for (const KGenerator& k : S_.k_generators) {
    names.push_back(k.name);
    image[k.name] = &k.word;
  }
  for_each_word(names, k_search_length_, [&](const Word& kw) {
    Word g;
    for (const Letter& l : kw.letters()) g = g * (l.exponent > 0 ? *image[l.name] : image[l.name]->inverse());
    k_table_.emplace(g.str(), kw);
  });
}

const Word& BlownAction::coset_rep(const Point& orbit_point) const {
  const OrbitPoint* o = B_.find(orbit_point);
  if (!o) throw AlphaError("orbit-escape", to_string(B_.base(), orbit_point) + " is not a blown-up orbit point");
  auto it = rep_override_.find(static_cast<std::size_t>(o - B_.orbit().data()));
  return it == rep_override_.end() ? o->rep : it->second;
}

std::optional<Word> BlownAction::decompose_in_k(const Word& w) const {
  auto it = k_table_.find(w.str());
  if (it == k_table_.end()) return std::nullopt;
  return it->second;
}

Rational BlownAction::phi_eval(const Word& k_word, const Rational& t) const {
  Rational s = t;
  const auto& ls = k_word.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
    s = it->exponent > 0 ? S_.phi.at(it->name)(s) : phi_inv_.at(it->name)(s);
  }
  return s;
}

BlownPoint BlownAction::marked_midpoint() const { return BlownPoint::interval(B_.marked(), Rational(1, 2)); }

BlownPoint BlownAction::alpha(const Word& h, const BlownPoint& q) const {
  const Action& act = B_.action();
  const LeafSpace& L = B_.base();
  if (canonical_point(L, q.base) != q.base)
    throw AlphaError("invalid-point", to_string(L, q.base) + " is not canonical");

  if (!q.t) {
    if (B_.is_marked(q.base)) throw AlphaError("invalid-point", to_string(L, q.base) + " is blown up");
    Point image = act.apply(h, q.base);
    if (B_.is_marked(image))
      throw AlphaError("orbit-escape", to_string(L, q.base) + " is carried onto the orbit beyond the blow-up depth");
    return BlownPoint::plain(image);
  }

  const Rational& t = *q.t;
  if (t.sign() < 0 || t > Rational(1)) throw AlphaError("invalid-point", "interval coordinate outside [0,1]");
  if (!B_.is_marked(q.base)) throw AlphaError("invalid-point", to_string(L, q.base) + " is not blown up");
  Point image = act.apply(h, q.base);
  if (!B_.is_marked(image))
    throw AlphaError("orbit-escape", "image " + to_string(L, image) + " lies beyond the blow-up depth");

  const Word& from_rep = coset_rep(q.base);
  const Word& to_rep = coset_rep(image);
  if (S_.validate_cosets) {
    for (const auto* pr : {&from_rep, &to_rep}) {
      Point at = pr == &from_rep ? q.base : image;
      if (act.apply(*pr, B_.marked()) != at)
        throw AlphaError("coset", "representative '" + pr->str() + "' does not carry the marked point to " +
                                      to_string(L, at));
    }
  }
  Word twist = to_rep.inverse() * h * from_rep;
  auto k_word = decompose_in_k(twist);
  if (!k_word)
    throw AlphaError("not-in-K", "twist '" + twist.str() + "' is not a word in the declared K generators");
  return BlownPoint::interval(image, phi_eval(*k_word, t));
}

BlownPoint alpha_apply(const BlownAction& A, const Word& h, const BlownPoint& q) { return A.alpha(h, q); }

std::optional<std::string> check_alpha_law(const BlownAction& A, const Word& h, const Word& r, const BlownPoint& q) {
  const LeafSpace& L = A.space().base();
  try {
    BlownPoint lhs = A.alpha(h * r, q);
    BlownPoint rhs = A.alpha(h, A.alpha(r, q));
    if (lhs != rhs) return "alpha_{hr}(q) = " + to_string(L, lhs) + " but alpha_h(alpha_r(q)) = " + to_string(L, rhs);
    if (h.empty() && r.empty() && lhs != q) return "alpha_1(q) = " + to_string(L, lhs) + " differs from q";
  } catch (const AlphaError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

AlphaCheck validate_alpha_action(const BlownAction& A, const std::vector<BlownPoint>& samples, int ball) {
  AlphaCheck out;
  const auto words = word_ball(A.action().generator_names(), ball);
  for (const Word& h : words) {
    for (const Word& r : words) {
      if (static_cast<int>(h.length() + r.length()) > ball) continue;
      for (const BlownPoint& q : samples) {
        ++out.checks;
        if (auto why = check_alpha_law(A, h, r, q)) {
          out.counterexample = AlphaCounterexample{h, r, q, *why};
          return out;
        }
      }
    }
  }
  return out;
}

std::vector<BlownPoint> sample_points(const BlownAction& A, const SampleSpec& spec) {
  const BlowupSpace& B = A.space();
  const LeafSpace& L = B.base();
  std::vector<BlownPoint> out;

  std::vector<Rational> ts;
  if (spec.per_interval >= 2) {
    for (int j = 0; j < spec.per_interval; ++j) ts.push_back(Rational(j, spec.per_interval - 1));
  }
  if (std::find(ts.begin(), ts.end(), Rational(1, 2)) == ts.end()) ts.push_back(Rational(1, 2));
  for (const OrbitPoint& o : B.orbit()) {
    if (o.depth > spec.interval_depth) break;
    for (const Rational& t : ts) out.push_back(BlownPoint::interval(o.point, t));
  }

  const auto words = word_ball(A.action().generator_names(), spec.ball);
  std::set<Point> seen;
  auto try_plain = [&](const Point& raw) {
    Point p = canonical_point(L, raw);
    if (B.is_marked(p) || !seen.insert(p).second) return;
    for (const Word& w : words)
      if (B.is_marked(A.action().apply(w, p))) return;
    out.push_back(BlownPoint::plain(p));
  };
  for (const Homeo& h : A.action().generators())
    for (std::size_t b = 0; b < L.size(); ++b)
      for (const Knot& k : h.branch_pl[b].knots()) try_plain(Point{static_cast<BranchIndex>(b), k.x});
  for (int k = 0; k < spec.plain; ++k) {
    Rational c = Rational(k - spec.plain / 2) * Rational(5, 3) + Rational(1, 7);
    try_plain(Point{static_cast<BranchIndex>(k % static_cast<int>(L.size())), c});
  }
  return out;
}

std::optional<std::string> stabilizer_word_check(const BlownAction& A, const Word& w) {
  const Action& act = A.action();
  const Point& marked = A.space().marked();
  const BlownPoint mid = A.marked_midpoint();
  if (w.empty()) return std::nullopt;
  if (act.apply(w, marked) != marked) {
    // g outside K: the marked point itself moves.
    if (static_cast<int>(w.length()) > A.space().depth()) return std::nullopt;
    try {
      if (A.alpha(w, mid) == mid) return "alpha fixes the marked midpoint although the word moves the marked point";
    } catch (const AlphaError& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  }
  auto k_word = A.decompose_in_k(w);
  if (!k_word) return "fixes the marked point but is not in the declared K";
  if (A.phi_eval(*k_word, Rational(1, 2)) == Rational(1, 2)) return "phi(" + k_word->str() + ") fixes 1/2";
  return std::nullopt;
}

StabilizerCheck stabilizer_check(const BlownAction& A, int ball) {
  StabilizerCheck out;
  for (const Word& w : word_ball(A.action().generator_names(), ball)) {
    if (w.empty()) continue;
    ++out.words;
    if (auto why = stabilizer_word_check(A, w)) {
      out.fixing_word = w;
      out.reason = *why;
      return out;
    }
  }
  return out;
}

std::optional<Word> positive_ray_orbit_search(const BlownAction& A, const Rational& n, int ball) {
  const Action& act = A.action();
  const LeafSpace& L = act.space();
  const Point& marked = A.space().marked();
  for (const Word& w : word_ball(act.generator_names(), ball)) {
    Point p = act.apply(w, marked);
    if (L.chart_contains(L.root(), p) && p.coord > n) return w;
  }
  return std::nullopt;
}

namespace {

// A root-chart coordinate beyond which alpha_w is plain, affine and lands
// in the root chart beyond every blown-up interval.
Rational blown_tail_start(const BlownAction& A, const Homeo& H) {
  const BlowupSpace& B = A.space();
  const LeafSpace& L = B.base();
  const PLMap& f = H.branch_pl[static_cast<std::size_t>(L.root())];
  Rational s(0);
  if (auto t = overlap_ray(L, H, Embedding::root_chart(L))) s = max(s, *t);
  if (!f.is_affine()) s = max(s, f.knots().back().x);
  for (const OrbitPoint& o : B.orbit()) {
    s = max(s, o.point.coord);
    s = max(s, f.inverse_at(o.point.coord));
  }
  return s + Rational(1);
}

}  // namespace

Germ blown_germ(const BlownAction& A, const Word& w) {
  const BlowupSpace& B = A.space();
  Homeo H = A.action().evaluate(w);
  Rational X1 = B.to_chart(BlownPoint::plain(Point{B.base().root(), blown_tail_start(A, H)}));
  Rational X2 = X1 + Rational(1);
  Rational Y1 = B.to_chart(A.alpha(w, B.from_chart(X1)));
  Rational Y2 = B.to_chart(A.alpha(w, B.from_chart(X2)));
  Rational slope = (Y2 - Y1) / (X2 - X1);
  return Germ(slope, Y1 - slope * X1);
}

std::optional<Rational> blown_witness(const BlownAction& A, const Word& w, const Rational& n) {
  const BlowupSpace& B = A.space();
  Homeo H = A.action().evaluate(w);
  Rational X = max(n, B.to_chart(BlownPoint::plain(Point{B.base().root(), blown_tail_start(A, H)}))) + Rational(1);
  for (int i = 0; i < 2; ++i, X += Rational(1)) {
    BlownPoint q = B.from_chart(X);
    if (A.alpha(w, q) != q) return X;
  }
  return std::nullopt;
}

std::optional<std::string> injectivity_word_check(const BlownAction& A, const Word& w,
                                                  const std::vector<Rational>& probes) {
  try {
    if (blown_germ(A, w).is_identity()) return "germ of alpha_w in the blown-up chart is the identity";
    for (const Rational& n : probes)
      if (!blown_witness(A, w, n)) return "alpha_w fixes e(m) for every m beyond " + n.str();
  } catch (const AlphaError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

InjectivityCheck injectivity_certificate(const BlownAction& A, int ball, const std::vector<Rational>& probes) {
  InjectivityCheck out;
  for (const Word& w : word_ball(A.action().generator_names(), ball)) {
    if (w.empty()) continue;
    ++out.words;
    if (auto why = injectivity_word_check(A, w, probes)) {
      out.failing_word = w;
      out.reason = *why;
      return out;
    }
  }
  return out;
}

std::string to_string(const LeafSpace& L, const BlownPoint& q) {
  if (!q.t) return to_string(L, q.base);
  return "{" + to_string(L, q.base) + "} x {" + q.t->str() + "}";
}

}  // namespace germs
