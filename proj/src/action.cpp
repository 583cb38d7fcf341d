#include "germs/action.hpp"

#include <algorithm>
#include <set>

namespace germs {

Homeo Homeo::identity(const LeafSpace& L, std::string name) {
  return uniform(L, PLMap::identity(), std::move(name));
}

Homeo Homeo::uniform(const LeafSpace& L, const PLMap& f, std::string name) {
  Homeo h;
  h.name = std::move(name);
  for (std::size_t b = 0; b < L.size(); ++b) {
    h.branch_map.push_back(static_cast<BranchIndex>(b));
    h.branch_pl.push_back(f);
  }
  return h;
}

std::optional<Violation> validate_homeo(const LeafSpace& L, const Homeo& h) {
  const std::size_t n = L.size();
  if (h.branch_map.size() != n || h.branch_pl.size() != n)
    return Violation{"bijection", "branch map must cover all " + std::to_string(n) + " branches"};
  std::vector<bool> hit(n, false);
  for (std::size_t b = 0; b < n; ++b) {
    BranchIndex t = h.branch_map[b];
    if (t < 0 || static_cast<std::size_t>(t) >= n)
      return Violation{"unknown-branch", "branch '" + L.id_of(static_cast<BranchIndex>(b)) + "' maps outside the tree"};
    if (hit[static_cast<std::size_t>(t)])
      return Violation{"bijection", "branch '" + L.id_of(t) + "' is hit twice"};
    hit[static_cast<std::size_t>(t)] = true;
  }
  for (std::size_t b = 0; b < n; ++b) {
    const PLMap& f = h.branch_pl[b];
    if (f.left_slope().sign() <= 0 || f.right_slope().sign() <= 0)
      return Violation{"orientation", "branch '" + L.id_of(static_cast<BranchIndex>(b)) + "' reverses orientation"};
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      auto bu = static_cast<BranchIndex>(u), bv = static_cast<BranchIndex>(v);
      Rational g = *L.glue(bu, bv);
      Rational image = h.branch_pl[u](g);
      Rational target = *L.glue(h.branch_map[u], h.branch_map[v]);
      if (image != target)
        return Violation{"compatibility", "branches '" + L.id_of(bu) + "' and '" + L.id_of(bv) + "' are glued above " +
                                              g.str() + ", which maps to " + image.str() + " but their images are glued above " +
                                              target.str()};
      if (!pl_agree_from(h.branch_pl[u], h.branch_pl[v], g))
        return Violation{"compatibility", "maps on branches '" + L.id_of(bu) + "' and '" + L.id_of(bv) +
                                              "' differ on their shared ray above " + g.str()};
    }
  }
  return std::nullopt;
}

namespace {

template <class T>
const T* lookup(const std::vector<std::pair<std::string, T>>& entries, const std::string& key) {
  const T* found = nullptr;
  for (const auto& [k, v] : entries)
    if (k == key) found = &v;
  return found;
}

PLMap normalize_or_throw(const RawPL& raw, const std::string& branch) {
  try {
    return pl_normalize(raw);
  } catch (const InvalidHomeomorphism& e) {
    std::string msg = e.what();
    std::string kind = msg.rfind("orientation", 0) == 0 ? "orientation" : "malformed";
    throw HomeoValidationError(Violation{kind, "branch '" + branch + "': " + msg});
  }
}

// Coordinate map declared (or inherited) for `branch` in a draft.
PLMap draft_pl(const LeafSpace& L, const HomeoDraft& d, BranchIndex branch) {
  const std::string& id = L.id_of(branch);
  if (const RawPL* raw = lookup(d.branch_pl, id)) return normalize_or_throw(*raw, id);
  if (branch == L.root()) return PLMap::identity();
  return draft_pl(L, d, L.branch(branch).parent);
}

}  // namespace

Homeo build_homeo(const LeafSpace& L, const HomeoDraft& d) {
  std::set<std::string> seen;
  for (const auto& [from, to] : d.branch_map) {
    if (!seen.insert(from).second) throw HomeoValidationError({"bijection", "branch '" + from + "' listed twice"});
    if (!L.find(from)) throw HomeoValidationError({"unknown-branch", "branch '" + from + "' is not in the leaf space"});
    if (!L.find(to)) throw HomeoValidationError({"unknown-branch", "branch '" + to + "' is not in the leaf space"});
  }
  for (const auto& [id, raw] : d.branch_pl)
    if (!L.find(id)) throw HomeoValidationError({"unknown-branch", "branch '" + id + "' is not in the leaf space"});

  Homeo h;
  h.name = d.name;
  for (std::size_t b = 0; b < L.size(); ++b) {
    auto bi = static_cast<BranchIndex>(b);
    const std::string* to = lookup(d.branch_map, L.id_of(bi));
    h.branch_map.push_back(to ? L.index_of(*to) : bi);
    h.branch_pl.push_back(draft_pl(L, d, bi));
  }
  if (auto v = validate_homeo(L, h)) throw HomeoValidationError(*v);
  return h;
}

Point apply_homeo(const LeafSpace& L, const Homeo& h, const Point& p) {
  if (p.branch < 0 || static_cast<std::size_t>(p.branch) >= h.branch_map.size())
    throw LeafSpaceError("unknown branch index " + std::to_string(p.branch));
  auto b = static_cast<std::size_t>(p.branch);
  return canonical_point(L, Point{h.branch_map[b], h.branch_pl[b](p.coord)});
}

Homeo compose(const Homeo& f, const Homeo& g) {
  Homeo h;
  h.name = f.name + " " + g.name;
  for (std::size_t b = 0; b < g.branch_map.size(); ++b) {
    auto mid = static_cast<std::size_t>(g.branch_map[b]);
    h.branch_map.push_back(f.branch_map[mid]);
    h.branch_pl.push_back(pl_compose(f.branch_pl[mid], g.branch_pl[b]));
  }
  return h;
}

Homeo inverse(const Homeo& h) {
  Homeo r;
  r.name = h.name + "^-1";
  r.branch_map.resize(h.branch_map.size());
  r.branch_pl.resize(h.branch_pl.size());
  for (std::size_t b = 0; b < h.branch_map.size(); ++b) {
    auto t = static_cast<std::size_t>(h.branch_map[b]);
    r.branch_map[t] = static_cast<BranchIndex>(b);
    r.branch_pl[t] = pl_invert(h.branch_pl[b]);
  }
  return r;
}

std::optional<Rational> overlap_ray(const LeafSpace& L, const Homeo& h, const Embedding& e) {
  BranchIndex image = h.branch_map.at(static_cast<std::size_t>(e.chart));
  if (image == e.chart) return std::nullopt;
  return h.branch_pl[static_cast<std::size_t>(e.chart)].inverse_at(*L.glue(image, e.chart));
}

CommonOverlap common_overlap(const LeafSpace& L, const std::vector<Homeo>& family, const Embedding& e) {
  CommonOverlap out;
  for (const Homeo& h : family) {
    auto g = L.glue(h.branch_map.at(static_cast<std::size_t>(e.chart)), e.chart);
    if (g && (!out.tau || *out.tau < *g)) out.tau = *g;
  }
  for (const Homeo& h : family) {
    if (out.tau) out.thresholds.emplace_back(h.branch_pl[static_cast<std::size_t>(e.chart)].inverse_at(*out.tau));
    else out.thresholds.emplace_back(std::nullopt);
  }
  return out;
}

namespace {

// Beyond this point (in e-coordinates) h o e lands in e(R) and the chart map
// of h is affine.
Rational tail_start(const LeafSpace& L, const Homeo& h, const Embedding& e, const Rational& floor) {
  Rational s = floor;
  if (auto t = overlap_ray(L, h, e)) s = max(s, *t);
  const PLMap& f = h.branch_pl[static_cast<std::size_t>(e.chart)];
  if (!f.is_affine()) s = max(s, f.knots().back().x);
  return s;
}

Rational chart_coordinate(const LeafSpace& L, const Embedding& e, const Point& p) {
  if (!L.chart_contains(e.chart, p)) throw ActionError("point " + to_string(L, p) + " is outside the chart");
  return p.coord;
}

}  // namespace

Germ induced_germ_beyond(const LeafSpace& L, const Homeo& h, const Embedding& e, const Rational& threshold) {
  Rational x1 = tail_start(L, h, e, threshold) + Rational(1);
  Rational x2 = x1 + Rational(1);
  Rational y1 = chart_coordinate(L, e, apply_homeo(L, h, e(L, x1)));
  Rational y2 = chart_coordinate(L, e, apply_homeo(L, h, e(L, x2)));
  Rational slope = (y2 - y1) / (x2 - x1);
  return Germ(slope, y1 - slope * x1);
}

Germ induced_germ(const LeafSpace& L, const Homeo& h, const Embedding& e) {
  Rational start = overlap_ray(L, h, e).value_or(Rational(0));
  return induced_germ_beyond(L, h, e, start);
}

std::optional<Rational> nontriviality_witness(const LeafSpace& L, const Homeo& h, const Embedding& e,
                                              const Rational& n) {
  Rational m = tail_start(L, h, e, n) + Rational(1);
  for (int i = 0; i < 2; ++i, m += Rational(1)) {
    Point p = e(L, m);
    if (apply_homeo(L, h, p) != p) return m;
  }
  // Affine on the tail and fixing two points there: the identity near +inf.
  return std::nullopt;
}

Action::Action(LeafSpace L, std::vector<Homeo> generators) : L_(std::move(L)), gens_(std::move(generators)) {
  for (const Homeo& h : gens_)
    if (auto v = validate_homeo(L_, h)) throw HomeoValidationError(*v);
  index_generators();
}

Action::Action(LeafSpace L, const std::vector<HomeoDraft>& drafts, ExtensionPolicy policy) : L_(std::move(L)) {
  // Lazy extension: a branch named only as the image of a non-root branch b
  // is added under the image of b's parent, departing at the image of b's
  // departure.
  for (bool progress = policy.enabled; progress;) {
    progress = false;
    for (const HomeoDraft& d : drafts) {
      for (const auto& [from, to] : d.branch_map) {
        if (L_.find(to)) continue;
        auto src = L_.find(from);
        if (!src || *src == L_.root()) continue;
        BranchIndex parent = L_.branch(*src).parent;
        const std::string* pimage_id = lookup(d.branch_map, L_.id_of(parent));
        auto pimage = pimage_id ? L_.find(*pimage_id) : std::optional<BranchIndex>(parent);
        if (!pimage) continue;
        if (L_.depth(*pimage) + 1 > policy.max_depth)
          throw ActionError("lazy extension of branch '" + to + "' exceeds depth bound " + std::to_string(policy.max_depth));
        Rational departure = draft_pl(L_, d, parent)(*L_.branch(*src).departure);
        L_.add_branch(to, *pimage, departure);
        progress = true;
      }
    }
  }
  for (const HomeoDraft& d : drafts) gens_.push_back(build_homeo(L_, d));
  index_generators();
}

void Action::index_generators() {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!index_.emplace(gens_[i].name, i).second) throw ActionError("duplicate generator '" + gens_[i].name + "'");
    inverses_.push_back(inverse(gens_[i]));
  }
}

std::vector<std::string> Action::generator_names() const {
  std::vector<std::string> names;
  for (const Homeo& h : gens_) names.push_back(h.name);
  return names;
}

const Homeo& Action::generator(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ActionError("undeclared generator '" + name + "'");
  return gens_[it->second];
}

const Homeo& Action::letter_map(const Letter& l) const {
  auto it = index_.find(l.name);
  if (it == index_.end()) throw ActionError("undeclared generator '" + l.name + "'");
  return l.exponent > 0 ? gens_[it->second] : inverses_[it->second];
}

Homeo Action::evaluate(const Word& w) const {
  Homeo h = Homeo::identity(L_);
  for (const Letter& l : w.letters()) h = compose(h, letter_map(l));
  h.name = w.empty() ? "1" : w.str();
  return h;
}

Point Action::apply(const Word& w, const Point& p) const {
  Point q = canonical_point(L_, p);
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) q = apply_homeo(L_, letter_map(*it), q);
  return q;
}

Action::ChartMap Action::chart_map(const Word& w, BranchIndex b) const {
  ChartMap c{b, PLMap()};
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
    const Homeo& l = letter_map(*it);
    auto i = static_cast<std::size_t>(c.image);
    c.map = pl_compose(l.branch_pl[i], c.map);
    c.image = l.branch_map[i];
  }
  return c;
}

Germ induced_germ(const Action& A, const Word& w) {
  Embedding e = A.root_embedding();
  Action::ChartMap c = A.chart_map(w, e.chart);
  // Only the chart's own entry is read below.
  Homeo h = Homeo::identity(A.space());
  h.branch_map[static_cast<std::size_t>(e.chart)] = c.image;
  h.branch_pl[static_cast<std::size_t>(e.chart)] = c.map;
  return induced_germ(A.space(), h, e);
}

DWordResult evaluate_d_word(const Action& A, const Word& w) {
  DWordResult r;
  r.composed = induced_germ(A, w);
  for (const Letter& l : w.letters()) r.letterwise = germ_mul(r.letterwise, induced_germ(A, Word({l})));
  return r;
}

}  // namespace germs
