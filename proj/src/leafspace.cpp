#include "germs/leafspace.hpp"

#include <algorithm>
#include <set>

namespace germs {

std::string to_string(Side s) { return s == Side::Negative ? "negative" : "positive"; }

std::string to_string(LeafSpaceKind k) {
  switch (k) {
    case LeafSpaceKind::Line: return "line";
    case LeafSpaceKind::OneSidedNegative: return "one_sided_negative";
    case LeafSpaceKind::OneSidedPositive: return "one_sided_positive";
  }
  return "?";
}

LeafSpace::LeafSpace(std::vector<BranchSpec> specs, Side side) : side_(side) {
  if (specs.empty()) throw LeafSpaceError("leaf space has no branches");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!by_id_.emplace(specs[i].id, static_cast<BranchIndex>(i)).second)
      throw LeafSpaceError("branch '" + specs[i].id + "': duplicate id");
  }
  int roots = 0;
  branches_.resize(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    Branch& b = branches_[i];
    b.id = s.id;
    if (!s.parent) {
      if (s.departure) throw LeafSpaceError("branch '" + s.id + "': root cannot have a departure");
      root_ = static_cast<BranchIndex>(i);
      ++roots;
      continue;
    }
    auto it = by_id_.find(*s.parent);
    if (it == by_id_.end())
      throw LeafSpaceError("branch '" + s.id + "': departs from undefined parent '" + *s.parent + "'");
    if (!s.departure) throw LeafSpaceError("branch '" + s.id + "': missing departure coordinate");
    b.parent = it->second;
    b.departure = s.departure;
  }
  if (roots != 1) throw LeafSpaceError("leaf space needs exactly one root, found " + std::to_string(roots));

  for (std::size_t i = 0; i < branches_.size(); ++i) {
    BranchIndex cur = static_cast<BranchIndex>(i);
    for (std::size_t steps = 0; cur != root_; ++steps) {
      if (steps > branches_.size())
        throw LeafSpaceError("branch '" + branches_[i].id + "': parent chain does not reach the root");
      cur = branches_[static_cast<std::size_t>(cur)].parent;
    }
  }
}

LeafSpace LeafSpace::line(std::string root_id) {
  return LeafSpace({BranchSpec{std::move(root_id), std::nullopt, std::nullopt}}, Side::Negative);
}

void LeafSpace::check_index(BranchIndex b) const {
  if (b < 0 || static_cast<std::size_t>(b) >= branches_.size())
    throw LeafSpaceError("unknown branch index " + std::to_string(b));
}

BranchIndex LeafSpace::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw LeafSpaceError("unknown branch '" + id + "'");
  return it->second;
}

std::optional<BranchIndex> LeafSpace::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

int LeafSpace::depth(BranchIndex b) const {
  check_index(b);
  int d = 0;
  while (b != root_) {
    b = branch(b).parent;
    ++d;
  }
  return d;
}

std::optional<Rational> LeafSpace::glue(BranchIndex u, BranchIndex v) const {
  check_index(u);
  check_index(v);
  if (u == v) return std::nullopt;
  std::optional<Rational> best;
  auto bump = [&](BranchIndex b) {
    const Rational& t = *branch(b).departure;
    if (!best || *best < t) best = t;
  };
  int du = depth(u), dv = depth(v);
  while (du > dv) { bump(u); u = branch(u).parent; --du; }
  while (dv > du) { bump(v); v = branch(v).parent; --dv; }
  while (u != v) {
    bump(u);
    bump(v);
    u = branch(u).parent;
    v = branch(v).parent;
  }
  return best;
}

bool LeafSpace::chart_contains(BranchIndex b, const Point& p) const {
  return canonical_point(*this, Point{b, p.coord}) == p;
}

BranchIndex LeafSpace::add_branch(std::string id, BranchIndex parent, Rational departure) {
  check_index(parent);
  if (by_id_.count(id)) throw LeafSpaceError("branch '" + id + "': duplicate id");
  auto idx = static_cast<BranchIndex>(branches_.size());
  by_id_.emplace(id, idx);
  branches_.push_back(Branch{std::move(id), parent, std::move(departure)});
  return idx;
}

Point canonical_point(const LeafSpace& L, const Point& p) {
  BranchIndex b = p.branch;
  if (b < 0 || static_cast<std::size_t>(b) >= L.size())
    throw LeafSpaceError("unknown branch index " + std::to_string(b));
  while (b != L.root() && p.coord > *L.branch(b).departure) b = L.branch(b).parent;
  return Point{b, p.coord};
}

namespace {

// Branch owning the points immediately to the right of p.
BranchIndex right_owner(const LeafSpace& L, const Point& p) {
  BranchIndex b = p.branch;
  while (b != L.root() && p.coord >= *L.branch(b).departure) b = L.branch(b).parent;
  return b;
}

}  // namespace

std::vector<Point> non_separated(const LeafSpace& L, const Point& p) {
  Point cp = canonical_point(L, p);
  BranchIndex owner = right_owner(L, cp);
  std::set<Point> found;
  for (std::size_t b = 0; b < L.size(); ++b) {
    Point q = canonical_point(L, Point{static_cast<BranchIndex>(b), cp.coord});
    if (q != cp && right_owner(L, q) == owner) found.insert(q);
  }
  return {found.begin(), found.end()};
}

LeafSpaceKind classify(const LeafSpace& L) {
  if (L.size() == 1) return LeafSpaceKind::Line;
  return L.side() == Side::Negative ? LeafSpaceKind::OneSidedNegative : LeafSpaceKind::OneSidedPositive;
}

std::vector<BranchIndex> negative_ends(const LeafSpace& L) {
  if (L.side() != Side::Negative)
    throw LeafSpaceError("negative_ends: leaf space branches on the positive side");
  std::vector<BranchIndex> ends(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) ends[i] = static_cast<BranchIndex>(i);
  return ends;
}

std::string to_string(const LeafSpace& L, const Point& p) {
  return "(" + L.id_of(p.branch) + ", " + p.coord.str() + ")";
}

}  // namespace germs
