#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "germs/rational.hpp"

namespace germs {

using BranchIndex = int;

class LeafSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Side { Negative, Positive };
enum class LeafSpaceKind { Line, OneSidedNegative, OneSidedPositive };

std::string to_string(Side s);
std::string to_string(LeafSpaceKind k);

struct Branch {
  std::string id;
  BranchIndex parent = -1;
  std::optional<Rational> departure;  // empty only for the root
};

struct Point {
  BranchIndex branch = 0;
  Rational coord;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Finite branch tree standing in for a simply connected non-Hausdorff
// 1-manifold that branches on one side.
//
// Every branch is a copy of the line. Internally the branching is always on
// the negative side: a child departing its parent at t shares the open ray
// (t, +inf) with the parent, coordinate for coordinate. A space declared with
// positive-side branching is stored in the mirrored chart x -> -x; the I/O
// layer translates at the boundary.
class LeafSpace {
 public:
  struct BranchSpec {
    std::string id;
    std::optional<std::string> parent;
    std::optional<Rational> departure;
  };

  // Branch specs in file order, departures already in the internal chart.
  // Throws LeafSpaceError naming the offending branch.
  LeafSpace(std::vector<BranchSpec> specs, Side side);

  static LeafSpace line(std::string root_id = "root");

  Side side() const { return side_; }
  BranchIndex root() const { return root_; }
  std::size_t size() const { return branches_.size(); }
  const Branch& branch(BranchIndex b) const { return branches_.at(static_cast<std::size_t>(b)); }
  const std::vector<Branch>& branches() const { return branches_; }
  BranchIndex index_of(const std::string& id) const;
  std::optional<BranchIndex> find(const std::string& id) const;
  const std::string& id_of(BranchIndex b) const { return branch(b).id; }
  int depth(BranchIndex b) const;

  // Departure coordinate above which branches u and v are glued; empty when
  // u == v (a branch is glued to itself everywhere).
  std::optional<Rational> glue(BranchIndex u, BranchIndex v) const;

  // Does the chart of `b` contain the (canonical) point p?
  bool chart_contains(BranchIndex b, const Point& p) const;

  // Adds a branch; used by lazy tree extension.
  BranchIndex add_branch(std::string id, BranchIndex parent, Rational departure);

 private:
  void check_index(BranchIndex b) const;

  std::vector<Branch> branches_;
  std::map<std::string, BranchIndex> by_id_;
  BranchIndex root_ = 0;
  Side side_ = Side::Negative;
};

// Root-most representative of p's gluing class.
Point canonical_point(const LeafSpace& L, const Point& p);

// Canonical points distinct from p that cannot be separated from it.
std::vector<Point> non_separated(const LeafSpace& L, const Point& p);

LeafSpaceKind classify(const LeafSpace& L);

// One negative end per branch; the positive end is the root ray at +inf.
std::vector<BranchIndex> negative_ends(const LeafSpace& L);

std::string to_string(const LeafSpace& L, const Point& p);

}  // namespace germs
