#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "germs/germ.hpp"
#include "germs/leafspace.hpp"
#include "germs/plmap.hpp"
#include "germs/word.hpp"

namespace germs {

// Orientation-preserving homeomorphism of a LeafSpace: branch b is carried
// onto branch branch_map[b] by the coordinate map branch_pl[b].
struct Homeo {
  std::string name;
  std::vector<BranchIndex> branch_map;
  std::vector<PLMap> branch_pl;

  static Homeo identity(const LeafSpace& L, std::string name = "1");
  // Same coordinate map on every branch, branches fixed.
  static Homeo uniform(const LeafSpace& L, const PLMap& f, std::string name);
};

// Homeomorphism as declared in a file, before validation.
struct HomeoDraft {
  std::string name;
  std::vector<std::pair<std::string, std::string>> branch_map;  // absent => fixed
  std::vector<std::pair<std::string, RawPL>> branch_pl;         // absent => parent's map
};

struct Violation {
  std::string kind;  // "bijection", "orientation", "compatibility", "unknown-branch"
  std::string detail;
};

class ActionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HomeoValidationError : public ActionError {
 public:
  explicit HomeoValidationError(Violation v)
      : ActionError(v.kind + ": " + v.detail), violation(std::move(v)) {}
  Violation violation;
};

// std::nullopt means the homeomorphism is valid.
std::optional<Violation> validate_homeo(const LeafSpace& L, const Homeo& h);

// Resolves names and defaults, normalizes every PL piece and validates.
// Throws HomeoValidationError.
Homeo build_homeo(const LeafSpace& L, const HomeoDraft& draft);

Point apply_homeo(const LeafSpace& L, const Homeo& h, const Point& p);

// f o g.
Homeo compose(const Homeo& f, const Homeo& g);
Homeo inverse(const Homeo& h);

// The distinguished chart e: R -> L given by the coordinates of one branch
// (the root by default). e(+inf) is the positive end, e(-inf) that branch's
// negative end.
struct Embedding {
  BranchIndex chart = 0;

  static Embedding root_chart(const LeafSpace& L) { return Embedding{L.root()}; }
  Point operator()(const LeafSpace& L, const Rational& x) const { return canonical_point(L, Point{chart, x}); }
};

// Least t with h(e(x)) in e(R) for all x > t; std::nullopt when h maps
// e(R) onto itself (the overlap is the full line).
std::optional<Rational> overlap_ray(const LeafSpace& L, const Homeo& h, const Embedding& e);

// For a finite family g_1..g_n: the ray (tau, +inf) of e-coordinates lying in
// every g_i e(R), and for each g_i a t_i with g_i e((t_i, +inf)) inside that
// common overlap. std::nullopt entries mean "the whole line".
struct CommonOverlap {
  std::optional<Rational> tau;
  std::vector<std::optional<Rational>> thresholds;
};
CommonOverlap common_overlap(const LeafSpace& L, const std::vector<Homeo>& family, const Embedding& e);

// Germ at +inf of x -> e^-1(h(e(x))) on the overlap ray.
Germ induced_germ(const LeafSpace& L, const Homeo& h, const Embedding& e);
// Same, reading the map only beyond `threshold` (which may exceed the
// overlap threshold).
Germ induced_germ_beyond(const LeafSpace& L, const Homeo& h, const Embedding& e, const Rational& threshold);

// Some m > n with h(e(m)) != e(m), or std::nullopt when h fixes e(x) for all
// x beyond some ray.
std::optional<Rational> nontriviality_witness(const LeafSpace& L, const Homeo& h, const Embedding& e,
                                              const Rational& n);

struct ExtensionPolicy {
  bool enabled = false;
  int max_depth = 0;
};

// A leaf space together with named generators acting on it. Words are
// evaluated in the free group on the generators.
class Action {
 public:
  Action(LeafSpace L, const std::vector<HomeoDraft>& drafts, ExtensionPolicy policy = {});
  Action(LeafSpace L, std::vector<Homeo> generators);

  const LeafSpace& space() const { return L_; }
  const std::vector<Homeo>& generators() const { return gens_; }
  std::vector<std::string> generator_names() const;
  const Homeo& generator(const std::string& name) const;
  bool has_generator(const std::string& name) const { return index_.count(name) > 0; }

  // Throws ActionError on undeclared generator names.
  Homeo evaluate(const Word& w) const;
  // Letter by letter, without composing PL maps.
  Point apply(const Word& w, const Point& p) const;

  // Where evaluate(w) sends branch b, and by which coordinate map. Composes
  // a single chain of maps rather than one per branch.
  struct ChartMap {
    BranchIndex image;
    PLMap map;
  };
  ChartMap chart_map(const Word& w, BranchIndex b) const;

  Embedding root_embedding() const { return Embedding::root_chart(L_); }

 private:
  const Homeo& letter_map(const Letter& l) const;
  void index_generators();

  LeafSpace L_;
  std::vector<Homeo> gens_;
  std::vector<Homeo> inverses_;
  std::map<std::string, std::size_t> index_;
};

Germ induced_germ(const Action& A, const Word& w);

struct DWordResult {
  Germ composed;    // induced germ of the composed homeomorphism
  Germ letterwise;  // product of the letters' induced germs
  bool agree() const { return composed == letterwise; }
};
DWordResult evaluate_d_word(const Action& A, const Word& w);

}  // namespace germs
