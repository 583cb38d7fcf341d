#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "germs/action.hpp"
#include "germs/germ.hpp"
#include "germs/leafspace.hpp"
#include "germs/word.hpp"

namespace germs {

class StabilizerDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while evaluating the twisted action.
class AlphaError : public std::runtime_error {
 public:
  AlphaError(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind(std::move(kind)) {}
  std::string kind;  // "orbit-escape", "coset", "not-in-K", "invalid-point"
};

struct OrbitPoint {
  Point point;
  Word rep;  // shortest (then shortlex-first) word carrying the marked point here
  int depth = 0;
};

// A point of the blown-up space: a plain point of the base leaf space, or a
// point {p} x {t} of the interval replacing an orbit point p.
struct BlownPoint {
  Point base;
  std::optional<Rational> t;

  static BlownPoint plain(Point p) { return BlownPoint{std::move(p), std::nullopt}; }
  static BlownPoint interval(Point p, Rational t) { return BlownPoint{std::move(p), std::move(t)}; }
  bool on_interval() const { return t.has_value(); }

  friend bool operator==(const BlownPoint&, const BlownPoint&) = default;
};

// Base leaf space with the orbit of the marked point (to a word-length
// bound) blown up into unit intervals.
class BlowupSpace {
 public:
  BlowupSpace(Action action, Point marked, int depth);

  const Action& action() const { return action_; }
  const LeafSpace& base() const { return action_.space(); }
  const Point& marked() const { return marked_; }
  int depth() const { return depth_; }
  const std::vector<OrbitPoint>& orbit() const { return orbit_; }
  const OrbitPoint* find(const Point& p) const;
  bool is_marked(const Point& p) const { return find(p) != nullptr; }

  // Blown-up root chart: each orbit point on the root chart is replaced by an
  // interval of unit length, shifting everything above it up by one.
  std::size_t chart_intervals() const { return chart_marks_.size(); }
  Rational to_chart(const BlownPoint& q) const;
  BlownPoint from_chart(const Rational& X) const;

 private:
  Action action_;
  Point marked_;
  int depth_;
  std::vector<OrbitPoint> orbit_;
  std::map<Point, std::size_t> lookup_;
  std::vector<Rational> chart_marks_;  // sorted root-chart coordinates of orbit points
};

BlowupSpace build_blowup(const Action& action, const Point& marked, int depth);

LeafSpaceKind classify(const BlowupSpace& B);

struct KGenerator {
  std::string name;
  Word word;
};

// Declared stabilizer K of the marked point, its action phi on [0,1] and
// the coset representatives x_{gK}.
struct StabilizerData {
  std::vector<KGenerator> k_generators;
  std::map<std::string, PLMap> phi;  // keyed by K-generator name
  // Explicit representatives: the coset of `word` is represented by `rep`.
  // Cosets not listed use the orbit's shortest word.
  std::vector<std::pair<Word, Word>> coset_table;
  // Check every representative against the action before using it.
  bool validate_cosets = true;
};

// Blow-up plus stabilizer data: everything needed to evaluate alpha.
class BlownAction {
 public:
  // Throws StabilizerDataError for structurally invalid data (phi not fixing
  // 0 and 1, unknown names, non-trivial representative of K itself).
  BlownAction(BlowupSpace B, StabilizerData S);

  const BlowupSpace& space() const { return B_; }
  const StabilizerData& stabilizer() const { return S_; }
  const Action& action() const { return B_.action(); }

  const Word& coset_rep(const Point& orbit_point) const;

  // Expresses a G-word as a word in the K-generator names, searching K-words
  // up to the configured length.
  std::optional<Word> decompose_in_k(const Word& w) const;
  Rational phi_eval(const Word& k_word, const Rational& t) const;

  BlownPoint alpha(const Word& h, const BlownPoint& q) const;

  BlownPoint marked_midpoint() const;

 private:
  BlowupSpace B_;
  StabilizerData S_;
  std::map<std::size_t, Word> rep_override_;       // keyed by orbit index
  std::unordered_map<std::string, Word> k_table_;  // G-word string -> K-word
  std::map<std::string, PLMap> phi_inv_;
  int k_search_length_ = 0;
};

BlownPoint alpha_apply(const BlownAction& A, const Word& h, const BlownPoint& q);

struct AlphaCounterexample {
  Word h;
  Word r;
  BlownPoint q;
  std::string reason;
};

struct AlphaCheck {
  std::size_t checks = 0;
  std::optional<AlphaCounterexample> counterexample;
  bool ok() const { return !counterexample; }
};

// alpha_{hr}(q) == alpha_h(alpha_r(q)) for all reduced h, r with
// |h| + |r| <= ball, and alpha_1 == id, on every sample.
AlphaCheck validate_alpha_action(const BlownAction& A, const std::vector<BlownPoint>& samples, int ball);

// Replays one (h, r, q) triple; returns the failure reason, if any.
std::optional<std::string> check_alpha_law(const BlownAction& A, const Word& h, const Word& r, const BlownPoint& q);

struct SampleSpec {
  int interval_depth = 0;  // sample intervals of orbit points up to this depth
  int per_interval = 5;
  int plain = 60;
  int ball = 0;  // plain points carried onto the orbit by a word this short are skipped
};
// Deterministic sample of blown points: interval points (endpoints, the
// midpoint and interior fractions) and plain points off the orbit, including
// every generator breakpoint that is not an orbit point.
std::vector<BlownPoint> sample_points(const BlownAction& A, const SampleSpec& spec);

struct StabilizerCheck {
  std::size_t words = 0;
  std::optional<Word> fixing_word;
  std::string reason;
  bool ok() const { return !fixing_word; }
};

// No nontrivial reduced word of length <= ball fixes the midpoint of the
// marked interval.
StabilizerCheck stabilizer_check(const BlownAction& A, int ball);
// The same check for a single nontrivial word; returns why it fails, if it does.
std::optional<std::string> stabilizer_word_check(const BlownAction& A, const Word& w);

// Shortlex-first word h with alpha_h(marked midpoint) lying over e((n, +inf)).
std::optional<Word> positive_ray_orbit_search(const BlownAction& A, const Rational& n, int ball);

// Germ at +inf of alpha_w read in the blown-up root chart.
Germ blown_germ(const BlownAction& A, const Word& w);

// Some chart coordinate m > n with alpha_w(e(m)) != e(m) in the blown chart.
std::optional<Rational> blown_witness(const BlownAction& A, const Word& w, const Rational& n);

struct InjectivityCheck {
  std::size_t words = 0;
  std::optional<Word> failing_word;
  std::string reason;
  bool ok() const { return !failing_word; }
};

// Every nontrivial word of length <= ball has a non-identity blown germ and
// moves e(m) for some m beyond each n in `probes`.
InjectivityCheck injectivity_certificate(const BlownAction& A, int ball, const std::vector<Rational>& probes);
std::optional<std::string> injectivity_word_check(const BlownAction& A, const Word& w,
                                                  const std::vector<Rational>& probes);

std::string to_string(const LeafSpace& L, const BlownPoint& q);

}  // namespace germs
