#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "germs/action.hpp"
#include "germs/germ.hpp"
#include "germs/leafspace.hpp"
#include "germs/plmap.hpp"
#include "germs/word.hpp"

namespace germs {

struct FuzzBounds {
  int max_breakpoints = 5;
  long max_denominator = 100;
  int max_word_length = 8;
  int max_branches = 5;
};

// Mixes a seed with a case index so every case can be generated on its own,
// in any order, on any thread.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Deterministic generator of random test objects. Only the engine's raw
// output is used (no std distributions), so streams are identical across
// standard libraries.
class Fuzzer {
 public:
  explicit Fuzzer(std::uint64_t seed, FuzzBounds bounds = {}) : rng_(seed), bounds_(bounds) {}

  const FuzzBounds& bounds() const { return bounds_; }

  long integer(long lo, long hi);  // inclusive
  bool coin() { return integer(0, 1) == 1; }
  // n / d with |n / d| <= span and 1 <= d <= max_denominator.
  Rational rational(long span);
  Rational slope();  // p / q with 1 <= p, q <= 9

  PLMap plmap();
  // Fixes every value in `fixed` (which must be sorted and distinct).
  PLMap plmap_fixing(const std::vector<Rational>& fixed);
  // Agrees with f on [cutoff, +inf), random below.
  PLMap mutate_below(const PLMap& f, const Rational& cutoff);
  Germ germ() { return germ_of(plmap()); }

  LeafSpace leafspace(Side side = Side::Negative);
  // A valid homeomorphism: a tree automorphism permuting isomorphic sibling
  // subtrees, a coordinate map fixing every departure, and per-branch changes
  // below each branch's lowest gluing coordinate.
  Homeo homeo(const LeafSpace& L, std::string name);
  // Reduced word of length in [0, max_len] over `gens`.
  Word word(const std::vector<std::string>& gens, int max_len);

 private:
  std::vector<Rational> distinct_sorted(std::size_t n, long span, const Rational* above, const Rational* below);

  std::mt19937_64 rng_;
  FuzzBounds bounds_;
};

}  // namespace germs
