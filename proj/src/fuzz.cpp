#include "germs/fuzz.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace germs {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix(splitmix(seed) ^ splitmix(stream * 0x632be59bd9b4e019ULL + 1) ^ splitmix(index + 0x2545f4914f6cdd1dULL));
}

long Fuzzer::integer(long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng_() % range);
}

Rational Fuzzer::rational(long span) {
  long d = integer(1, std::max(1L, bounds_.max_denominator));
  return Rational(integer(-span * d, span * d), d);
}

Rational Fuzzer::slope() { return Rational(integer(1, 9), integer(1, 9)); }

std::vector<Rational> Fuzzer::distinct_sorted(std::size_t n, long span, const Rational* above, const Rational* below) {
  std::set<Rational> out;
  while (out.size() < n) {
    Rational v;
    if (above && below) {
      long m = integer(2, 12);
      v = *above + (*below - *above) * Rational(integer(1, m - 1), m);
    } else if (above) {
      v = *above + rational(span).abs() + Rational(1, integer(1, 12));
    } else if (below) {
      v = *below - rational(span).abs() - Rational(1, integer(1, 12));
    } else {
      v = rational(span);
    }
    out.insert(v);
  }
  return {out.begin(), out.end()};
}

PLMap Fuzzer::plmap() {
  auto k = static_cast<std::size_t>(integer(0, std::max(0, bounds_.max_breakpoints)));
  if (k == 0) return PLMap::affine(slope(), rational(10));
  RawPL raw;
  auto xs = distinct_sorted(k, 10, nullptr, nullptr);
  auto ys = distinct_sorted(k, 10, nullptr, nullptr);
  for (std::size_t i = 0; i < k; ++i) raw.knots.push_back({xs[i], ys[i]});
  raw.left_slope = slope();
  raw.right_slope = slope();
  return pl_normalize(raw);
}

PLMap Fuzzer::plmap_fixing(const std::vector<Rational>& fixed) {
  if (fixed.empty()) return plmap();
  RawPL raw;
  auto add_gap = [&](const Rational* lo, const Rational* hi, long max_knots) {
    auto k = static_cast<std::size_t>(integer(0, max_knots));
    if (k == 0) return;
    auto xs = distinct_sorted(k, 5, lo, hi);
    auto ys = distinct_sorted(k, 5, lo, hi);
    for (std::size_t i = 0; i < k; ++i) raw.knots.push_back({xs[i], ys[i]});
  };
  add_gap(nullptr, &fixed.front(), 2);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    raw.knots.push_back({fixed[i], fixed[i]});
    if (i + 1 < fixed.size()) add_gap(&fixed[i], &fixed[i + 1], 1);
  }
  add_gap(&fixed.back(), nullptr, 2);
  raw.left_slope = slope();
  raw.right_slope = slope();
  return pl_normalize(raw);
}

PLMap Fuzzer::mutate_below(const PLMap& f, const Rational& cutoff) {
  RawPL raw;
  Rational fc = f(cutoff);
  auto k = static_cast<std::size_t>(integer(0, 2));
  if (k > 0) {
    auto xs = distinct_sorted(k, 5, nullptr, &cutoff);
    auto ys = distinct_sorted(k, 5, nullptr, &fc);
    for (std::size_t i = 0; i < k; ++i) raw.knots.push_back({xs[i], ys[i]});
  }
  raw.knots.push_back({cutoff, fc});
  for (const Knot& kn : f.knots())
    if (kn.x > cutoff) raw.knots.push_back(kn);
  raw.left_slope = slope();
  raw.right_slope = f.right_slope();
  if (f.is_affine()) raw.right_slope = f.slope_right_of(cutoff);
  return pl_normalize(raw);
}

LeafSpace Fuzzer::leafspace(Side side) {
  auto n = static_cast<int>(integer(1, std::max(1, bounds_.max_branches)));
  std::vector<LeafSpace::BranchSpec> specs;
  specs.push_back({"root", std::nullopt, std::nullopt});
  for (int i = 1; i < n; ++i) {
    LeafSpace::BranchSpec s;
    s.id = "b" + std::to_string(i);
    s.parent = specs[static_cast<std::size_t>(integer(0, i - 1))].id;
    s.departure = Rational(integer(-8, 8), integer(1, 4));
    specs.push_back(std::move(s));
  }
  return LeafSpace(std::move(specs), side);
}

Homeo Fuzzer::homeo(const LeafSpace& L, std::string name) {
  const std::size_t n = L.size();
  Homeo h;
  h.name = std::move(name);
  h.branch_map.assign(n, 0);

  std::vector<std::vector<BranchIndex>> children(n);
  std::set<Rational> departures;
  for (std::size_t b = 0; b < n; ++b) {
    const Branch& br = L.branch(static_cast<BranchIndex>(b));
    if (br.parent >= 0) {
      children[static_cast<std::size_t>(br.parent)].push_back(static_cast<BranchIndex>(b));
      departures.insert(*br.departure);
    }
  }

  // Shape of the subtree below b, up to reordering siblings.
  std::map<BranchIndex, std::string> shape;
  std::function<const std::string&(BranchIndex)> sig = [&](BranchIndex b) -> const std::string& {
    auto it = shape.find(b);
    if (it != shape.end()) return it->second;
    std::vector<std::string> parts;
    for (BranchIndex c : children[static_cast<std::size_t>(b)]) parts.push_back(sig(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    const Branch& br = L.branch(b);
    if (br.departure) s += br.departure->str();
    for (const auto& p : parts) s += p;
    s += ")";
    return shape[b] = s;
  };

  std::function<void(BranchIndex, BranchIndex)> assign = [&](BranchIndex from, BranchIndex to) {
    h.branch_map[static_cast<std::size_t>(from)] = to;
    auto cf = children[static_cast<std::size_t>(from)];
    auto ct = children[static_cast<std::size_t>(to)];
    auto by_sig = [&](BranchIndex a, BranchIndex b) { return sig(a) < sig(b) || (sig(a) == sig(b) && a < b); };
    std::sort(cf.begin(), cf.end(), by_sig);
    std::sort(ct.begin(), ct.end(), by_sig);
    for (std::size_t i = 0; i < ct.size();) {
      std::size_t j = i;
      while (j < ct.size() && sig(ct[j]) == sig(ct[i])) ++j;
      for (std::size_t a = j - 1; a > i; --a) std::swap(ct[a], ct[i + static_cast<std::size_t>(integer(0, static_cast<long>(a - i)))]);
      i = j;
    }
    for (std::size_t i = 0; i < cf.size(); ++i) assign(cf[i], ct[i]);
  };
  assign(L.root(), L.root());

  PLMap f = plmap_fixing({departures.begin(), departures.end()});
  for (std::size_t b = 0; b < n; ++b) {
    PLMap fb = f;
    if (n > 1 && coin()) {
      Rational lowest = *L.glue(static_cast<BranchIndex>(b), static_cast<BranchIndex>(b == 0 ? 1 : 0));
      for (std::size_t v = 0; v < n; ++v)
        if (v != b) lowest = min(lowest, *L.glue(static_cast<BranchIndex>(b), static_cast<BranchIndex>(v)));
      fb = mutate_below(f, lowest);
    }
    h.branch_pl.push_back(std::move(fb));
  }
  if (auto v = validate_homeo(L, h)) throw std::logic_error("fuzzer produced an invalid homeomorphism: " + v->detail);
  return h;
}

Word Fuzzer::word(const std::vector<std::string>& gens, int max_len) {
  if (gens.empty()) return Word();
  auto len = integer(0, std::max(0, max_len));
  std::vector<Letter> letters;
  while (static_cast<long>(letters.size()) < len) {
    Letter l{gens[static_cast<std::size_t>(integer(0, static_cast<long>(gens.size()) - 1))], coin() ? 1 : -1};
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(std::move(l));
  }
  return Word(std::move(letters));
}

}  // namespace germs
