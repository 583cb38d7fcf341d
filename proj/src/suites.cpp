#include "germs/suites.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>

namespace germs::harness {

namespace {

std::uint64_t stream_of(const std::string& name, std::uint64_t sub = 0) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h ^ (sub * 0x9e3779b97f4a7c15ULL);
}

std::string flip_name(OrderSign s) { return to_string(s); }

OrderSign flip(OrderSign s) {
  if (s == OrderSign::LT) return OrderSign::GT;
  if (s == OrderSign::GT) return OrderSign::LT;
  return OrderSign::EQ;
}

Json rationals_json(const std::vector<Rational>& xs) {
  Json j = Json::array();
  for (const Rational& x : xs) j.push_back(x.str());
  return j;
}

std::vector<Rational> rationals_from(const Json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(Rational::parse(x.get<std::string>()));
  return out;
}

std::vector<Word> nontrivial_ball(const Action& A, int radius) {
  std::vector<Word> out;
  for (Word& w : word_ball(A.generator_names(), radius))
    if (!w.empty()) out.push_back(std::move(w));
  return out;
}

struct ReportBuilder {
  Json j;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::optional<Json> counterexample;

  ReportBuilder(const std::string& name, const SuiteConfig& c) {
    j["suite"] = name;
    j["anchor"] = suite_anchor(name);
    j["seed"] = c.seed;
    j["parameters"] = Json::object();
  }
  // Keeps the first failure only; suites stop at it.
  void fail(Json payload) {
    if (!counterexample) counterexample = std::move(payload);
  }
  bool failed() const { return counterexample.has_value(); }
  Report finish() {
    j["cases"] = cases;
    j["checks"] = checks;
    j["status"] = failed() ? "fail" : "pass";
    if (counterexample) j["counterexample"] = *counterexample;
    return Report{std::move(j), !failed()};
  }
};

// Point of e(R) used for the overlap scans.
std::vector<Rational> overlap_samples(const std::optional<Rational>& t) {
  if (!t) return {Rational(-1000), Rational(-1), Rational(0), Rational(1, 3), Rational(1000)};
  return {*t + Rational(1, 7), *t + Rational(1), *t + Rational(10), *t + Rational(1000)};
}

// Example-based and fuzz-based homeomorphisms share one case numbering:
// `per` words for each example, then `per` random homeomorphisms on random
// leaf spaces.
struct HomeoCase {
  Json payload;  // {"example": ..., "word": ...}
  LeafSpace space;
  Homeo homeo;
};

HomeoCase homeo_case(const std::vector<Example>& examples, const SuiteConfig& c, const std::string& suite,
                     std::size_t i) {
  auto per = static_cast<std::size_t>(c.homeo_cases);
  std::size_t block = i / per;
  Fuzzer fz(case_seed(c.seed, stream_of(suite, block), i % per), c.bounds);
  if (block < examples.size()) {
    const Example& ex = examples[block];
    Word w = fz.word(ex.action.generator_names(), c.word_length);
    Json payload;
    payload["example"] = example_payload(ex);
    payload["word"] = w.str();
    return HomeoCase{std::move(payload), ex.action.space(), ex.action.evaluate(w)};
  }
  LeafSpace L = fz.leafspace();
  Homeo h = fz.homeo(L, "h");
  Action A(L, std::vector<Homeo>{h});
  Json ex;
  ex["name"] = "fuzz";
  ex["leafspace"] = io::to_json(L);
  ex["action"] = io::to_json(io::spec_of(A));
  Json payload;
  payload["example"] = ex;
  payload["word"] = "h";
  return HomeoCase{std::move(payload), L, h};
}

using HomeoCheck = std::function<std::optional<std::string>(const LeafSpace&, const Homeo&)>;

ReportBuilder homeo_suite(const std::string& name, const SuiteConfig& c, const HomeoCheck& check) {
  ReportBuilder rb(name, c);
  std::vector<Example> examples;
  for (const auto& p : c.examples) examples.push_back(load_example(p));
  rb.j["parameters"]["homeos_per_source"] = c.homeo_cases;
  rb.j["parameters"]["word_length"] = c.word_length;
  Json sources = Json::array();
  for (const auto& ex : examples) sources.push_back(ex.name);
  sources.push_back("fuzz");
  rb.j["parameters"]["sources"] = sources;

  std::size_t n = (examples.size() + 1) * static_cast<std::size_t>(c.homeo_cases);
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    HomeoCase hc = homeo_case(examples, c, name, i);
    if (auto why = check(hc.space, hc.homeo)) {
      hc.payload["reason"] = *why;
      return hc.payload;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases;
  if (failure) rb.fail(failure->second);
  return rb;
}

// --- the suites --------------------------------------------------------------

Report suite_group_axioms(const SuiteConfig& c) {
  const std::string name = "germ-group-axioms";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["cases"] = c.germ_cases;
  rb.j["parameters"]["max_breakpoints"] = c.bounds.max_breakpoints;
  rb.j["parameters"]["max_denominator"] = c.bounds.max_denominator;
  auto n = static_cast<std::size_t>(c.germ_cases);
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    Fuzzer fz(case_seed(c.seed, stream_of(name), i), c.bounds);
    PLMap f = fz.plmap(), g = fz.plmap(), h = fz.plmap();
    if (auto why = check_group_laws(f, g, h)) {
      Json p;
      p["case"] = i;
      p["f"] = io::to_json(f);
      p["g"] = io::to_json(g);
      p["h"] = io::to_json(h);
      p["reason"] = *why;
      return p;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases * 7;
  if (failure) rb.fail(failure->second);
  return rb.finish();
}

Report suite_well_defined(const SuiteConfig& c) {
  const std::string name = "germ-well-defined";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["pairs"] = c.well_defined_pairs;
  auto n = static_cast<std::size_t>(c.well_defined_pairs);
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    Fuzzer fz(case_seed(c.seed, stream_of(name), i), c.bounds);
    PLMap f = fz.plmap(), g = fz.plmap();
    Rational cf = fz.rational(10), cg = fz.rational(10);
    PLMap f2 = fz.mutate_below(f, cf), g2 = fz.mutate_below(g, cg);
    if (auto why = check_well_defined(f, g, f2, g2)) {
      Json p;
      p["case"] = i;
      p["f"] = io::to_json(f);
      p["g"] = io::to_json(g);
      p["f_mutated"] = io::to_json(f2);
      p["g_mutated"] = io::to_json(g2);
      p["reason"] = *why;
      return p;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases;
  if (failure) rb.fail(failure->second);
  return rb.finish();
}

Report suite_left_order(const SuiteConfig& c) {
  const std::string name = "left-order";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["triples"] = c.order_triples;
  auto n = static_cast<std::size_t>(c.order_triples);
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    Fuzzer fz(case_seed(c.seed, stream_of(name), i), c.bounds);
    PLMap f = fz.plmap(), g = fz.plmap(), h = fz.plmap();
    // Exercise equal germs now and then.
    if (fz.integer(0, 7) == 0) g = fz.mutate_below(f, fz.rational(10));
    if (auto why = check_order_laws(f, g, h)) {
      Json p;
      p["case"] = i;
      p["f"] = io::to_json(f);
      p["g"] = io::to_json(g);
      p["h"] = io::to_json(h);
      p["reason"] = *why;
      return p;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases * 36;
  if (failure) rb.fail(failure->second);
  return rb.finish();
}

Report suite_d_homomorphism(const SuiteConfig& c) {
  const std::string name = "d-homomorphism";
  ReportBuilder rb(name, c);
  std::vector<Example> examples;
  for (const auto& p : c.examples) examples.push_back(load_example(p));
  rb.j["parameters"]["pairs_per_example"] = c.word_pairs;
  rb.j["parameters"]["word_length"] = c.word_length;
  auto per = static_cast<std::size_t>(c.word_pairs);
  std::size_t n = examples.size() * per;
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    const Example& ex = examples[i / per];
    Fuzzer fz(case_seed(c.seed, stream_of(name, i / per), i % per), c.bounds);
    Word w1 = fz.word(ex.action.generator_names(), c.word_length);
    Word w2 = fz.word(ex.action.generator_names(), c.word_length);
    if (auto why = check_d_homomorphism(ex.action, w1, w2)) {
      Json p;
      p["example"] = example_payload(ex);
      p["w1"] = w1.str();
      p["w2"] = w2.str();
      p["reason"] = *why;
      return p;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases * 2;
  if (failure) rb.fail(failure->second);
  return rb.finish();
}

Report suite_nontriviality(const SuiteConfig& c) {
  ReportBuilder rb = homeo_suite("nontriviality", c, check_nontriviality);
  rb.j["parameters"]["probes"] = rationals_json({Rational(0), Rational(1000), Rational(1000000)});
  rb.j["parameters"]["trivial_d_ball"] = c.trivial_d_ball;
  rb.j["parameters"]["trivial_d_examples"] = c.trivial_d_examples;
  if (rb.failed()) return rb.finish();

  // Examples whose d must be trivial: no word has a witness, and d(w) = 1.
  Json trivial = Json::array();
  for (const auto& p : c.examples) {
    if (std::find(c.trivial_d_examples.begin(), c.trivial_d_examples.end(), p.name) == c.trivial_d_examples.end())
      continue;
    Example ex = load_example(p);
    auto words = word_ball(ex.action.generator_names(), c.trivial_d_ball);
    auto failure = first_failure<Json>(words.size(), c.threads, [&](std::size_t i) -> std::optional<Json> {
      if (auto why = check_trivial_d(ex.action.space(), ex.action.evaluate(words[i]))) {
        Json q;
        q["example"] = example_payload(ex);
        q["word"] = words[i].str();
        q["expect_trivial"] = true;
        q["reason"] = *why;
        return q;
      }
      return std::nullopt;
    });
    std::size_t done = failure ? failure->first + 1 : words.size();
    rb.cases += done;
    rb.checks += done;
    Json entry;
    entry["example"] = ex.name;
    entry["words"] = words.size();
    entry["witness"] = failure ? "found" : "none";
    entry["d"] = failure ? "nontrivial" : "identity";
    trivial.push_back(entry);
    if (failure) {
      rb.fail(failure->second);
      break;
    }
  }
  rb.j["trivial_d"] = trivial;
  return rb.finish();
}

Report suite_alpha(const SuiteConfig& c) {
  const std::string name = "alpha-action-law";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["ball"] = c.alpha_ball;
  rb.j["parameters"]["interval_depth"] = c.interval_depth;
  rb.j["parameters"]["per_interval"] = c.per_interval;
  rb.j["parameters"]["plain_samples"] = c.plain_samples;
  Json spaces = Json::array();
  for (const auto& p : c.examples) {
    if (!p.blowup) continue;
    Example ex = load_example(p);
    BlownAction BA = bind_example_blowup(ex);
    SampleSpec spec{c.interval_depth, c.per_interval, c.plain_samples, c.alpha_ball};
    auto samples = sample_points(BA, spec);
    std::size_t on_intervals = 0;
    for (const auto& q : samples) on_intervals += q.on_interval();

    auto words = word_ball(ex.action.generator_names(), c.alpha_ball);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = 0; b < words.size(); ++b)
        if (static_cast<int>(words[a].length() + words[b].length()) <= c.alpha_ball) pairs.emplace_back(a, b);

    const LeafSpace& L = ex.action.space();
    auto failure = first_failure<Json>(pairs.size(), c.threads, [&](std::size_t i) -> std::optional<Json> {
      const Word& h = words[pairs[i].first];
      const Word& r = words[pairs[i].second];
      for (const BlownPoint& q : samples) {
        if (auto why = check_alpha_law(BA, h, r, q)) {
          Json p;
          p["example"] = example_payload(ex);
          p["h"] = h.str();
          p["r"] = r.str();
          p["q"] = io::to_json(L, q);
          p["reason"] = *why;
          return p;
        }
      }
      return std::nullopt;
    });
    std::size_t done = failure ? failure->first + 1 : pairs.size();
    rb.cases += done;
    rb.checks += done * samples.size();

    // Each interval goes onto an interval, monotonically, endpoints to endpoints.
    std::optional<std::pair<std::size_t, Json>> orient;
    if (!failure) {
      std::vector<Rational> ts;
      for (int j = 0; j <= 8; ++j) ts.emplace_back(j, 8);
      auto short_words = word_ball(ex.action.generator_names(), std::min(2, c.alpha_ball));
      std::vector<std::pair<std::size_t, std::size_t>> jobs;
      for (std::size_t o = 0; o < BA.space().orbit().size(); ++o) {
        if (BA.space().orbit()[o].depth > c.interval_depth) break;
        for (std::size_t w = 0; w < short_words.size(); ++w) jobs.emplace_back(o, w);
      }
      orient = first_failure<Json>(jobs.size(), c.threads, [&](std::size_t i) -> std::optional<Json> {
        const Word& h = short_words[jobs[i].second];
        const Point& base = BA.space().orbit()[jobs[i].first].point;
        if (auto why = check_alpha_orientation(BA, h, base, ts)) {
          Json p;
          p["example"] = example_payload(ex);
          p["h"] = h.str();
          p["q"] = io::to_json(L, BlownPoint::interval(base, Rational(1, 2)));
          p["check"] = "orientation";
          p["reason"] = *why;
          return p;
        }
        return std::nullopt;
      });
      rb.checks += orient ? orient->first + 1 : jobs.size();
    }

    Json entry;
    entry["example"] = ex.name;
    entry["samples"] = samples.size();
    entry["interval_samples"] = on_intervals;
    entry["word_pairs"] = pairs.size();
    entry["status"] = (failure || orient) ? "fail" : "pass";
    spaces.push_back(entry);
    if (failure) rb.fail(failure->second);
    else if (orient) rb.fail(orient->second);
    if (rb.failed()) break;
  }
  rb.j["spaces"] = spaces;
  return rb.finish();
}

Report suite_stabilizer(const SuiteConfig& c) {
  const std::string name = "trivial-stabilizer";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["ball"] = c.stabilizer_ball;
  Json spaces = Json::array();
  for (const auto& p : c.examples) {
    if (!p.blowup) continue;
    Example ex = load_example(p);
    BlownAction BA = bind_example_blowup(ex);
    auto words = nontrivial_ball(ex.action, c.stabilizer_ball);
    auto failure = first_failure<Json>(words.size(), c.threads, [&](std::size_t i) -> std::optional<Json> {
      if (auto why = stabilizer_word_check(BA, words[i])) {
        Json q;
        q["example"] = example_payload(ex);
        q["word"] = words[i].str();
        q["reason"] = *why;
        return q;
      }
      return std::nullopt;
    });
    std::size_t done = failure ? failure->first + 1 : words.size();
    rb.cases += done;
    rb.checks += done;
    Json entry;
    entry["example"] = ex.name;
    entry["words"] = words.size();
    entry["fixing_word"] = failure ? Json(words[failure->first].str()) : Json(nullptr);
    spaces.push_back(entry);
    if (failure) {
      rb.fail(failure->second);
      break;
    }
  }
  rb.j["spaces"] = spaces;
  return rb.finish();
}

Report suite_orbit_limit(const SuiteConfig& c) {
  const std::string name = "orbit-limit";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["ball"] = c.orbit_ball;
  rb.j["parameters"]["targets"] = rationals_json(c.orbit_targets);
  Json results = Json::array();
  for (const auto& p : c.examples) {
    if (!p.blowup) continue;
    Example ex = load_example(p);
    BlownAction BA = bind_example_blowup(ex);
    const LeafSpace& L = ex.action.space();
    for (const Rational& n : c.orbit_targets) {
      ++rb.cases;
      auto w = positive_ray_orbit_search(BA, n, c.orbit_ball);
      Json entry;
      entry["example"] = ex.name;
      entry["n"] = n.str();
      if (!w) {
        // Not a refutation: the ball may simply be too small.
        entry["word"] = nullptr;
        entry["result"] = "exhausted";
        results.push_back(entry);
        continue;
      }
      ++rb.checks;
      entry["word"] = w->str();
      entry["result"] = "found";
      std::optional<std::string> why;
      Point image = ex.action.apply(*w, BA.space().marked());
      if (!L.chart_contains(L.root(), image) || !(image.coord > n)) why = "witness does not land over e((n, +inf))";
      if (!why && static_cast<int>(w->length()) <= BA.space().depth()) {
        try {
          BlownPoint q = BA.alpha(*w, BA.marked_midpoint());
          if (q.base != image) why = "alpha moves the marked midpoint elsewhere than the base action";
        } catch (const AlphaError& e) {
          why = std::string(e.what());
        }
      }
      results.push_back(entry);
      if (why) {
        Json q;
        q["example"] = example_payload(ex);
        q["n"] = n.str();
        q["word"] = w->str();
        q["reason"] = *why;
        rb.fail(q);
        break;
      }
    }
    if (rb.failed()) break;
  }
  rb.j["results"] = results;
  return rb.finish();
}

Report suite_injectivity(const SuiteConfig& c) {
  const std::string name = "injectivity";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["ball"] = c.injectivity_ball;
  rb.j["parameters"]["probes"] = rationals_json(c.injectivity_probes);
  Json spaces = Json::array();
  for (const auto& p : c.examples) {
    if (!p.blowup) continue;
    Example ex = load_example(p);
    BlownAction BA = bind_example_blowup(ex);
    auto words = nontrivial_ball(ex.action, c.injectivity_ball);
    auto failure = first_failure<Json>(words.size(), c.threads, [&](std::size_t i) -> std::optional<Json> {
      auto why = injectivity_word_check(BA, words[i], c.injectivity_probes);
      if (!why && induced_germ(ex.action, words[i]).is_identity()) why = "d(w) is the identity on the base space";
      if (why) {
        Json q;
        q["example"] = example_payload(ex);
        q["word"] = words[i].str();
        q["probes"] = rationals_json(c.injectivity_probes);
        q["reason"] = *why;
        return q;
      }
      return std::nullopt;
    });
    std::size_t done = failure ? failure->first + 1 : words.size();
    rb.cases += done;
    rb.checks += done * (2 + c.injectivity_probes.size());
    Json entry;
    entry["example"] = ex.name;
    entry["words"] = words.size();
    entry["status"] = failure ? "fail" : "pass";
    spaces.push_back(entry);
    if (failure) {
      rb.fail(failure->second);
      break;
    }
  }
  rb.j["spaces"] = spaces;
  return rb.finish();
}

Report suite_structural(const SuiteConfig& c) {
  const std::string name = "structural";
  ReportBuilder rb(name, c);
  rb.j["parameters"]["cases"] = c.structural_cases;
  auto n = static_cast<std::size_t>(c.structural_cases);
  auto failure = first_failure<Json>(n, c.threads, [&](std::size_t i) -> std::optional<Json> {
    if (auto why = check_structural_case(c.seed, i)) {
      Json p;
      p["seed"] = c.seed;
      p["index"] = i;
      p["reason"] = *why;
      return p;
    }
    return std::nullopt;
  });
  rb.cases = failure ? failure->first + 1 : n;
  rb.checks = rb.cases * 5;
  if (failure) {
    rb.fail(failure->second);
    return rb.finish();
  }

  // Same seed, same bytes, whatever the thread count.
  SuiteConfig small = c;
  small.examples.clear();
  small.germ_cases = 50;
  small.timings = false;
  std::string first = io::dump(run_suite("germ-group-axioms", small).json);
  small.threads = 1;
  std::string again = io::dump(run_suite("germ-group-axioms", small).json);
  small.threads = 3;
  std::string threaded = io::dump(run_suite("germ-group-axioms", small).json);
  rb.checks += 2;
  if (first != again || first != threaded) {
    Json p;
    p["seed"] = c.seed;
    p["reason"] = "identical seeds produced different reports";
    rb.fail(p);
  }
  rb.j["determinism"] = first == again && first == threaded ? "reproduced" : "differs";
  return rb.finish();
}

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> a{
      {"germ-group-axioms", "germs at +inf form a group under [f][g] = [fg]"},
      {"germ-well-defined", "the product of germs does not depend on the representatives"},
      {"left-order", "the germ group is left orderable: eventually-above-the-diagonal cone"},
      {"overlap-ray", "g e(J) lies in e(R) for a positive ray J (the overlap ray)"},
      {"g0-independence", "d(g) does not depend on the choice of g0"},
      {"d-homomorphism", "d(fg) = d(f) d(g)"},
      {"nontriviality", "h(e(m)) != e(m) for m in (n, +inf) for every n implies d(h) != 1"},
      {"alpha-action-law", "alpha_{hr}(q) = alpha_h(alpha_r(q)) and alpha_1(q) = q"},
      {"trivial-stabilizer", "{marked} x {1/2} has trivial stabilizer under alpha"},
      {"orbit-limit", "some alpha_h carries the marked midpoint into e(J)"},
      {"injectivity", "alpha_g e(m) != e(m) for every g != 1, so d is injective"},
      {"structural", "blow-up keeps the branching type; files round-trip; reports are reproducible"},
  };
  return a;
}

}  // namespace

// --- examples ------------------------------------------------------------------

Example load_example(const ExamplePaths& paths) {
  auto L = io::load_leafspace(paths.leafspace);
  auto S = io::load_action(paths.action);
  Json lj = io::to_json(L.value);
  Json aj = io::to_json(S.value);
  Action A = io::bind_action(L.value, S.value);
  std::optional<Json> bj;
  std::optional<io::BlowupSpec> bs;
  if (paths.blowup) {
    bs = io::load_blowup(*paths.blowup).value;
    bj = io::to_json(*bs);
  }
  return Example{paths.name, lj, aj, bj, std::move(A), bs};
}

Example example_from_json(const std::string& name, const Json& payload) {
  LeafSpace L = io::leafspace_from_json(payload.at("leafspace"));
  io::ActionSpec spec = io::action_spec_from_json(payload.at("action"));
  Action A = io::bind_action(L, spec);
  std::optional<Json> bj;
  std::optional<io::BlowupSpec> bs;
  if (payload.contains("blowup")) {
    bj = payload.at("blowup");
    bs = io::blowup_spec_from_json(*bj);
  }
  return Example{name, payload.at("leafspace"), payload.at("action"), bj, std::move(A), bs};
}

Json example_payload(const Example& ex) {
  Json j;
  j["name"] = ex.name;
  j["leafspace"] = ex.leafspace_json;
  j["action"] = ex.action_json;
  if (ex.blowup_json) j["blowup"] = *ex.blowup_json;
  return j;
}

BlownAction bind_example_blowup(const Example& ex) {
  if (!ex.blowup) throw std::invalid_argument("example '" + ex.name + "' has no blow-up spec");
  return io::bind_blowup(ex.action, *ex.blowup);
}

SuiteConfig SuiteConfig::defaults(const std::string& data_dir) {
  SuiteConfig c;
  c.seed = default_seed();
  c.threads = default_threads();
  for (const char* e : {"e1", "e2", "e3"}) {
    std::string dir = data_dir + "/" + e;
    ExamplePaths p{e, dir + "/leafspace.json", dir + "/action.json", std::nullopt};
    if (std::string(e) != "e2") p.blowup = dir + "/blowup.json";
    c.examples.push_back(p);
  }
  return c;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("GERMCHECK_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
  }
  return 20260101;
}

std::vector<std::string> suite_names() {
  return {"germ-group-axioms", "germ-well-defined", "left-order",         "overlap-ray",
          "g0-independence",   "d-homomorphism",    "nontriviality",      "alpha-action-law",
          "trivial-stabilizer", "orbit-limit",      "injectivity",        "structural"};
}

std::string suite_anchor(const std::string& name) {
  auto it = anchors().find(name);
  if (it == anchors().end()) throw UnknownSuite("unknown suite '" + name + "'");
  return it->second;
}

Report run_suite(const std::string& name, const SuiteConfig& config) {
  (void)suite_anchor(name);
  auto start = std::chrono::steady_clock::now();
  Report r;
  if (name == "germ-group-axioms") r = suite_group_axioms(config);
  else if (name == "germ-well-defined") r = suite_well_defined(config);
  else if (name == "left-order") r = suite_left_order(config);
  else if (name == "overlap-ray") r = homeo_suite(name, config, check_overlap).finish();
  else if (name == "g0-independence") r = homeo_suite(name, config, check_g0_independence).finish();
  else if (name == "d-homomorphism") r = suite_d_homomorphism(config);
  else if (name == "nontriviality") r = suite_nontriviality(config);
  else if (name == "alpha-action-law") r = suite_alpha(config);
  else if (name == "trivial-stabilizer") r = suite_stabilizer(config);
  else if (name == "orbit-limit") r = suite_orbit_limit(config);
  else if (name == "injectivity") r = suite_injectivity(config);
  else r = suite_structural(config);
  if (config.timings) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    r.json["elapsed_ms"] = ms.count();
  }
  return r;
}

// --- replay --------------------------------------------------------------------

std::optional<std::string> replay(const Json& report) {
  const std::string suite = report.at("suite").get<std::string>();
  if (!report.contains("counterexample")) throw std::invalid_argument("report has no counterexample to replay");
  const Json& p = report.at("counterexample");
  auto pl = [&](const char* key) { return io::plmap_from_json(p.at(key), std::string("/counterexample/") + key); };
  auto example = [&] { return example_from_json(p.at("example").value("name", "replay"), p.at("example")); };

  if (suite == "germ-group-axioms") return check_group_laws(pl("f"), pl("g"), pl("h"));
  if (suite == "germ-well-defined") return check_well_defined(pl("f"), pl("g"), pl("f_mutated"), pl("g_mutated"));
  if (suite == "left-order") return check_order_laws(pl("f"), pl("g"), pl("h"));
  if (suite == "overlap-ray" || suite == "g0-independence" || suite == "nontriviality") {
    Example ex = example();
    Homeo h = ex.action.evaluate(Word::parse(p.at("word").get<std::string>()));
    if (suite == "overlap-ray") return check_overlap(ex.action.space(), h);
    if (suite == "g0-independence") return check_g0_independence(ex.action.space(), h);
    if (p.value("expect_trivial", false)) return check_trivial_d(ex.action.space(), h);
    return check_nontriviality(ex.action.space(), h);
  }
  if (suite == "d-homomorphism") {
    Example ex = example();
    return check_d_homomorphism(ex.action, Word::parse(p.at("w1").get<std::string>()),
                                Word::parse(p.at("w2").get<std::string>()));
  }
  if (suite == "alpha-action-law") {
    Example ex = example();
    BlownAction BA = bind_example_blowup(ex);
    BlownPoint q = io::blown_point_from_json(ex.action.space(), p.at("q"), "/counterexample/q");
    Word h = Word::parse(p.at("h").get<std::string>());
    if (p.value("check", "") == "orientation") {
      std::vector<Rational> ts;
      for (int j = 0; j <= 8; ++j) ts.emplace_back(j, 8);
      return check_alpha_orientation(BA, h, q.base, ts);
    }
    return check_alpha_law(BA, h, Word::parse(p.at("r").get<std::string>()), q);
  }
  if (suite == "trivial-stabilizer") {
    Example ex = example();
    return stabilizer_word_check(bind_example_blowup(ex), Word::parse(p.at("word").get<std::string>()));
  }
  if (suite == "injectivity") {
    Example ex = example();
    Word w = Word::parse(p.at("word").get<std::string>());
    auto why = injectivity_word_check(bind_example_blowup(ex), w, rationals_from(p.at("probes")));
    if (!why && induced_germ(ex.action, w).is_identity()) why = "d(w) is the identity on the base space";
    return why;
  }
  if (suite == "orbit-limit") {
    Example ex = example();
    BlownAction BA = bind_example_blowup(ex);
    const LeafSpace& L = ex.action.space();
    Word w = Word::parse(p.at("word").get<std::string>());
    Rational n = Rational::parse(p.at("n").get<std::string>());
    Point image = ex.action.apply(w, BA.space().marked());
    if (!L.chart_contains(L.root(), image) || !(image.coord > n)) return "witness does not land over e((n, +inf))";
    if (static_cast<int>(w.length()) <= BA.space().depth()) {
      try {
        if (BA.alpha(w, BA.marked_midpoint()).base != image)
          return "alpha moves the marked midpoint elsewhere than the base action";
      } catch (const AlphaError& e) {
        return std::string(e.what());
      }
    }
    return std::nullopt;
  }
  if (suite == "structural") {
    if (!p.contains("index")) {
      SuiteConfig c;
      c.seed = p.at("seed").get<std::uint64_t>();
      c.germ_cases = 50;
      std::string a = io::dump(run_suite("germ-group-axioms", c).json);
      c.threads = 3;
      std::string b = io::dump(run_suite("germ-group-axioms", c).json);
      if (a != b) return "identical seeds produced different reports";
      return std::nullopt;
    }
    return check_structural_case(p.at("seed").get<std::uint64_t>(), p.at("index").get<std::size_t>());
  }
  throw UnknownSuite("unknown suite '" + suite + "'");
}

// --- single-case checks --------------------------------------------------------

std::optional<std::string> check_group_laws(const PLMap& f, const PLMap& g, const PLMap& h) {
  Germ u = germ_of(f), v = germ_of(g), w = germ_of(h);
  Germ one;
  if (germ_mul(germ_mul(u, v), w) != germ_mul(u, germ_mul(v, w)))
    return "associativity fails: (uv)w = " + to_string(germ_mul(germ_mul(u, v), w)) +
           ", u(vw) = " + to_string(germ_mul(u, germ_mul(v, w)));
  if (germ_mul(one, u) != u || germ_mul(u, one) != u) return "identity law fails for " + to_string(u);
  if (!germ_mul(u, germ_inv(u)).is_identity() || !germ_mul(germ_inv(u), u).is_identity())
    return "inverse law fails for " + to_string(u);
  if (germ_of(pl_compose(f, g)) != germ_mul(u, v))
    return "germ of f o g is " + to_string(germ_of(pl_compose(f, g))) + ", product of germs is " +
           to_string(germ_mul(u, v));
  if (germ_of(pl_invert(f)) != germ_inv(u)) return "germ of the inverse map differs from the inverse germ";
  // The germ must describe f itself beyond its last breakpoint.
  Rational T = affine_tail(f).threshold;
  for (const Rational& x : {T + Rational(1), T + Rational(1000)})
    if (u(x) != f(x)) return "germ " + to_string(u) + " disagrees with f at " + x.str();
  return std::nullopt;
}

std::optional<std::string> check_well_defined(const PLMap& f, const PLMap& g, const PLMap& f2, const PLMap& g2) {
  Germ expected = germ_of(pl_compose(f, g));
  Germ got = germ_mul(germ_of(f2), germ_of(g2));
  if (got != expected)
    return "mutated representatives give " + to_string(got) + ", originals give " + to_string(expected);
  if (germ_of(pl_compose(f2, g2)) != expected) return "germ of the mutated composition differs";
  return std::nullopt;
}

std::optional<std::string> check_order_laws(const PLMap& f, const PLMap& g, const PLMap& h) {
  const PLMap* maps[3] = {&f, &g, &h};
  Germ x[3] = {germ_of(f), germ_of(g), germ_of(h)};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      OrderSign s = germ_compare(x[a], x[b]);
      if ((s == OrderSign::EQ) != (x[a] == x[b]))
        return "trichotomy fails: compare(" + to_string(x[a]) + ", " + to_string(x[b]) + ") = " + flip_name(s);
      if (germ_compare(x[b], x[a]) != flip(s)) return "compare is not antisymmetric";
      for (int m = 0; m < 3; ++m)
        if (germ_compare(germ_mul(x[m], x[a]), germ_mul(x[m], x[b])) != s)
          return "left invariance fails: multiplying " + to_string(x[a]) + " and " + to_string(x[b]) + " by " +
                 to_string(x[m]) + " changes the comparison";
      for (int c = 0; c < 3; ++c)
        if (s == OrderSign::LT && germ_compare(x[b], x[c]) == OrderSign::LT && germ_compare(x[a], x[c]) != OrderSign::LT)
          return "transitivity fails on " + to_string(x[a]) + " < " + to_string(x[b]) + " < " + to_string(x[c]);
    }
  }
  // Cone oracle on the maps themselves: evaluate past the tail's last
  // breakpoint and past the tail's fixed point, where the sign of f(x) - x is
  // settled.
  for (int a = 0; a < 3; ++a) {
    const PLMap& fm = *maps[a];
    AffineTail t = affine_tail(fm);
    Rational X = max(t.threshold, Rational(0)) + Rational(1);
    if (t.slope != Rational(1)) X += t.offset.abs() / (t.slope - Rational(1)).abs();
    int above = 0, below = 0;
    for (const Rational& xx : {X, X + Rational(1000)}) {
      if (fm(xx) > xx) ++above;
      if (fm(xx) < xx) ++below;
    }
    OrderSign s = germ_compare(x[a], Germ());
    if ((s == OrderSign::GT) != (above == 2) || (s == OrderSign::LT) != (below == 2))
      return "positive cone disagrees with evaluation for " + to_string(x[a]);
  }
  return std::nullopt;
}

std::optional<std::string> check_overlap(const LeafSpace& L, const Homeo& h) {
  Embedding e = Embedding::root_chart(L);
  auto t = overlap_ray(L, h, e);
  for (const Rational& x : overlap_samples(t)) {
    Point img = apply_homeo(L, h, e(L, x));
    if (img.branch != L.root())
      return "h(e(" + x.str() + ")) = " + to_string(L, img) + " is off the root chart above the overlap threshold";
  }
  if (t) {
    bool off = false;
    for (const Rational& x : {*t, *t - Rational(1, 1000)})
      if (apply_homeo(L, h, e(L, x)).branch != L.root()) off = true;
    if (!off) return "overlap threshold " + t->str() + " is not the least one";
  } else if (h.branch_map[static_cast<std::size_t>(L.root())] != L.root()) {
    return "full overlap reported although the root chart moves";
  }
  return std::nullopt;
}

std::optional<std::string> check_g0_independence(const LeafSpace& L, const Homeo& h) {
  Embedding e = Embedding::root_chart(L);
  auto t = overlap_ray(L, h, e);
  Rational base = t ? *t : Rational(0);
  Germ d = induced_germ(L, h, e);
  Germ later = induced_germ_beyond(L, h, e, base + Rational(10));
  if (d != later) return "germ read beyond t is " + to_string(d) + ", beyond t+10 it is " + to_string(later);
  // Gluings are identity in coordinates, so far out e^-1 h e is the root map.
  Germ oracle = germ_of(h.branch_pl[static_cast<std::size_t>(L.root())]);
  if (d != oracle) return "induced germ " + to_string(d) + " differs from the root map's tail " + to_string(oracle);
  Germ dinv = induced_germ(L, inverse(h), e);
  if (dinv != germ_inv(d)) return "d(h^-1) = " + to_string(dinv) + " but d(h)^-1 = " + to_string(germ_inv(d));
  return std::nullopt;
}

std::optional<std::string> check_d_homomorphism(const Action& A, const Word& w1, const Word& w2) {
  DWordResult r = evaluate_d_word(A, w1 * w2);
  if (!r.agree())
    return "d of the composed word is " + to_string(r.composed) + ", product over letters is " + to_string(r.letterwise);
  Germ prod = germ_mul(induced_germ(A, w1), induced_germ(A, w2));
  if (r.composed != prod) return "d(w1 w2) = " + to_string(r.composed) + " but d(w1) d(w2) = " + to_string(prod);
  return std::nullopt;
}

std::optional<std::string> check_nontriviality(const LeafSpace& L, const Homeo& h) {
  Embedding e = Embedding::root_chart(L);
  Germ d = induced_germ(L, h, e);
  for (const Rational& n : {Rational(0), Rational(1000), Rational(1000000)}) {
    auto m = nontriviality_witness(L, h, e, n);
    if (m) {
      if (!(*m > n)) return "witness " + m->str() + " is not beyond " + n.str();
      if (apply_homeo(L, h, e(L, *m)) == e(L, *m)) return "witness " + m->str() + " is fixed";
      if (d.is_identity()) return "witness " + m->str() + " beyond " + n.str() + " but d(h) = 1";
    } else if (!d.is_identity()) {
      return "no witness beyond " + n.str() + " although d(h) = " + to_string(d);
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_trivial_d(const LeafSpace& L, const Homeo& h) {
  Embedding e = Embedding::root_chart(L);
  for (const Rational& n : {Rational(0), Rational(1000), Rational(1000000)})
    if (auto m = nontriviality_witness(L, h, e, n)) return "witness " + m->str() + " found beyond " + n.str();
  Germ d = induced_germ(L, h, e);
  if (!d.is_identity()) return "d(h) = " + to_string(d) + " is not the identity";
  return std::nullopt;
}

std::optional<std::string> check_alpha_orientation(const BlownAction& A, const Word& h, const Point& base,
                                                   const std::vector<Rational>& ts) {
  const LeafSpace& L = A.space().base();
  try {
    std::optional<BlownPoint> prev;
    for (const Rational& t : ts) {
      BlownPoint q = A.alpha(h, BlownPoint::interval(base, t));
      if (!q.t) return "interval point " + to_string(L, BlownPoint::interval(base, t)) + " lands on a plain point";
      if (prev && (prev->base != q.base || !(*prev->t < *q.t)))
        return "alpha_" + h.str() + " is not increasing along the interval over " + to_string(L, base);
      if ((t.is_zero() && !q.t->is_zero()) || (t == Rational(1) && *q.t != Rational(1)))
        return "alpha_" + h.str() + " does not carry endpoints to endpoints over " + to_string(L, base);
      prev = q;
    }
  } catch (const AlphaError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

std::optional<std::string> check_structural_case(std::uint64_t seed, std::size_t index) {
  Fuzzer fz(case_seed(seed, stream_of("structural"), index));
  Side side = fz.coin() ? Side::Negative : Side::Positive;
  LeafSpace L = fz.leafspace(side);
  std::vector<Homeo> gens;
  long ng = fz.integer(1, 2);
  for (long j = 0; j < ng; ++j) gens.push_back(fz.homeo(L, j == 0 ? "f" : "g"));
  Action A(L, gens);
  auto b = static_cast<BranchIndex>(fz.integer(0, static_cast<long>(L.size()) - 1));
  Point marked = canonical_point(L, Point{b, fz.rational(8)});
  BlowupSpace B = build_blowup(A, marked, 2);
  if (classify(B) != classify(L))
    return "blow-up changed the branching type from " + to_string(classify(L)) + " to " + to_string(classify(B));

  std::string lt = io::serialize(L);
  auto lp = io::parse_spec_text(lt);
  if (!lp.canonical || io::serialize(lp.value) != lt) return "leaf-space file does not round-trip";
  const LeafSpace& L2 = std::get<LeafSpace>(lp.value);

  io::ActionSpec spec = io::spec_of(A);
  std::string at = io::serialize(spec);
  auto ap = io::parse_spec_text(at);
  if (!ap.canonical) return "action file does not round-trip";
  Action A2 = io::bind_action(L2, std::get<io::ActionSpec>(ap.value));
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (A2.generators()[j].branch_map != gens[j].branch_map || A2.generators()[j].branch_pl != gens[j].branch_pl)
      return "action read back differs from the one written";

  io::BlowupSpec bs;
  bs.marked = io::to_json(L, marked);
  bs.depth = 2;
  bs.ball = 3;
  std::string bt = io::serialize(bs);
  auto bp = io::parse_spec_text(bt);
  if (!bp.canonical) return "blow-up file does not round-trip";
  if (io::point_from_json(L2, std::get<io::BlowupSpec>(bp.value).marked, "/marked") != marked)
    return "marked point read back differs";

  PLMap f = fz.plmap();
  std::string ft = io::dump(io::to_json(f));
  if (io::plmap_from_json(io::parse_json(ft)) != f || io::dump(io::to_json(io::plmap_from_json(io::parse_json(ft)))) != ft)
    return "PL map does not round-trip";
  return std::nullopt;
}

}  // namespace germs::harness
