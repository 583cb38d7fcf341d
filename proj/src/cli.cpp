#include "germs/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "germs/suites.hpp"

namespace germs::cli {

namespace {

using harness::Json;

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string data_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
  bool timings = false;
  std::string out_path;

  std::string example;
  std::string leafspace;
  std::string action;
  std::string blowup;

  int cases = 0;
  int ball = 0;
};

struct Outcome {
  std::string text;
  int status = kPass;
};

harness::SuiteConfig make_config(const Options& o) {
  harness::SuiteConfig c = harness::SuiteConfig::defaults(o.data_dir);
  if (o.seed_given) c.seed = o.seed;
  if (o.threads > 0) c.threads = o.threads;
  c.timings = o.timings;
  if (!o.leafspace.empty() || !o.action.empty()) {
    if (o.leafspace.empty() || o.action.empty()) throw InputError("--leafspace and --action go together");
    harness::ExamplePaths p{"custom", o.leafspace, o.action, std::nullopt};
    if (!o.blowup.empty()) p.blowup = o.blowup;
    c.examples = {p};
    c.trivial_d_examples.clear();
  } else if (!o.example.empty()) {
    std::vector<harness::ExamplePaths> keep;
    for (auto& p : c.examples)
      if (p.name == o.example) keep.push_back(p);
    if (keep.empty()) throw InputError("unknown bundled example '" + o.example + "'");
    if (!o.blowup.empty()) keep.front().blowup = o.blowup;
    c.examples = keep;
  }
  return c;
}

harness::Example pick_example(const Options& o) {
  if (o.leafspace.empty() && o.action.empty() && o.example.empty())
    throw InputError("give --example NAME or --leafspace FILE --action FILE");
  harness::SuiteConfig c = make_config(o);
  return harness::load_example(c.examples.front());
}

Outcome run_suites(const std::vector<std::string>& names, const harness::SuiteConfig& c) {
  Outcome r;
  if (names.size() == 1) {
    harness::Report rep = harness::run_suite(names.front(), c);
    r.text = io::dump(rep.json);
    r.status = rep.pass ? kPass : kViolation;
    return r;
  }
  Json all;
  all["seed"] = c.seed;
  all["reports"] = Json::array();
  bool pass = true;
  for (const auto& n : names) {
    harness::Report rep = harness::run_suite(n, c);
    pass = pass && rep.pass;
    all["reports"].push_back(rep.json);
  }
  all["status"] = pass ? "pass" : "fail";
  r.text = io::dump(all);
  r.status = pass ? kPass : kViolation;
  return r;
}

std::string decimal(const Rational& x) {
  std::ostringstream s;
  s << std::setprecision(12) << x.raw().get_d();
  return s.str();
}

Germ germ_from_file(const std::string& path) {
  Json j = io::parse_json(io::read_file(path));
  if (j.is_object() && j.contains("a")) return io::germ_from_json(j, "");
  return germ_of(io::plmap_from_json(j, ""));
}

Outcome compute_d(const Options& o, const std::string& word_text) {
  harness::Example ex = pick_example(o);
  const Action& A = ex.action;
  const LeafSpace& L = A.space();
  Word w = Word::parse(word_text);
  Homeo h = A.evaluate(w);
  Embedding e = A.root_embedding();
  DWordResult d = evaluate_d_word(A, w);
  Json j;
  j["example"] = ex.name;
  j["word"] = w.str();
  j["d"] = io::to_json(d.composed);
  j["d_letterwise"] = io::to_json(d.letterwise);
  auto t = overlap_ray(L, h, e);
  j["overlap_threshold"] = t ? Json(t->str()) : Json(nullptr);
  Json wit = Json::object();
  for (const Rational& n : {Rational(0), Rational(1000), Rational(1000000)}) {
    auto m = nontriviality_witness(L, h, e, n);
    wit[n.str()] = m ? Json(m->str()) : Json(nullptr);
  }
  j["witness"] = wit;
  j["order_vs_identity"] = to_string(germ_compare(d.composed, Germ()));
  return {io::dump(j), d.agree() ? kPass : kViolation};
}

Outcome blowup_summary(const Options& o) {
  harness::Example ex = pick_example(o);
  BlownAction BA = harness::bind_example_blowup(ex);
  const LeafSpace& L = ex.action.space();
  const BlowupSpace& B = BA.space();
  Json j;
  j["example"] = ex.name;
  j["marked"] = io::to_json(L, B.marked());
  j["depth"] = B.depth();
  j["kind_before"] = to_string(classify(L));
  j["kind_after"] = to_string(classify(B));
  j["orbit_points"] = B.orbit().size();
  j["root_chart_intervals"] = B.chart_intervals();
  Json orbit = Json::array();
  for (const OrbitPoint& p : B.orbit()) {
    Json q;
    q["point"] = io::to_json(L, p.point);
    q["rep"] = p.rep.str();
    q["depth"] = p.depth;
    orbit.push_back(q);
  }
  j["orbit"] = orbit;
  int status = classify(B) == classify(L) ? kPass : kViolation;
  return {io::dump(j), status};
}

Outcome order_compare(const std::string& f, const std::string& g) {
  Germ u = germ_from_file(f), v = germ_from_file(g);
  Json j;
  j["f"] = io::to_json(u);
  j["g"] = io::to_json(v);
  j["compare"] = to_string(germ_compare(u, v));
  j["f_positive"] = in_positive_cone(u);
  j["g_positive"] = in_positive_cone(v);
  return {io::dump(j), kPass};
}

Outcome orbit_search(const Options& o, const std::string& n_text) {
  harness::Example ex = pick_example(o);
  BlownAction BA = harness::bind_example_blowup(ex);
  Rational n = Rational::parse(n_text);
  int ball = o.ball > 0 ? o.ball : 8;
  auto w = positive_ray_orbit_search(BA, n, ball);
  Json j;
  j["example"] = ex.name;
  j["n"] = n.str();
  j["ball"] = ball;
  if (w) {
    j["word"] = w->str();
    j["image"] = io::to_json(ex.action.space(), ex.action.apply(*w, BA.space().marked()));
    j["result"] = "found";
  } else {
    j["word"] = nullptr;
    j["result"] = "exhausted";
  }
  return {io::dump(j), kPass};
}

Outcome fuzz(const Options& o, const std::string& kind, int count, const FuzzBounds& bounds) {
  std::uint64_t seed = o.seed_given ? o.seed : harness::default_seed();
  Fuzzer fz(seed, bounds);
  std::ostringstream s;
  for (int i = 0; i < count; ++i) {
    Json j;
    if (kind == "plmap") {
      j = io::to_json(fz.plmap());
    } else if (kind == "germ") {
      j = io::to_json(fz.germ());
    } else if (kind == "word") {
      j = fz.word({"a", "b"}, bounds.max_word_length).str();
    } else if (kind == "homeo") {
      LeafSpace L = fz.leafspace(fz.coin() ? Side::Negative : Side::Positive);
      Action A(L, std::vector<Homeo>{fz.homeo(L, "h")});
      j["leafspace"] = io::to_json(L);
      j["action"] = io::to_json(io::spec_of(A));
    } else {
      throw InputError("unknown fuzz kind '" + kind + "'");
    }
    s << j.dump() << "\n";
  }
  return {s.str(), kPass};
}

Outcome emit_plot(const Options& o, const std::string& what, const std::string& plmap_path, const std::string& from,
                  const std::string& to, int samples) {
  std::ostringstream s;
  if (what == "germ") {
    if (plmap_path.empty()) throw InputError("emit-plot germ needs --plmap FILE");
    PLMap f = io::plmap_from_json(io::parse_json(io::read_file(plmap_path)), "");
    Germ g = germ_of(f);
    Rational a = Rational::parse(from), b = Rational::parse(to);
    if (!(a < b) || samples < 2) throw InputError("need --from < --to and --samples >= 2");
    s << "x\tf(x)\ttail(x)\tx_exact\tf_exact\n";
    for (int i = 0; i < samples; ++i) {
      Rational x = a + (b - a) * Rational(i, samples - 1);
      s << decimal(x) << "\t" << decimal(f(x)) << "\t" << decimal(g(x)) << "\t" << x.str() << "\t" << f(x).str()
        << "\n";
    }
  } else if (what == "orbit") {
    harness::Example ex = pick_example(o);
    BlownAction BA = harness::bind_example_blowup(ex);
    const LeafSpace& L = ex.action.space();
    s << "index\tdepth\trep\tbranch\tcoord\tcoord_exact\n";
    std::size_t i = 0;
    for (const OrbitPoint& p : BA.space().orbit()) {
      Json pj = io::to_json(L, p.point);
      s << i++ << "\t" << p.depth << "\t" << (p.rep.empty() ? "1" : p.rep.str()) << "\t"
        << pj["branch"].get<std::string>() << "\t" << decimal(Rational::parse(pj["coord"].get<std::string>())) << "\t"
        << pj["coord"].get<std::string>() << "\n";
    }
  } else {
    throw InputError("emit-plot takes 'germ' or 'orbit'");
  }
  return {s.str(), kPass};
}

Outcome replay_report(const std::string& path) {
  Json report = io::parse_json(io::read_file(path));
  std::vector<Json> failed;
  if (report.contains("reports")) {
    for (const auto& r : report["reports"])
      if (r.contains("counterexample")) failed.push_back(r);
  } else {
    failed.push_back(report);
  }
  if (failed.empty()) throw InputError("report has no counterexample to replay");
  Json out = Json::array();
  bool reproduced = false;
  for (const auto& r : failed) {
    auto why = harness::replay(r);
    Json j;
    j["suite"] = r.at("suite");
    j["result"] = why ? "fails" : "passes";
    j["reason"] = why ? Json(*why) : Json(nullptr);
    out.push_back(j);
    reproduced = reproduced || why.has_value();
  }
  return {io::dump(out.size() == 1 ? out.front() : out), reproduced ? kViolation : kPass};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const std::string& data_dir) {
  CLI::App app{"germcheck: exact checks for germs at +inf, leaf spaces and blow-up actions"};
  app.require_subcommand(1);
  Options o;
  o.data_dir = data_dir;
  std::function<Outcome()> job;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "random seed (default: GERMCHECK_SEED or built-in)")
        ->each([&](const std::string&) { o.seed_given = true; });
    s->add_option("--threads", o.threads, "worker threads (default: hardware concurrency)");
    s->add_flag("--timings", o.timings, "include elapsed_ms in reports");
    s->add_option("--out", o.out_path, "write output to FILE instead of stdout");
    s->add_option("--data", o.data_dir, "directory of bundled examples");
  };
  auto example_opts = [&](CLI::App* s) {
    s->add_option("--example", o.example, "bundled example: e1, e2 or e3");
    s->add_option("--leafspace", o.leafspace, "leaf-space file");
    s->add_option("--action", o.action, "action file");
    s->add_option("--blowup", o.blowup, "blow-up file");
  };

  auto* s_group = app.add_subcommand("check-germ-group", "group, well-definedness and order laws of germs");
  common(s_group);
  s_group->add_option("--cases", o.cases, "cases per suite");
  s_group->callback([&] {
    job = [&] {
      auto c = make_config(o);
      if (o.cases > 0) c.germ_cases = c.well_defined_pairs = c.order_triples = o.cases;
      return run_suites({"germ-group-axioms", "germ-well-defined", "left-order"}, c);
    };
  });

  std::string word_text;
  auto* s_d = app.add_subcommand("compute-d", "the induced germ d(w) of a word");
  common(s_d);
  example_opts(s_d);
  s_d->add_option("--word", word_text, "word such as \"a b^-1 a\"")->required();
  s_d->callback([&] { job = [&] { return compute_d(o, word_text); }; });

  auto* s_hom = app.add_subcommand("check-hom", "overlap ray, independence of g0, homomorphism and nontriviality");
  common(s_hom);
  example_opts(s_hom);
  s_hom->add_option("--cases", o.cases, "random words or pairs per example");
  s_hom->callback([&] {
    job = [&] {
      auto c = make_config(o);
      if (o.cases > 0) c.homeo_cases = c.word_pairs = o.cases;
      return run_suites({"overlap-ray", "g0-independence", "d-homomorphism", "nontriviality"}, c);
    };
  });

  auto* s_blow = app.add_subcommand("blowup", "build the blow-up along the orbit of the marked point");
  common(s_blow);
  example_opts(s_blow);
  s_blow->callback([&] { job = [&] { return blowup_summary(o); }; });

  auto* s_act = app.add_subcommand("check-action", "the action law of alpha on sampled points");
  common(s_act);
  example_opts(s_act);
  s_act->add_option("--ball", o.ball, "total word length of pairs");
  s_act->callback([&] {
    job = [&] {
      auto c = make_config(o);
      if (o.ball > 0) c.alpha_ball = o.ball;
      return run_suites({"alpha-action-law"}, c);
    };
  });

  auto* s_stab = app.add_subcommand("check-stabilizer", "no nontrivial word fixes the marked midpoint");
  common(s_stab);
  example_opts(s_stab);
  s_stab->add_option("--ball", o.ball, "word length bound");
  s_stab->callback([&] {
    job = [&] {
      auto c = make_config(o);
      if (o.ball > 0) c.stabilizer_ball = o.ball;
      return run_suites({"trivial-stabilizer"}, c);
    };
  });

  std::string f_path, g_path;
  auto* s_ord = app.add_subcommand("order-compare", "compare two germs in the left order");
  common(s_ord);
  s_ord->add_option("f", f_path, "PL map or germ file")->required();
  s_ord->add_option("g", g_path, "PL map or germ file")->required();
  s_ord->callback([&] { job = [&] { return order_compare(f_path, g_path); }; });

  std::string n_text = "0";
  auto* s_orb = app.add_subcommand("orbit-search", "find h with alpha_h of the marked midpoint beyond n");
  common(s_orb);
  example_opts(s_orb);
  s_orb->add_option("--n", n_text, "threshold n");
  s_orb->add_option("--ball", o.ball, "word length bound (default 8)");
  s_orb->callback([&] { job = [&] { return orbit_search(o, n_text); }; });

  std::string kind = "plmap";
  int count = 10;
  FuzzBounds bounds;
  auto* s_fuzz = app.add_subcommand("fuzz", "print random objects, one JSON per line");
  common(s_fuzz);
  s_fuzz->add_option("--kind", kind, "plmap, germ, word or homeo");
  s_fuzz->add_option("--count", count, "number of objects");
  s_fuzz->add_option("--max-breakpoints", bounds.max_breakpoints);
  s_fuzz->add_option("--max-denominator", bounds.max_denominator);
  s_fuzz->add_option("--max-word-length", bounds.max_word_length);
  s_fuzz->add_option("--max-branches", bounds.max_branches);
  s_fuzz->callback([&] { job = [&] { return fuzz(o, kind, count, bounds); }; });

  std::string what, plmap_path, from = "-10", to = "10";
  int samples = 41;
  auto* s_plot = app.add_subcommand("emit-plot", "tab-separated data for plotting germ tails or orbits");
  common(s_plot);
  example_opts(s_plot);
  s_plot->add_option("what", what, "germ or orbit")->required();
  s_plot->add_option("--plmap", plmap_path, "PL map file (germ)");
  s_plot->add_option("--from", from, "left end (germ)");
  s_plot->add_option("--to", to, "right end (germ)");
  s_plot->add_option("--samples", samples, "number of rows (germ)");
  s_plot->callback([&] { job = [&] { return emit_plot(o, what, plmap_path, from, to, samples); }; });

  std::vector<std::string> suites;
  bool all = false;
  auto* s_run = app.add_subcommand("run-suite", "run named property suites");
  common(s_run);
  example_opts(s_run);
  s_run->add_option("names", suites, "suite names");
  s_run->add_flag("--all", all, "run every suite");
  s_run->callback([&] {
    job = [&] {
      if (all) suites = harness::suite_names();
      if (suites.empty()) throw InputError("name a suite or pass --all");
      for (const auto& n : suites) (void)harness::suite_anchor(n);
      return run_suites(suites, make_config(o));
    };
  });

  std::string report_path;
  auto* s_replay = app.add_subcommand("replay", "re-run the counterexample of a failed report");
  common(s_replay);
  s_replay->add_option("report", report_path, "report file")->required();
  s_replay->callback([&] { job = [&] { return replay_report(report_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    Outcome r = job();
    if (o.out_path.empty()) {
      out << r.text;
    } else {
      std::ofstream f(o.out_path, std::ios::binary);
      if (!f) throw InputError("cannot write " + o.out_path);
      f << r.text;
    }
    return r.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace germs::cli
