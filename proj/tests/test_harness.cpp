#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "germs/cli.hpp"
#include "germs/suites.hpp"

using namespace germs;
using io::Json;
namespace fs = std::filesystem;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::string data(const std::string& rel) { return std::string(GERMS_DATA_DIR) + "/" + rel; }

harness::SuiteConfig small_config() {
  harness::SuiteConfig c = harness::SuiteConfig::defaults(GERMS_DATA_DIR);
  c.seed = 4242;
  c.germ_cases = 100;
  c.well_defined_pairs = 50;
  c.order_triples = 50;
  c.homeo_cases = 10;
  c.word_pairs = 20;
  c.alpha_ball = 2;
  c.plain_samples = 20;
  c.per_interval = 3;
  c.interval_depth = 1;
  c.stabilizer_ball = 3;
  c.injectivity_ball = 3;
  c.trivial_d_ball = 2;
  c.structural_cases = 10;
  return c;
}

harness::SuiteConfig only(harness::SuiteConfig c, const std::string& name, const std::string& blowup = "") {
  std::vector<harness::ExamplePaths> keep;
  for (auto p : c.examples)
    if (p.name == name) {
      if (!blowup.empty()) p.blowup = data(name + "/" + blowup);
      keep.push_back(p);
    }
  c.examples = keep;
  return c;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "germcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = germs::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err, GERMS_DATA_DIR);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / ("germs_test_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

}  // namespace

TEST_CASE("bundled files are canonical and round-trip byte for byte") {
  for (const char* f : {"e1/leafspace.json", "e1/action.json", "e1/blowup.json", "e2/leafspace.json", "e2/action.json",
                        "e3/leafspace.json", "e3/action.json", "e3/blowup.json", "e3/blowup_fault_phi.json",
                        "e3/blowup_fault_coset.json"}) {
    auto parsed = io::parse_spec(data(f));
    CHECK_MESSAGE(parsed.canonical, f);
    CHECK(io::serialize(parsed.value) == io::read_file(data(f)));
  }
}

TEST_CASE("leaf-space files") {
  std::string line = io::serialize(LeafSpace::line());
  auto p = io::parse_spec_text(line);
  CHECK(p.canonical);
  REQUIRE(std::holds_alternative<LeafSpace>(p.value));
  CHECK(std::get<LeafSpace>(p.value).size() == 1);

  std::string text = io::read_file(data("e2/leafspace.json"));
  std::string half = text;
  half.replace(half.find("0/1"), 3, "2/4");
  auto h = io::parse_spec_text(half);
  CHECK_FALSE(h.canonical);
  std::string again = io::serialize(h.value);
  CHECK(again.find("\"1/2\"") != std::string::npos);
  CHECK(io::parse_spec_text(again).canonical);

  std::string orphan = text;
  orphan.replace(orphan.find("\"root\",\n      \"departure\""), 6, "\"tree\"");
  try {
    io::parse_spec_text(orphan);
    FAIL("undefined parent accepted");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("b1") != std::string::npos);
  }

  try {
    io::parse_spec_text("{\"side\": \"negative\", \"branches\": [}");
    FAIL("bad JSON accepted");
  } catch (const io::ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("positive-side spaces round-trip through the mirrored chart") {
  std::string text = io::read_file(data("e2/leafspace.json"));
  std::string pos = text;
  pos.replace(pos.find("negative"), 8, "positive");
  pos.replace(pos.find("0/1"), 3, "3/2");
  auto p = io::parse_spec_text(pos);
  CHECK(p.canonical);
  const LeafSpace& L = std::get<LeafSpace>(p.value);
  CHECK(classify(L) == LeafSpaceKind::OneSidedPositive);
  CHECK(*L.branch(1).departure == R(-3, 2));
  for (std::size_t i = 0; i < 30; ++i) CHECK_FALSE(harness::check_structural_case(2024, i));
}

TEST_CASE("fuzzing") {
  Fuzzer a(0), b(0);
  for (int i = 0; i < 50; ++i) {
    CHECK(a.plmap() == b.plmap());
    CHECK(a.word({"x", "y"}, 8) == b.word({"x", "y"}, 8));
  }
  FuzzBounds flat;
  flat.max_breakpoints = 0;
  Fuzzer c(1, flat);
  for (int i = 0; i < 50; ++i) CHECK(c.plmap().is_affine());
  Fuzzer d(2);
  for (int i = 0; i < 100; ++i) {
    LeafSpace L = d.leafspace(d.coin() ? Side::Negative : Side::Positive);
    CHECK_FALSE(validate_homeo(L, d.homeo(L, "h")));
    Word w = d.word({"x", "y"}, 8);
    CHECK(w.length() <= 8);
  }
  CHECK(run({"fuzz", "--seed", "0", "--count", "5", "--kind", "homeo"}).out ==
        run({"fuzz", "--seed", "0", "--count", "5", "--kind", "homeo"}).out);
}

TEST_CASE("suites") {
  CHECK(harness::run_suite("germ-group-axioms", harness::SuiteConfig::defaults(GERMS_DATA_DIR)).pass);
  auto c = small_config();
  for (const auto& name : harness::suite_names()) {
    harness::Report r = harness::run_suite(name, c);
    CHECK_MESSAGE(r.pass, name);
    CHECK(r.json["anchor"] == harness::suite_anchor(name));
    CHECK_FALSE(r.json.contains("elapsed_ms"));
  }
  CHECK(harness::run_suite("alpha-action-law", only(c, "e1")).pass);
  CHECK_THROWS_AS(harness::run_suite("no-such-suite", c), harness::UnknownSuite);
  c.timings = true;
  CHECK(harness::run_suite("left-order", c).json.contains("elapsed_ms"));
}

TEST_CASE("determinism") {
  auto c = small_config();
  for (const char* name : {"germ-group-axioms", "overlap-ray", "d-homomorphism", "alpha-action-law"}) {
    std::string first = io::dump(harness::run_suite(name, c).json);
    auto c2 = c;
    c2.threads = 4;
    CHECK(io::dump(harness::run_suite(name, c2).json) == first);
    CHECK(io::dump(harness::run_suite(name, c).json) == first);
  }
  auto other = c;
  other.seed = 4243;
  CHECK(io::dump(harness::run_suite("germ-group-axioms", other).json) !=
        io::dump(harness::run_suite("germ-group-axioms", c).json));
}

TEST_CASE("fault fixtures fail and their counterexamples replay") {
  auto c = small_config();
  harness::Report coset = harness::run_suite("alpha-action-law", only(c, "e3", "blowup_fault_coset.json"));
  CHECK_FALSE(coset.pass);
  REQUIRE(coset.json.contains("counterexample"));
  auto why = harness::replay(coset.json);
  REQUIRE(why);
  CHECK(why->find("coset") != std::string::npos);

  c.stabilizer_ball = 5;
  harness::Report phi = harness::run_suite("trivial-stabilizer", only(c, "e3", "blowup_fault_phi.json"));
  CHECK_FALSE(phi.pass);
  CHECK(phi.json["counterexample"]["word"] == "k");
  CHECK(harness::replay(phi.json));

  // Replay goes through JSON text, as it would from a saved report.
  Json reread = io::parse_json(io::dump(phi.json));
  CHECK(harness::replay(reread) == harness::replay(phi.json));

  // A passing report has nothing to replay.
  Json passing = harness::run_suite("germ-group-axioms", small_config()).json;
  CHECK_THROWS(harness::replay(passing));
}

TEST_CASE("command line") {
  auto ok = run({"compute-d", "--example", "e1", "--word", "t t"});
  CHECK(ok.code == cli::kPass);
  Json d = io::parse_json(ok.out);
  CHECK(d["d"]["a"] == "1/1");
  CHECK(d["d"]["b"] == "2/1");

  auto e2 = run({"compute-d", "--example", "e2", "--word", "s h"});
  CHECK(e2.code == cli::kPass);
  CHECK(io::parse_json(e2.out)["witness"]["0/1"].is_null());

  std::string f = temp_file("f.json", io::dump(io::to_json(PLMap::affine(R(2), R(-5)))));
  std::string g = temp_file("g.json", "{\"a\": \"1/1\", \"b\": \"0/1\"}");
  auto cmp = run({"order-compare", f, g});
  CHECK(cmp.code == cli::kPass);
  CHECK(io::parse_json(cmp.out)["compare"] == "GT");

  CHECK(run({"run-suite", "no-such-suite"}).code == cli::kInputError);
  CHECK(run({"compute-d", "--example", "e1", "--word", "t^2x"}).code == cli::kInputError);
  CHECK(run({"blowup", "--leafspace", data("missing.json"), "--action", data("e1/action.json")}).code ==
        cli::kInputError);
  std::string broken = temp_file("broken.json", "{\"side\": \"negative\",\n \"branches\": [1,}");
  auto bad = run({"blowup", "--leafspace", broken, "--action", data("e1/action.json")});
  CHECK(bad.code == cli::kInputError);
  CHECK(bad.err.find("byte") != std::string::npos);
  CHECK(run({"no-such-command"}).code == cli::kInputError);

  auto stab = run({"check-stabilizer", "--example", "e3", "--blowup", data("e3/blowup_fault_phi.json")});
  CHECK(stab.code == cli::kViolation);
  std::string report = temp_file("report.json", stab.out);
  auto rep = run({"replay", report});
  CHECK(rep.code == cli::kViolation);
  CHECK(io::parse_json(rep.out)["result"] == "fails");

  auto orbit = run({"orbit-search", "--example", "e3", "--n", "100"});
  CHECK(orbit.code == cli::kPass);
  CHECK(io::parse_json(orbit.out)["result"] == "found");

  auto blow = run({"blowup", "--example", "e3"});
  CHECK(blow.code == cli::kPass);
  CHECK(io::parse_json(blow.out)["kind_after"] == io::parse_json(blow.out)["kind_before"]);

  auto plot = run({"emit-plot", "germ", "--plmap", f, "--samples", "3"});
  CHECK(plot.code == cli::kPass);
  CHECK(plot.out.rfind("x\t", 0) == 0);
  CHECK(run({"emit-plot", "orbit", "--example", "e1"}).code == cli::kPass);

  auto group = run({"check-germ-group", "--cases", "50", "--seed", "1"});
  CHECK(group.code == cli::kPass);
  CHECK(io::parse_json(group.out)["status"] == "pass");
}
