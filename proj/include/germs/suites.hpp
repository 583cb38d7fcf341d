#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "germs/fuzz.hpp"
#include "germs/io.hpp"
#include "germs/parallel.hpp"

namespace germs::harness {

using Json = io::Json;

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bundled or user-supplied example: file paths of its parts.
struct ExamplePaths {
  std::string name;
  std::string leafspace;
  std::string action;
  std::optional<std::string> blowup;
};

// An example with its files parsed, kept alongside the raw JSON so that
// counterexamples can carry everything needed to replay them.
struct Example {
  std::string name;
  Json leafspace_json;
  Json action_json;
  std::optional<Json> blowup_json;
  Action action;
  std::optional<io::BlowupSpec> blowup;
};

Example load_example(const ExamplePaths& paths);
Example example_from_json(const std::string& name, const Json& payload);
Json example_payload(const Example& ex);
BlownAction bind_example_blowup(const Example& ex);

struct SuiteConfig {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timings = false;
  FuzzBounds bounds;

  int germ_cases = 1000;
  int well_defined_pairs = 500;
  int order_triples = 1000;
  int homeo_cases = 200;
  int word_pairs = 500;
  int word_length = 8;

  int alpha_ball = 4;
  int interval_depth = 2;
  int per_interval = 9;
  int plain_samples = 100;
  int stabilizer_ball = 5;
  int injectivity_ball = 5;
  std::vector<Rational> injectivity_probes{Rational(0), Rational(1000), Rational(1000000)};
  int orbit_ball = 8;
  std::vector<Rational> orbit_targets{Rational(5), Rational(100)};
  int trivial_d_ball = 4;
  std::vector<std::string> trivial_d_examples{"e2"};

  int structural_cases = 100;

  std::vector<ExamplePaths> examples;

  // Bundled examples from `data_dir`, seed from the environment.
  static SuiteConfig defaults(const std::string& data_dir);
};

// GERMCHECK_SEED when set, otherwise a fixed default.
std::uint64_t default_seed();

std::vector<std::string> suite_names();
// The statement a suite checks.
std::string suite_anchor(const std::string& name);

struct Report {
  Json json;
  bool pass = true;
};

// Deterministic for a fixed config: results are ordered by case index and
// timings are only included on request.
Report run_suite(const std::string& name, const SuiteConfig& config);

// Re-runs the counterexample of a failed report in isolation. Returns the
// failure reason when it still fails, std::nullopt when it now passes.
std::optional<std::string> replay(const Json& report);

// --- single-case checks shared by the suites and replay ----------------------

std::optional<std::string> check_group_laws(const PLMap& f, const PLMap& g, const PLMap& h);
std::optional<std::string> check_well_defined(const PLMap& f, const PLMap& g, const PLMap& f2, const PLMap& g2);
std::optional<std::string> check_order_laws(const PLMap& f, const PLMap& g, const PLMap& h);
std::optional<std::string> check_overlap(const LeafSpace& L, const Homeo& h);
std::optional<std::string> check_g0_independence(const LeafSpace& L, const Homeo& h);
std::optional<std::string> check_d_homomorphism(const Action& A, const Word& w1, const Word& w2);
std::optional<std::string> check_nontriviality(const LeafSpace& L, const Homeo& h);
std::optional<std::string> check_trivial_d(const LeafSpace& L, const Homeo& h);
std::optional<std::string> check_alpha_orientation(const BlownAction& A, const Word& h, const Point& base,
                                                   const std::vector<Rational>& ts);
std::optional<std::string> check_structural_case(std::uint64_t seed, std::size_t index);

}  // namespace germs::harness
