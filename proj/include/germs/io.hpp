#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "germs/action.hpp"
#include "germs/blowup.hpp"
#include "germs/germ.hpp"
#include "germs/leafspace.hpp"
#include "germs/plmap.hpp"

namespace germs::io {

using Json = nlohmann::ordered_json;

// Input error annotated with where it happened: a byte offset for syntax
// errors, a JSON pointer for schema errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where(std::move(where)) {}
  std::string where;
};

// Canonical text: two-space indented JSON with a trailing newline.
std::string dump(const Json& j);
Json parse_json(const std::string& text);

// --- PL maps and germs -----------------------------------------------------

Json to_json(const PLMap& f);
RawPL raw_pl_from_json(const Json& j, const std::string& where);
PLMap plmap_from_json(const Json& j, const std::string& where = "");

Json to_json(const Germ& g);
Germ germ_from_json(const Json& j, const std::string& where = "");

// --- leaf spaces -----------------------------------------------------------

Json to_json(const LeafSpace& L);
LeafSpace leafspace_from_json(const Json& j);

// A point as written in a file: branch id plus coordinate in the file's chart.
Json to_json(const LeafSpace& L, const Point& p);
Point point_from_json(const LeafSpace& L, const Json& j, const std::string& where);

// --- actions ---------------------------------------------------------------

// Generators exactly as declared, in the file's chart.
struct ActionSpec {
  std::vector<HomeoDraft> generators;
};

Json to_json(const ActionSpec& spec);
ActionSpec action_spec_from_json(const Json& j);

// Binds a spec to a leaf space, moving PL data into the internal chart.
Action bind_action(const LeafSpace& L, const ActionSpec& spec, ExtensionPolicy policy = {});
// Fully explicit spec of a bound action, in the file's chart.
ActionSpec spec_of(const Action& A);

// --- blow-ups --------------------------------------------------------------

struct BlowupSpec {
  Json marked;  // point, resolved against the leaf space at bind time
  std::vector<KGenerator> k_generators;
  std::vector<std::pair<std::string, RawPL>> phi;
  std::vector<std::pair<Word, Word>> coset_table;
  int depth = 3;
  int ball = 5;
};

Json to_json(const BlowupSpec& spec);
BlowupSpec blowup_spec_from_json(const Json& j);

BlownAction bind_blowup(const Action& A, const BlowupSpec& spec, bool validate_cosets = true);

// Blown points in the file's chart (interval coordinate mirrored when the
// space branches on the positive side).
Json to_json(const LeafSpace& L, const BlownPoint& q);
BlownPoint blown_point_from_json(const LeafSpace& L, const Json& j, const std::string& where);

// --- files -----------------------------------------------------------------

template <class T>
struct Parsed {
  T value;
  bool canonical = false;  // re-serialization reproduces the input byte for byte
};

using AnySpec = std::variant<LeafSpace, ActionSpec, BlowupSpec>;

std::string read_file(const std::string& path);
Parsed<AnySpec> parse_spec(const std::string& path);
Parsed<AnySpec> parse_spec_text(const std::string& text);
std::string serialize(const AnySpec& spec);

Parsed<LeafSpace> load_leafspace(const std::string& path);
Parsed<ActionSpec> load_action(const std::string& path);
Parsed<BlowupSpec> load_blowup(const std::string& path);

}  // namespace germs::io
