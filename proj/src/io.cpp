#include "germs/io.hpp"

#include <fstream>
#include <sstream>

namespace germs::io {

namespace {

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where.empty() ? "/" : where, "missing field \"" + key + "\"");
  return *it;
}

std::string string_at(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

Rational rational_at(const Json& j, const std::string& where) {
  try {
    return Rational::parse(string_at(j, where));
  } catch (const RationalParseError& e) {
    throw ParseError(where, e.what());
  }
}

int int_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<int>();
}

Word word_at(const Json& j, const std::string& where) {
  try {
    return Word::parse(string_at(j, where));
  } catch (const WordParseError& e) {
    throw ParseError(where, e.what());
  }
}

RawPL reflect(const RawPL& r) {
  RawPL out;
  out.left_slope = r.right_slope;
  out.right_slope = r.left_slope;
  out.anchor = {-r.anchor.x, -r.anchor.y};
  for (auto it = r.knots.rbegin(); it != r.knots.rend(); ++it) out.knots.push_back({-it->x, -it->y});
  return out;
}

Rational to_file_chart(const LeafSpace& L, const Rational& x) { return L.side() == Side::Positive ? -x : x; }

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
}

Json to_json(const PLMap& f) {
  Json j;
  j["points"] = Json::array();
  for (const Knot& k : f.knots()) j["points"].push_back(Json::array({k.x.str(), k.y.str()}));
  if (f.is_affine()) j["anchor"] = Json::array({Rational(0).str(), f.affine_offset().str()});
  j["left_slope"] = f.left_slope().str();
  j["right_slope"] = f.right_slope().str();
  return j;
}

RawPL raw_pl_from_json(const Json& j, const std::string& where) {
  RawPL raw;
  const Json& pts = field(j, "points", where);
  if (!pts.is_array()) throw ParseError(child(where, "points"), "expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::string w = child(child(where, "points"), i);
    if (!pts[i].is_array() || pts[i].size() != 2) throw ParseError(w, "expected a [x, y] pair");
    raw.knots.push_back({rational_at(pts[i][0], child(w, 0)), rational_at(pts[i][1], child(w, 1))});
  }
  raw.left_slope = rational_at(field(j, "left_slope", where), child(where, "left_slope"));
  raw.right_slope = rational_at(field(j, "right_slope", where), child(where, "right_slope"));
  if (raw.knots.empty()) {
    const Json& a = field(j, "anchor", where);
    std::string w = child(where, "anchor");
    if (!a.is_array() || a.size() != 2) throw ParseError(w, "expected a [x, y] pair");
    raw.anchor = {rational_at(a[0], child(w, 0)), rational_at(a[1], child(w, 1))};
  }
  return raw;
}

PLMap plmap_from_json(const Json& j, const std::string& where) {
  RawPL raw = raw_pl_from_json(j, where);
  try {
    return pl_normalize(raw);
  } catch (const InvalidHomeomorphism& e) {
    throw ParseError(where.empty() ? "/" : where, e.what());
  }
}

Json to_json(const Germ& g) {
  Json j;
  j["a"] = g.slope().str();
  j["b"] = g.offset().str();
  return j;
}

Germ germ_from_json(const Json& j, const std::string& where) {
  Rational a = rational_at(field(j, "a", where), child(where, "a"));
  Rational b = rational_at(field(j, "b", where), child(where, "b"));
  if (a.sign() <= 0) throw ParseError(child(where, "a"), "germ slope must be positive");
  return Germ(a, b);
}

Json to_json(const LeafSpace& L) {
  Json j;
  j["side"] = to_string(L.side());
  j["branches"] = Json::array();
  for (const Branch& b : L.branches()) {
    Json e;
    e["id"] = b.id;
    if (b.parent >= 0) {
      e["parent"] = L.id_of(b.parent);
      e["departure"] = to_file_chart(L, *b.departure).str();
    }
    j["branches"].push_back(std::move(e));
  }
  return j;
}

LeafSpace leafspace_from_json(const Json& j) {
  std::string side_s = string_at(field(j, "side", ""), "/side");
  Side side;
  if (side_s == "negative") side = Side::Negative;
  else if (side_s == "positive") side = Side::Positive;
  else throw ParseError("/side", "expected \"negative\" or \"positive\"");

  const Json& bs = field(j, "branches", "");
  if (!bs.is_array()) throw ParseError("/branches", "expected an array");
  std::vector<LeafSpace::BranchSpec> specs;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    std::string w = child("/branches", i);
    LeafSpace::BranchSpec s;
    s.id = string_at(field(bs[i], "id", w), child(w, "id"));
    if (bs[i].contains("parent")) s.parent = string_at(bs[i]["parent"], child(w, "parent"));
    if (bs[i].contains("departure")) {
      Rational t = rational_at(bs[i]["departure"], child(w, "departure"));
      s.departure = side == Side::Positive ? -t : t;
    }
    specs.push_back(std::move(s));
  }
  try {
    return LeafSpace(std::move(specs), side);
  } catch (const LeafSpaceError& e) {
    throw ParseError("/branches", e.what());
  }
}

Json to_json(const LeafSpace& L, const Point& p) {
  Json j;
  j["branch"] = L.id_of(p.branch);
  j["coord"] = to_file_chart(L, p.coord).str();
  return j;
}

Point point_from_json(const LeafSpace& L, const Json& j, const std::string& where) {
  std::string id = string_at(field(j, "branch", where), child(where, "branch"));
  auto b = L.find(id);
  if (!b) throw ParseError(child(where, "branch"), "unknown branch '" + id + "'");
  Rational c = rational_at(field(j, "coord", where), child(where, "coord"));
  return canonical_point(L, Point{*b, L.side() == Side::Positive ? -c : c});
}

Json to_json(const ActionSpec& spec) {
  Json j;
  j["generators"] = Json::array();
  for (const HomeoDraft& d : spec.generators) {
    Json g;
    g["name"] = d.name;
    g["branch_map"] = Json::object();
    for (const auto& [from, to] : d.branch_map) g["branch_map"][from] = to;
    g["branch_pl"] = Json::object();
    for (const auto& [id, raw] : d.branch_pl) {
      // Drafts hold raw data; canonical files hold canonical maps.
      try {
        g["branch_pl"][id] = to_json(pl_normalize(raw));
      } catch (const InvalidHomeomorphism&) {
        Json r;
        r["points"] = Json::array();
        for (const Knot& k : raw.knots) r["points"].push_back(Json::array({k.x.str(), k.y.str()}));
        if (raw.knots.empty()) r["anchor"] = Json::array({raw.anchor.x.str(), raw.anchor.y.str()});
        r["left_slope"] = raw.left_slope.str();
        r["right_slope"] = raw.right_slope.str();
        g["branch_pl"][id] = r;
      }
    }
    j["generators"].push_back(std::move(g));
  }
  return j;
}

ActionSpec action_spec_from_json(const Json& j) {
  ActionSpec spec;
  const Json& gs = field(j, "generators", "");
  if (!gs.is_array()) throw ParseError("/generators", "expected an array");
  for (std::size_t i = 0; i < gs.size(); ++i) {
    std::string w = child("/generators", i);
    HomeoDraft d;
    d.name = string_at(field(gs[i], "name", w), child(w, "name"));
    try {
      (void)Word::parse(d.name);
    } catch (const WordParseError& e) {
      throw ParseError(child(w, "name"), e.what());
    }
    if (gs[i].contains("branch_map")) {
      const Json& bm = gs[i]["branch_map"];
      if (!bm.is_object()) throw ParseError(child(w, "branch_map"), "expected an object");
      for (auto it = bm.begin(); it != bm.end(); ++it)
        d.branch_map.emplace_back(it.key(), string_at(it.value(), child(child(w, "branch_map"), it.key())));
    }
    if (gs[i].contains("branch_pl")) {
      const Json& bp = gs[i]["branch_pl"];
      if (!bp.is_object()) throw ParseError(child(w, "branch_pl"), "expected an object");
      for (auto it = bp.begin(); it != bp.end(); ++it)
        d.branch_pl.emplace_back(it.key(), raw_pl_from_json(it.value(), child(child(w, "branch_pl"), it.key())));
    }
    spec.generators.push_back(std::move(d));
  }
  return spec;
}

Action bind_action(const LeafSpace& L, const ActionSpec& spec, ExtensionPolicy policy) {
  std::vector<HomeoDraft> drafts = spec.generators;
  if (L.side() == Side::Positive)
    for (HomeoDraft& d : drafts)
      for (auto& [id, raw] : d.branch_pl) raw = reflect(raw);
  return Action(L, drafts, policy);
}

ActionSpec spec_of(const Action& A) {
  const LeafSpace& L = A.space();
  ActionSpec spec;
  for (const Homeo& h : A.generators()) {
    HomeoDraft d;
    d.name = h.name;
    for (std::size_t b = 0; b < L.size(); ++b) {
      auto bi = static_cast<BranchIndex>(b);
      d.branch_map.emplace_back(L.id_of(bi), L.id_of(h.branch_map[b]));
      PLMap f = L.side() == Side::Positive ? pl_reflect(h.branch_pl[b]) : h.branch_pl[b];
      d.branch_pl.emplace_back(L.id_of(bi), f.raw());
    }
    spec.generators.push_back(std::move(d));
  }
  return spec;
}

Json to_json(const BlowupSpec& spec) {
  Json j;
  j["marked"] = spec.marked;
  j["K_generators"] = Json::array();
  for (const KGenerator& k : spec.k_generators) {
    Json e;
    e["name"] = k.name;
    e["word"] = k.word.str();
    j["K_generators"].push_back(std::move(e));
  }
  j["phi"] = Json::object();
  for (const auto& [name, raw] : spec.phi) j["phi"][name] = to_json(pl_normalize(raw));
  if (!spec.coset_table.empty()) {
    j["coset_table"] = Json::array();
    for (const auto& [word, rep] : spec.coset_table) {
      Json e;
      e["word"] = word.str();
      e["rep"] = rep.str();
      j["coset_table"].push_back(std::move(e));
    }
  }
  j["depth"] = spec.depth;
  j["ball"] = spec.ball;
  return j;
}

BlowupSpec blowup_spec_from_json(const Json& j) {
  BlowupSpec spec;
  spec.marked = field(j, "marked", "");
  if (!spec.marked.is_object()) throw ParseError("/marked", "expected a point object");
  (void)field(spec.marked, "branch", "/marked");
  (void)rational_at(field(spec.marked, "coord", "/marked"), "/marked/coord");

  if (j.contains("K_generators")) {
    const Json& ks = j["K_generators"];
    if (!ks.is_array()) throw ParseError("/K_generators", "expected an array");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      std::string w = child("/K_generators", i);
      spec.k_generators.push_back(KGenerator{string_at(field(ks[i], "name", w), child(w, "name")),
                                             word_at(field(ks[i], "word", w), child(w, "word"))});
    }
  }
  if (j.contains("phi")) {
    const Json& ph = j["phi"];
    if (!ph.is_object()) throw ParseError("/phi", "expected an object");
    for (auto it = ph.begin(); it != ph.end(); ++it) {
      std::string w = child("/phi", it.key());
      RawPL raw = raw_pl_from_json(it.value(), w);
      try {
        (void)pl_normalize(raw);
      } catch (const InvalidHomeomorphism& e) {
        throw ParseError(w, e.what());
      }
      spec.phi.emplace_back(it.key(), std::move(raw));
    }
  }
  if (j.contains("coset_table")) {
    const Json& ct = j["coset_table"];
    if (!ct.is_array()) throw ParseError("/coset_table", "expected an array");
    for (std::size_t i = 0; i < ct.size(); ++i) {
      std::string w = child("/coset_table", i);
      spec.coset_table.emplace_back(word_at(field(ct[i], "word", w), child(w, "word")),
                                    word_at(field(ct[i], "rep", w), child(w, "rep")));
    }
  }
  if (j.contains("depth")) spec.depth = int_at(j["depth"], "/depth");
  if (j.contains("ball")) spec.ball = int_at(j["ball"], "/ball");
  if (spec.depth < 0) throw ParseError("/depth", "must be non-negative");
  if (spec.ball < 0) throw ParseError("/ball", "must be non-negative");
  return spec;
}

BlownAction bind_blowup(const Action& A, const BlowupSpec& spec, bool validate_cosets) {
  const LeafSpace& L = A.space();
  Point marked = point_from_json(L, spec.marked, "/marked");
  StabilizerData S;
  S.k_generators = spec.k_generators;
  for (const auto& [name, raw] : spec.phi) {
    PLMap f = pl_normalize(raw);
    S.phi.emplace(name, L.side() == Side::Positive ? pl_reflect_unit(f) : f);
  }
  S.coset_table = spec.coset_table;
  S.validate_cosets = validate_cosets;
  return BlownAction(build_blowup(A, marked, spec.depth), std::move(S));
}

Json to_json(const LeafSpace& L, const BlownPoint& q) {
  Json j = to_json(L, q.base);
  if (q.t) j["t"] = (L.side() == Side::Positive ? Rational(1) - *q.t : *q.t).str();
  return j;
}

BlownPoint blown_point_from_json(const LeafSpace& L, const Json& j, const std::string& where) {
  Point p = point_from_json(L, j, where);
  if (!j.contains("t")) return BlownPoint::plain(p);
  Rational t = rational_at(j["t"], child(where, "t"));
  return BlownPoint::interval(p, L.side() == Side::Positive ? Rational(1) - t : t);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Parsed<AnySpec> parse_spec_text(const std::string& text) {
  Json j = parse_json(text);
  if (!j.is_object()) throw ParseError("/", "expected an object");
  auto make = [&](AnySpec v) {
    Parsed<AnySpec> out{std::move(v), false};
    out.canonical = serialize(out.value) == text;
    return out;
  };
  if (j.contains("branches")) return make(leafspace_from_json(j));
  if (j.contains("generators")) return make(action_spec_from_json(j));
  if (j.contains("marked")) return make(blowup_spec_from_json(j));
  throw ParseError("/", "cannot tell what kind of spec this is (expected \"branches\", \"generators\" or \"marked\")");
}

Parsed<AnySpec> parse_spec(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_spec_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.where, std::string(e.what()).substr(e.where.size() + 2));
  }
}

std::string serialize(const AnySpec& spec) {
  return std::visit([](const auto& v) { return dump(to_json(v)); }, spec);
}

namespace {

template <class T>
Parsed<T> load_as(const std::string& path, const char* kind) {
  Parsed<AnySpec> p = parse_spec(path);
  if (!std::holds_alternative<T>(p.value)) throw ParseError(path, std::string("expected a ") + kind + " spec");
  return Parsed<T>{std::get<T>(std::move(p.value)), p.canonical};
}

}  // namespace

Parsed<LeafSpace> load_leafspace(const std::string& path) { return load_as<LeafSpace>(path, "leaf-space"); }
Parsed<ActionSpec> load_action(const std::string& path) { return load_as<ActionSpec>(path, "action"); }
Parsed<BlowupSpec> load_blowup(const std::string& path) { return load_as<BlowupSpec>(path, "blow-up"); }

}  // namespace germs::io
