#include "novalg/jsonio.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace novalg {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_root(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be a JSON object");
  return j;
}

void expect_keys(const json& j, const std::string& ctx,
                 const std::vector<std::string>& required,
                 const std::vector<std::string>& optional = {}) {
  if (!j.is_object()) throw ParseError(ctx + " must be an object");
  for (const std::string& k : required)
    if (!j.contains(k)) throw ParseError(ctx + " is missing key '" + k + "'");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const std::string& r : required) known = known || k == r;
    for (const std::string& o : optional) known = known || k == o;
    if (!known) throw ParseError(ctx + " has unexpected key '" + k + "'");
  }
}

long get_long(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ParseError(ctx + " key '" + key + "' must be an integer");
  if (v.is_number_unsigned() &&
      v.get<unsigned long long>() >
          (unsigned long long)std::numeric_limits<long>::max())
    throw ParseError(ctx + " key '" + key + "' is out of range");
  return (long)v.get<long long>();
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& ctx) {
  const json& v = j.at(key);
  if (!v.is_string())
    throw ParseError(ctx + " key '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& get_array(const json& j, const std::string& key,
                      const std::string& ctx) {
  const json& v = j.at(key);
  if (!v.is_array())
    throw ParseError(ctx + " key '" + key + "' must be an array");
  return v;
}

std::vector<Incidence> incidences_from(const json& arr,
                                       const std::string& ctx) {
  std::vector<Incidence> out;
  for (const json& e : arr) {
    expect_keys(e, ctx + " incidence", {"from", "to", "t", "count"});
    Incidence inc;
    inc.from = get_string(e, "from", ctx);
    inc.to = get_string(e, "to", ctx);
    inc.t = get_long(e, "t", ctx);
    inc.count = get_long(e, "count", ctx);
    out.push_back(std::move(inc));
  }
  return out;
}

FlowCategoryData fc_from(const json& j, const std::string& ctx) {
  expect_keys(j, ctx, {"two_n", "omega", "generators", "incidences"});
  FlowCategoryData fc;
  fc.two_n = get_long(j, "two_n", ctx);
  fc.omega = get_long(j, "omega", ctx);
  for (const json& g : get_array(j, "generators", ctx)) {
    expect_keys(g, ctx + " generator", {"id", "index", "action"});
    GeneratorSpec spec;
    spec.id = get_string(g, "id", ctx);
    spec.index = get_long(g, "index", ctx);
    spec.action = get_long(g, "action", ctx);
    fc.generators.push_back(std::move(spec));
  }
  fc.incidences = incidences_from(get_array(j, "incidences", ctx), ctx);
  return fc;
}

long parse_class_key(const std::string& key, const std::string& ctx) {
  long value = 0;
  const char* first = key.data();
  const char* last = key.data() + key.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(ctx + " key '" + key + "' must be an integer class");
  return value;
}

LambdaMatrix matrix_from(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + " must be an array of rows");
  long rows = (long)j.size();
  long cols = rows == 0 ? 0 : -1;
  for (const json& row : j) {
    if (!row.is_array())
      throw ParseError(ctx + " rows must be arrays of series strings");
    if (cols < 0) cols = (long)row.size();
    if ((long)row.size() != cols)
      throw ParseError(ctx + " rows have unequal lengths");
  }
  LambdaMatrix m(rows, std::max<long>(cols, 0));
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < m.cols; ++c) {
      const json& e = j.at(r).at(c);
      if (!e.is_string())
        throw ParseError(ctx + " entries must be series strings");
      m.at(r, c) = parse_series(e.get<std::string>());
    }
  return m;
}

MatrixFamily family_from(const json& j, const std::string& ctx) {
  if (!j.is_object())
    throw ParseError(ctx + " must map classes to matrices");
  MatrixFamily fam;
  for (const auto& [key, value] : j.items())
    fam.emplace(parse_class_key(key, ctx), matrix_from(value, ctx));
  return fam;
}

ordered_json fc_to(const FlowCategoryData& fc) {
  ordered_json j;
  j["two_n"] = fc.two_n;
  j["omega"] = fc.omega;
  j["generators"] = ordered_json::array();
  for (const GeneratorSpec& g : fc.generators)
    j["generators"].push_back(
        {{"id", g.id}, {"index", g.index}, {"action", g.action}});
  j["incidences"] = ordered_json::array();
  for (const Incidence& e : fc.incidences)
    j["incidences"].push_back(
        {{"from", e.from}, {"to", e.to}, {"t", e.t}, {"count", e.count}});
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

InputKind classify_input(const std::string& text) {
  json j = parse_root(text);
  if (j.contains("morse")) return InputKind::HomotopyWitness;
  if (j.contains("category")) return InputKind::ChainMapWitness;
  if (j.contains("source")) return InputKind::Bimodule;
  if (j.contains("generators")) return InputKind::FlowCategory;
  if (j.contains("homology")) return InputKind::BoundData;
  if (j.contains("elements")) return InputKind::Poset;
  throw ParseError("unrecognized document: no classifying top-level key");
}

FlowCategoryData parse_flow_category(const std::string& text) {
  return fc_from(parse_root(text), "flow category");
}

BimoduleCounts parse_bimodule(const std::string& text) {
  json j = parse_root(text);
  expect_keys(j, "bimodule", {"source", "target", "incidences"},
              {"degree", "energy_constant"});
  BimoduleCounts bm;
  bm.source = fc_from(j.at("source"), "bimodule source");
  bm.target = fc_from(j.at("target"), "bimodule target");
  if (j.contains("degree")) bm.degree = get_long(j, "degree", "bimodule");
  if (j.contains("energy_constant"))
    bm.energy_constant = get_long(j, "energy_constant", "bimodule");
  bm.incidences = incidences_from(get_array(j, "incidences", "bimodule"),
                                  "bimodule");
  return bm;
}

ChainMapWitness parse_chain_map_witness(const std::string& text) {
  json j = parse_root(text);
  expect_keys(j, "chain-map witness", {"category", "pearl"});
  ChainMapWitness w;
  w.category = fc_from(j.at("category"), "witness category");
  w.pearl = family_from(j.at("pearl"), "witness pearl family");
  return w;
}

HomotopyWitness parse_homotopy_witness(const std::string& text) {
  json j = parse_root(text);
  expect_keys(j, "homotopy witness",
              {"morse", "floer", "pss", "ssp", "pearl", "hmtp"});
  HomotopyWitness w;
  w.morse = fc_from(j.at("morse"), "witness morse category");
  w.floer = fc_from(j.at("floer"), "witness floer category");
  w.pss = family_from(j.at("pss"), "witness pss family");
  w.ssp = family_from(j.at("ssp"), "witness ssp family");
  w.pearl = family_from(j.at("pearl"), "witness pearl family");
  w.hmtp = family_from(j.at("hmtp"), "witness hmtp family");
  return w;
}

BoundInput parse_bound_input(const std::string& text) {
  json j = parse_root(text);
  expect_keys(j, "homology data", {"homology", "minimal_chern"});
  BoundInput data;
  data.minimal_chern = get_long(j, "minimal_chern", "homology data");
  const json& h = j.at("homology");
  if (!h.is_object())
    throw ParseError("'homology' must map degrees to groups");
  for (const auto& [key, value] : h.items()) {
    long degree = parse_class_key(key, "homology degree");
    expect_keys(value, "degree " + key, {"betti", "torsion"});
    DegreeData d;
    d.betti = get_long(value, "betti", "degree " + key);
    for (const json& t : get_array(value, "torsion", "degree " + key)) {
      if (!t.is_number_integer())
        throw ParseError("torsion entries in degree " + key +
                         " must be integers");
      d.torsion.push_back(Int((long)t.get<long long>()));
    }
    data.homology.by_degree[degree] = std::move(d);
  }
  return data;
}

HomogeneousPoset parse_poset(const std::string& text) {
  json j = parse_root(text);
  expect_keys(j, "poset", {"elements", "less"});
  std::vector<std::string> elements;
  for (const json& e : get_array(j, "elements", "poset")) {
    if (!e.is_string()) throw ParseError("poset elements must be strings");
    elements.push_back(e.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> less;
  for (const json& p : get_array(j, "less", "poset")) {
    if (!p.is_array() || p.size() != 2 || !p.at(0).is_string() ||
        !p.at(1).is_string())
      throw ParseError("poset relations must be [smaller, larger] pairs");
    less.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  }
  try {
    return HomogeneousPoset::from_relations(std::move(elements), less);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("poset: ") + e.what());
  }
}

std::string write_flow_category(const FlowCategoryData& fc) {
  return dump(fc_to(fc));
}

std::string write_bimodule(const BimoduleCounts& bm) {
  ordered_json j;
  j["source"] = fc_to(bm.source);
  j["target"] = fc_to(bm.target);
  j["degree"] = bm.degree;
  j["energy_constant"] = bm.energy_constant;
  j["incidences"] = ordered_json::array();
  for (const Incidence& e : bm.incidences)
    j["incidences"].push_back(
        {{"from", e.from}, {"to", e.to}, {"t", e.t}, {"count", e.count}});
  return dump(j);
}

std::string write_bound_input(const BoundInput& data) {
  ordered_json j;
  j["homology"] = ordered_json::object();
  for (const auto& [degree, d] : data.homology.by_degree) {
    ordered_json g;
    g["betti"] = d.betti;
    g["torsion"] = ordered_json::array();
    for (const Int& t : d.torsion) g["torsion"].push_back(t.convert_to<long>());
    j["homology"][std::to_string(degree)] = std::move(g);
  }
  j["minimal_chern"] = data.minimal_chern;
  return dump(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

struct MatrixHeader {
  long rows = 0, cols = 0;
  std::string ring;
  std::vector<std::string> entries;
};

MatrixHeader split_matrix_text(const std::string& text) {
  MatrixHeader h;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    if (!seen_header) {
      std::istringstream head(line);
      std::string extra;
      if (!(head >> h.rows >> h.cols >> h.ring) || (head >> extra))
        throw ParseError("matrix header must be '<rows> <cols> <ring>'");
      if (h.rows < 0 || h.cols < 0)
        throw ParseError("matrix dimensions must be non-negative");
      if (h.ring != "Z" && h.ring != "Lambda")
        throw ParseError("matrix ring must be Z or Lambda");
      seen_header = true;
    } else {
      h.entries.push_back(line);
    }
  }
  if (!seen_header) throw ParseError("matrix file has no header line");
  if ((long)h.entries.size() != h.rows * h.cols)
    throw ParseError("matrix file has " + std::to_string(h.entries.size()) +
                     " entries, expected " + std::to_string(h.rows * h.cols));
  return h;
}

}  // namespace

IntMatrix parse_int_matrix(const std::string& text) {
  MatrixHeader h = split_matrix_text(text);
  if (h.ring != "Z") throw ParseError("expected an integer matrix (ring Z)");
  IntMatrix m(h.rows, h.cols);
  for (long r = 0; r < h.rows; ++r)
    for (long c = 0; c < h.cols; ++c) {
      const std::string& e = h.entries[r * h.cols + c];
      try {
        m.at(r, c) = Int(e);
      } catch (const std::runtime_error&) {
        throw ParseError("bad integer entry '" + e + "'");
      }
    }
  return m;
}

LambdaMatrix parse_lambda_matrix(const std::string& text) {
  MatrixHeader h = split_matrix_text(text);
  if (h.ring != "Lambda")
    throw ParseError("expected a series matrix (ring Lambda)");
  LambdaMatrix m(h.rows, h.cols);
  for (long r = 0; r < h.rows; ++r)
    for (long c = 0; c < h.cols; ++c)
      m.at(r, c) = parse_series(h.entries[r * h.cols + c]);
  return m;
}

std::string write_matrix(const IntMatrix& m) {
  std::ostringstream out;
  out << m.rows << " " << m.cols << " Z\n";
  for (long r = 0; r < m.rows; ++r)
    for (long c = 0; c < m.cols; ++c) out << m.at(r, c).str() << "\n";
  return out.str();
}

std::string write_matrix(const LambdaMatrix& m) {
  std::ostringstream out;
  out << m.rows << " " << m.cols << " Lambda\n";
  for (long r = 0; r < m.rows; ++r)
    for (long c = 0; c < m.cols; ++c) out << to_string(m.at(r, c)) << "\n";
  return out.str();
}

}  // namespace novalg
