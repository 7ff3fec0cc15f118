#include "novalg/reports.hpp"

#include "json.hpp"

#include <sstream>

namespace novalg {

namespace {

using nlohmann::ordered_json;

ordered_json schema_header(const std::string& command) {
  ordered_json j;
  j["schema"] = "1";
  j["command"] = command;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string certified_text(const ModuleStructure& m) {
  if (!m.certified_precision) return "exact";
  return "T^" + std::to_string(*m.certified_precision);
}

std::vector<std::string> torsion_strings(const ModuleStructure& m) {
  std::vector<std::string> out;
  if (m.base_ring == BaseRing::Z)
    for (const Int& t : m.torsion_int) out.push_back(t.str());
  else
    for (const NovikovSeries& t : m.torsion_lambda)
      out.push_back(to_string(t));
  return out;
}

}  // namespace

std::string render_stages(const std::string& command,
                          const std::vector<CheckStage>& stages,
                          ReportFormat f) {
  bool all_ok = true;
  for (const CheckStage& s : stages) all_ok = all_ok && s.ok;
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header(command);
    j["ok"] = all_ok;
    j["stages"] = ordered_json::array();
    for (const CheckStage& s : stages)
      j["stages"].push_back(
          {{"name", s.name}, {"ok", s.ok}, {"details", s.details}});
    return dump(j);
  }
  std::ostringstream out;
  for (const CheckStage& s : stages) {
    out << s.name << ": " << (s.ok ? "ok" : "FAIL") << "\n";
    for (const std::string& d : s.details) out << "  - " << d << "\n";
  }
  out << "verdict: " << (all_ok ? "ok" : "FAIL") << "\n";
  return out.str();
}

std::string render_homology(const std::map<long, ModuleStructure>& h,
                            long precision, ReportFormat f) {
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header("homology");
    j["precision"] = precision;
    j["classes"] = ordered_json::object();
    for (const auto& [cls, m] : h)
      j["classes"][std::to_string(cls)] = {{"module", to_string(m)},
                                           {"rank", m.rank},
                                           {"torsion", torsion_strings(m)},
                                           {"certified", certified_text(m)}};
    return dump(j);
  }
  std::ostringstream out;
  for (const auto& [cls, m] : h)
    out << "H" << cls << ": " << to_string(m) << "\n";
  bool exact = true;
  long k = 0;
  for (const auto& [cls, m] : h)
    if (m.certified_precision) {
      k = exact ? *m.certified_precision
                : std::min(k, *m.certified_precision);
      exact = false;
    }
  out << "certified: " << (exact ? "exact" : "to T^" + std::to_string(k))
      << "\n";
  return out.str();
}

std::string render_bound(const std::map<long, CollapsedClassData>& classes,
                         long n_min, long bound, ReportFormat f) {
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header("arnold");
    j["minimal_chern"] = n_min;
    j["classes"] = ordered_json::object();
    for (const auto& [cls, c] : classes) {
      ordered_json t = ordered_json::array();
      for (const Int& n : c.torsion) t.push_back(n.str());
      j["classes"][std::to_string(cls)] = {
          {"betti", c.betti}, {"torsion", std::move(t)}, {"tau", c.tau()}};
    }
    j["lower_bound"] = bound;
    return dump(j);
  }
  std::ostringstream out;
  for (const auto& [cls, c] : classes) {
    out << "class " << cls << ": betti " << c.betti << ", tau " << c.tau();
    if (!c.torsion.empty()) {
      out << " [";
      for (size_t i = 0; i < c.torsion.size(); ++i)
        out << (i ? ", " : "") << c.torsion[i].str();
      out << "]";
    }
    out << "\n";
  }
  out << "lower bound: " << bound << "\n";
  return out.str();
}

std::string render_bound_chain(const BoundChainReport& rep, ReportFormat f) {
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header("verify");
    j["minimal_chern"] = rep.n_min;
    j["rows"] = ordered_json::array();
    for (const BoundChainRow& r : rep.rows)
      j["rows"].push_back({{"class", r.cls},
                           {"cf", r.cf},
                           {"kernel", r.kernel},
                           {"image_in", r.image_in},
                           {"betti", r.betti},
                           {"tau", r.tau}});
    j["total_cf"] = rep.total_cf;
    j["lower_bound"] = rep.bound;
    j["ok"] = rep.ok;
    j["violations"] = rep.violations;
    return dump(j);
  }
  std::ostringstream out;
  out << "minimal chern number: " << rep.n_min << "\n";
  for (const BoundChainRow& r : rep.rows) {
    out << "class " << r.cls << ": cf " << r.cf << " >= kernel " << r.kernel
        << " >= betti+tau " << (r.betti + r.tau) << " (slack "
        << (r.kernel - r.betti - r.tau) << "); image " << r.image_in
        << " >= tau " << r.tau << " (slack " << (r.image_in - r.tau) << ")\n";
  }
  out << "total cf " << rep.total_cf << " >= lower bound " << rep.bound
      << " (slack " << (rep.total_cf - rep.bound) << ")\n";
  for (const std::string& v : rep.violations) out << "  - " << v << "\n";
  out << "verdict: " << (rep.ok ? "ok" : "FAIL") << "\n";
  return out.str();
}

std::string render_poly_dim(const std::vector<long>& orders, long degree,
                            long dim, ReportFormat f) {
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header("equipoly dim");
    j["orders"] = orders;
    j["degree"] = degree;
    j["dim"] = dim;
    return dump(j);
  }
  std::ostringstream out;
  out << "group:";
  for (long m : orders) out << " Z/" << m;
  out << "\ndegree cap: " << degree << "\ndim = " << dim << "\n";
  return out.str();
}

std::string render_word_count(long interior, long count, ReportFormat f) {
  if (f == ReportFormat::Json) {
    ordered_json j = schema_header("strata words");
    j["interior"] = interior;
    j["count"] = count;
    return dump(j);
  }
  std::ostringstream out;
  out << "interior " << interior << ": " << count << " boundary words\n";
  return out.str();
}

}  // namespace novalg
