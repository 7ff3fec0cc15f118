#pragma once

// Deterministic rendering of analysis results, in plain text for terminals
// and versioned JSON ("schema":"1") for machines. Identical inputs produce
// byte-identical output; all maps are emitted in key order.

#include "novalg/arnold.hpp"
#include "novalg/flowcat.hpp"

#include <map>
#include <string>
#include <vector>

namespace novalg {

enum class ReportFormat { Text, Json };

// One named pass/fail stage of a multi-step check, with detail lines.
struct CheckStage {
  std::string name;
  bool ok = true;
  std::vector<std::string> details;
};

std::string render_stages(const std::string& command,
                          const std::vector<CheckStage>& stages,
                          ReportFormat f);

std::string render_homology(const std::map<long, ModuleStructure>& h,
                            long precision, ReportFormat f);

std::string render_bound(const std::map<long, CollapsedClassData>& classes,
                         long n_min, long bound, ReportFormat f);

std::string render_bound_chain(const BoundChainReport& rep, ReportFormat f);

std::string render_poly_dim(const std::vector<long>& orders, long degree,
                            long dim, ReportFormat f);

std::string render_word_count(long interior, long count, ReportFormat f);

}  // namespace novalg
