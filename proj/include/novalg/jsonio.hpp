#pragma once

// File ingestion and serialization: JSON documents for flow categories,
// bimodules, chain-map and homotopy witness bundles, graded homology data
// and posets, plus a line-oriented text format for matrices over Z and
// Lambda. Every reader rejects malformed input with ParseError; writers
// produce stable, round-trippable output.

#include "novalg/arnold.hpp"
#include "novalg/flowcat.hpp"
#include "novalg/strata.hpp"

#include <map>
#include <string>
#include <utility>

namespace novalg {

using MatrixFamily = std::map<long, LambdaMatrix>;

// A chain self-map with a unitriangularity certificate attached to one
// complex: {"category": <flow category>, "pearl": <matrix family>}.
struct ChainMapWitness {
  FlowCategoryData category;
  MatrixFamily pearl;
};

// A full homotopy certificate between two complexes:
// {"morse","floer": <flow category>, "pss","ssp","pearl","hmtp": <family>}.
// hmtp raises the grading class by one.
struct HomotopyWitness {
  FlowCategoryData morse, floer;
  MatrixFamily pss, ssp, pearl, hmtp;
};

// Graded homology table with the minimal Chern number:
// {"homology": {"<degree>": {"betti": b, "torsion": [n, ...]}, ...},
//  "minimal_chern": N}.
struct BoundInput {
  GradedGroupData homology;
  long minimal_chern = 0;
};

// What a JSON document describes, decided by its top-level keys.
enum class InputKind {
  FlowCategory,    // "generators"
  Bimodule,        // "source"
  ChainMapWitness, // "category"
  HomotopyWitness, // "morse"
  BoundData,       // "homology"
  Poset,           // "elements"
};

InputKind classify_input(const std::string& text);

FlowCategoryData parse_flow_category(const std::string& text);
BimoduleCounts parse_bimodule(const std::string& text);
ChainMapWitness parse_chain_map_witness(const std::string& text);
HomotopyWitness parse_homotopy_witness(const std::string& text);
BoundInput parse_bound_input(const std::string& text);
HomogeneousPoset parse_poset(const std::string& text);

std::string write_flow_category(const FlowCategoryData& fc);
std::string write_bimodule(const BimoduleCounts& bm);
std::string write_bound_input(const BoundInput& data);

// Whole file contents; throws ParseError when unreadable.
std::string read_file(const std::string& path);

// Line-oriented matrix files: '#' starts a comment, the first content line
// is "<rows> <cols> <Z|Lambda>", then one entry per line in row-major order.
IntMatrix parse_int_matrix(const std::string& text);
LambdaMatrix parse_lambda_matrix(const std::string& text);
std::string write_matrix(const IntMatrix& m);
std::string write_matrix(const LambdaMatrix& m);

}  // namespace novalg
