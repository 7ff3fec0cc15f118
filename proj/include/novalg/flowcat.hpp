#pragma once

// Flow-category chain data: generators graded by Z or Z/2N carrying integer
// action levels, incidence counts weighted by T^t, the associated complexes
// over the Novikov ring, their homology, chain maps between them, and the
// unitriangular/homotopy checks used by the comparison theorems.

#include "novalg/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace novalg {

struct EpsilonTooLarge : std::domain_error {
  explicit EpsilonTooLarge(const std::string& what)
      : std::domain_error(what) {}
};

struct NotUnitriangular : std::domain_error {
  explicit NotUnitriangular(const std::string& what)
      : std::domain_error(what) {}
};

// ---------------------------------------------------------------------------
// Raw data

struct GeneratorSpec {
  std::string id;
  long index = 0;   // grading; reduced mod two_n when two_n > 0
  long action = 0;  // integer action level of the chosen orbit representative
  bool operator==(const GeneratorSpec&) const = default;
};

struct Incidence {
  std::string from, to;
  long t = 0;      // Novikov exponent
  long count = 0;  // signed count
  bool operator==(const Incidence&) const = default;
};

struct FlowCategoryData {
  long two_n = 0;  // grading period; 0 means integer grading
  long omega = 1;  // action period, positive
  std::vector<GeneratorSpec> generators;
  std::vector<Incidence> incidences;  // boundary: index drops by 1
  bool operator==(const FlowCategoryData&) const = default;
};

// Counts defining a degree-shifting map between two flow categories'
// complexes. Grading rule: index_target(to) = index_source(from) + degree
// (mod 2N). Energy rule: action(to) + omega*t + energy_constant >=
// action(from), non-strict (identity-type entries are allowed).
struct BimoduleCounts {
  FlowCategoryData source, target;
  long degree = 0;
  long energy_constant = 0;
  std::vector<Incidence> incidences;
  bool operator==(const BimoduleCounts&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate(const FlowCategoryData& fc);
ValidationReport validate(const BimoduleCounts& bm);

// ---------------------------------------------------------------------------
// Complexes

class GradedLambdaComplex {
 public:
  long two_n = 0;
  // class -> generator ids in declaration order; for two_n > 0 every residue
  // 0..two_n-1 is present (possibly empty).
  std::map<long, std::vector<std::string>> gens;
  // d[i] maps class i to class pred(i); rows index pred-class generators,
  // columns index class-i generators.
  std::map<long, LambdaMatrix> d;

  long cls(long index) const {
    return two_n > 0 ? ((index % two_n) + two_n) % two_n : index;
  }
  long pred(long c) const { return two_n > 0 ? cls(c - 1) : c - 1; }
  long succ(long c) const { return two_n > 0 ? cls(c + 1) : c + 1; }

  long rank_of(long c) const {
    auto it = gens.find(c);
    return it == gens.end() ? 0 : (long)it->second.size();
  }
  std::vector<long> classes() const {
    std::vector<long> out;
    for (const auto& [c, g] : gens) out.push_back(c);
    return out;
  }
  const LambdaMatrix* boundary(long c) const {
    auto it = d.find(c);
    return it == d.end() ? nullptr : &it->second;
  }
};

// Pre: validate(fc).ok. Throws ValidationFailed otherwise.
GradedLambdaComplex build_complex(const FlowCategoryData& fc);

ValidationReport check_d_squared(const GradedLambdaComplex& c,
                                 long precision = kDefaultPrecision);

// Homology per class: ker(d_i) / im(d_succ(i)), one entry for every class of
// the complex (zero module for empty classes under periodic grading).
std::map<long, ModuleStructure> homology(const GradedLambdaComplex& c,
                                         long precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Chain maps

// Class-indexed matrix family assembled from bimodule counts: entry (to,
// from) of f[i] collects count * T^t over incidences leaving class-i source
// generators. f[i] maps source class i to target class i + degree.
std::map<long, LambdaMatrix> chain_map(const BimoduleCounts& bm);

// d_tgt o f = f o d_src per class, below the window.
ValidationReport check_chain_map(const std::map<long, LambdaMatrix>& f,
                                 const GradedLambdaComplex& src,
                                 const GradedLambdaComplex& tgt,
                                 long precision = kDefaultPrecision);

// f - identity has strictly positive valuation in every entry.
bool check_unitriangular(const std::map<long, LambdaMatrix>& f,
                         const GradedLambdaComplex& c);

// Inverse of a unitriangular family by the geometric series, jets below
// T^precision. Throws NotUnitriangular.
std::map<long, LambdaMatrix> invert_unitriangular(
    const std::map<long, LambdaMatrix>& f, const GradedLambdaComplex& c,
    long precision = kDefaultPrecision);

// pearl - ssp o pss = d o h - h o d per class, h raising the class by one.
ValidationReport check_homotopy(const std::map<long, LambdaMatrix>& pearl,
                                const std::map<long, LambdaMatrix>& ssp,
                                const std::map<long, LambdaMatrix>& pss,
                                const std::map<long, LambdaMatrix>& h,
                                const GradedLambdaComplex& morse,
                                const GradedLambdaComplex& floer,
                                long precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Morse model

struct MorseCritical {
  std::string id;
  long morse_index = 0;
  Rational f_value = 0;
};

// Flow category of a Morse function on a closed manifold of dimension
// 2*half_dim twisted into the periodic setting: grading (half_dim -
// morse_index) mod two_n, action epsilon*f (integral, in [0, omega)),
// incidences are ascending flows to critical points one Morse index up,
// weighted T^0. Throws EpsilonTooLarge when epsilon*f leaves [0, omega),
// std::invalid_argument when epsilon*f is not an integer or data is
// malformed.
FlowCategoryData morse_flow_category(const std::vector<MorseCritical>& crit,
                                     const std::vector<Incidence>& flows,
                                     long half_dim, long two_n, long omega,
                                     const Rational& epsilon);

}  // namespace novalg
