#pragma once

// The fixed-point lower bound: collapse integer-graded homology data onto
// residue classes mod 2N, count free ranks and torsion invariant factors,
// and certify the resulting generator-count inequality chain against an
// actual flow-category complex.

#include "novalg/flowcat.hpp"

#include <map>
#include <vector>

namespace novalg {

// Integer-graded reference homology: free rank and torsion invariant factors
// per degree. Torsion entries are nonzero integers; they need not form a
// divisibility chain on input (collapse renormalizes).
struct DegreeData {
  long betti = 0;
  std::vector<Int> torsion;
  bool operator==(const DegreeData&) const = default;
};

struct GradedGroupData {
  std::map<long, DegreeData> by_degree;
  bool operator==(const GradedGroupData&) const = default;
};

struct CollapsedClassData {
  long betti = 0;
  std::vector<Int> torsion;  // invariant factors > 1, divisibility chain
  long tau() const { return (long)torsion.size(); }
};

// Sums the data over degrees congruent mod 2*n_min and renormalizes the
// gathered torsion to invariant-factor form (unit factors dropped). Keys
// run over every residue 0..2*n_min-1. n_min == 0 keeps the integer grading
// (no folding). Throws std::invalid_argument on n_min < 0 or a zero torsion
// entry.
std::map<long, CollapsedClassData> collapse(const GradedGroupData& data,
                                            long n_min);

// Sum over residue classes of betti + 2 * tau.
long arnold_bound(const GradedGroupData& data, long n_min);

// ---------------------------------------------------------------------------
// Certification that a complex realizes the bound chain:
//   rank CF_r = dim ker d_r + rank d_r            (rank-nullity)
//   dim ker d_r            >= betti_r + tau_r     (kernel covers homology)
//   rank d_(r+1)           >= tau_r               (torsion needs image)
// whose sum gives  total generators >= arnold_bound.

struct BoundChainRow {
  long cls = 0;
  long cf = 0;       // generators in the class
  long kernel = 0;   // dim ker d_cls
  long image_in = 0;  // rank d_succ(cls)
  long betti = 0;    // reference, collapsed
  long tau = 0;      // reference, collapsed
};

struct BoundChainReport {
  long n_min = 0;
  long total_cf = 0;
  long bound = 0;
  bool ok = true;
  std::vector<BoundChainRow> rows;
  std::vector<std::string> violations;
};

struct ChainBroken : std::runtime_error {
  BoundChainReport report;
  explicit ChainBroken(BoundChainReport rep)
      : std::runtime_error(rep.violations.empty()
                               ? "bound chain broken"
                               : "bound chain broken: " + rep.violations[0]),
        report(std::move(rep)) {}
};

// Computes the complex's homology, matches it against the collapsed
// reference (free rank and exact integer invariant factors), and checks
// every inequality above. Requires cx.two_n == 2*n_min. Returns the filled
// report; throws ChainBroken carrying it when any step fails.
BoundChainReport verify_bound_chain(const GradedLambdaComplex& cx,
                                    const GradedGroupData& reference,
                                    long n_min,
                                    long precision = kDefaultPrecision);

}  // namespace novalg
