#pragma once

// Combinatorics of compactified moduli strata: finite face posets (depth,
// faces, uniqueness of face-subsets), the standard families (subsets,
// breaking words, compositions), energy difference maps, and the outer
// collar: collar coordinates, canonical representatives, stratum labels,
// products, and extensions of stratified inclusions.

#include "novalg/novikov.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace novalg {

struct CoordOutOfRange : std::domain_error {
  explicit CoordOutOfRange(const std::string& what)
      : std::domain_error(what) {}
};

struct IncompatibleStrata : std::domain_error {
  explicit IncompatibleStrata(const std::string& what)
      : std::domain_error(what) {}
};

struct NonPositiveEnergy : std::domain_error {
  explicit NonPositiveEnergy(const std::string& what)
      : std::domain_error(what) {}
};

// ---------------------------------------------------------------------------
// Face posets. Order convention: deeper strata are smaller; maximal elements
// are the open top strata (depth 0). Validity requires, beyond being a
// partial order:
//   - homogeneity: all saturated chains from an element up to a maximal
//     element have the same length (its depth);
//   - face count: F(a) = {b >= a with depth(b) = 1} has exactly depth(a)
//     elements;
//   - face subsets: for every a and every N subset of F(a) there is exactly
//     one b >= a with F(b) = N.

class HomogeneousPoset {
 public:
  // Builds from a strict relation (any generating set; the reflexive
  // transitive closure is taken). Throws std::invalid_argument on malformed
  // input (unknown ids, duplicates, cycles) and IncompatibleStrata on
  // violated face axioms.
  static HomogeneousPoset from_relations(
      std::vector<std::string> elements,
      const std::vector<std::pair<std::string, std::string>>& less);

  long size() const { return (long)elems_.size(); }
  const std::vector<std::string>& elements() const { return elems_; }
  bool contains(const std::string& a) const { return index_.count(a) > 0; }

  bool leq(const std::string& a, const std::string& b) const;
  long depth(const std::string& a) const;
  // F(a), in element declaration order.
  std::vector<std::string> faces(const std::string& a) const;
  // The unique maximal element above a.
  std::string top_above(const std::string& a) const;
  // The unique b >= a with F(b) = N; throws IncompatibleStrata if N is not
  // a subset of F(a).
  std::string element_with_faces(const std::string& a,
                                 const std::set<std::string>& N) const;

 private:
  long idx(const std::string& a) const;
  std::vector<std::string> elems_;
  std::map<std::string, long> index_;
  std::vector<std::vector<bool>> leq_;
  std::vector<long> depth_;
  std::vector<std::vector<long>> faces_;
};

// Product order on pairs, labels "a|b". Faces pair a factor face with the
// unique top above the other factor's element.
struct PosetProduct {
  HomogeneousPoset poset;
  std::map<std::string, std::pair<std::string, std::string>> factors;
  std::string label(const std::string& a, const std::string& b) const {
    return a + "|" + b;
  }
};
PosetProduct product(const HomogeneousPoset& p, const HomogeneousPoset& q);

// Subsets of {1..k} under reverse inclusion; labels "{}", "{1,3}", ...
HomogeneousPoset subset_poset(long k);

// Breaking words over interior levels {1..interior}: an element records the
// set of levels where a trajectory breaks; coarsening forgets breaks.
// Labels "e" (no breaks) and "1.3" (breaks at 1 and 3). 2^interior elements.
HomogeneousPoset enumerate_word_poset(long interior);

// Compositions of n under refinement; labels "(1,2,1)". The faces of a
// composition are the single-cut coarsenings at its own cut positions.
HomogeneousPoset composition_poset(long n);

// Segments cut out of [0, interior+1] by a break set. breaks must be
// strictly increasing inside 1..interior.
std::vector<std::pair<long, long>> boundary_factorization(
    long interior, const std::vector<long>& breaks);

// Consecutive differences of a strictly increasing action sequence. Throws
// NonPositiveEnergy when a step is not positive. Concatenation-compatible:
// delta of a spliced sequence is the spliced deltas.
std::vector<Rational> delta_map(const std::vector<Rational>& actions);

// ---------------------------------------------------------------------------
// Outer collars. A chart point sits over a stratum `alpha` with one collar
// coordinate in [-width, 0] per face of alpha. Zero means "still on that
// wall"; -width means "pushed to the outer boundary".

struct StratifiedSet {
  HomogeneousPoset poset;
  Rational collar_width = 1;

  static StratifiedSet from_poset(HomogeneousPoset p, const Rational& width);
};

struct CollaredPoint {
  std::string stratum;
  std::string base;  // opaque label of the underlying interior point
  std::map<std::string, Rational> coords;  // face -> [-width, 0]
};

// Throws IncompatibleStrata when coords are not keyed exactly by the faces
// of the stratum, CoordOutOfRange when a value leaves [-width, 0].
void validate_point(const StratifiedSet& ss, const CollaredPoint& p);

// Canonical chart: drop zero coordinates and move to the unique stratum
// whose face set is the nonzero coordinates.
CollaredPoint outer_collar_representative(const StratifiedSet& ss,
                                          const CollaredPoint& p);

// Stratum of the collared space the point belongs to: determined by the
// coordinates pinned at -width. Chart-invariant.
std::string collar_stratum_label(const StratifiedSet& ss,
                                 const CollaredPoint& p);

StratifiedSet product(const StratifiedSet& x, const StratifiedSet& y);

// The product chart point: coordinates of each factor reinstalled along the
// paired faces (factor face, top of the other factor).
CollaredPoint product_point(const StratifiedSet& x, const StratifiedSet& y,
                            const CollaredPoint& px, const CollaredPoint& py);

// Certifies on the given pair of points that (a) canonical representatives
// and (b) stratum labels of a product point are the pairs of the factors'.
struct OuterProductReport {
  bool ok = true;
  std::vector<std::string> violations;
};
OuterProductReport check_outer_product(const StratifiedSet& x,
                                       const StratifiedSet& y,
                                       const CollaredPoint& px,
                                       const CollaredPoint& py);

// A depth-preserving-on-faces inclusion of face posets.
struct StratifiedMap {
  std::map<std::string, std::string> image;  // source element -> target
};

// Pushes a chart point through the inclusion: each source face corresponds
// to the unique new face of its image over the image of the source top;
// the remaining target faces are padded with zeros. Throws
// IncompatibleStrata when the correspondence is not single-valued.
CollaredPoint collar_extend_map(const StratifiedSet& src,
                                const StratifiedSet& tgt,
                                const StratifiedMap& m,
                                const CollaredPoint& p);

}  // namespace novalg
