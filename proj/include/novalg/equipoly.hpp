#pragma once

// Equivariant polynomial maps between diagonal representations of a finite
// abelian group: weight-rule monomial bases, dimensions, evaluation at
// sample points of isotropy strata, stabilizers and subgroup enumeration,
// direct-sum gluing/splitting, and the dimension formula certificate.

#include "novalg/novikov.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace novalg {

// The isotropy stratum of the requested subgroup contains no point: every
// candidate support forces a strictly larger stabilizer.
struct EmptyStratum : std::domain_error {
  explicit EmptyStratum(const std::string& what) : std::domain_error(what) {}
};

// ---------------------------------------------------------------------------
// Exact scalars in Q(i): enough to represent the coordinate action of group
// factors of order 1, 2 and 4 on sample points.

struct GaussianRational {
  Rational re = 0, im = 0;

  GaussianRational() = default;
  GaussianRational(const Rational& r) : re(r) {}  // NOLINT: implicit ok
  GaussianRational(long r) : re(r) {}             // NOLINT: implicit ok
  GaussianRational(const Rational& r, const Rational& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool operator==(const GaussianRational& o) const {
    return re == o.re && im == o.im;
  }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

GaussianRational operator+(const GaussianRational& x,
                           const GaussianRational& y);
GaussianRational operator-(const GaussianRational& x,
                           const GaussianRational& y);
GaussianRational operator*(const GaussianRational& x,
                           const GaussianRational& y);
GaussianRational conj(const GaussianRational& x);
// Throws std::domain_error on zero.
GaussianRational inverse(const GaussianRational& x);
std::string to_string(const GaussianRational& x);

// ---------------------------------------------------------------------------
// Representations and subgroups

// Diagonal representation of Z/m_1 x ... x Z/m_s: coordinate i transforms by
// the character with weight tuple weights[i] (one residue per factor).
struct AbelianRep {
  std::vector<long> orders;                // m_1..m_s, each >= 1
  std::vector<std::vector<long>> weights;  // one tuple of size s per coord
  long dim() const { return (long)weights.size(); }
};

// Throws std::invalid_argument on non-positive orders or weight tuples of the
// wrong arity.
void validate_rep(const AbelianRep& rep);

using GroupElement = std::vector<long>;   // one residue per factor
using Subgroup = std::vector<GroupElement>;  // sorted, closed under addition

std::vector<GroupElement> all_elements(const std::vector<long>& orders);
Subgroup trivial_subgroup(const std::vector<long>& orders);
Subgroup full_group(const std::vector<long>& orders);
// Smallest subgroup containing the given elements.
Subgroup generated_subgroup(const std::vector<long>& orders,
                            const std::vector<GroupElement>& gens);
std::vector<Subgroup> all_subgroups(const std::vector<long>& orders);

// Does coordinate `coord` of rep transform trivially under every element
// of H? Pure residue arithmetic, valid for any orders.
bool character_trivial_on(const AbelianRep& rep, long coord,
                          const Subgroup& H);

// ---------------------------------------------------------------------------
// Monomial bases: v^alpha e_j is equivariant iff
// sum_i alpha_i * weight_V(i) = weight_W(j) in every Z/m_t.

struct Monomial {
  std::vector<long> alpha;  // exponents, one per source coordinate
  long target = 0;          // index of the W coordinate
  long total_degree() const {
    long d = 0;
    for (long a : alpha) d += a;
    return d;
  }
};

bool is_equivariant_monomial(const AbelianRep& V, const AbelianRep& W,
                             const std::vector<long>& alpha, long target);

// All equivariant monomials of total degree <= degree, ordered by total
// degree, then target, then exponents.
std::vector<Monomial> poly_basis(const AbelianRep& V, const AbelianRep& W,
                                 long degree);
long dim_poly(const AbelianRep& V, const AbelianRep& W, long degree);

// ---------------------------------------------------------------------------
// Polynomials and evaluation

struct PolyTerm {
  std::vector<long> alpha;
  long target = 0;
  GaussianRational coeff;
};

struct EquivariantPolynomial {
  long degree_cap = 0;
  std::vector<PolyTerm> terms;
};

// Every term must be an equivariant monomial within the degree cap.
void validate_poly(const AbelianRep& V, const AbelianRep& W,
                   const EquivariantPolynomial& f);

std::vector<GaussianRational> eval(const EquivariantPolynomial& f, long w_dim,
                                   const std::vector<GaussianRational>& z);

// Coordinate action of a group element on a point. Exact, hence restricted
// to factors of order 1, 2 or 4 (fourth roots of unity live in Q(i));
// throws std::invalid_argument otherwise.
std::vector<GaussianRational> act(const AbelianRep& rep,
                                  const GroupElement& g,
                                  const std::vector<GaussianRational>& z);

// ---------------------------------------------------------------------------
// Isotropy strata

// {g : g z = z}, computed from the support of z by residue arithmetic.
Subgroup stabilizer_of_point(const AbelianRep& V,
                             const std::vector<GaussianRational>& z);

// A generic rational point whose stabilizer is exactly H: distinct prime
// values on the maximal H-fixed support, zero elsewhere. Throws EmptyStratum
// when even the maximal support has a larger stabilizer.
std::vector<GaussianRational> sample_z_point(const AbelianRep& V,
                                             const Subgroup& H);

// ---------------------------------------------------------------------------
// Direct-sum gluing: phi merges maps into W1 (+) W2, psi splits back.
// psi(phi(f1, f2)) = (f1, f2) and eval commutes with both.

AbelianRep direct_sum(const AbelianRep& w1, const AbelianRep& w2);

EquivariantPolynomial phi_embed(const EquivariantPolynomial& f1,
                                const EquivariantPolynomial& f2, long w1_dim);

// Throws std::invalid_argument when f does not respect the block caps.
std::pair<EquivariantPolynomial, EquivariantPolynomial> psi_split(
    const EquivariantPolynomial& f, long w1_dim, long d1, long d2);

// ---------------------------------------------------------------------------
// Dimension formula certificate at the stratum of H: evaluate the degree-d
// equivariant basis at a generic H-fixed point and compare the rank of
// evaluation with dim W^H.

struct DimensionFormulaReport {
  long degree = 0;
  long dim_poly = 0;     // equivariant monomials of degree <= degree
  long dim_v_fixed = 0;  // H-fixed source coordinates
  long dim_w_fixed = 0;  // H-fixed target coordinates
  long rank_ev = 0;
  bool surjective = false;
  long expected_dim = 0;  // dim_poly + dim_v_fixed - dim_w_fixed
  // Smallest degree at which evaluation already surjects, when any.
  std::optional<long> minimal_surjective_degree;
};

DimensionFormulaReport check_dimension_formula(const AbelianRep& V,
                                               const AbelianRep& W,
                                               const Subgroup& H, long degree);

}  // namespace novalg
