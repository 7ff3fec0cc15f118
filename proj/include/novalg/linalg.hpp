#pragma once

// Matrix algebra over Z and over the Novikov ring: Smith normal form with
// accumulated unimodular transforms, finitely generated module structures
// (cokernels, subquotients), and the rank/torsion comparison checks used by
// the chain-level bound verification.

#include "novalg/novikov.hpp"

#include <optional>
#include <vector>

namespace novalg {

struct ShapeMismatch : std::invalid_argument {
  explicit ShapeMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

struct NotASubmodule : std::domain_error {
  explicit NotASubmodule(const std::string& what) : std::domain_error(what) {}
};

struct ValidationFailed : std::runtime_error {
  explicit ValidationFailed(const std::string& what)
      : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------

struct IntMatrix {
  long rows = 0, cols = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(long r, long c) : rows(r), cols(c), a(r * c) {}
  static IntMatrix identity(long n);

  Int& at(long r, long c) { return a[r * cols + c]; }
  const Int& at(long r, long c) const { return a[r * cols + c]; }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

IntMatrix mul(const IntMatrix& x, const IntMatrix& y);

// Fraction-free determinant; n x n only.
Int det(const IntMatrix& m);

struct LambdaMatrix {
  long rows = 0, cols = 0;
  std::vector<NovikovSeries> a;  // row-major

  LambdaMatrix() = default;
  LambdaMatrix(long r, long c) : rows(r), cols(c), a(r * c) {}
  static LambdaMatrix identity(long n);
  static LambdaMatrix from_int(const IntMatrix& m);

  NovikovSeries& at(long r, long c) { return a[r * cols + c]; }
  const NovikovSeries& at(long r, long c) const { return a[r * cols + c]; }

  bool operator==(const LambdaMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

LambdaMatrix mul(const LambdaMatrix& x, const LambdaMatrix& y);
LambdaMatrix add(const LambdaMatrix& x, const LambdaMatrix& y);
LambdaMatrix sub(const LambdaMatrix& x, const LambdaMatrix& y);
LambdaMatrix truncate(const LambdaMatrix& x, long k);
bool equal_below(const LambdaMatrix& x, const LambdaMatrix& y, long k);
bool is_zero_to_precision(const LambdaMatrix& x);

// ---------------------------------------------------------------------------
// Smith normal form over Z. left * m * right = diag(diagonal), diagonal
// entries nonnegative with d1 | d2 | ..., transforms unimodular (checked by
// determinant).

struct SnfInt {
  std::vector<Int> diagonal;  // min(rows, cols) entries, zeros trailing
  IntMatrix left, right;
};

SnfInt snf_int(const IntMatrix& m);

// ---------------------------------------------------------------------------
// Smith normal form over the Novikov ring. Pivoting prefers entries whose
// leading coefficient is +-1 (units, exactly divisible into anything); when
// integer divisibility fails mid-clearing, a Bezout 2x2 block with
// determinant 1 replaces the pivot by the two-element generator. Every
// elementary transform is certified unimodular as it is applied. The
// diagonal entries are invariant factors determined up to units; apply
// canonical_associate for a normalized presentation (module reports do).
// Materializing the canonical unit costs coefficient bits proportional to
// the window times the pivot's coefficient spread, which is why the
// factorization itself leaves pivots unnormalized.

struct SnfLambda {
  std::vector<NovikovSeries> diagonal;
  LambdaMatrix left, right;
  // Precision below which left*m*right matches diag(diagonal); nullopt when
  // every step stayed exact.
  std::optional<long> certified_precision;
};

SnfLambda snf_lambda(const LambdaMatrix& m,
                     long precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Module structures

enum class BaseRing { Z, Lambda };

struct ModuleStructure {
  BaseRing base_ring = BaseRing::Lambda;
  long rank = 0;
  // Non-unit invariant factors in divisibility order, canonical form: over Z
  // integers > 1; over the Novikov ring canonical associates.
  std::vector<Int> torsion_int;
  std::vector<NovikovSeries> torsion_lambda;
  std::optional<long> certified_precision;

  long torsion_count() const {
    return base_ring == BaseRing::Z ? (long)torsion_int.size()
                                    : (long)torsion_lambda.size();
  }
};

std::string to_string(const ModuleStructure& m);

// Cokernel of m : R^cols -> R^rows, i.e. R^rows modulo the column span.
ModuleStructure cokernel(const IntMatrix& m);
ModuleStructure cokernel(const LambdaMatrix& m,
                         long precision = kDefaultPrecision);

// Structure of (column span of ker) / (column span of img) inside R^n: solves
// ker * X = img and returns cokernel(X). Throws NotASubmodule when img is not
// contained in the span of ker.
ModuleStructure subquotient(const LambdaMatrix& ker, const LambdaMatrix& img,
                            long precision = kDefaultPrecision);
ModuleStructure subquotient(const IntMatrix& ker, const IntMatrix& img);

// Rank over the fraction field.
long rank(const IntMatrix& m);
long rank(const LambdaMatrix& m, long precision = kDefaultPrecision);

// Kernel and image bases of d viewed as a map R^cols -> R^rows: kernel
// columns span ker(d) (they are the right-transform columns at zero diagonal
// positions), image columns span im(d) (d times the right-transform columns
// at nonzero positions, i.e. the left-inverse transport of the diagonal).
struct KernelImage {
  LambdaMatrix kernel;  // cols x (cols - rank)
  LambdaMatrix image;   // rows x rank
  std::optional<long> certified_precision;
};
KernelImage kernel_image(const LambdaMatrix& d,
                         long precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Comparison checks for a quotient presentation Z -> F with kernel S:
// given rank data for F = Z/S and a basis matrix for S inside Z = R^n,
// verifies rank Z >= rank F + k and rank S >= k for k = rank S (computed),
// returning the certified quantities.
struct QuotientRankReport {
  long rank_Z = 0, rank_F = 0, rank_S = 0;
  bool ok = false;
};
QuotientRankReport check_quotient_rank_bounds(
    long ambient_rank, const LambdaMatrix& sub_basis,
    long precision = kDefaultPrecision);

// For M = Z^r (+) Z/a_1 (+) ... (+) Z/a_k presented on r + k coordinates and
// a submodule N spanned by the columns of gens (in those coordinates),
// computes the abstract structure of N and verifies rank N <= rank M, the
// per-prime elementary divisor counts of N do not exceed those of M, and N
// has at most k invariant factors.
struct SubmoduleTorsionReport {
  ModuleStructure sub;                 // structure of N
  bool rank_ok = false;
  bool per_prime_ok = false;
  bool factor_count_ok = false;
  std::vector<Int> failing_primes;
  bool ok = false;
};
SubmoduleTorsionReport check_submodule_torsion_bounds(
    long free_rank, const std::vector<Int>& torsion, const IntMatrix& gens);

// Elementary divisor count of the torsion list at prime p (the number of
// invariant factors p divides).
long elementary_divisor_count(const std::vector<Int>& torsion, const Int& p);

// Distinct prime divisors (trial division; values here are small).
std::vector<Int> prime_divisors(const Int& n);

}  // namespace novalg
