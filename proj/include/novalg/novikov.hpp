#pragma once

// Exact, precision-tracked arithmetic in the integral Novikov ring
// Lambda = Z[[T]][T^-1]: formal Laurent series with integer coefficients,
// finitely many negative-exponent terms, T invertible.
//
// Every non-exact value is a jet modulo T^K: coefficients are known for all
// exponents < K and unknown at >= K. Operations compute the exact output
// precision from the input precisions. "Zero to precision" (all known
// coefficients vanish, precision finite) is distinct from exact zero.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace novalg {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr long kDefaultPrecision = 32;

// ---------------------------------------------------------------------------
// Errors

struct NotAUnit : std::domain_error {
  explicit NotAUnit(const std::string& what) : std::domain_error(what) {}
};

// Order-by-order division failed: the leading remainder coefficient at
// exponent `order` is not an integer multiple of the divisor's leading
// coefficient. Callers (Smith reduction) use `order` to switch pivots.
struct NotDivisible : std::domain_error {
  long order;
  explicit NotDivisible(long order_)
      : std::domain_error("not divisible at order " + std::to_string(order_)),
        order(order_) {}
};

struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised when an element that is zero to finite precision makes the requested
// question undecidable (unit test, canonical form, ...).
struct ZeroToPrecision : std::domain_error {
  explicit ZeroToPrecision(const std::string& what)
      : std::domain_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Precision marker: EXACT, or a finite K ("known below T^K").

class Precision {
 public:
  static Precision exact() { return Precision(std::nullopt); }
  static Precision jet(long k) { return Precision(k); }

  bool is_exact() const { return !k_.has_value(); }
  long k() const { return *k_; }

  // Shift by an exponent offset (multiplication by T^d). Exact stays exact.
  Precision shifted(long d) const {
    return is_exact() ? *this : jet(*k_ + d);
  }

  friend Precision min(const Precision& a, const Precision& b) {
    if (a.is_exact()) return b;
    if (b.is_exact()) return a;
    return jet(std::min(a.k(), b.k()));
  }

  // True if this precision window covers exponents below k.
  bool covers(long k) const { return is_exact() || *k_ >= k; }

  bool operator==(const Precision& o) const { return k_ == o.k_; }
  bool operator!=(const Precision& o) const { return !(*this == o); }

 private:
  explicit Precision(std::optional<long> k) : k_(k) {}
  std::optional<long> k_;
};

// ---------------------------------------------------------------------------
// Valuation: min exponent of the known nonzero terms. For an element with no
// known nonzero term the value is "+infinity"; `zero_to_precision` records
// whether that verdict is provisional (finite precision) or exact.

struct Valuation {
  bool finite = false;
  long value = 0;             // meaningful only when finite
  bool zero_to_precision = false;  // no terms, precision finite

  bool is_infinite() const { return !finite; }
};

// ---------------------------------------------------------------------------
// NovikovSeries

class NovikovSeries {
 public:
  // Exact zero.
  NovikovSeries() : prec_(Precision::exact()) {}

  // Exact integer constant.
  explicit NovikovSeries(const Int& c) : prec_(Precision::exact()) {
    if (c != 0) terms_[0] = c;
  }
  explicit NovikovSeries(long c) : NovikovSeries(Int(c)) {}

  static NovikovSeries monomial(const Int& c, long e) {
    NovikovSeries s;
    if (c != 0) s.terms_[e] = c;
    return s;
  }

  // Builds a series from terms, dropping zero coefficients. Terms at
  // exponents >= a finite precision are rejected (they would be unknowable).
  static NovikovSeries from_terms(std::map<long, Int> terms, Precision prec);

  const std::map<long, Int>& terms() const { return terms_; }
  Precision precision() const { return prec_; }

  bool is_exact() const { return prec_.is_exact(); }
  bool has_terms() const { return !terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && prec_.is_exact(); }
  bool is_zero_to_precision() const { return terms_.empty(); }

  // Coefficient at exponent e; 0 when absent. Caller is responsible for
  // asking only below the precision window.
  Int coeff(long e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Int(0) : it->second;
  }

  bool operator==(const NovikovSeries& o) const {
    return terms_ == o.terms_ && prec_ == o.prec_;
  }
  bool operator!=(const NovikovSeries& o) const { return !(*this == o); }

 private:
  std::map<long, Int> terms_;  // exponent -> nonzero coefficient
  Precision prec_;
};

// ---------------------------------------------------------------------------
// Ring operations

NovikovSeries add(const NovikovSeries& x, const NovikovSeries& y);
NovikovSeries sub(const NovikovSeries& x, const NovikovSeries& y);
NovikovSeries neg(const NovikovSeries& x);
NovikovSeries mul(const NovikovSeries& x, const NovikovSeries& y);
NovikovSeries mul_int(const Int& c, const NovikovSeries& x);
NovikovSeries mul_monomial(const NovikovSeries& x, const Int& c, long e);

Valuation val(const NovikovSeries& x);

// Restrict to a jet at min(current precision, k).
NovikovSeries truncate(const NovikovSeries& x, long k);

// True iff x and y have identical coefficients at every exponent < k.
// Both inputs must be known below k.
bool equal_below(const NovikovSeries& x, const NovikovSeries& y, long k);

// True iff the coefficient at val(x) is +-1 (such elements are invertible).
// Throws ZeroToPrecision when x is zero to finite precision (undecidable).
bool is_unit(const NovikovSeries& x);

// Inverse of a unit, correct below T^out_precision in the product:
// mul(x, invert_unit(x, K)) agrees with 1 below T^K. Exact when x is a
// monomial +-T^e. Throws NotAUnit.
NovikovSeries invert_unit(const NovikovSeries& x, long out_precision);

// Order-by-order long division: q with x = q*g, coefficient window capped at
// out_precision. Exact when the remainder terminates. Throws NotDivisible
// with the first remainder exponent where integer divisibility fails, and
// ZeroToPrecision when g has no known nonzero term.
NovikovSeries divide(const NovikovSeries& x, const NovikovSeries& g,
                     long out_precision);

// Canonical representative of the associate class of x: valuation 0, leading
// coefficient a0 > 0, all higher coefficients reduced into [0, a0). When
// a0 = 1 the result is exactly 1. Exact if the reduction terminates (in
// particular for monomials and already-reduced exact inputs); otherwise a jet
// below T^out_precision. Throws ZeroToPrecision.
NovikovSeries canonical_associate(const NovikovSeries& x,
                                  long out_precision = kDefaultPrecision);

// canonical_associate together with the unit u used: canonical = x * u.
std::pair<NovikovSeries, NovikovSeries> canonical_associate_with_unit(
    const NovikovSeries& x, long out_precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Constructive principal-ideal machinery.
//
// ideal_generator realizes the gcd-of-leading-coefficients argument as an
// effective procedure: repeatedly shift all generators to valuation 0, take
// the integer gcd of the order-0 coefficients with a Bezout combination w,
// stop once every generator is divisible by w to the precision budget, and
// otherwise kill the order-0 coefficients, divide the remainders by T, carry
// w into the next round. The integer gcds form a divisibility chain
// g_{k+1} | g_k, so strict decreases are bounded by the prime-factor count
// of g_0.

struct IdealGenerator {
  NovikovSeries generator;               // canonical associate form
  std::vector<NovikovSeries> witnesses;  // sum witnesses[i]*gens[i] = generator
  long verified_to = 0;                  // identity holds below T^verified_to
  std::vector<Int> gcd_chain;            // audit: g_0, g_1, ...
};

// Pre: gens nonempty, all exact, not all zero. Throws PrecisionExhausted when
// the chain does not stabilize within the precision budget.
IdealGenerator ideal_generator(const std::vector<NovikovSeries>& gens,
                               long precision = kDefaultPrecision);

// Two-element form usable on jets (Smith reduction needs it after unit
// scalings introduce jets): g together with u, v such that u*x + v*y = g
// below T^precision, and x, y are divisible by g to that window.
struct BezoutPair {
  NovikovSeries g;  // valuation 0, positive leading coefficient
  NovikovSeries u;
  NovikovSeries v;
};
BezoutPair bezout_pair(const NovikovSeries& x, const NovikovSeries& y,
                       long precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Series literal syntax, e.g. "2 + 3*T^2 - T^-1", optional "@K" suffix for a
// finite precision. to_string/parse_series round-trip bit-exactly.

NovikovSeries parse_series(const std::string& text);
std::string to_string(const NovikovSeries& x);

}  // namespace novalg
