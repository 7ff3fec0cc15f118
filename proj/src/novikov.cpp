#include "novalg/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace novalg {

namespace {

// Floor division with positive divisor.
Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (a - q * b < 0) q -= 1;
  return q;
}

struct Egcd {
  Int g, u, v;  // g = u*a + v*b, g >= 0
};

Egcd egcd(const Int& a, const Int& b) {
  Int old_r = a, r = b;
  Int old_u = 1, u = 0;
  Int old_v = 0, v = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r; old_r = r; r = t;
    t = old_u - q * u; old_u = u; u = t;
    t = old_v - q * v; old_v = v; v = t;
  }
  if (old_r < 0) { old_r = -old_r; old_u = -old_u; old_v = -old_v; }
  return {old_r, old_u, old_v};
}

}  // namespace

NovikovSeries NovikovSeries::from_terms(std::map<long, Int> terms,
                                        Precision prec) {
  NovikovSeries s;
  s.prec_ = prec;
  for (auto& [e, c] : terms) {
    if (c == 0) continue;
    if (!prec.covers(e + 1))
      throw std::invalid_argument(
          "term at exponent " + std::to_string(e) +
          " lies outside the precision window @" + std::to_string(prec.k()));
    s.terms_.emplace(e, std::move(c));
  }
  return s;
}

NovikovSeries add(const NovikovSeries& x, const NovikovSeries& y) {
  Precision p = min(x.precision(), y.precision());
  std::map<long, Int> t = x.terms();
  for (const auto& [e, c] : y.terms()) t[e] += c;
  for (auto it = t.begin(); it != t.end();) {
    if (it->second == 0 || !p.covers(it->first + 1)) it = t.erase(it);
    else ++it;
  }
  return NovikovSeries::from_terms(std::move(t), p);
}

NovikovSeries neg(const NovikovSeries& x) {
  std::map<long, Int> t = x.terms();
  for (auto& [e, c] : t) c = -c;
  return NovikovSeries::from_terms(std::move(t), x.precision());
}

NovikovSeries sub(const NovikovSeries& x, const NovikovSeries& y) {
  return add(x, neg(y));
}

Valuation val(const NovikovSeries& x) {
  Valuation v;
  if (!x.has_terms()) {
    v.finite = false;
    v.zero_to_precision = !x.is_exact();
    return v;
  }
  v.finite = true;
  v.value = x.terms().begin()->first;
  return v;
}

NovikovSeries mul(const NovikovSeries& x, const NovikovSeries& y) {
  if (x.is_exact_zero() || y.is_exact_zero()) return NovikovSeries();

  // Effective valuation for the precision rule: a factor with no known term
  // has all terms at exponents >= its window, so its valuation is at least K.
  auto eff_val = [](const NovikovSeries& s) -> std::optional<long> {
    if (s.has_terms()) return s.terms().begin()->first;
    if (s.is_exact()) return std::nullopt;  // exact zero, handled above
    return s.precision().k();
  };

  Precision p = Precision::exact();
  if (!x.is_exact()) p = min(p, Precision::jet(x.precision().k() + *eff_val(y)));
  if (!y.is_exact()) p = min(p, Precision::jet(y.precision().k() + *eff_val(x)));

  std::map<long, Int> t;
  for (const auto& [ex, cx] : x.terms())
    for (const auto& [ey, cy] : y.terms()) {
      long e = ex + ey;
      if (p.covers(e + 1)) t[e] += cx * cy;
    }
  for (auto it = t.begin(); it != t.end();) {
    if (it->second == 0) it = t.erase(it);
    else ++it;
  }
  return NovikovSeries::from_terms(std::move(t), p);
}

NovikovSeries mul_int(const Int& c, const NovikovSeries& x) {
  if (c == 0) return NovikovSeries::from_terms({}, x.precision());
  std::map<long, Int> t = x.terms();
  for (auto& [e, co] : t) co *= c;
  return NovikovSeries::from_terms(std::move(t), x.precision());
}

NovikovSeries mul_monomial(const NovikovSeries& x, const Int& c, long e) {
  return mul(x, NovikovSeries::monomial(c, e));
}

NovikovSeries truncate(const NovikovSeries& x, long k) {
  Precision p = min(x.precision(), Precision::jet(k));
  std::map<long, Int> t;
  for (const auto& [e, c] : x.terms())
    if (e < k) t.emplace(e, c);
  return NovikovSeries::from_terms(std::move(t), p);
}

bool equal_below(const NovikovSeries& x, const NovikovSeries& y, long k) {
  if (!x.precision().covers(k) || !y.precision().covers(k))
    throw std::invalid_argument("equal_below: inputs not known below T^" +
                                std::to_string(k));
  for (const auto& [e, c] : x.terms())
    if (e < k && y.coeff(e) != c) return false;
  for (const auto& [e, c] : y.terms())
    if (e < k && x.coeff(e) != c) return false;
  return true;
}

bool is_unit(const NovikovSeries& x) {
  if (!x.has_terms()) {
    if (x.is_exact()) return false;
    throw ZeroToPrecision("is_unit: zero to precision @" +
                          std::to_string(x.precision().k()));
  }
  const Int& lead = x.terms().begin()->second;
  return lead == 1 || lead == -1;
}

NovikovSeries invert_unit(const NovikovSeries& x, long out_precision) {
  if (!x.has_terms())
    throw NotAUnit("invert_unit: no known nonzero term");
  auto lead = x.terms().begin();
  long v = lead->first;
  const Int& a = lead->second;
  if (a != 1 && a != -1)
    throw NotAUnit("invert_unit: leading coefficient " + a.str() +
                   " is not +-1");

  // x = s*T^v*(1 + m), val(m) >= 1. Inverse = s*T^-v * sum (-m)^k.
  int s = a > 0 ? 1 : -1;
  NovikovSeries y = mul_monomial(x, s, -v);  // 1 + m
  NovikovSeries m = sub(y, NovikovSeries(1));
  if (m.is_exact_zero())
    return NovikovSeries::monomial(s, -v);  // monomial unit, exact inverse

  long rel = out_precision;  // window for the valuation-0 part
  if (!m.is_exact()) rel = std::min(rel, m.precision().k());
  NovikovSeries r(1);
  NovikovSeries acc(1);
  NovikovSeries nm = neg(m);
  while (true) {
    acc = truncate(mul(acc, nm), rel);
    if (!acc.has_terms()) break;
    r = add(r, acc);
  }
  r = truncate(r, rel);  // pins the jet window even when terms stop early
  return mul_monomial(r, s, -v);
}

NovikovSeries divide(const NovikovSeries& x, const NovikovSeries& g,
                     long out_precision) {
  if (!g.has_terms()) {
    if (g.is_exact())
      throw std::invalid_argument("divide: divisor is exact zero");
    throw ZeroToPrecision("divide: divisor is zero to precision @" +
                          std::to_string(g.precision().k()));
  }
  auto glead = g.terms().begin();
  long vg = glead->first;
  const Int& b = glead->second;

  std::map<long, Int> q;
  NovikovSeries r = x;
  while (true) {
    if (!r.has_terms()) {
      if (r.is_exact())
        return NovikovSeries::from_terms(std::move(q), Precision::exact());
      long k = std::min(out_precision, r.precision().k() - vg);
      std::map<long, Int> qk;
      for (auto& [e, c] : q)
        if (e < k) qk.emplace(e, std::move(c));
      return NovikovSeries::from_terms(std::move(qk), Precision::jet(k));
    }
    auto rlead = r.terms().begin();
    long vr = rlead->first;
    long e = vr - vg;
    if (e >= out_precision) {
      std::map<long, Int> qk;
      for (auto& [ex, c] : q)
        if (ex < out_precision) qk.emplace(ex, std::move(c));
      return NovikovSeries::from_terms(std::move(qk),
                                       Precision::jet(out_precision));
    }
    Int c = rlead->second;
    if (c % b != 0) throw NotDivisible(vr);
    Int qc = c / b;
    q[e] = qc;
    r = sub(r, mul_monomial(g, qc, e));
  }
}

std::pair<NovikovSeries, NovikovSeries> canonical_associate_with_unit(
    const NovikovSeries& x, long out_precision) {
  if (!x.has_terms()) {
    if (x.is_exact()) return {NovikovSeries(), NovikovSeries(1)};
    throw ZeroToPrecision("canonical_associate: zero to precision @" +
                          std::to_string(x.precision().k()));
  }
  auto lead = x.terms().begin();
  long v = lead->first;
  int s = lead->second > 0 ? 1 : -1;
  Int a0 = abs(lead->second);

  if (a0 == 1) {
    NovikovSeries u = invert_unit(x, out_precision);
    NovikovSeries one(1);
    if (!u.is_exact()) {
      // x*u = 1 only below the window; report 1 as exact regardless, the
      // class representative of any unit.
    }
    return {one, u};
  }

  // z tracks x * (s*T^-v) * u' with u' = 1 + c_1 T + ...; each c_j forces the
  // order-j coefficient of z into [0, a0).
  NovikovSeries y = mul_monomial(x, s, -v);
  long window = out_precision;
  if (!y.is_exact()) window = std::min(window, y.precision().k());

  NovikovSeries z = y;
  std::map<long, Int> uterms{{0, Int(1)}};
  for (long j = 1; j < window; ++j) {
    if (y.is_exact() && z.is_exact()) {
      // Reduction already terminated if every remaining coefficient at
      // exponents >= j lies in [0, a0): then all later corrections vanish.
      bool done = true;
      for (auto it = z.terms().lower_bound(j); it != z.terms().end(); ++it)
        if (it->second < 0 || it->second >= a0) { done = false; break; }
      if (done) {
        NovikovSeries u = mul_monomial(
            NovikovSeries::from_terms(std::move(uterms), Precision::exact()),
            s, -v);
        return {z, u};
      }
    }
    Int cj = -floor_div(z.coeff(j), a0);
    if (cj != 0) {
      uterms[j] = cj;
      z = add(z, mul_monomial(y, cj, j));
    }
  }
  NovikovSeries u = mul_monomial(
      NovikovSeries::from_terms(std::move(uterms), Precision::jet(window)), s,
      -v);
  return {truncate(z, window), u};
}

NovikovSeries canonical_associate(const NovikovSeries& x, long out_precision) {
  return canonical_associate_with_unit(x, out_precision).first;
}

namespace {

// Shared round structure for ideal_generator and bezout_pair: generators with
// witness rows over the original inputs, all identities maintained by the
// tracked ring operations themselves.
struct TrackedGen {
  NovikovSeries y;
  std::vector<NovikovSeries> wit;
};

void shift_to_val0(TrackedGen& g) {
  long v = g.y.terms().begin()->first;
  if (v == 0) return;
  g.y = mul_monomial(g.y, 1, -v);
  for (auto& w : g.wit) w = mul_monomial(w, 1, -v);
}

struct RoundResult {
  NovikovSeries w;
  std::vector<NovikovSeries> w_wit;
  Int g;
  bool all_divisible;
};

RoundResult run_round(std::vector<TrackedGen>& gens, long precision) {
  for (auto& g : gens) shift_to_val0(g);

  Int g = 0;
  std::vector<Int> coef(gens.size(), 0);
  for (size_t i = 0; i < gens.size(); ++i) {
    Int a = gens[i].y.terms().begin()->second;
    Egcd e = egcd(g, a);
    for (size_t j = 0; j < i; ++j) coef[j] *= e.u;
    coef[i] = e.v;
    g = e.g;
  }

  RoundResult r;
  r.g = g;
  r.w = NovikovSeries();
  r.w_wit.assign(gens[0].wit.size(), NovikovSeries());
  for (size_t i = 0; i < gens.size(); ++i) {
    if (coef[i] == 0) continue;
    r.w = add(r.w, mul_int(coef[i], gens[i].y));
    for (size_t j = 0; j < r.w_wit.size(); ++j)
      r.w_wit[j] = add(r.w_wit[j], mul_int(coef[i], gens[i].wit[j]));
  }

  r.all_divisible = true;
  for (const auto& gen : gens) {
    try {
      divide(gen.y, r.w, precision);
    } catch (const NotDivisible&) {
      r.all_divisible = false;
      break;
    }
  }
  return r;
}

void reduce_round(std::vector<TrackedGen>& gens, const RoundResult& r) {
  std::vector<TrackedGen> next;
  for (auto& gen : gens) {
    Int m = gen.y.terms().begin()->second / r.g;
    TrackedGen z;
    z.y = sub(gen.y, mul_int(m, r.w));
    z.wit.reserve(gen.wit.size());
    for (size_t j = 0; j < gen.wit.size(); ++j)
      z.wit.push_back(sub(gen.wit[j], mul_int(m, r.w_wit[j])));
    if (z.y.is_exact_zero()) continue;
    if (z.y.has_terms() || !z.y.is_exact()) {
      z.y = mul_monomial(z.y, 1, -1);
      for (auto& w : z.wit) w = mul_monomial(w, 1, -1);
      if (z.y.has_terms()) next.push_back(std::move(z));
    }
  }
  TrackedGen keep;
  keep.y = r.w;
  keep.wit = r.w_wit;
  next.push_back(std::move(keep));
  gens = std::move(next);
}

long round_budget(const Int& g0, long precision) {
  // The gcd chain g_{k+1} | g_k strictly decreases at most msb(|g0|)+1 times;
  // between decreases each round consumes one order of T. A generator with
  // leading coefficient equal to the stabilized gcd is reached within the
  // budget or the inputs cannot be certified at this precision.
  long bits = static_cast<long>(msb(abs(g0))) + 1;
  return precision + bits + 2;
}

}  // namespace

IdealGenerator ideal_generator(const std::vector<NovikovSeries>& gens,
                               long precision) {
  if (gens.empty())
    throw std::invalid_argument("ideal_generator: no generators");
  std::vector<TrackedGen> live;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (!gens[i].is_exact())
      throw std::invalid_argument(
          "ideal_generator: generators must be exact (generator " +
          std::to_string(i) + " is a jet)");
    if (gens[i].is_exact_zero()) continue;
    TrackedGen t;
    t.y = gens[i];
    t.wit.assign(gens.size(), NovikovSeries());
    t.wit[i] = NovikovSeries(1);
    live.push_back(std::move(t));
  }
  if (live.empty())
    throw std::invalid_argument("ideal_generator: all generators are zero");

  IdealGenerator out;
  for (auto& g : live) shift_to_val0(g);
  long budget = round_budget(live[0].y.terms().begin()->second, precision);
  for (long round = 0; round < budget; ++round) {
    RoundResult r = run_round(live, precision);
    out.gcd_chain.push_back(r.g);
    if (r.all_divisible) {
      auto [canon, u] = canonical_associate_with_unit(r.w, precision);
      out.generator = canon;
      out.witnesses.reserve(r.w_wit.size());
      for (const auto& w : r.w_wit) out.witnesses.push_back(mul(u, w));

      // Certify the Bezout identity on the window the tracked precisions
      // actually support (T-shifts can pull it below the budget).
      NovikovSeries acc;
      for (size_t i = 0; i < gens.size(); ++i)
        acc = add(acc, mul(out.witnesses[i], gens[i]));
      out.verified_to = precision;
      if (!acc.is_exact())
        out.verified_to = std::min(out.verified_to, acc.precision().k());
      if (!out.generator.is_exact())
        out.verified_to =
            std::min(out.verified_to, out.generator.precision().k());
      if (!equal_below(acc, out.generator, out.verified_to))
        throw std::logic_error("ideal_generator: witness identity failed");
      return out;
    }
    reduce_round(live, r);
  }
  throw PrecisionExhausted(
      "ideal_generator: gcd chain did not stabilize within precision " +
      std::to_string(precision));
}

BezoutPair bezout_pair(const NovikovSeries& x, const NovikovSeries& y,
                       long precision) {
  auto zero_check = [](const NovikovSeries& s, const char* name) {
    if (!s.has_terms() && !s.is_exact())
      throw ZeroToPrecision(std::string("bezout_pair: ") + name +
                            " is zero to precision");
  };
  zero_check(x, "first argument");
  zero_check(y, "second argument");
  if (x.is_exact_zero() && y.is_exact_zero())
    throw std::invalid_argument("bezout_pair: both arguments are zero");
  if (x.is_exact_zero()) {
    auto [canon, u] = canonical_associate_with_unit(y, precision);
    return {canon, NovikovSeries(), u};
  }
  if (y.is_exact_zero()) {
    auto [canon, u] = canonical_associate_with_unit(x, precision);
    return {canon, u, NovikovSeries()};
  }

  long window = precision;
  if (!x.is_exact())
    window = std::min(window, x.precision().k() - val(x).value);
  if (!y.is_exact())
    window = std::min(window, y.precision().k() - val(y).value);
  if (window <= 0)
    throw PrecisionExhausted("bezout_pair: no usable precision window");

  std::vector<TrackedGen> live(2);
  live[0].y = x;
  live[0].wit = {NovikovSeries(1), NovikovSeries()};
  live[1].y = y;
  live[1].wit = {NovikovSeries(), NovikovSeries(1)};
  for (auto& g : live) shift_to_val0(g);

  long budget = round_budget(live[0].y.terms().begin()->second, window);
  for (long round = 0; round < budget; ++round) {
    RoundResult r = run_round(live, window);
    if (r.all_divisible) return {r.w, r.w_wit[0], r.w_wit[1]};
    reduce_round(live, r);
    if (live.size() == 1 && live[0].y == r.w) {
      // Everything else reduced to exact zero: w generates on its own.
      return {r.w, r.w_wit[0], r.w_wit[1]};
    }
  }
  throw PrecisionExhausted(
      "bezout_pair: gcd chain did not stabilize within precision " +
      std::to_string(window));
}

// ---------------------------------------------------------------------------
// Literal syntax

std::string to_string(const NovikovSeries& x) {
  std::ostringstream os;
  if (!x.has_terms()) {
    os << "0";
  } else {
    bool first = true;
    for (const auto& [e, c] : x.terms()) {
      Int a = c;
      if (first) {
        if (a < 0) { os << "-"; a = -a; }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      if (e == 0) {
        os << a.str();
      } else {
        if (a != 1) os << a.str() << "*";
        os << "T";
        if (e != 1) os << "^" << e;
      }
    }
  }
  if (!x.is_exact()) os << "@" << x.precision().k();
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() { return s[i]; }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("series literal: " + msg + " at position " +
                     std::to_string(i) + " in \"" + s + "\"");
  }
};

Int parse_int(Cursor& c, bool allow_sign) {
  c.skip_ws();
  bool negative = false;
  if (allow_sign && c.i < c.s.size() && (c.peek() == '-' || c.peek() == '+')) {
    negative = c.peek() == '-';
    ++c.i;
  }
  size_t start = c.i;
  while (c.i < c.s.size() &&
         std::isdigit(static_cast<unsigned char>(c.s[c.i])))
    ++c.i;
  if (c.i == start) c.fail("expected an integer");
  Int v(c.s.substr(start, c.i - start));
  return negative ? Int(-v) : v;
}

// term := INT ['*' tpow] | tpow ; tpow := 'T' ['^' INT]
// Returns (coefficient magnitude applied, exponent).
std::pair<Int, long> parse_term(Cursor& c) {
  c.skip_ws();
  Int coeff = 1;
  bool saw_coeff = false;
  if (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
    coeff = parse_int(c, false);
    saw_coeff = true;
    c.skip_ws();
    if (c.i < c.s.size() && c.peek() == '*') {
      ++c.i;
      c.skip_ws();
    } else {
      return {coeff, 0};
    }
  }
  if (c.i >= c.s.size() || c.peek() != 'T')
    c.fail(saw_coeff ? "expected T after '*'" : "expected a coefficient or T");
  ++c.i;
  long e = 1;
  c.skip_ws();
  if (c.i < c.s.size() && c.peek() == '^') {
    ++c.i;
    Int ei = parse_int(c, true);
    e = static_cast<long>(ei);
  }
  return {coeff, e};
}

}  // namespace

NovikovSeries parse_series(const std::string& text) {
  std::string body = text;
  Precision prec = Precision::exact();
  if (auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    std::string ktext = text.substr(at + 1);
    try {
      size_t used = 0;
      long k = std::stol(ktext, &used);
      while (used < ktext.size() &&
             std::isspace(static_cast<unsigned char>(ktext[used])))
        ++used;
      if (used != ktext.size()) throw std::invalid_argument("trailing");
      prec = Precision::jet(k);
    } catch (const std::exception&) {
      throw ParseError("series literal: bad precision suffix \"@" + ktext +
                       "\"");
    }
  }

  Cursor c{body};
  if (c.done()) throw ParseError("series literal: empty input");
  std::map<long, Int> terms;
  int sign = 1;
  if (c.peek() == '-') { sign = -1; ++c.i; }
  else if (c.peek() == '+') ++c.i;
  while (true) {
    auto [coeff, e] = parse_term(c);
    terms[e] += sign * coeff;
    if (c.done()) break;
    if (c.peek() == '+') sign = 1;
    else if (c.peek() == '-') sign = -1;
    else c.fail("expected '+' or '-'");
    ++c.i;
  }
  try {
    return NovikovSeries::from_terms(std::move(terms), prec);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("series literal: ") + e.what());
  }
}

}  // namespace novalg
