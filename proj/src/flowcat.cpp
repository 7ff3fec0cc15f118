#include "novalg/flowcat.hpp"

#include <set>
#include <sstream>
#include <unordered_map>

namespace novalg {

namespace {

struct GenPos {
  long cls = 0;  // reduced class
  long pos = 0;  // position inside the class
  long action = 0;
  long index = 0;  // raw grading
};

long reduce(long index, long two_n) {
  return two_n > 0 ? ((index % two_n) + two_n) % two_n : index;
}

// Indexes generators by id; reports duplicates/empties into `bad`.
std::unordered_map<std::string, GenPos> index_generators(
    const FlowCategoryData& fc, std::vector<std::string>* bad) {
  std::unordered_map<std::string, GenPos> pos;
  std::map<long, long> fill;
  for (const auto& g : fc.generators) {
    if (g.id.empty()) {
      if (bad) bad->push_back("generator with empty id");
      continue;
    }
    long c = reduce(g.index, fc.two_n);
    if (!pos.emplace(g.id, GenPos{c, fill[c], g.action, g.index}).second) {
      if (bad) bad->push_back("duplicate generator id '" + g.id + "'");
      continue;
    }
    ++fill[c];
  }
  return pos;
}

std::string describe(const Incidence& e) {
  std::ostringstream os;
  os << "incidence " << e.from << " -> " << e.to << " (t=" << e.t
     << ", count=" << e.count << ")";
  return os.str();
}

const LambdaMatrix* family_at(const std::map<long, LambdaMatrix>& f, long c) {
  auto it = f.find(c);
  return it == f.end() ? nullptr : &it->second;
}

// f[c] if present, else a zero matrix of the given shape.
LambdaMatrix family_or_zero(const std::map<long, LambdaMatrix>& f, long c,
                            long rows, long cols) {
  if (const LambdaMatrix* m = family_at(f, c)) {
    if (m->rows != rows || m->cols != cols)
      throw ShapeMismatch("map family has wrong shape at class " +
                          std::to_string(c));
    return *m;
  }
  return LambdaMatrix(rows, cols);
}

LambdaMatrix boundary_or_zero(const GradedLambdaComplex& cx, long c) {
  if (const LambdaMatrix* m = cx.boundary(c)) return *m;
  return LambdaMatrix(cx.rank_of(cx.pred(c)), cx.rank_of(c));
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const FlowCategoryData& fc) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  if (fc.two_n < 0) fail("grading period must be >= 0");
  if (fc.two_n % 2 != 0) fail("grading period must be even");
  if (fc.omega <= 0) fail("action period must be positive");

  std::vector<std::string> bad;
  auto pos = index_generators(fc, &bad);
  for (const auto& msg : bad) fail(msg);

  for (const auto& e : fc.incidences) {
    auto from = pos.find(e.from), to = pos.find(e.to);
    if (from == pos.end() || to == pos.end()) {
      fail(describe(e) + ": unknown endpoint");
      continue;
    }
    if (reduce(to->second.index - from->second.index + 1, fc.two_n) != 0)
      fail(describe(e) + ": grading must drop by 1");
    // Energy filtration: strict increase along the boundary.
    if (to->second.action + fc.omega * e.t <= from->second.action)
      fail(describe(e) + ": action must strictly increase");
  }
  return rep;
}

ValidationReport validate(const BimoduleCounts& bm) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  ValidationReport src = validate(bm.source), tgt = validate(bm.target);
  for (const auto& msg : src.violations) fail("source: " + msg);
  for (const auto& msg : tgt.violations) fail("target: " + msg);
  if (bm.source.omega != bm.target.omega)
    fail("source and target action periods differ");
  if (bm.source.two_n != bm.target.two_n)
    fail("source and target grading periods differ");

  auto spos = index_generators(bm.source, nullptr);
  auto tpos = index_generators(bm.target, nullptr);
  for (const auto& e : bm.incidences) {
    auto from = spos.find(e.from);
    auto to = tpos.find(e.to);
    if (from == spos.end() || to == tpos.end()) {
      fail(describe(e) + ": unknown endpoint");
      continue;
    }
    if (reduce(to->second.index - from->second.index - bm.degree,
               bm.source.two_n) != 0)
      fail(describe(e) + ": grading must shift by the map degree");
    // Non-strict: identity-type entries sit on the same action level.
    if (to->second.action + bm.source.omega * e.t + bm.energy_constant <
        from->second.action)
      fail(describe(e) + ": action drops below the energy constant");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Complex assembly

GradedLambdaComplex build_complex(const FlowCategoryData& fc) {
  ValidationReport rep = validate(fc);
  if (!rep.ok) throw ValidationFailed("flow category: " + rep.violations[0]);

  GradedLambdaComplex cx;
  cx.two_n = fc.two_n;
  if (fc.two_n > 0)
    for (long c = 0; c < fc.two_n; ++c) cx.gens[c];

  auto pos = index_generators(fc, nullptr);
  for (const auto& g : fc.generators) cx.gens[pos.at(g.id).cls].push_back(g.id);

  for (const auto& [c, ids] : cx.gens)
    cx.d.emplace(c, LambdaMatrix(cx.rank_of(cx.pred(c)), (long)ids.size()));
  for (const auto& e : fc.incidences) {
    if (e.count == 0) continue;
    const GenPos& from = pos.at(e.from);
    const GenPos& to = pos.at(e.to);
    NovikovSeries& cell = cx.d.at(from.cls).at(to.pos, from.pos);
    cell = add(cell, NovikovSeries::monomial(Int(e.count), e.t));
  }
  return cx;
}

ValidationReport check_d_squared(const GradedLambdaComplex& c,
                                 long precision) {
  ValidationReport rep;
  for (const auto& [i, di] : c.d) {
    const LambdaMatrix* dp = c.boundary(c.pred(i));
    if (dp == nullptr || dp->rows == 0 || di.cols == 0) continue;
    LambdaMatrix sq = mul(*dp, di);
    if (!equal_below(sq, LambdaMatrix(sq.rows, sq.cols), precision)) {
      rep.ok = false;
      rep.violations.push_back("d o d nonzero on class " + std::to_string(i));
    }
  }
  return rep;
}

std::map<long, ModuleStructure> homology(const GradedLambdaComplex& c,
                                         long precision) {
  std::map<long, KernelImage> ki;
  for (const auto& [i, di] : c.d) ki.emplace(i, kernel_image(di, precision));

  std::map<long, ModuleStructure> out;
  for (const auto& [i, ids] : c.gens) {
    long n = (long)ids.size();
    auto in = ki.find(c.succ(i));
    LambdaMatrix img = in != ki.end() ? in->second.image : LambdaMatrix(n, 0);
    out.emplace(i, subquotient(ki.at(i).kernel, img, precision));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain maps

std::map<long, LambdaMatrix> chain_map(const BimoduleCounts& bm) {
  ValidationReport rep = validate(bm);
  if (!rep.ok) throw ValidationFailed("bimodule: " + rep.violations[0]);

  GradedLambdaComplex src = build_complex(bm.source);
  GradedLambdaComplex tgt = build_complex(bm.target);
  auto spos = index_generators(bm.source, nullptr);
  auto tpos = index_generators(bm.target, nullptr);

  std::map<long, LambdaMatrix> f;
  for (const auto& [i, ids] : src.gens) {
    long tc = tgt.cls(i + bm.degree);
    f.emplace(i, LambdaMatrix(tgt.rank_of(tc), (long)ids.size()));
  }
  for (const auto& e : bm.incidences) {
    if (e.count == 0) continue;
    const GenPos& from = spos.at(e.from);
    const GenPos& to = tpos.at(e.to);
    NovikovSeries& cell = f.at(from.cls).at(to.pos, from.pos);
    cell = add(cell, NovikovSeries::monomial(Int(e.count), e.t));
  }
  return f;
}

ValidationReport check_chain_map(const std::map<long, LambdaMatrix>& f,
                                 const GradedLambdaComplex& src,
                                 const GradedLambdaComplex& tgt,
                                 long precision) {
  ValidationReport rep;
  for (const auto& [i, ids] : src.gens) {
    long n = (long)ids.size();
    LambdaMatrix fi = family_or_zero(f, i, tgt.rank_of(i), n);
    LambdaMatrix fp =
        family_or_zero(f, src.pred(i), tgt.rank_of(tgt.pred(i)),
                       src.rank_of(src.pred(i)));
    LambdaMatrix lhs = mul(boundary_or_zero(tgt, i), fi);
    LambdaMatrix rhs = mul(fp, boundary_or_zero(src, i));
    if (!equal_below(lhs, rhs, precision)) {
      rep.ok = false;
      rep.violations.push_back("does not commute with d on class " +
                               std::to_string(i));
    }
  }
  return rep;
}

bool check_unitriangular(const std::map<long, LambdaMatrix>& f,
                         const GradedLambdaComplex& c) {
  const NovikovSeries one(1);
  for (const auto& [i, ids] : c.gens) {
    long n = (long)ids.size();
    if (n == 0) continue;
    const LambdaMatrix* fi = family_at(f, i);
    if (fi == nullptr || fi->rows != n || fi->cols != n) return false;
    for (long r = 0; r < n; ++r)
      for (long cc = 0; cc < n; ++cc) {
        NovikovSeries e = fi->at(r, cc);
        if (r == cc) e = sub(e, one);
        Valuation v = val(e);
        if (v.finite && v.value <= 0) return false;
      }
  }
  return true;
}

std::map<long, LambdaMatrix> invert_unitriangular(
    const std::map<long, LambdaMatrix>& f, const GradedLambdaComplex& c,
    long precision) {
  if (!check_unitriangular(f, c))
    throw NotUnitriangular("map is not of the form identity + positive part");

  std::map<long, LambdaMatrix> out;
  for (const auto& [i, ids] : c.gens) {
    long n = (long)ids.size();
    if (n == 0) {
      out.emplace(i, LambdaMatrix(0, 0));
      continue;
    }
    LambdaMatrix id = LambdaMatrix::identity(n);
    LambdaMatrix nil = sub(*family_at(f, i), id);
    // Geometric series: (I + N)^-1 = sum (-N)^k; N gains valuation each power.
    LambdaMatrix acc = truncate(id, precision);
    LambdaMatrix pow = id;
    for (long k = 1; k <= precision; ++k) {
      pow = truncate(mul(pow, nil), precision);
      if (equal_below(pow, LambdaMatrix(n, n), precision)) break;
      acc = (k % 2 == 1) ? sub(acc, pow) : add(acc, pow);
    }
    out.emplace(i, acc);
  }
  return out;
}

ValidationReport check_homotopy(const std::map<long, LambdaMatrix>& pearl,
                                const std::map<long, LambdaMatrix>& ssp,
                                const std::map<long, LambdaMatrix>& pss,
                                const std::map<long, LambdaMatrix>& h,
                                const GradedLambdaComplex& morse,
                                const GradedLambdaComplex& floer,
                                long precision) {
  ValidationReport rep;
  for (const auto& [i, ids] : morse.gens) {
    long n = (long)ids.size();
    LambdaMatrix pe = family_or_zero(pearl, i, n, n);
    LambdaMatrix ps = family_or_zero(pss, i, floer.rank_of(i), n);
    LambdaMatrix sp = family_or_zero(ssp, i, n, floer.rank_of(i));
    LambdaMatrix hi = family_or_zero(h, i, morse.rank_of(morse.succ(i)), n);
    LambdaMatrix hp = family_or_zero(h, morse.pred(i), n,
                                     morse.rank_of(morse.pred(i)));
    LambdaMatrix lhs = sub(pe, mul(sp, ps));
    LambdaMatrix rhs = sub(mul(boundary_or_zero(morse, morse.succ(i)), hi),
                           mul(hp, boundary_or_zero(morse, i)));
    if (!equal_below(lhs, rhs, precision)) {
      rep.ok = false;
      rep.violations.push_back("homotopy identity fails on class " +
                               std::to_string(i));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Morse model

FlowCategoryData morse_flow_category(const std::vector<MorseCritical>& crit,
                                     const std::vector<Incidence>& flows,
                                     long half_dim, long two_n, long omega,
                                     const Rational& epsilon) {
  FlowCategoryData fc;
  fc.two_n = two_n;
  fc.omega = omega;

  std::unordered_map<std::string, long> morse_index;
  for (const auto& p : crit) {
    if (!morse_index.emplace(p.id, p.morse_index).second)
      throw std::invalid_argument("duplicate critical point '" + p.id + "'");
    Rational a = epsilon * p.f_value;
    if (denominator(a) != 1)
      throw std::invalid_argument("scaled value of '" + p.id +
                                  "' is not an integer");
    Int level = numerator(a);
    if (level < 0 || level >= omega)
      throw EpsilonTooLarge("scaled value of '" + p.id +
                            "' leaves the action window [0, omega)");
    fc.generators.push_back(
        {p.id, half_dim - p.morse_index, (long)level.convert_to<long>()});
  }

  for (const auto& e : flows) {
    auto from = morse_index.find(e.from);
    auto to = morse_index.find(e.to);
    if (from == morse_index.end() || to == morse_index.end())
      throw std::invalid_argument(describe(e) + ": unknown critical point");
    if (e.t != 0)
      throw std::invalid_argument(describe(e) + ": flows carry T^0 only");
    if (to->second != from->second + 1)
      throw std::invalid_argument(describe(e) +
                                  ": Morse index must rise by 1");
    fc.incidences.push_back({e.from, e.to, 0, e.count});
  }

  ValidationReport rep = validate(fc);
  if (!rep.ok) throw std::invalid_argument("morse data: " + rep.violations[0]);
  return fc;
}

}  // namespace novalg
