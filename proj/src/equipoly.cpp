#include "novalg/equipoly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace novalg {

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational operator+(const GaussianRational& x,
                           const GaussianRational& y) {
  return {x.re + y.re, x.im + y.im};
}

GaussianRational operator-(const GaussianRational& x,
                           const GaussianRational& y) {
  return {x.re - y.re, x.im - y.im};
}

GaussianRational operator*(const GaussianRational& x,
                           const GaussianRational& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

GaussianRational conj(const GaussianRational& x) { return {x.re, -x.im}; }

GaussianRational inverse(const GaussianRational& x) {
  Rational n = x.re * x.re + x.im * x.im;
  if (n == 0) throw std::domain_error("inverse of zero");
  return {x.re / n, -x.im / n};
}

std::string to_string(const GaussianRational& x) {
  std::string re = x.re.str(), im = x.im.str();
  if (x.im == 0) return re;
  if (x.re == 0) return im + "*i";
  return re + (x.im > 0 ? " + " + im : " - " + Rational(-x.im).str()) + "*i";
}

// ---------------------------------------------------------------------------
// Groups

void validate_rep(const AbelianRep& rep) {
  for (long m : rep.orders)
    if (m < 1) throw std::invalid_argument("factor orders must be >= 1");
  for (const auto& w : rep.weights)
    if (w.size() != rep.orders.size())
      throw std::invalid_argument("weight tuple arity != number of factors");
}

std::vector<GroupElement> all_elements(const std::vector<long>& orders) {
  long total = 1;
  for (long m : orders) {
    if (m < 1) throw std::invalid_argument("factor orders must be >= 1");
    if (total > (1L << 20) / m)
      throw std::invalid_argument("group too large to enumerate");
    total *= m;
  }
  std::vector<GroupElement> out;
  GroupElement g(orders.size(), 0);
  for (long k = 0; k < total; ++k) {
    out.push_back(g);
    for (size_t t = 0; t < orders.size(); ++t) {
      if (++g[t] < orders[t]) break;
      g[t] = 0;
    }
  }
  return out;
}

Subgroup trivial_subgroup(const std::vector<long>& orders) {
  return {GroupElement(orders.size(), 0)};
}

Subgroup full_group(const std::vector<long>& orders) {
  Subgroup out = all_elements(orders);
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup generated_subgroup(const std::vector<long>& orders,
                            const std::vector<GroupElement>& gens) {
  std::set<GroupElement> seen;
  seen.insert(GroupElement(orders.size(), 0));
  std::vector<GroupElement> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& h : frontier)
      for (const auto& g : gens) {
        if (g.size() != orders.size())
          throw std::invalid_argument("generator arity != number of factors");
        GroupElement s(h);
        for (size_t t = 0; t < s.size(); ++t)
          s[t] = ((s[t] + g[t]) % orders[t] + orders[t]) % orders[t];
        if (seen.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return Subgroup(seen.begin(), seen.end());
}

std::vector<Subgroup> all_subgroups(const std::vector<long>& orders) {
  std::vector<GroupElement> everyone = all_elements(orders);
  std::set<Subgroup> found;
  found.insert(trivial_subgroup(orders));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Subgroup> current(found.begin(), found.end());
    for (const auto& H : current)
      for (const auto& g : everyone) {
        if (std::binary_search(H.begin(), H.end(), g)) continue;
        std::vector<GroupElement> gens(H.begin(), H.end());
        gens.push_back(g);
        if (found.insert(generated_subgroup(orders, gens)).second) grew = true;
      }
  }
  return std::vector<Subgroup>(found.begin(), found.end());
}

namespace {

long lcm_of(const std::vector<long>& orders) {
  long l = 1;
  for (long m : orders) l = std::lcm(l, m);
  return l;
}

// Character pairing of a weight tuple with a group element, as a residue in
// Z/L with L = lcm(orders): the element acts by zeta_L to this power.
long pairing(const std::vector<long>& orders, const std::vector<long>& weight,
             const GroupElement& g, long L) {
  long e = 0;
  for (size_t t = 0; t < orders.size(); ++t) {
    long w = ((weight[t] % orders[t]) + orders[t]) % orders[t];
    long gt = ((g[t] % orders[t]) + orders[t]) % orders[t];
    e = (e + w * gt % L * (L / orders[t])) % L;
  }
  return e;
}

}  // namespace

bool character_trivial_on(const AbelianRep& rep, long coord,
                          const Subgroup& H) {
  validate_rep(rep);
  long L = lcm_of(rep.orders);
  for (const auto& h : H)
    if (pairing(rep.orders, rep.weights.at(coord), h, L) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Monomial bases

bool is_equivariant_monomial(const AbelianRep& V, const AbelianRep& W,
                             const std::vector<long>& alpha, long target) {
  validate_rep(V);
  validate_rep(W);
  if ((long)alpha.size() != V.dim())
    throw std::invalid_argument("exponent arity != source dimension");
  if (target < 0 || target >= W.dim())
    throw std::invalid_argument("target coordinate out of range");
  if (V.orders != W.orders)
    throw std::invalid_argument("source and target groups differ");
  for (size_t t = 0; t < V.orders.size(); ++t) {
    long m = V.orders[t];
    long sum = 0;
    for (long i = 0; i < V.dim(); ++i)
      sum = (sum + alpha[i] % m * (V.weights[i][t] % m)) % m;
    long want = ((W.weights[target][t] % m) + m) % m;
    if (((sum % m) + m) % m != want) return false;
  }
  return true;
}

namespace {

void enumerate_alphas(long coords, std::vector<long>& alpha, long from,
                      long remaining,
                      const std::function<void(const std::vector<long>&)>& f) {
  if (from == coords) {
    f(alpha);
    return;
  }
  for (long a = 0; a <= remaining; ++a) {
    alpha[from] = a;
    enumerate_alphas(coords, alpha, from + 1, remaining - a, f);
  }
  alpha[from] = 0;
}

}  // namespace

std::vector<Monomial> poly_basis(const AbelianRep& V, const AbelianRep& W,
                                 long degree) {
  validate_rep(V);
  validate_rep(W);
  if (V.orders != W.orders)
    throw std::invalid_argument("source and target groups differ");
  std::vector<Monomial> out;
  std::vector<long> alpha(V.dim(), 0);
  for (long d = 0; d <= degree; ++d)
    for (long j = 0; j < W.dim(); ++j)
      enumerate_alphas(V.dim(), alpha, 0, d,
                       [&](const std::vector<long>& a) {
                         long total = 0;
                         for (long x : a) total += x;
                         if (total != d) return;
                         if (is_equivariant_monomial(V, W, a, j))
                           out.push_back({a, j});
                       });
  return out;
}

long dim_poly(const AbelianRep& V, const AbelianRep& W, long degree) {
  return (long)poly_basis(V, W, degree).size();
}

// ---------------------------------------------------------------------------
// Polynomials

void validate_poly(const AbelianRep& V, const AbelianRep& W,
                   const EquivariantPolynomial& f) {
  for (const auto& term : f.terms) {
    Monomial m{term.alpha, term.target};
    if (m.total_degree() > f.degree_cap)
      throw std::invalid_argument("term exceeds the degree cap");
    if (!is_equivariant_monomial(V, W, term.alpha, term.target))
      throw std::invalid_argument("term violates the weight rule");
  }
}

std::vector<GaussianRational> eval(const EquivariantPolynomial& f, long w_dim,
                                   const std::vector<GaussianRational>& z) {
  std::vector<GaussianRational> out(w_dim);
  for (const auto& term : f.terms) {
    if (term.target < 0 || term.target >= w_dim)
      throw std::invalid_argument("target coordinate out of range");
    if (term.alpha.size() != z.size())
      throw std::invalid_argument("point dimension != exponent arity");
    GaussianRational v = term.coeff;
    for (size_t i = 0; i < term.alpha.size(); ++i)
      for (long p = 0; p < term.alpha[i]; ++p) v = v * z[i];
    out[term.target] = out[term.target] + v;
  }
  return out;
}

std::vector<GaussianRational> act(const AbelianRep& rep,
                                  const GroupElement& g,
                                  const std::vector<GaussianRational>& z) {
  validate_rep(rep);
  for (long m : rep.orders)
    if (m != 1 && m != 2 && m != 4)
      throw std::invalid_argument(
          "exact action needs factor orders 1, 2 or 4");
  if ((long)z.size() != rep.dim())
    throw std::invalid_argument("point dimension != representation");
  static const GaussianRational kI4[4] = {
      {1, 0}, {Rational(0), Rational(1)}, {-1, 0}, {Rational(0), Rational(-1)}};
  std::vector<GaussianRational> out(z.size());
  for (long i = 0; i < rep.dim(); ++i) {
    long e = 0;
    for (size_t t = 0; t < rep.orders.size(); ++t)
      e = (e + rep.weights[i][t] * g[t] % 4 * (4 / rep.orders[t])) % 4;
    out[i] = kI4[((e % 4) + 4) % 4] * z[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isotropy strata

Subgroup stabilizer_of_point(const AbelianRep& V,
                             const std::vector<GaussianRational>& z) {
  validate_rep(V);
  if ((long)z.size() != V.dim())
    throw std::invalid_argument("point dimension != representation");
  long L = lcm_of(V.orders);
  Subgroup out;
  for (const auto& g : all_elements(V.orders)) {
    bool fixes = true;
    for (long i = 0; i < V.dim() && fixes; ++i)
      if (!z[i].is_zero() && pairing(V.orders, V.weights[i], g, L) != 0)
        fixes = false;
    if (fixes) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GaussianRational> sample_z_point(const AbelianRep& V,
                                             const Subgroup& H) {
  validate_rep(V);
  static const long kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                 23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<GaussianRational> z(V.dim());
  long used = 0;
  for (long i = 0; i < V.dim(); ++i)
    if (character_trivial_on(V, i, H))
      z[i] = Rational(kPrimes[used++ % 16]);
  if (stabilizer_of_point(V, z) != H)
    throw EmptyStratum(
        "no point has exactly this stabilizer: the maximal fixed support "
        "is stabilized by a larger subgroup");
  return z;
}

// ---------------------------------------------------------------------------
// Direct sums

AbelianRep direct_sum(const AbelianRep& w1, const AbelianRep& w2) {
  validate_rep(w1);
  validate_rep(w2);
  if (w1.orders != w2.orders)
    throw std::invalid_argument("summands live over different groups");
  AbelianRep out = w1;
  out.weights.insert(out.weights.end(), w2.weights.begin(), w2.weights.end());
  return out;
}

EquivariantPolynomial phi_embed(const EquivariantPolynomial& f1,
                                const EquivariantPolynomial& f2, long w1_dim) {
  EquivariantPolynomial out;
  out.degree_cap = std::max(f1.degree_cap, f2.degree_cap);
  out.terms = f1.terms;
  for (PolyTerm t : f2.terms) {
    t.target += w1_dim;
    out.terms.push_back(std::move(t));
  }
  return out;
}

std::pair<EquivariantPolynomial, EquivariantPolynomial> psi_split(
    const EquivariantPolynomial& f, long w1_dim, long d1, long d2) {
  EquivariantPolynomial f1, f2;
  f1.degree_cap = d1;
  f2.degree_cap = d2;
  for (PolyTerm t : f.terms) {
    long cap = t.target < w1_dim ? d1 : d2;
    Monomial m{t.alpha, t.target};
    if (m.total_degree() > cap)
      throw std::invalid_argument(
          "polynomial does not respect the block degree caps");
    if (t.target < w1_dim) {
      f1.terms.push_back(std::move(t));
    } else {
      t.target -= w1_dim;
      f2.terms.push_back(std::move(t));
    }
  }
  return {std::move(f1), std::move(f2)};
}

// ---------------------------------------------------------------------------
// Dimension formula

DimensionFormulaReport check_dimension_formula(const AbelianRep& V,
                                               const AbelianRep& W,
                                               const Subgroup& H,
                                               long degree) {
  validate_rep(V);
  validate_rep(W);
  if (V.orders != W.orders)
    throw std::invalid_argument("source and target groups differ");

  DimensionFormulaReport rep;
  rep.degree = degree;

  std::vector<GaussianRational> z = sample_z_point(V, H);
  for (const auto& v : z)
    if (!v.is_zero()) ++rep.dim_v_fixed;

  std::vector<long> wfix;
  for (long j = 0; j < W.dim(); ++j)
    if (character_trivial_on(W, j, H)) wfix.push_back(j);
  rep.dim_w_fixed = (long)wfix.size();

  std::vector<Monomial> basis = poly_basis(V, W, degree);
  rep.dim_poly = (long)basis.size();
  rep.expected_dim = rep.dim_poly + rep.dim_v_fixed - rep.dim_w_fixed;

  // Incremental column elimination over Q(i), tracking the degree at which
  // the evaluation map first reaches full rank.
  std::vector<std::vector<GaussianRational>> echelon;  // reduced columns
  std::vector<long> pivot_row;
  for (const Monomial& m : basis) {
    GaussianRational value(Rational(1));
    for (size_t i = 0; i < m.alpha.size(); ++i)
      for (long p = 0; p < m.alpha[i]; ++p) value = value * z[i];

    long row = -1;
    for (size_t r = 0; r < wfix.size(); ++r)
      if (wfix[r] == m.target) row = (long)r;
    if (row < 0) {
      // equivariance forces monomials into non-fixed targets to vanish at
      // an H-fixed point
      if (!value.is_zero())
        throw std::logic_error("nonzero value outside the fixed subspace");
      continue;
    }

    std::vector<GaussianRational> col(wfix.size());
    col[row] = value;
    for (size_t k = 0; k < echelon.size(); ++k)
      if (!col[pivot_row[k]].is_zero()) {
        GaussianRational factor = col[pivot_row[k]];
        for (size_t r = 0; r < col.size(); ++r)
          col[r] = col[r] - factor * echelon[k][r];
      }
    long p = -1;
    for (size_t r = 0; r < col.size(); ++r)
      if (!col[r].is_zero()) {
        p = (long)r;
        break;
      }
    if (p < 0) continue;
    GaussianRational inv = inverse(col[p]);
    for (auto& c : col) c = inv * c;
    for (size_t k = 0; k < echelon.size(); ++k)
      if (!echelon[k][p].is_zero()) {
        GaussianRational factor = echelon[k][p];
        for (size_t r = 0; r < col.size(); ++r)
          echelon[k][r] = echelon[k][r] - factor * col[r];
      }
    echelon.push_back(std::move(col));
    pivot_row.push_back(p);
    if ((long)echelon.size() == rep.dim_w_fixed &&
        !rep.minimal_surjective_degree)
      rep.minimal_surjective_degree = m.total_degree();
  }
  rep.rank_ev = (long)echelon.size();
  rep.surjective = rep.rank_ev == rep.dim_w_fixed;
  if (rep.dim_w_fixed == 0 && !rep.minimal_surjective_degree)
    rep.minimal_surjective_degree = 0;
  return rep;
}

}  // namespace novalg
