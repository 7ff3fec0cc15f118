#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "novalg/equipoly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

using namespace novalg;

namespace {

GaussianRational gi(long re, long im) {
  return {Rational(re), Rational(im)};
}

GaussianRational random_gauss(std::mt19937& rng) {
  auto part = [&]() {
    long num = (long)(rng() % 19) - 9;
    long den = 1 + (long)(rng() % 9);
    return Rational(num, den);
  };
  return {part(), part()};
}

PolyTerm term(std::vector<long> alpha, long target, GaussianRational c) {
  return PolyTerm{std::move(alpha), target, std::move(c)};
}

bool same_poly(const EquivariantPolynomial& a, const EquivariantPolynomial& b) {
  if (a.degree_cap != b.degree_cap || a.terms.size() != b.terms.size())
    return false;
  for (size_t k = 0; k < a.terms.size(); ++k)
    if (a.terms[k].alpha != b.terms[k].alpha ||
        a.terms[k].target != b.terms[k].target ||
        a.terms[k].coeff != b.terms[k].coeff)
      return false;
  return true;
}

// Exact division of integer polynomials by a monic divisor (ascending
// coefficients); throws when a remainder survives.
std::vector<long> divide_exact(std::vector<long> num,
                               const std::vector<long>& den) {
  long dd = (long)den.size() - 1;
  if (den[dd] != 1) throw std::logic_error("divisor is not monic");
  long dn = (long)num.size() - 1;
  std::vector<long> q(dn - dd + 1, 0);
  for (long k = dn - dd; k >= 0; --k) {
    long c = num[k + dd];
    q[k] = c;
    for (long j = 0; j <= dd; ++j) num[k + j] -= c * den[j];
  }
  for (long v : num)
    if (v != 0) throw std::logic_error("division left a remainder");
  return q;
}

const std::vector<long>& cyclotomic(long n) {
  static std::map<long, std::vector<long>> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<long> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (long d = 1; d < n; ++d)
    if (n % d == 0) poly = divide_exact(std::move(poly), cyclotomic(d));
  return memo.emplace(n, std::move(poly)).first->second;
}

// Independent membership test by character orthogonality: summing the
// character of (sum alpha.w_V - w_W(target)) over the whole group gives the
// group order when the character is trivial and zero otherwise. The sum of
// roots of unity is evaluated exactly by reducing the exponent histogram
// modulo the cyclotomic polynomial of the exponent lattice.
bool oracle_member(const AbelianRep& V, const AbelianRep& W,
                   const std::vector<long>& alpha, long target) {
  long L = 1;
  for (long m : V.orders) L = std::lcm(L, m);
  std::vector<long> delta(V.orders.size());
  for (size_t t = 0; t < V.orders.size(); ++t) {
    long m = V.orders[t];
    long s = -W.weights[target][t];
    for (long i = 0; i < V.dim(); ++i) s += alpha[i] * V.weights[i][t];
    delta[t] = ((s % m) + m) % m;
  }
  std::vector<GroupElement> everyone = all_elements(V.orders);
  std::vector<long> hist(L, 0);
  for (const auto& g : everyone) {
    long e = 0;
    for (size_t t = 0; t < V.orders.size(); ++t)
      e = (e + delta[t] * g[t] % L * (L / V.orders[t])) % L;
    ++hist[e];
  }
  const std::vector<long>& phi = cyclotomic(L);
  long dphi = (long)phi.size() - 1;
  for (long r = L - 1; r >= dphi; --r) {
    long c = hist[r];
    if (c == 0) continue;
    for (long j = 0; j <= dphi; ++j) hist[r - dphi + j] -= c * phi[j];
  }
  for (long r = 1; r < (long)hist.size(); ++r) REQUIRE(hist[r] == 0);
  long order = (long)everyone.size();
  REQUIRE((hist[0] == 0 || hist[0] == order));
  return hist[0] == order;
}

void for_each_alpha(long dim, long cap, std::vector<long>& alpha, long from,
                    const std::function<void(const std::vector<long>&)>& f) {
  if (from == dim) {
    f(alpha);
    return;
  }
  long used = 0;
  for (long i = 0; i < from; ++i) used += alpha[i];
  for (long a = 0; used + a <= cap; ++a) {
    alpha[from] = a;
    for_each_alpha(dim, cap, alpha, from + 1, f);
  }
  alpha[from] = 0;
}

long oracle_dim(const AbelianRep& V, const AbelianRep& W, long degree) {
  long count = 0;
  std::vector<long> alpha(V.dim(), 0);
  for_each_alpha(V.dim(), degree, alpha, 0, [&](const std::vector<long>& a) {
    for (long j = 0; j < W.dim(); ++j)
      if (oracle_member(V, W, a, j)) ++count;
  });
  return count;
}

AbelianRep random_rep(std::mt19937& rng, const std::vector<long>& orders,
                      long dim) {
  AbelianRep r;
  r.orders = orders;
  for (long i = 0; i < dim; ++i) {
    std::vector<long> w;
    for (size_t t = 0; t < orders.size(); ++t)
      w.push_back((long)(rng() % 13) - 6);
    r.weights.push_back(std::move(w));
  }
  return r;
}

}  // namespace

TEST_CASE("gaussian rational arithmetic is exact") {
  GaussianRational i = gi(0, 1);
  GaussianRational x{Rational(1, 2), Rational(-3)};
  CHECK(i * i == GaussianRational(Rational(-1)));
  CHECK(x + conj(x) == GaussianRational(Rational(1)));
  CHECK(x - x == GaussianRational());
  CHECK(x * inverse(x) == GaussianRational(Rational(1)));
  CHECK(inverse(i) == gi(0, -1));
  CHECK((gi(1, 1) * gi(1, -1)) == GaussianRational(Rational(2)));
  CHECK_THROWS_AS(inverse(GaussianRational()), std::domain_error);
  CHECK(to_string(i) == "1*i");
  CHECK(to_string(x) == "1/2 - 3*i");
  CHECK(to_string(GaussianRational(Rational(5))) == "5");
  GaussianRational five = 5;
  CHECK(five.re == 5);
  CHECK(five.im == 0);
  CHECK(five != i);
}

TEST_CASE("subgroups enumerate, generate and stay sorted") {
  CHECK(all_subgroups({4}).size() == 3);
  CHECK(all_subgroups({6}).size() == 4);
  CHECK(all_subgroups({2, 2}).size() == 5);
  CHECK(all_subgroups({2, 4}).size() == 8);

  for (const auto& H : all_subgroups({2, 4})) {
    CHECK(std::is_sorted(H.begin(), H.end()));
    for (const auto& a : H)
      for (const auto& b : H) {
        GroupElement s{(a[0] + b[0]) % 2, (a[1] + b[1]) % 4};
        CHECK(std::binary_search(H.begin(), H.end(), s));
      }
  }

  CHECK(trivial_subgroup({2, 4}) == Subgroup{{0, 0}});
  CHECK(full_group({2}).size() == 2);
  Subgroup everyone = full_group({2, 4});
  CHECK(everyone.size() == 8);
  CHECK(std::is_sorted(everyone.begin(), everyone.end()));
  CHECK(generated_subgroup({4}, {{2}}) == Subgroup{{0}, {2}});
  CHECK(generated_subgroup({6}, {{4}}) == Subgroup{{0}, {2}, {4}});
  CHECK(generated_subgroup({4}, {}) == trivial_subgroup({4}));
  CHECK_THROWS_AS(generated_subgroup({4}, {{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(all_elements({2048, 2048}), std::invalid_argument);
  CHECK_THROWS_AS(all_elements({0}), std::invalid_argument);

  AbelianRep rep{{2}, {{0}, {1}}};
  CHECK(character_trivial_on(rep, 0, full_group({2})));
  CHECK_FALSE(character_trivial_on(rep, 1, full_group({2})));
  CHECK(character_trivial_on(rep, 1, trivial_subgroup({2})));
}

TEST_CASE("weight rule selects the equivariant monomial basis") {
  // order three: v -> w of weights 1 -> 0 admits 1 and v^3 below degree 3
  AbelianRep V3{{3}, {{1}}};
  AbelianRep W3{{3}, {{0}}};
  CHECK(dim_poly(V3, W3, 3) == 2);
  std::vector<Monomial> b3 = poly_basis(V3, W3, 3);
  REQUIRE(b3.size() == 2);
  CHECK(b3[0].alpha == std::vector<long>{0});
  CHECK(b3[1].alpha == std::vector<long>{3});
  CHECK(b3[1].total_degree() == 3);

  // order two: weights 1 -> 1 admit v and v^3
  AbelianRep V2{{2}, {{1}}};
  AbelianRep W2{{2}, {{1}}};
  CHECK(dim_poly(V2, W2, 3) == 2);
  CHECK(is_equivariant_monomial(V2, W2, {1}, 0));
  CHECK_FALSE(is_equivariant_monomial(V2, W2, {2}, 0));

  // two factors: the only monomial onto weight (1,1) below degree 3 is v1*v2
  AbelianRep Vm{{2, 4}, {{1, 0}, {0, 1}}};
  AbelianRep Wm{{2, 4}, {{1, 1}}};
  std::vector<Monomial> bm = poly_basis(Vm, Wm, 3);
  REQUIRE(bm.size() == 1);
  CHECK(bm[0].alpha == std::vector<long>{1, 1});
  CHECK(bm[0].target == 0);
  CHECK(bm[0].total_degree() == 2);

  // ordering: degree first, then target
  AbelianRep Wt{{2}, {{1}, {0}}};
  std::vector<Monomial> bt = poly_basis(V2, Wt, 2);
  REQUIRE(bt.size() == 3);
  CHECK(bt[0].alpha == std::vector<long>{0});
  CHECK(bt[0].target == 1);
  CHECK(bt[1].alpha == std::vector<long>{1});
  CHECK(bt[1].target == 0);
  CHECK(bt[2].alpha == std::vector<long>{2});
  CHECK(bt[2].target == 1);
  for (size_t k = 1; k < bt.size(); ++k)
    CHECK(bt[k - 1].total_degree() <= bt[k].total_degree());

  CHECK_THROWS_AS(is_equivariant_monomial(V2, W2, {1, 1}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_equivariant_monomial(V2, W2, {1}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_equivariant_monomial(V2, W3, {1}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dim_poly(V2, W3, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate_rep(AbelianRep{{2}, {{1, 1}}}),
                  std::invalid_argument);

  EquivariantPolynomial good;
  good.degree_cap = 3;
  good.terms = {term({1}, 0, gi(2, 1)), term({3}, 0, gi(0, -1))};
  CHECK_NOTHROW(validate_poly(V2, W2, good));
  EquivariantPolynomial over = good;
  over.degree_cap = 2;
  CHECK_THROWS_AS(validate_poly(V2, W2, over), std::invalid_argument);
  EquivariantPolynomial skew;
  skew.degree_cap = 2;
  skew.terms = {term({2}, 0, gi(1, 0))};
  CHECK_THROWS_AS(validate_poly(V2, W2, skew), std::invalid_argument);
}

TEST_CASE("character sums agree with the monomial count") {
  AbelianRep V3{{3}, {{1}}};
  AbelianRep W3{{3}, {{0}}};
  CHECK(oracle_dim(V3, W3, 3) == 2);
  CHECK(oracle_dim(V3, W3, 3) == dim_poly(V3, W3, 3));

  AbelianRep Vm{{2, 4}, {{1, 0}, {0, 1}}};
  AbelianRep Wm{{2, 4}, {{1, 1}}};
  CHECK(oracle_dim(Vm, Wm, 3) == 1);
  CHECK(oracle_dim(Vm, Wm, 3) == dim_poly(Vm, Wm, 3));

  std::mt19937 rng(20260819u);
  for (int trial = 0; trial < 25; ++trial) {
    long factors = 1 + (long)(rng() % 2);
    std::vector<long> orders;
    for (long t = 0; t < factors; ++t) orders.push_back(1 + (long)(rng() % 6));
    AbelianRep V = random_rep(rng, orders, 1 + (long)(rng() % 3));
    AbelianRep W = random_rep(rng, orders, 1 + (long)(rng() % 3));
    long degree = (long)(rng() % 5);
    CHECK(dim_poly(V, W, degree) == oracle_dim(V, W, degree));
    std::vector<long> alpha(V.dim(), 0);
    for_each_alpha(V.dim(), degree, alpha, 0,
                   [&](const std::vector<long>& a) {
                     for (long j = 0; j < W.dim(); ++j)
                       CHECK(is_equivariant_monomial(V, W, a, j) ==
                             oracle_member(V, W, a, j));
                   });
  }
}

TEST_CASE("evaluation commutes with the coordinate action") {
  // weight one acts on the plane by quarter turns
  AbelianRep V{{4}, {{1}}};
  std::vector<GaussianRational> unit{GaussianRational(Rational(1))};
  CHECK(act(V, {0}, unit)[0] == gi(1, 0));
  CHECK(act(V, {1}, unit)[0] == gi(0, 1));
  CHECK(act(V, {2}, unit)[0] == gi(-1, 0));
  CHECK(act(V, {3}, unit)[0] == gi(0, -1));

  // squaring doubles the weight
  AbelianRep W{{4}, {{2}}};
  EquivariantPolynomial f;
  f.degree_cap = 2;
  f.terms = {term({2}, 0, gi(1, 1))};
  validate_poly(V, W, f);
  std::mt19937 rng(7);
  for (int k = 0; k < 10; ++k) {
    std::vector<GaussianRational> z{random_gauss(rng)};
    for (const auto& g : full_group({4}))
      CHECK(eval(f, 1, act(V, g, z)) == act(W, g, eval(f, 1, z)));
  }

  // a term off the weight rule breaks the identity
  EquivariantPolynomial bad;
  bad.degree_cap = 1;
  bad.terms = {term({1}, 0, gi(1, 0))};
  std::vector<GaussianRational> one{GaussianRational(Rational(1))};
  CHECK(eval(bad, 1, act(V, {1}, one)) != act(W, {1}, eval(bad, 1, one)));

  // product of the two sign coordinates is invariant under both flips
  AbelianRep Vk{{2, 2}, {{1, 0}, {0, 1}}};
  AbelianRep Wk{{2, 2}, {{1, 1}}};
  EquivariantPolynomial prod;
  prod.degree_cap = 2;
  prod.terms = {term({1, 1}, 0, gi(0, 1))};
  validate_poly(Vk, Wk, prod);
  for (int k = 0; k < 10; ++k) {
    std::vector<GaussianRational> z{random_gauss(rng), random_gauss(rng)};
    for (const auto& g : full_group({2, 2}))
      CHECK(eval(prod, 1, act(Vk, g, z)) == act(Wk, g, eval(prod, 1, z)));
  }

  // evaluation accumulates terms with a shared target
  EquivariantPolynomial two;
  two.degree_cap = 2;
  two.terms = {term({2}, 0, gi(1, 0)), term({1}, 0, gi(1, 0))};
  std::vector<GaussianRational> p{gi(1, 1)};
  CHECK(eval(two, 1, p)[0] == gi(1, 3));
  CHECK_THROWS_AS(eval(two, 1, {gi(1, 0), gi(1, 0)}), std::invalid_argument);
  EquivariantPolynomial stray;
  stray.degree_cap = 1;
  stray.terms = {term({1}, 3, gi(1, 0))};
  CHECK_THROWS_AS(eval(stray, 1, p), std::invalid_argument);

  CHECK_THROWS_AS(act(AbelianRep{{3}, {{1}}}, {1}, one),
                  std::invalid_argument);
  CHECK_THROWS_AS(act(V, {1}, {}), std::invalid_argument);

  // residue stabilizers match the fixed sets of the exact action
  AbelianRep Vs{{2, 4}, {{1, 0}, {0, 1}, {1, 2}}};
  std::vector<GaussianRational> zs{gi(5, 0), GaussianRational(), gi(7, 0)};
  Subgroup brute;
  for (const auto& g : all_elements({2, 4}))
    if (act(Vs, g, zs) == zs) brute.push_back(g);
  std::sort(brute.begin(), brute.end());
  CHECK(stabilizer_of_point(Vs, zs) == brute);
  CHECK(stabilizer_of_point(Vs, zs) == Subgroup{{0, 0}, {0, 2}});
  CHECK_THROWS_AS(stabilizer_of_point(Vs, {gi(1, 0)}), std::invalid_argument);
}

TEST_CASE("sample points realize exactly the requested stabilizer") {
  // weight two sees only the half subgroup, so its stratum is the axis
  AbelianRep V{{4}, {{2}}};
  Subgroup half = generated_subgroup({4}, {{2}});
  std::vector<GaussianRational> z = sample_z_point(V, half);
  CHECK(z == std::vector<GaussianRational>{GaussianRational(Rational(2))});
  CHECK(stabilizer_of_point(V, z) == half);
  // nothing in this representation has trivial stabilizer
  CHECK_THROWS_AS(sample_z_point(V, trivial_subgroup({4})), EmptyStratum);

  // the origin carries the full group
  AbelianRep V2{{2}, {{1}}};
  std::vector<GaussianRational> zero = sample_z_point(V2, full_group({2}));
  CHECK(zero[0].is_zero());
  std::vector<GaussianRational> free = sample_z_point(V2,
                                                      trivial_subgroup({2}));
  CHECK(free[0] == GaussianRational(Rational(2)));

  // two factors: distinct primes land on the fixed support in order
  AbelianRep Vs{{2, 4}, {{1, 0}, {0, 1}, {1, 2}}};
  Subgroup h = generated_subgroup({2, 4}, {{0, 2}});
  std::vector<GaussianRational> zs = sample_z_point(Vs, h);
  CHECK(zs[0] == GaussianRational(Rational(2)));
  CHECK(zs[1].is_zero());
  CHECK(zs[2] == GaussianRational(Rational(3)));
  CHECK(stabilizer_of_point(Vs, zs) == h);
  // the diagonal subgroup moves every coordinate, so only zero remains
  Subgroup diag = generated_subgroup({2, 4}, {{1, 2}});
  CHECK_THROWS_AS(sample_z_point(Vs, diag), EmptyStratum);
}

TEST_CASE("direct sums glue and split without loss") {
  AbelianRep V{{2}, {{1}}};
  AbelianRep W1{{2}, {{0}}};
  AbelianRep W2{{2}, {{1}, {0}}};
  AbelianRep W = direct_sum(W1, W2);
  CHECK(W.dim() == 3);
  CHECK(W.weights[1] == std::vector<long>{1});
  CHECK_THROWS_AS(direct_sum(W1, AbelianRep{{4}, {{0}}}),
                  std::invalid_argument);

  EquivariantPolynomial f1;
  f1.degree_cap = 2;
  f1.terms = {term({2}, 0, gi(2, 0))};
  validate_poly(V, W1, f1);
  EquivariantPolynomial f2;
  f2.degree_cap = 3;
  f2.terms = {term({1}, 0, gi(0, 1)), term({3}, 0, gi(1, 0)),
              term({2}, 1, gi(5, 0))};
  validate_poly(V, W2, f2);

  EquivariantPolynomial glued = phi_embed(f1, f2, W1.dim());
  CHECK(glued.degree_cap == 3);
  CHECK_NOTHROW(validate_poly(V, W, glued));

  std::mt19937 rng(11);
  for (int k = 0; k < 10; ++k) {
    std::vector<GaussianRational> z{random_gauss(rng)};
    std::vector<GaussianRational> whole = eval(glued, W.dim(), z);
    std::vector<GaussianRational> left = eval(f1, W1.dim(), z);
    std::vector<GaussianRational> right = eval(f2, W2.dim(), z);
    REQUIRE(whole.size() == 3);
    CHECK(whole[0] == left[0]);
    CHECK(whole[1] == right[0]);
    CHECK(whole[2] == right[1]);
  }

  auto split = psi_split(glued, W1.dim(), f1.degree_cap, f2.degree_cap);
  CHECK(same_poly(split.first, f1));
  CHECK(same_poly(split.second, f2));
  // a block cap below the degree of a landed term is rejected
  CHECK_THROWS_AS(psi_split(glued, W1.dim(), 1, 3), std::invalid_argument);
}

TEST_CASE("the dimension formula report certifies surjectivity") {
  // order two, free stratum: rank one is reached already at degree one
  AbelianRep V{{2}, {{1}}};
  AbelianRep W{{2}, {{1}}};
  DimensionFormulaReport rep =
      check_dimension_formula(V, W, trivial_subgroup({2}), 3);
  CHECK(rep.degree == 3);
  CHECK(rep.dim_poly == 2);
  CHECK(rep.dim_v_fixed == 1);
  CHECK(rep.dim_w_fixed == 1);
  CHECK(rep.rank_ev == 1);
  CHECK(rep.surjective);
  REQUIRE(rep.minimal_surjective_degree.has_value());
  CHECK(*rep.minimal_surjective_degree == 1);
  CHECK(rep.expected_dim == 2);

  // full stabilizer: the fixed target is zero dimensional
  DimensionFormulaReport repf =
      check_dimension_formula(V, W, full_group({2}), 3);
  CHECK(repf.dim_poly == 2);
  CHECK(repf.dim_v_fixed == 0);
  CHECK(repf.dim_w_fixed == 0);
  CHECK(repf.rank_ev == 0);
  CHECK(repf.surjective);
  REQUIRE(repf.minimal_surjective_degree.has_value());
  CHECK(*repf.minimal_surjective_degree == 0);
  CHECK(repf.expected_dim == 2);

  // order four at the half subgroup: the degree-one monomial carries the rank
  AbelianRep V4{{4}, {{1}, {2}}};
  AbelianRep W4{{4}, {{2}}};
  Subgroup half = generated_subgroup({4}, {{2}});
  DimensionFormulaReport rep4 = check_dimension_formula(V4, W4, half, 2);
  CHECK(rep4.dim_poly == 2);
  CHECK(rep4.dim_v_fixed == 1);
  CHECK(rep4.dim_w_fixed == 1);
  CHECK(rep4.rank_ev == 1);
  CHECK(rep4.surjective);
  REQUIRE(rep4.minimal_surjective_degree.has_value());
  CHECK(*rep4.minimal_surjective_degree == 1);
  CHECK(rep4.expected_dim == 2);

  // order eight: weight 2 -> 6 needs the cube, so degree two fails
  AbelianRep V8{{8}, {{2}}};
  AbelianRep W8{{8}, {{6}}};
  Subgroup half8 = generated_subgroup({8}, {{4}});
  DimensionFormulaReport low = check_dimension_formula(V8, W8, half8, 2);
  CHECK(low.dim_poly == 0);
  CHECK(low.dim_v_fixed == 1);
  CHECK(low.dim_w_fixed == 1);
  CHECK(low.rank_ev == 0);
  CHECK_FALSE(low.surjective);
  CHECK_FALSE(low.minimal_surjective_degree.has_value());
  CHECK(low.expected_dim == 0);

  DimensionFormulaReport high = check_dimension_formula(V8, W8, half8, 3);
  CHECK(high.dim_poly == 1);
  CHECK(high.rank_ev == 1);
  CHECK(high.surjective);
  REQUIRE(high.minimal_surjective_degree.has_value());
  CHECK(*high.minimal_surjective_degree == 3);
  CHECK(high.expected_dim == 1);

  // strata without points and mismatched groups propagate as errors
  AbelianRep Veven{{4}, {{2}}};
  CHECK_THROWS_AS(
      check_dimension_formula(Veven, W4, trivial_subgroup({4}), 2),
      EmptyStratum);
  CHECK_THROWS_AS(check_dimension_formula(V, W4, trivial_subgroup({2}), 2),
                  std::invalid_argument);
}
