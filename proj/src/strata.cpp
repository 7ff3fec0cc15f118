#include "novalg/strata.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace novalg {

// ---------------------------------------------------------------------------
// HomogeneousPoset

long HomogeneousPoset::idx(const std::string& a) const {
  auto it = index_.find(a);
  if (it == index_.end())
    throw std::invalid_argument("unknown poset element '" + a + "'");
  return it->second;
}

bool HomogeneousPoset::leq(const std::string& a, const std::string& b) const {
  return leq_[idx(a)][idx(b)];
}

long HomogeneousPoset::depth(const std::string& a) const {
  return depth_[idx(a)];
}

std::vector<std::string> HomogeneousPoset::faces(const std::string& a) const {
  std::vector<std::string> out;
  for (long f : faces_[idx(a)]) out.push_back(elems_[f]);
  return out;
}

std::string HomogeneousPoset::top_above(const std::string& a) const {
  return element_with_faces(a, {});
}

std::string HomogeneousPoset::element_with_faces(
    const std::string& a, const std::set<std::string>& N) const {
  long i = idx(a);
  std::set<long> want;
  for (const auto& f : N) {
    long fi = idx(f);
    if (std::find(faces_[i].begin(), faces_[i].end(), fi) == faces_[i].end())
      throw IncompatibleStrata("'" + f + "' is not a face of '" + a + "'");
    want.insert(fi);
  }
  long found = -1;
  for (long b = 0; b < (long)elems_.size(); ++b) {
    if (!leq_[i][b]) continue;
    if (std::set<long>(faces_[b].begin(), faces_[b].end()) != want) continue;
    if (found >= 0)
      throw IncompatibleStrata("face subset is realized twice above '" + a +
                               "'");
    found = b;
  }
  if (found < 0)
    throw IncompatibleStrata("face subset is not realized above '" + a + "'");
  return elems_[found];
}

HomogeneousPoset HomogeneousPoset::from_relations(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& less) {
  HomogeneousPoset p;
  p.elems_ = std::move(elements);
  long n = (long)p.elems_.size();
  for (long i = 0; i < n; ++i) {
    if (p.elems_[i].empty())
      throw std::invalid_argument("empty poset element label");
    if (!p.index_.emplace(p.elems_[i], i).second)
      throw std::invalid_argument("duplicate poset element '" + p.elems_[i] +
                                  "'");
  }

  p.leq_.assign(n, std::vector<bool>(n, false));
  for (long i = 0; i < n; ++i) p.leq_[i][i] = true;
  for (const auto& [a, b] : less) p.leq_[p.idx(a)][p.idx(b)] = true;
  for (long k = 0; k < n; ++k)
    for (long i = 0; i < n; ++i)
      if (p.leq_[i][k])
        for (long j = 0; j < n; ++j)
          if (p.leq_[k][j]) p.leq_[i][j] = true;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (i != j && p.leq_[i][j] && p.leq_[j][i])
        throw std::invalid_argument("relation has a cycle through '" +
                                    p.elems_[i] + "'");

  auto lt = [&p](long a, long b) { return a != b && p.leq_[a][b]; };

  // depth: process elements top-down (fewer strict successors first); every
  // cover of an element must report the same depth one step smaller.
  std::vector<long> above(n, 0);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (lt(i, j)) ++above[i];
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&above](long a, long b) { return above[a] < above[b]; });

  p.depth_.assign(n, -1);
  for (long i : order) {
    if (above[i] == 0) {
      p.depth_[i] = 0;
      continue;
    }
    long d = -1;
    for (long j = 0; j < n; ++j) {
      if (!lt(i, j)) continue;
      bool cover = true;
      for (long k = 0; k < n && cover; ++k)
        if (lt(i, k) && lt(k, j)) cover = false;
      if (!cover) continue;
      if (d == -1) d = p.depth_[j] + 1;
      if (p.depth_[j] + 1 != d)
        throw IncompatibleStrata("poset is not homogeneous at '" +
                                 p.elems_[i] + "'");
    }
    p.depth_[i] = d;
  }

  p.faces_.assign(n, {});
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j)
      if (p.leq_[i][j] && p.depth_[j] == 1) p.faces_[i].push_back(j);
    if ((long)p.faces_[i].size() != p.depth_[i])
      throw IncompatibleStrata("'" + p.elems_[i] + "' has " +
                               std::to_string(p.faces_[i].size()) +
                               " faces but depth " +
                               std::to_string(p.depth_[i]));
    if (p.depth_[i] > 25)
      throw std::invalid_argument("poset depth beyond supported range");
  }

  // Face-subset uniqueness: every subset of F(a) is the face set of exactly
  // one element above a.
  for (long i = 0; i < n; ++i) {
    std::map<std::set<long>, long> seen;
    for (long b = 0; b < n; ++b)
      if (p.leq_[i][b])
        ++seen[std::set<long>(p.faces_[b].begin(), p.faces_[b].end())];
    long d = p.depth_[i];
    for (long mask = 0; mask < (1L << d); ++mask) {
      std::set<long> sub;
      for (long t = 0; t < d; ++t)
        if (mask & (1L << t)) sub.insert(p.faces_[i][t]);
      auto it = seen.find(sub);
      if (it == seen.end() || it->second != 1)
        throw IncompatibleStrata(
            "face subsets above '" + p.elems_[i] +
            "' are not uniquely realized");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Standard families

namespace {

std::string mask_label_subset(long mask, long k) {
  std::string s = "{";
  bool first = true;
  for (long i = 1; i <= k; ++i)
    if (mask & (1L << (i - 1))) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
  return s + "}";
}

std::string mask_label_word(long mask, long k) {
  if (mask == 0) return "e";
  std::string s;
  for (long i = 1; i <= k; ++i)
    if (mask & (1L << (i - 1))) {
      if (!s.empty()) s += ".";
      s += std::to_string(i);
    }
  return s;
}

std::string mask_label_composition(long cutmask, long n) {
  std::string s = "(";
  long prev = 0;
  for (long c = 1; c <= n; ++c) {
    bool cut = c == n || (cutmask & (1L << (c - 1)));
    if (!cut) continue;
    if (prev != 0) s += ",";
    s += std::to_string(c - prev);
    prev = c;
  }
  return s + ")";
}

// All subsets of {1..k} with the given labeling, ordered by reverse
// inclusion (more elements = deeper).
HomogeneousPoset mask_poset(long k, std::string (*label)(long, long)) {
  if (k < 0 || k > 16)
    throw std::invalid_argument("supported size range is 0..16");
  std::vector<std::string> elems;
  for (long mask = 0; mask < (1L << k); ++mask)
    elems.push_back(label(mask, k));
  std::vector<std::pair<std::string, std::string>> less;
  for (long mask = 0; mask < (1L << k); ++mask)
    for (long b = 0; b < k; ++b)
      if (mask & (1L << b))
        less.push_back({label(mask, k), label(mask & ~(1L << b), k)});
  return HomogeneousPoset::from_relations(std::move(elems), less);
}

}  // namespace

HomogeneousPoset subset_poset(long k) {
  return mask_poset(k, mask_label_subset);
}

HomogeneousPoset enumerate_word_poset(long interior) {
  return mask_poset(interior, mask_label_word);
}

HomogeneousPoset composition_poset(long n) {
  if (n < 1) throw std::invalid_argument("compositions need n >= 1");
  return mask_poset(n - 1,
                    +[](long mask, long k) {
                      return mask_label_composition(mask, k + 1);
                    });
}

std::vector<std::pair<long, long>> boundary_factorization(
    long interior, const std::vector<long>& breaks) {
  std::vector<std::pair<long, long>> out;
  long prev = 0;
  for (long b : breaks) {
    if (b <= prev || b > interior)
      throw std::invalid_argument(
          "break levels must be strictly increasing inside the interior");
    out.push_back({prev, b});
    prev = b;
  }
  out.push_back({prev, interior + 1});
  return out;
}

std::vector<Rational> delta_map(const std::vector<Rational>& actions) {
  std::vector<Rational> out;
  for (size_t i = 0; i + 1 < actions.size(); ++i) {
    Rational d = actions[i + 1] - actions[i];
    if (d <= 0)
      throw NonPositiveEnergy("action step " + std::to_string(i) +
                              " is not positive");
    out.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

PosetProduct product(const HomogeneousPoset& p, const HomogeneousPoset& q) {
  PosetProduct out;
  std::vector<std::string> elems;
  for (const auto& a : p.elements())
    for (const auto& b : q.elements()) {
      elems.push_back(out.label(a, b));
      out.factors[out.label(a, b)] = {a, b};
    }
  std::vector<std::pair<std::string, std::string>> less;
  for (const auto& a : p.elements())
    for (const auto& b : q.elements())
      for (const auto& c : p.elements())
        for (const auto& d : q.elements())
          if (p.leq(a, c) && q.leq(b, d) && !(a == c && b == d))
            less.push_back({out.label(a, b), out.label(c, d)});
  out.poset = HomogeneousPoset::from_relations(std::move(elems), less);
  return out;
}

// ---------------------------------------------------------------------------
// Outer collars

StratifiedSet StratifiedSet::from_poset(HomogeneousPoset p,
                                        const Rational& width) {
  if (width <= 0)
    throw std::invalid_argument("collar width must be positive");
  StratifiedSet ss;
  ss.poset = std::move(p);
  ss.collar_width = width;
  return ss;
}

void validate_point(const StratifiedSet& ss, const CollaredPoint& p) {
  if (!ss.poset.contains(p.stratum))
    throw IncompatibleStrata("unknown stratum '" + p.stratum + "'");
  std::vector<std::string> fs = ss.poset.faces(p.stratum);
  if ((long)p.coords.size() != (long)fs.size())
    throw IncompatibleStrata("point must carry one coordinate per face of '" +
                             p.stratum + "'");
  for (const auto& f : fs) {
    auto it = p.coords.find(f);
    if (it == p.coords.end())
      throw IncompatibleStrata("missing coordinate for face '" + f + "'");
    if (it->second < -ss.collar_width || it->second > 0)
      throw CoordOutOfRange("coordinate of face '" + f +
                            "' leaves [-width, 0]");
  }
}

CollaredPoint outer_collar_representative(const StratifiedSet& ss,
                                          const CollaredPoint& p) {
  validate_point(ss, p);
  std::set<std::string> nonzero;
  for (const auto& [f, v] : p.coords)
    if (v != 0) nonzero.insert(f);
  CollaredPoint out;
  out.stratum = ss.poset.element_with_faces(p.stratum, nonzero);
  out.base = p.base;
  for (const auto& f : nonzero) out.coords[f] = p.coords.at(f);
  return out;
}

std::string collar_stratum_label(const StratifiedSet& ss,
                                 const CollaredPoint& p) {
  validate_point(ss, p);
  std::set<std::string> walls;
  for (const auto& [f, v] : p.coords)
    if (v == -ss.collar_width) walls.insert(f);
  return ss.poset.element_with_faces(p.stratum, walls);
}

StratifiedSet product(const StratifiedSet& x, const StratifiedSet& y) {
  if (x.collar_width != y.collar_width)
    throw IncompatibleStrata("collar widths differ");
  return StratifiedSet::from_poset(product(x.poset, y.poset).poset,
                                   x.collar_width);
}

CollaredPoint product_point(const StratifiedSet& x, const StratifiedSet& y,
                            const CollaredPoint& px, const CollaredPoint& py) {
  validate_point(x, px);
  validate_point(y, py);
  std::string top_x = x.poset.top_above(px.stratum);
  std::string top_y = y.poset.top_above(py.stratum);
  CollaredPoint out;
  out.stratum = px.stratum + "|" + py.stratum;
  out.base = px.base + "|" + py.base;
  for (const auto& [f, v] : px.coords) out.coords[f + "|" + top_y] = v;
  for (const auto& [g, v] : py.coords) out.coords[top_x + "|" + g] = v;
  return out;
}

OuterProductReport check_outer_product(const StratifiedSet& x,
                                       const StratifiedSet& y,
                                       const CollaredPoint& px,
                                       const CollaredPoint& py) {
  OuterProductReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  if (x.collar_width != y.collar_width) {
    fail("collar widths differ");
    return rep;
  }

  StratifiedSet pr = product(x, y);
  CollaredPoint P = product_point(x, y, px, py);
  validate_point(pr, P);

  CollaredPoint cx = outer_collar_representative(x, px);
  CollaredPoint cy = outer_collar_representative(y, py);
  CollaredPoint cP = outer_collar_representative(pr, P);
  CollaredPoint cpair = product_point(x, y, cx, cy);
  if (cP.stratum != cpair.stratum)
    fail("canonical stratum is not the pair of canonical strata");
  if (cP.coords != cpair.coords)
    fail("canonical coordinates do not match the paired canonicals");

  std::string lp = collar_stratum_label(pr, P);
  std::string lx = collar_stratum_label(x, px);
  std::string ly = collar_stratum_label(y, py);
  if (lp != lx + "|" + ly)
    fail("stratum label of the product is not the pair of labels");
  return rep;
}

CollaredPoint collar_extend_map(const StratifiedSet& src,
                                const StratifiedSet& tgt,
                                const StratifiedMap& m,
                                const CollaredPoint& p) {
  validate_point(src, p);
  if (src.collar_width != tgt.collar_width)
    throw IncompatibleStrata("collar widths differ");
  auto image_of = [&m](const std::string& a) {
    auto it = m.image.find(a);
    if (it == m.image.end())
      throw std::invalid_argument("map does not cover element '" + a + "'");
    return it->second;
  };

  std::string ia = image_of(p.stratum);
  if (!tgt.poset.contains(ia))
    throw std::invalid_argument("image element '" + ia + "' is not in the target");
  std::string itop = image_of(src.poset.top_above(p.stratum));
  std::vector<std::string> ftop = tgt.poset.faces(itop);
  std::set<std::string> blocked(ftop.begin(), ftop.end());
  std::vector<std::string> tfaces = tgt.poset.faces(ia);
  std::set<std::string> available(tfaces.begin(), tfaces.end());

  CollaredPoint out;
  out.stratum = ia;
  out.base = p.base;
  for (const auto& [b, v] : p.coords) {
    std::string corr;
    for (const auto& f : tgt.poset.faces(image_of(b)))
      if (!blocked.count(f)) {
        if (!corr.empty())
          throw IncompatibleStrata("face of '" + b +
                                   "' has several new images");
        corr = f;
      }
    if (corr.empty() || !available.count(corr))
      throw IncompatibleStrata("face of '" + b + "' has no new image face");
    if (out.coords.count(corr))
      throw IncompatibleStrata("two faces map to '" + corr + "'");
    out.coords[corr] = v;
  }
  for (const auto& f : tfaces)
    if (!out.coords.count(f)) out.coords[f] = 0;
  return out;
}

}  // namespace novalg
