#include "novalg/arnold.hpp"

namespace novalg {

namespace {

// Invariant factors of the direct sum of Z/|n_i|, via the cokernel of the
// diagonal matrix: canonical, divisibility-chained, units dropped.
std::vector<Int> normalize_torsion(const std::vector<Int>& factors) {
  if (factors.empty()) return {};
  long n = (long)factors.size();
  IntMatrix diag(n, n);
  for (long i = 0; i < n; ++i) diag.at(i, i) = abs(factors[i]);
  return cokernel(diag).torsion_int;
}

}  // namespace

std::map<long, CollapsedClassData> collapse(const GradedGroupData& data,
                                            long n_min) {
  if (n_min < 0)
    throw std::invalid_argument("minimal Chern number must be non-negative");
  long period = 2 * n_min;

  std::map<long, CollapsedClassData> out;
  for (long r = 0; r < period; ++r) out[r];
  for (const auto& [deg, d] : data.by_degree) {
    long r = period == 0 ? deg : ((deg % period) + period) % period;
    out[r].betti += d.betti;
    for (const Int& t : d.torsion) {
      if (t == 0)
        throw std::invalid_argument(
            "zero torsion entry in degree " + std::to_string(deg) +
            " (free summands belong in the betti number)");
      out[r].torsion.push_back(t);
    }
  }
  for (auto& [r, c] : out) c.torsion = normalize_torsion(c.torsion);
  return out;
}

long arnold_bound(const GradedGroupData& data, long n_min) {
  long bound = 0;
  for (const auto& [r, c] : collapse(data, n_min))
    bound += c.betti + 2 * c.tau();
  return bound;
}

BoundChainReport verify_bound_chain(const GradedLambdaComplex& cx,
                                    const GradedGroupData& reference,
                                    long n_min, long precision) {
  if (n_min <= 0)
    throw std::invalid_argument("minimal Chern number must be positive");
  if (cx.two_n != 2 * n_min)
    throw ShapeMismatch("complex grading period must equal 2 * n_min");

  BoundChainReport rep;
  rep.n_min = n_min;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  auto collapsed = collapse(reference, n_min);
  auto h = homology(cx, precision);
  std::map<long, KernelImage> ki;
  for (const auto& [r, dr] : cx.d) ki.emplace(r, kernel_image(dr, precision));

  for (long r = 0; r < cx.two_n; ++r) {
    const CollapsedClassData& ref = collapsed.at(r);
    BoundChainRow row;
    row.cls = r;
    row.cf = cx.rank_of(r);
    row.kernel = ki.at(r).kernel.cols;
    row.image_in = ki.at(cx.succ(r)).image.cols;
    row.betti = ref.betti;
    row.tau = ref.tau();
    rep.rows.push_back(row);
    rep.total_cf += row.cf;
    rep.bound += row.betti + 2 * row.tau;

    long image_out = ki.at(r).image.cols;
    if (row.cf != row.kernel + image_out)
      throw std::logic_error("rank-nullity violated by kernel_image");

    std::string cls = "class " + std::to_string(r) + ": ";
    const ModuleStructure& hr = h.at(r);
    if (hr.rank != ref.betti)
      fail(cls + "homology rank " + std::to_string(hr.rank) +
           " != reference " + std::to_string(ref.betti));
    bool torsion_match = hr.torsion_count() == (long)ref.torsion.size();
    if (torsion_match)
      for (size_t i = 0; i < ref.torsion.size(); ++i)
        if (hr.torsion_lambda[i] != NovikovSeries(ref.torsion[i]))
          torsion_match = false;
    if (!torsion_match)
      fail(cls + "torsion does not match the reference invariant factors");
    if (row.kernel < ref.betti + row.tau)
      fail(cls + "kernel of d smaller than betti + tau");
    if (row.image_in < row.tau)
      fail(cls + "image entering the class cannot carry the torsion");
  }

  if (rep.total_cf < rep.bound)
    fail("total generator count drops below the bound");
  if (!rep.ok) throw ChainBroken(rep);
  return rep;
}

}  // namespace novalg
