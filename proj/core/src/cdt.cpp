#include "otsig/cdt.hpp"

#include <algorithm>
#include <cmath>

namespace otsig {

namespace {

// Node index range of supp(r).
std::pair<int, int> support_index_range(const Signal1D& r) {
  int i0 = -1, i1 = -1;
  for (int i = 0; i < r.n(); ++i) {
    if (r.value(i) > 0.0) {
      if (i0 < 0) i0 = i;
      i1 = i;
    }
  }
  if (i0 < 0) throw Error(ErrorCode::EmptySupport, "reference has no support");
  return {i0, i1};
}

}  // namespace

TransportMap1D::TransportMap1D(Grid1D reference_grid, std::vector<double> values)
    : grid_(reference_grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n)
    throw Error(ErrorCode::DimensionMismatch, "map value count does not match grid");
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::OutOfRange, "non-finite transport map value");
    if (i > 0 && values_[i] < values_[i - 1] - 1e-10)
      throw Error(ErrorCode::NotInvertible, "transport map decreases beyond slack");
  }
}

TransportMap1D cdt_forward(const Signal1D& p, const Signal1D& r) {
  auto [i0, i1] = support_index_range(r);
  if (i1 - i0 < 1)
    throw Error(ErrorCode::BadReference, "reference support is a single node");
  for (int i = i0 + 1; i < i1; ++i)
    if (!(r.value(i) > 0.0))
      throw Error(ErrorCode::BadReference, "reference vanishes inside its support");
  CdfTable Fr = cdf(r);
  CdfTable Fp = cdf(p);
  Grid1D ref_grid(r.grid().node(i0), r.grid().node(i1), i1 - i0 + 1);
  std::vector<double> T(static_cast<size_t>(ref_grid.n));
  for (int k = 0; k < ref_grid.n; ++k) {
    double u = std::clamp(Fr.F[static_cast<size_t>(i0 + k)], 0.0, 1.0);
    T[static_cast<size_t>(k)] = quantile(Fp, u);
  }
  return TransportMap1D(ref_grid, std::move(T));
}

Signal1D cdt_inverse(const TransportMap1D& T, const Signal1D& r, const Grid1D& out_grid) {
  if (T.value(T.n() - 1) - T.value(0) < 1e-14)
    throw Error(ErrorCode::DegenerateMap, "transport map is constant on supp(r)");
  const Grid1D& g = T.reference_grid();
  const double dx_out = out_grid.dx();
  std::vector<double> mass(static_cast<size_t>(out_grid.n), 0.0);

  auto deposit_point = [&](double y, double m) {
    double t = (y - out_grid.xmin) / dx_out;
    t = std::clamp(t, 0.0, static_cast<double>(out_grid.n - 1));
    int i = std::min(static_cast<int>(t), out_grid.n - 2);
    double f = t - i;
    mass[static_cast<size_t>(i)] += m * (1.0 - f);
    mass[static_cast<size_t>(i) + 1] += m * f;
  };
  // Spread mass m uniformly over [ya, yb] across node bins of width dx_out.
  auto deposit_segment = [&](double ya, double yb, double m) {
    if (yb - ya < 1e-12 * std::max(1.0, std::abs(ya))) {
      deposit_point(0.5 * (ya + yb), m);
      return;
    }
    double density = m / (yb - ya);
    double ta = (ya - out_grid.xmin) / dx_out;
    double tb = (yb - out_grid.xmin) / dx_out;
    int j0 = static_cast<int>(std::floor(ta + 0.5));
    int j1 = static_cast<int>(std::floor(tb + 0.5));
    for (int j = j0; j <= j1; ++j) {
      double bin_lo = (j - 0.5) * dx_out + out_grid.xmin;
      double bin_hi = bin_lo + dx_out;
      double overlap = std::min(yb, bin_hi) - std::max(ya, bin_lo);
      if (overlap <= 0.0) continue;
      int jc = std::clamp(j, 0, out_grid.n - 1);
      mass[static_cast<size_t>(jc)] += density * overlap;
    }
  };

  for (int i = 0; i + 1 < g.n; ++i) {
    double ra = r.sample(g.node(i));
    double rb = r.sample(g.node(i + 1));
    double m = 0.5 * (ra + rb) * g.dx();
    if (m <= 0.0) continue;
    deposit_segment(T.value(i), T.value(i + 1), m);
  }
  for (double& v : mass) v /= dx_out;
  return normalize(mass, out_grid);
}

Signal1D apply_diffeo_1d(const Signal1D& p, const Diffeo1D& h) {
  auto [s_lo, s_hi] = support_interval(p, 1e-12);
  if (h.bounded()) {
    if (h.eval(h.domain_lo()) > s_lo || h.eval(h.domain_hi()) < s_hi)
      throw Error(ErrorCode::DomainMismatch,
                  "validity interval of h does not cover the preimage of supp(p)");
  }
  const Grid1D& g = p.grid();
  std::vector<double> out(static_cast<size_t>(g.n), 0.0);
  double lo = h.domain_lo(), hi = h.domain_hi();
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    if (x < lo || x > hi) continue;
    out[static_cast<size_t>(i)] = h.derivative(x) * p.sample(h.eval(x));
  }
  double raw_mass = trapz(out, g.dx());
  if (raw_mass < 0.95)
    throw Error(ErrorCode::DomainMismatch, "support escaped the grid under h");
  return normalize(out, g);
}

TransportMap1D composition_push(const Diffeo1D& h, const TransportMap1D& T) {
  Diffeo1D hinv = inverse(h);
  double lo = hinv.domain_lo(), hi = hinv.domain_hi();
  std::vector<double> out(static_cast<size_t>(T.n()));
  for (int i = 0; i < T.n(); ++i) {
    double y = T.value(i);
    if (y < lo - 1e-9 || y > hi + 1e-9)
      throw Error(ErrorCode::DomainMismatch, "map value escapes the inverse domain");
    out[static_cast<size_t>(i)] = hinv.eval(std::clamp(y, lo, hi));
  }
  return TransportMap1D(T.reference_grid(), std::move(out));
}

double w2_distance(const Signal1D& p, const Signal1D& q, const Signal1D& r) {
  TransportMap1D ph = cdt_forward(p, r);
  TransportMap1D qh = cdt_forward(q, r);
  const Grid1D& g = ph.reference_grid();
  std::vector<double> integrand(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    double d = ph.value(i) - qh.value(i);
    integrand[static_cast<size_t>(i)] = d * d * r.sample(g.node(i));
  }
  return std::sqrt(trapz(integrand, g.dx()));
}

double sup_gap(const TransportMap1D& a, const TransportMap1D& b) {
  if (a.n() != b.n())
    throw Error(ErrorCode::DimensionMismatch, "maps have different node counts");
  double m = 0.0;
  for (int i = 0; i < a.n(); ++i) m = std::max(m, std::abs(a.value(i) - b.value(i)));
  return m;
}

}  // namespace otsig
