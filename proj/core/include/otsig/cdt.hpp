#pragma once

#include <vector>

#include "otsig/diffeo1d.hpp"
#include "otsig/signal.hpp"

namespace otsig {

// Sampled optimal transport map on the reference-support grid.
// values are nondecreasing (1e-10 per-step slack for quadrature noise).
class TransportMap1D {
 public:
  TransportMap1D(Grid1D reference_grid, std::vector<double> values);

  const Grid1D& reference_grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[i]; }
  int n() const { return grid_.n; }

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

// p-hat(x) = quantile(cdf(p), cdf(r)(x)) on the support of r.
// Throws BadReference if r vanishes in the interior of its support.
TransportMap1D cdt_forward(const Signal1D& p, const Signal1D& r);

// Reconstruct p from its map by depositing reference mass at T(x) with
// linear binning onto out_grid, then normalizing.
Signal1D cdt_inverse(const TransportMap1D& T, const Signal1D& r, const Grid1D& out_grid);

// p_h(x) = h'(x) * p(h(x)), sampled on p's grid and renormalized.
Signal1D apply_diffeo_1d(const Signal1D& p, const Diffeo1D& h);

// The composition property route: h^{-1} composed with T pointwise.
TransportMap1D composition_push(const Diffeo1D& h, const TransportMap1D& T);

// Wasserstein-2 via the transform embedding: || (p-hat - q-hat) sqrt(r) ||_L2.
double w2_distance(const Signal1D& p, const Signal1D& q, const Signal1D& r);

// sup_i |a_i - b_i| for maps on a shared grid.
double sup_gap(const TransportMap1D& a, const TransportMap1D& b);

}  // namespace otsig
