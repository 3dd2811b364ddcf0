#include "otsig/radon_cdt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace otsig {

std::vector<double> uniform_angles(int k) {
  std::vector<double> angles(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) angles[i] = std::numbers::pi * i / k;
  return angles;
}

Signal1D uniform_reference(const Grid1D& grid) {
  return normalize(std::vector<double>(static_cast<size_t>(grid.n), 1.0), grid);
}

Sinogram radon(const Image2D& p, const std::vector<double>& angles,
               const Grid1D& offset_grid) {
  const Grid2D& g = p.grid();
  const double cx = 0.5 * (g.xmin + g.xmax);
  const double cy = 0.5 * (g.ymin + g.ymax);
  const double half_diag = 0.5 * std::hypot(g.xmax - g.xmin, g.ymax - g.ymin);
  const double ds = std::min(g.dx(), g.dy());
  const int ns = static_cast<int>(std::ceil(2.0 * half_diag / ds)) + 1;

  Sinogram out;
  out.angles = angles;
  out.offset_grid = offset_grid;
  out.projections.reserve(angles.size());

  for (double theta : angles) {
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> raw(static_cast<size_t>(offset_grid.n), 0.0);
    for (int i = 0; i < offset_grid.n; ++i) {
      double t = offset_grid.node(i);
      double acc = 0.0;
      for (int k = 0; k < ns; ++k) {
        double u = -half_diag + (2.0 * half_diag) * k / (ns - 1);
        double w = (k == 0 || k == ns - 1) ? 0.5 : 1.0;
        acc += w * p.sample(cx + t * c - u * s, cy + t * s + u * c);
      }
      raw[static_cast<size_t>(i)] = acc * (2.0 * half_diag) / (ns - 1);
    }
    double peak = *std::max_element(raw.begin(), raw.end());
    if (peak > 0.0 &&
        (raw.front() > 1e-6 * peak || raw.back() > 1e-6 * peak))
      throw Error(ErrorCode::SupportEscape,
                  "projected support reaches the offset-grid boundary");
    if (trapz(raw, offset_grid.dx()) < 0.95)
      throw Error(ErrorCode::SupportEscape,
                  "projection lost mass outside the offset range");
    out.projections.push_back(normalize(raw, offset_grid));
  }
  return out;
}

RcdtStack rcdt(const Image2D& p, const Signal1D& r1,
               const std::vector<double>& angles) {
  Sinogram sg = radon(p, angles, r1.grid());
  RcdtStack out;
  out.angles = angles;
  out.maps.reserve(angles.size());
  for (const Signal1D& proj : sg.projections)
    out.maps.push_back(cdt_forward(proj, r1));
  return out;
}

}  // namespace otsig
