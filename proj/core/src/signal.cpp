#include "otsig/signal.hpp"

#include <algorithm>
#include <cmath>

namespace otsig {

Grid1D::Grid1D(double xmin_, double xmax_, int n_) : xmin(xmin_), xmax(xmax_), n(n_) {
  if (!(xmin < xmax)) throw Error(ErrorCode::OutOfRange, "grid requires xmin < xmax");
  if (n < 2) throw Error(ErrorCode::OutOfRange, "grid requires n >= 2");
}

Grid2D::Grid2D(double xmin_, double xmax_, int nx_, double ymin_, double ymax_, int ny_)
    : xmin(xmin_), xmax(xmax_), nx(nx_), ymin(ymin_), ymax(ymax_), ny(ny_) {
  if (!(xmin < xmax) || !(ymin < ymax))
    throw Error(ErrorCode::OutOfRange, "grid2d requires xmin < xmax and ymin < ymax");
  if (nx < 2 || ny < 2) throw Error(ErrorCode::OutOfRange, "grid2d requires nx, ny >= 2");
}

double trapz(const std::vector<double>& y, double dx) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < y.size(); ++i) s += 0.5 * (y[i] + y[i + 1]);
  return s * dx;
}

double trapz2d(const std::vector<double>& v, const Grid2D& g) {
  // Trapezoid weights are 1 inside, 1/2 on edges, 1/4 at corners.
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.ny; ++j) {
      double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      s += wx * wy * v[static_cast<size_t>(i) * g.ny + j];
    }
  }
  return s * g.dx() * g.dy();
}

Signal1D::Signal1D(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n)
    throw Error(ErrorCode::DimensionMismatch, "value count does not match grid");
  for (double v : values_)
    if (v < 0.0) throw Error(ErrorCode::NegativeMass, "negative density sample");
  double m = trapz(values_, grid_.dx());
  if (std::abs(m - 1.0) > 1e-9)
    throw Error(ErrorCode::OutOfRange, "signal mass differs from 1 by more than 1e-9");
}

double Signal1D::sample(double x) const {
  double t = (x - grid_.xmin) / grid_.dx();
  if (t < 0.0 || t > grid_.n - 1) return 0.0;
  int i = std::min(static_cast<int>(t), grid_.n - 2);
  double f = t - i;
  return values_[i] * (1.0 - f) + values_[i + 1] * f;
}

Image2D::Image2D(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<size_t>(grid_.nx) * grid_.ny)
    throw Error(ErrorCode::DimensionMismatch, "value count does not match grid2d");
  for (double v : values_)
    if (v < 0.0) throw Error(ErrorCode::NegativeMass, "negative density sample");
  double m = trapz2d(values_, grid_);
  if (std::abs(m - 1.0) > 1e-8)
    throw Error(ErrorCode::OutOfRange, "image mass differs from 1 by more than 1e-8");
}

double Image2D::sample(double x, double y) const {
  double tx = (x - grid_.xmin) / grid_.dx();
  double ty = (y - grid_.ymin) / grid_.dy();
  if (tx < 0.0 || tx > grid_.nx - 1 || ty < 0.0 || ty > grid_.ny - 1) return 0.0;
  int i = std::min(static_cast<int>(tx), grid_.nx - 2);
  int j = std::min(static_cast<int>(ty), grid_.ny - 2);
  double fx = tx - i, fy = ty - j;
  return value(i, j) * (1 - fx) * (1 - fy) + value(i + 1, j) * fx * (1 - fy) +
         value(i, j + 1) * (1 - fx) * fy + value(i + 1, j + 1) * fx * fy;
}

Signal1D normalize(const std::vector<double>& raw, const Grid1D& grid) {
  bool any_positive = false;
  for (double v : raw) {
    if (v < 0.0) throw Error(ErrorCode::NegativeMass, "negative entry in raw signal");
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw Error(ErrorCode::AllZero, "raw signal is identically zero");
  double m = trapz(raw, grid.dx());
  // Skip rescaling when the mass is already exact so serialized signals
  // survive a read/write cycle bit for bit.
  if (std::abs(m - 1.0) <= 1e-12) return Signal1D(grid, raw);
  std::vector<double> scaled(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) scaled[i] = raw[i] / m;
  return Signal1D(grid, std::move(scaled));
}

Image2D normalize_image(const std::vector<double>& raw, const Grid2D& grid) {
  bool any_positive = false;
  for (double v : raw) {
    if (v < 0.0) throw Error(ErrorCode::NegativeMass, "negative entry in raw image");
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw Error(ErrorCode::AllZero, "raw image is identically zero");
  double m = trapz2d(raw, grid);
  if (std::abs(m - 1.0) <= 1e-12) return Image2D(grid, raw);
  std::vector<double> scaled(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) scaled[i] = raw[i] / m;
  return Image2D(grid, std::move(scaled));
}

CdfTable cdf(const Signal1D& p) {
  const auto& v = p.values();
  std::vector<double> F(v.size());
  F[0] = 0.0;
  double dx = p.grid().dx();
  for (size_t i = 1; i < v.size(); ++i)
    F[i] = F[i - 1] + 0.5 * (v[i - 1] + v[i]) * dx;
  double total = F.back();
  for (double& f : F) f /= total;  // absorb quadrature drift
  F.back() = 1.0;
  return CdfTable{p.grid(), std::move(F)};
}

double quantile(const CdfTable& tbl, double u) {
  if (u < 0.0 || u > 1.0) throw Error(ErrorCode::OutOfRange, "quantile argument not in [0,1]");
  const auto& F = tbl.F;
  const int n = static_cast<int>(F.size());
  if (u >= 1.0) {
    // Left edge of the terminal plateau: first crossing of level 1.
    int j = 0;
    while (j < n && F[j] < 1.0) ++j;
    if (j == 0) return tbl.grid.node(0);
    if (F[j] > F[j - 1]) {
      double f = (1.0 - F[j - 1]) / (F[j] - F[j - 1]);
      return tbl.grid.node(j - 1) + f * tbl.grid.dx();
    }
    return tbl.grid.node(j);
  }
  // Largest index with F[i] <= u; lands on the right end of any flat run,
  // realizing the sup convention.
  int lo = 0, hi = n - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (F[mid] <= u)
      lo = mid;
    else
      hi = mid - 1;
  }
  int i = lo;
  if (i >= n - 1) return tbl.grid.node(n - 1);
  // F[i+1] > u >= F[i] here, so the segment is strictly increasing.
  double f = (u - F[i]) / (F[i + 1] - F[i]);
  return tbl.grid.node(i) + f * tbl.grid.dx();
}

std::pair<double, double> support_interval(const Signal1D& p, double threshold) {
  if (threshold < 0.0) throw Error(ErrorCode::OutOfRange, "support threshold must be >= 0");
  int first = -1, last = -1;
  for (int i = 0; i < p.n(); ++i) {
    if (p.value(i) > threshold) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) throw Error(ErrorCode::EmptySupport, "no node exceeds the threshold");
  return {p.grid().node(first), p.grid().node(last)};
}

double l1_distance(const Signal1D& a, const Signal1D& b) {
  if (!a.grid().same_as(b.grid()))
    throw Error(ErrorCode::DimensionMismatch, "l1_distance requires a shared grid");
  std::vector<double> d(a.values().size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = std::abs(a.values()[i] - b.values()[i]);
  return trapz(d, a.grid().dx());
}

}  // namespace otsig
