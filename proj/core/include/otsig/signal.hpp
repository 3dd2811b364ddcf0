#pragma once

#include <utility>
#include <vector>

#include "otsig/errors.hpp"

namespace otsig {

// Uniform 1D grid on [xmin, xmax] with n nodes.
struct Grid1D {
  double xmin = 0.0;
  double xmax = 1.0;
  int n = 2;

  Grid1D() = default;
  Grid1D(double xmin_, double xmax_, int n_);

  double dx() const { return (xmax - xmin) / (n - 1); }
  double node(int i) const { return xmin + dx() * i; }
  bool same_as(const Grid1D& o) const {
    return xmin == o.xmin && xmax == o.xmax && n == o.n;
  }
};

// Nonnegative density samples with unit trapezoidal mass.
class Signal1D {
 public:
  Signal1D(Grid1D grid, std::vector<double> values);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[i]; }
  int n() const { return grid_.n; }

  // Linear interpolation; zero outside the grid.
  double sample(double x) const;

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

struct Grid2D {
  double xmin = 0.0, xmax = 1.0;
  int nx = 2;
  double ymin = 0.0, ymax = 1.0;
  int ny = 2;

  Grid2D() = default;
  Grid2D(double xmin_, double xmax_, int nx_, double ymin_, double ymax_, int ny_);

  double dx() const { return (xmax - xmin) / (nx - 1); }
  double dy() const { return (ymax - ymin) / (ny - 1); }
  double xnode(int i) const { return xmin + dx() * i; }
  double ynode(int j) const { return ymin + dy() * j; }
  bool same_as(const Grid2D& o) const {
    return xmin == o.xmin && xmax == o.xmax && nx == o.nx && ymin == o.ymin &&
           ymax == o.ymax && ny == o.ny;
  }
};

// Row-major nx-by-ny density image with unit 2D trapezoidal mass.
class Image2D {
 public:
  Image2D(Grid2D grid, std::vector<double> values);

  const Grid2D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i, int j) const { return values_[static_cast<size_t>(i) * grid_.ny + j]; }

  // Bilinear interpolation; zero outside the grid.
  double sample(double x, double y) const;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

// Cumulative distribution samples; F nondecreasing with F[n-1] == 1.
struct CdfTable {
  Grid1D grid;
  std::vector<double> F;
};

// Scale a raw sample vector to unit trapezoidal mass.
// Throws AllZero / NegativeMass.
Signal1D normalize(const std::vector<double>& raw, const Grid1D& grid);

// Same for images (2D trapezoidal rule).
Image2D normalize_image(const std::vector<double>& raw, const Grid2D& grid);

// Cumulative trapezoidal rule; final value renormalized to exactly 1.
CdfTable cdf(const Signal1D& p);

// Generalized inverse sup{t : F(t) <= u}; right endpoint on flat runs.
// At u == 1 returns the left edge of the terminal plateau (support right end).
double quantile(const CdfTable& F, double u);

// Smallest closed interval of grid nodes with value > threshold.
std::pair<double, double> support_interval(const Signal1D& p, double threshold = 0.0);

// Quadrature helpers shared across modules.
double trapz(const std::vector<double>& y, double dx);
double trapz2d(const std::vector<double>& v, const Grid2D& g);
double l1_distance(const Signal1D& a, const Signal1D& b);

}  // namespace otsig
