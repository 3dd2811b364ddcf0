#pragma once

#include <vector>

#include "otsig/diffeo2d.hpp"
#include "otsig/signal.hpp"

namespace otsig {

struct WeightedPoint {
  Vec2 pos;
  double mass = 0.0;
};

// Discrete Kantorovich coupling between two weighted point clouds, with the
// dual potentials that certify optimality.
struct CouplingPlan {
  std::vector<WeightedPoint> source;
  std::vector<WeightedPoint> target;
  std::vector<double> plan;  // dense |source| x |target|, row-major
  std::vector<double> u;     // source potentials
  std::vector<double> v;     // target potentials
  double cost = 0.0;
  Grid2D source_grid;        // grid the source cloud was extracted from

  double entry(size_t i, size_t j) const { return plan[i * target.size() + j]; }
};

// 1D W2 via the quantile integral (midpoint rule over m nodes). Uses its own
// CDF inversion so it stays independent of the transform implementation.
double w2_quantile_oracle(const Signal1D& p, const Signal1D& q, int m);

// Exact optimal coupling for squared-Euclidean cost (successive shortest
// augmenting paths with potentials). Verification-scale only: throws TooLarge
// above max_points (hard cap 400) positive-mass cells per side.
CouplingPlan kantorovich_lp_2d(const Image2D& source, const Image2D& target, int max_points);

// Trapezoid-weighted positive-mass cells of an image as a unit-mass cloud.
std::vector<WeightedPoint> cloud_from_image(const Image2D& img);

// Same solver on prebuilt clouds. Useful when the target measure is an exact
// pushforward of a grid measure, so no resampling error enters the coupling.
CouplingPlan kantorovich_lp_clouds(std::vector<WeightedPoint> source,
                                   std::vector<WeightedPoint> target,
                                   const Grid2D& source_grid, int max_points);

// Worst dual-feasibility violation max(0, (v_j - u_i) - c_ij) plus the worst
// complementary-slackness residual on support cells.
double lp_optimality_residual(const CouplingPlan& plan);

// Sampled 2D map on a grid; cells without mass carry valid = false.
struct TransportMap2D {
  Grid2D grid;
  std::vector<Vec2> values;            // row-major nx*ny
  std::vector<unsigned char> valid;

  Vec2 value(int i, int j) const { return values[static_cast<size_t>(i) * grid.ny + j]; }
  bool is_valid(int i, int j) const { return valid[static_cast<size_t>(i) * grid.ny + j] != 0; }
};

// Mass-weighted average of each source point's targets, on the source grid.
TransportMap2D barycentric_map(const CouplingPlan& plan);

// Mass-weighted mean Euclidean distance between two maps on the same grid,
// counting only cells valid in both and weighting by the given image.
double mean_displacement(const TransportMap2D& a, const TransportMap2D& b,
                         const Image2D& weights);

}  // namespace otsig
