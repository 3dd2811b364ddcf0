#pragma once

#include <vector>

#include "otsig/cdt.hpp"
#include "otsig/signal.hpp"

namespace otsig {

// Per-angle line-integral projections of an image onto a shared offset grid.
struct Sinogram {
  std::vector<double> angles;       // in [0, pi)
  Grid1D offset_grid;
  std::vector<Signal1D> projections;
};

// Per-angle 1D transforms against a shared reference.
struct RcdtStack {
  std::vector<double> angles;
  std::vector<TransportMap1D> maps;
};

// k angles uniform in [0, pi): theta_i = i*pi/k.
std::vector<double> uniform_angles(int k);

// Indicator of the grid interior rescaled to unit mass (the default 1D
// reference for projections).
Signal1D uniform_reference(const Grid1D& grid);

// Rotate-and-accumulate projection: for each angle, resample the image on a
// rotated grid by bilinear interpolation and integrate along rays; each
// projection renormalized. Throws SupportEscape when the rotated support
// does not fit the offset range.
Sinogram radon(const Image2D& p, const std::vector<double>& angles,
               const Grid1D& offset_grid);

// Projection at each angle transformed against r1 (sampled on r1's grid).
RcdtStack rcdt(const Image2D& p, const Signal1D& r1,
               const std::vector<double>& angles);

}  // namespace otsig
