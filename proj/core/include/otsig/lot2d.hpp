#pragma once

#include "otsig/diffeo2d.hpp"
#include "otsig/ot_oracle.hpp"
#include "otsig/signal.hpp"

namespace otsig {

// Generative model in 2D: p_h(x) = |det J_h(x)| p(h(x)) on p's grid,
// renormalized. Throws MassLoss when most of the support escapes the grid.
Image2D apply_diffeo_2d(const Image2D& p, const Diffeo2D& h);

// Density with a known curl-free map pushing the reference onto it; the map
// doubles as the transform, so no transport solve is ever needed.
struct PrMember {
  Image2D density;
  Diffeo2D certificate;
  Grid2D ref_grid;        // reference grid the certificate is sampled on
  double residual = 0.0;  // L1 gap of |det J_h|(p∘h) against the reference
};

// Pushforward of r through h, p(y) = r(h⁻¹(y)) |det J_{h⁻¹}(y)|, on a padded
// bounding box of h(supp r) at r's resolution.
PrMember generate_pr_member(const Image2D& r, const Diffeo2D& h);

// The member's transform is its certificate sampled on the reference grid.
TransportMap2D lot_forward_pr(const PrMember& m);

// Transform of the deformed member p_g without recomputing transport:
// hr_compose(hr_inverse(g), certificate) sampled on the reference grid.
TransportMap2D lot_compose_pr(const PrMember& m, const Diffeo2D& g);

struct ViolationReport {
  double violation_gap = 0.0;  // mean displacement, direct vs composed path
  double control_gap = 0.0;    // same gap for the isotropic control map
  double ratio = 0.0;          // violation_gap / control_gap
};

// Two-path comparison for a linear deformation h(x) = Ax outside the
// isotropic-affine family, applied to the pushforward of a truncated
// Gaussian through x ↦ Mx. Both transforms come from the LP oracle on an
// n-by-n grid; the control run replaces A with 2·Id.
// Throws NotGradientMap for asymmetric A, NotInvertible unless A is
// positive definite.
ViolationReport composition_violation_demo(const Mat2& A, const Mat2& M, int n = 12);

}  // namespace otsig
