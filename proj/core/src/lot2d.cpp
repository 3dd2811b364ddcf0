#include "otsig/lot2d.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "otsig/rng.hpp"

namespace otsig {

namespace {

TransportMap2D sample_diffeo(const Diffeo2D& h, const Grid2D& grid) {
  TransportMap2D out;
  out.grid = grid;
  out.values.assign(static_cast<size_t>(grid.nx) * grid.ny, Vec2{});
  out.valid.assign(out.values.size(), 0);
  for (int i = 0; i < grid.nx; ++i) {
    double x = grid.xnode(i);
    for (int j = 0; j < grid.ny; ++j) {
      double y = grid.ynode(j);
      size_t k = static_cast<size_t>(i) * grid.ny + j;
      if (!h.in_domain(x, y)) continue;
      out.values[k] = h.eval(x, y);
      out.valid[k] = 1;
    }
  }
  return out;
}

void require_gradient_spd(const Mat2& A, const char* what) {
  double scale = std::max({std::abs(A.a11), std::abs(A.a12), std::abs(A.a21),
                           std::abs(A.a22), 1.0});
  if (std::abs(A.a12 - A.a21) > 1e-12 * scale)
    throw Error(ErrorCode::NotGradientMap,
                std::string(what) + ": asymmetric linear map is not a gradient");
  if (A.a11 <= 0.0 || A.det() <= 0.0)
    throw Error(ErrorCode::NotInvertible,
                std::string(what) + ": matrix is not positive definite");
}

// Pushforward of src through x -> Mx onto a padded image of src's box.
Image2D linear_pushforward(const Image2D& src, const Mat2& M) {
  const Grid2D& g = src.grid();
  Mat2 Minv = mat_inverse(M);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  const double cx[2] = {g.xmin, g.xmax};
  const double cy[2] = {g.ymin, g.ymax};
  for (double x : cx)
    for (double y : cy) {
      Vec2 v = mat_apply(M, {x, y});
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
  double px = 0.05 * (xmax - xmin), py = 0.05 * (ymax - ymin);
  Grid2D go{xmin - px, xmax + px, g.nx, ymin - py, ymax + py, g.ny};
  std::vector<double> raw(static_cast<size_t>(go.nx) * go.ny, 0.0);
  double adet = std::abs(Minv.det());
  for (int i = 0; i < go.nx; ++i)
    for (int j = 0; j < go.ny; ++j) {
      Vec2 z = mat_apply(Minv, {go.xnode(i), go.ynode(j)});
      raw[static_cast<size_t>(i) * go.ny + j] = adet * src.sample(z.x, z.y);
    }
  if (trapz2d(raw, go) < 0.95)
    throw Error(ErrorCode::MassLoss, "linear pushforward lost mass");
  return normalize_image(raw, go);
}

}  // namespace

Image2D apply_diffeo_2d(const Image2D& p, const Diffeo2D& h) {
  const Grid2D& g = p.grid();
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    double x = g.xnode(i);
    for (int j = 0; j < g.ny; ++j) {
      double y = g.ynode(j);
      if (!h.in_domain(x, y)) continue;
      Vec2 v = h.eval(x, y);
      double d = std::abs(h.jacobian(x, y).det());
      raw[static_cast<size_t>(i) * g.ny + j] = d * p.sample(v.x, v.y);
    }
  }
  double mass = trapz2d(raw, g);
  if (mass < 0.95)
    throw Error(ErrorCode::MassLoss,
                "deformed density keeps only " + std::to_string(mass) +
                    " of its mass on the grid");
  return normalize_image(raw, g);
}

PrMember generate_pr_member(const Image2D& r, const Diffeo2D& h) {
  const Grid2D& g = r.grid();
  Diffeo2D hinv = hr_inverse(h);

  // Bounding box of the forward image of the grid boundary. Hr maps are
  // monotone in the rotated coordinates, so the boundary carries the extremes.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  bool any = false;
  auto take = [&](double x, double y) {
    if (!h.in_domain(x, y)) return;
    Vec2 v = h.eval(x, y);
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
    any = true;
  };
  for (int i = 0; i < g.nx; ++i) {
    take(g.xnode(i), g.ymin);
    take(g.xnode(i), g.ymax);
  }
  for (int j = 0; j < g.ny; ++j) {
    take(g.xmin, g.ynode(j));
    take(g.xmax, g.ynode(j));
  }
  if (!any)
    throw Error(ErrorCode::NotInvertible,
                "map is undefined on the whole reference boundary");
  // The box already contains h(grid), so no padding: the identity map then
  // reproduces the reference grid exactly.
  Grid2D go{xmin, xmax, g.nx, ymin, ymax, g.ny};

  std::vector<double> raw(static_cast<size_t>(go.nx) * go.ny, 0.0);
  for (int i = 0; i < go.nx; ++i) {
    double x = go.xnode(i);
    for (int j = 0; j < go.ny; ++j) {
      double y = go.ynode(j);
      if (!hinv.in_domain(x, y)) continue;
      Vec2 z = hinv.eval(x, y);
      double d = std::abs(hinv.jacobian(x, y).det());
      raw[static_cast<size_t>(i) * go.ny + j] = d * r.sample(z.x, z.y);
    }
  }
  if (trapz2d(raw, go) < 0.95)
    throw Error(ErrorCode::MassLoss, "pushforward escaped the working box");
  PrMember m{normalize_image(raw, go), h, g, 0.0};

  // Certificate consistency: |det J_h|(p∘h) should reconstruct r.
  std::vector<double> diff(static_cast<size_t>(g.nx) * g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    double x = g.xnode(i);
    for (int j = 0; j < g.ny; ++j) {
      double y = g.ynode(j);
      double back = 0.0;
      if (h.in_domain(x, y)) {
        Vec2 v = h.eval(x, y);
        back = std::abs(h.jacobian(x, y).det()) * m.density.sample(v.x, v.y);
      }
      diff[static_cast<size_t>(i) * g.ny + j] = std::abs(back - r.value(i, j));
    }
  }
  m.residual = trapz2d(diff, g);
  return m;
}

TransportMap2D lot_forward_pr(const PrMember& m) {
  return sample_diffeo(m.certificate, m.ref_grid);
}

TransportMap2D lot_compose_pr(const PrMember& m, const Diffeo2D& g) {
  return sample_diffeo(hr_compose(hr_inverse(g), m.certificate), m.ref_grid);
}

ViolationReport composition_violation_demo(const Mat2& A, const Mat2& M, int n) {
  require_gradient_spd(A, "deformation");
  require_gradient_spd(M, "density potential");

  Grid2D gr{-1.0, 1.0, n, -1.0, 1.0, n};
  std::vector<double> raw(static_cast<size_t>(n) * n, 0.0);
  // Off-center, anisotropic reference: symmetric setups create cost ties in
  // the discrete coupling, and different optimal vertices would masquerade as
  // a composition gap in the isotropic control.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = (gr.xnode(i) - 0.11) / 0.43, y = (gr.ynode(j) + 0.07) / 0.37;
      raw[static_cast<size_t>(i) * n + j] = std::exp(-0.5 * (x * x + y * y));
    }
  Image2D r = normalize_image(raw, gr);

  Image2D p = linear_pushforward(r, M);

  // Grid clouds make the coupling LP degenerate (whole faces of optimal
  // plans); a tiny deterministic jitter pins a unique optimum so the control
  // case reproduces the same plan on both paths.
  auto src = cloud_from_image(r);
  auto tgt = cloud_from_image(p);
  Rng jrng(0x636f6d706f7365ull);
  for (auto& w : src) {
    w.pos.x += jrng.uniform(-1e-6, 1e-6);
    w.pos.y += jrng.uniform(-1e-6, 1e-6);
  }
  for (auto& w : tgt) {
    w.pos.x += jrng.uniform(-1e-6, 1e-6);
    w.pos.y += jrng.uniform(-1e-6, 1e-6);
  }
  CouplingPlan base = kantorovich_lp_clouds(src, tgt, r.grid(), 400);

  auto two_path_gap = [&](const Mat2& B) {
    // p_h(x) = |det B| p(Bx), supported on B⁻¹ supp(p). Its discrete measure
    // is the exact pushforward of p's cloud, so no resampling error enters.
    Mat2 Binv = mat_inverse(B);
    std::vector<WeightedPoint> ph_cloud = base.target;
    for (auto& w : ph_cloud) w.pos = mat_apply(Binv, w.pos);

    CouplingPlan direct = kantorovich_lp_clouds(base.source, ph_cloud, r.grid(), 400);
    TransportMap2D t_direct = barycentric_map(direct);

    TransportMap2D t_composed = barycentric_map(base);
    for (size_t k = 0; k < t_composed.values.size(); ++k)
      if (t_composed.valid[k])
        t_composed.values[k] = mat_apply(Binv, t_composed.values[k]);

    return mean_displacement(t_direct, t_composed, r);
  };

  ViolationReport rep;
  rep.violation_gap = two_path_gap(A);
  rep.control_gap = two_path_gap(Mat2{2.0, 0.0, 0.0, 2.0});
  rep.ratio = rep.violation_gap / std::max(rep.control_gap, 1e-15);
  return rep;
}

}  // namespace otsig
