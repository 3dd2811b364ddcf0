#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "otsig/lot2d.hpp"

using namespace otsig;

namespace {

Image2D gaussian_image(const Grid2D& g, double sigma) {
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  double cx = 0.5 * (g.xmin + g.xmax), cy = 0.5 * (g.ymin + g.ymax);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double dx = (g.xnode(i) - cx) / sigma, dy = (g.ynode(j) - cy) / sigma;
      raw[static_cast<size_t>(i) * g.ny + j] = std::exp(-0.5 * (dx * dx + dy * dy));
    }
  return normalize_image(raw, g);
}

Image2D uniform_square(const Grid2D& g, double half) {
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (std::abs(g.xnode(i)) <= half && std::abs(g.ynode(j)) <= half)
        raw[static_cast<size_t>(i) * g.ny + j] = 1.0;
  return normalize_image(raw, g);
}

}  // namespace

TEST_CASE("identity deformation returns the density") {
  Grid2D g{-1.0, 1.0, 32, -1.0, 1.0, 32};
  Image2D p = gaussian_image(g, 0.25);
  Image2D q = apply_diffeo_2d(p, Diffeo2D::identity());
  double worst = 0.0;
  for (size_t k = 0; k < p.values().size(); ++k)
    worst = std::max(worst, std::abs(p.values()[k] - q.values()[k]));
  CHECK(worst <= 1e-9);
}

TEST_CASE("isotropic scaling shrinks support and preserves mass") {
  Grid2D g{-1.0, 1.0, 65, -1.0, 1.0, 65};
  Image2D p = uniform_square(g, 0.5);
  // h = 2x: p_h(x) = 4 p(2x), support halves
  Image2D q = apply_diffeo_2d(p, Diffeo2D::ha(2.0, {0.0, 0.0}));
  CHECK(std::abs(trapz2d(q.values(), g) - 1.0) <= 1e-2);
  CHECK(q.sample(0.0, 0.0) == doctest::Approx(4.0 * p.sample(0.0, 0.0)).epsilon(0.05));
  CHECK(q.sample(0.4, 0.0) <= 1e-9);  // outside the shrunk support
}

TEST_CASE("support escaping the grid raises MassLoss") {
  Grid2D g{-1.0, 1.0, 33, -1.0, 1.0, 33};
  Image2D p = gaussian_image(g, 0.25);
  bool caught = false;
  try {
    apply_diffeo_2d(p, Diffeo2D::ha(1.0, {5.0, 0.0}));
  } catch (const Error& e) {
    caught = e.code() == ErrorCode::MassLoss;
  }
  CHECK(caught);
}

TEST_CASE("identity member reproduces the reference") {
  Grid2D g{-1.0, 1.0, 32, -1.0, 1.0, 32};
  Image2D r = gaussian_image(g, 0.3);
  PrMember m = generate_pr_member(r, Diffeo2D::identity());
  CHECK(m.residual <= 1e-6);
  TransportMap2D t = lot_forward_pr(m);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      CHECK(t.value(i, j).x == doctest::Approx(g.xnode(i)));
      CHECK(t.value(i, j).y == doctest::Approx(g.ynode(j)));
    }
}

TEST_CASE("translated member is the shifted reference") {
  Grid2D g{-1.0, 1.0, 48, -1.0, 1.0, 48};
  Image2D r = gaussian_image(g, 0.25);
  Vec2 u{0.3, -0.2};
  PrMember m = generate_pr_member(r, Diffeo2D::ha(1.0, u));
  CHECK(m.residual <= 5e-2);
  // density peak moved to u
  CHECK(m.density.sample(u.x, u.y) ==
        doctest::Approx(r.sample(0.0, 0.0)).epsilon(0.05));
}

TEST_CASE("figure-caption member certificate is consistent at 64x64") {
  Grid2D g{-0.5, 0.5, 64, -0.5, 0.5, 64};
  Image2D r = uniform_square(g, 0.5);
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.1, 1.0), Profile::affine(1.0, 0.0));
  PrMember m = generate_pr_member(r, h);
  CHECK(m.residual <= 5e-2);
}

TEST_CASE("compose with identity equals forward") {
  Grid2D g{-1.0, 1.0, 24, -1.0, 1.0, 24};
  Image2D r = gaussian_image(g, 0.3);
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.05, 1.0), Profile::affine(1.1, 0.0));
  PrMember m = generate_pr_member(r, h);
  TransportMap2D a = lot_forward_pr(m);
  TransportMap2D b = lot_compose_pr(m, Diffeo2D::identity());
  for (size_t k = 0; k < a.values.size(); ++k) {
    if (!a.valid[k] || !b.valid[k]) continue;
    CHECK(std::abs(a.values[k].x - b.values[k].x) <= 1e-10);
    CHECK(std::abs(a.values[k].y - b.values[k].y) <= 1e-10);
  }
}

TEST_CASE("compose with an affine map is the exact affine inverse route") {
  Grid2D g{-1.0, 1.0, 24, -1.0, 1.0, 24};
  Image2D r = gaussian_image(g, 0.3);
  PrMember m = generate_pr_member(r, Diffeo2D::identity());
  Diffeo2D gmap = Diffeo2D::ha(2.0, {0.4, 0.0});
  TransportMap2D t = lot_compose_pr(m, gmap);
  // g^{-1}(x) = (x - u)/a
  for (int i = 0; i < g.nx; i += 5)
    for (int j = 0; j < g.ny; j += 5) {
      if (!t.is_valid(i, j)) continue;
      CHECK(t.value(i, j).x == doctest::Approx((g.xnode(i) - 0.4) / 2.0).epsilon(1e-12));
      CHECK(t.value(i, j).y == doctest::Approx(g.ynode(j) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("asymmetric linear deformation is rejected") {
  bool caught = false;
  try {
    composition_violation_demo(Mat2{1.0, 0.5, 0.0, 1.0}, Mat2{2.0, 1.0, 1.0, 2.0}, 8);
  } catch (const Error& e) {
    caught = e.code() == ErrorCode::NotGradientMap;
  }
  CHECK(caught);
}
