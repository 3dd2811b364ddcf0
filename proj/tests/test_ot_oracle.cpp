#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "otsig/ot_oracle.hpp"

using namespace otsig;

namespace {

Image2D gaussian_image(const Grid2D& g, double cx, double cy, double sigma) {
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double dx = (g.xnode(i) - cx) / sigma, dy = (g.ynode(j) - cy) / sigma;
      raw[static_cast<size_t>(i) * g.ny + j] = std::exp(-0.5 * (dx * dx + dy * dy));
    }
  return normalize_image(raw, g);
}

Signal1D box1d(const Grid1D& g, double lo, double hi) {
  std::vector<double> raw(static_cast<size_t>(g.n), 0.0);
  for (int i = 0; i < g.n; ++i)
    if (g.node(i) >= lo && g.node(i) <= hi) raw[static_cast<size_t>(i)] = 1.0;
  return normalize(raw, g);
}

}  // namespace

TEST_CASE("1D quantile oracle on the box vs half box") {
  Grid1D g{0.0, 1.0, 1024};
  Signal1D p = box1d(g, 0.0, 1.0);
  Signal1D q = box1d(g, 0.0, 0.5);
  CHECK(std::abs(w2_quantile_oracle(p, q, 20000) - 1.0 / (2.0 * std::sqrt(3.0))) <= 1e-4);
}

TEST_CASE("1D oracle of a pure translation") {
  Grid1D g{0.0, 2.0, 1024};
  Signal1D p = box1d(g, 0.2, 0.7);
  Signal1D q = box1d(g, 0.9, 1.4);
  CHECK(w2_quantile_oracle(p, q, 20000) == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("LP self-coupling is diagonal with zero cost") {
  Grid2D g{0.0, 1.0, 6, 0.0, 1.0, 6};
  Image2D p = gaussian_image(g, 0.5, 0.5, 0.25);
  CouplingPlan plan = kantorovich_lp_2d(p, p, 100);
  CHECK(plan.cost <= 1e-12);
  CHECK(lp_optimality_residual(plan) <= 1e-7);
}

TEST_CASE("LP cost on a translated Gaussian approximates the shift") {
  Grid2D g{-1.0, 1.0, 10, -1.0, 1.0, 10};
  Image2D p = gaussian_image(g, -0.3, 0.0, 0.2);
  Image2D q = gaussian_image(g, 0.3, 0.0, 0.2);
  CouplingPlan plan = kantorovich_lp_2d(p, q, 400);
  CHECK(lp_optimality_residual(plan) <= 1e-7);
  // squared-distance cost of a 0.6 shift
  CHECK(plan.cost == doctest::Approx(0.36).epsilon(0.1));
}

TEST_CASE("LP marginals match the inputs") {
  Grid2D g{-1.0, 1.0, 8, -1.0, 1.0, 8};
  Image2D p = gaussian_image(g, -0.2, 0.1, 0.3);
  Image2D q = gaussian_image(g, 0.25, -0.15, 0.25);
  CouplingPlan plan = kantorovich_lp_2d(p, q, 400);
  for (size_t i = 0; i < plan.source.size(); ++i) {
    double row = 0.0;
    for (size_t j = 0; j < plan.target.size(); ++j) row += plan.entry(i, j);
    CHECK(row == doctest::Approx(plan.source[i].mass).epsilon(1e-9));
  }
  for (size_t j = 0; j < plan.target.size(); ++j) {
    double col = 0.0;
    for (size_t i = 0; i < plan.source.size(); ++i) col += plan.entry(i, j);
    CHECK(col == doctest::Approx(plan.target[j].mass).epsilon(1e-9));
  }
}

TEST_CASE("LP refuses oversized problems") {
  Grid2D g{-1.0, 1.0, 32, -1.0, 1.0, 32};
  Image2D p = gaussian_image(g, 0.0, 0.0, 0.4);
  bool caught = false;
  try {
    kantorovich_lp_2d(p, p, 400);
  } catch (const Error& e) {
    caught = e.code() == ErrorCode::TooLarge;
  }
  CHECK(caught);
}

TEST_CASE("barycentric map of a translation is the shift") {
  Grid2D g{-1.0, 1.0, 10, -1.0, 1.0, 10};
  Image2D p = gaussian_image(g, -0.25, 0.0, 0.18);
  Image2D q = gaussian_image(g, 0.25, 0.0, 0.18);
  CouplingPlan plan = kantorovich_lp_2d(p, q, 400);
  TransportMap2D t = barycentric_map(plan);
  double cell = std::max(g.dx(), g.dy());
  double worst = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (!t.is_valid(i, j)) continue;
      if (p.value(i, j) < 0.2) continue;  // only where real mass sits
      Vec2 v = t.value(i, j);
      worst = std::max(worst, std::hypot(v.x - (g.xnode(i) + 0.5), v.y - g.ynode(j)));
    }
  CHECK(worst <= 1.5 * cell);
}
