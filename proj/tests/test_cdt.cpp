#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "otsig/cdt.hpp"

using namespace otsig;

namespace {

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Signal1D box(const Grid1D& g, double lo, double hi) {
  std::vector<double> raw(static_cast<size_t>(g.n), 0.0);
  for (int i = 0; i < g.n; ++i)
    if (g.node(i) >= lo && g.node(i) <= hi) raw[static_cast<size_t>(i)] = 1.0;
  return normalize(raw, g);
}

}  // namespace

TEST_CASE("transform of the reference is the identity") {
  Grid1D g{0.0, 1.0, 512};
  Signal1D r = box(g, 0.0, 1.0);
  TransportMap1D t = cdt_forward(r, r);
  for (int i = 0; i < t.n(); ++i)
    CHECK(std::abs(t.value(i) - t.reference_grid().node(i)) <= 2.0 * g.dx());
}

TEST_CASE("translation and scaling analytic maps") {
  Grid1D g{-1.0, 2.0, 1536};
  Grid1D gr{0.0, 1.0, 512};
  Signal1D r = box(gr, 0.0, 1.0);

  TransportMap1D shift = cdt_forward(box(g, 0.3, 1.3), r);
  for (int i = 0; i < shift.n(); ++i)
    CHECK(std::abs(shift.value(i) - (shift.reference_grid().node(i) + 0.3)) <=
          2.0 * std::max(g.dx(), gr.dx()));

  TransportMap1D scale = cdt_forward(box(g, 0.0, 0.5), r);
  for (int i = 0; i < scale.n(); ++i)
    CHECK(std::abs(scale.value(i) - 0.5 * scale.reference_grid().node(i)) <=
          2.0 * std::max(g.dx(), gr.dx()));
}

TEST_CASE("reference with interior zeros is rejected") {
  Grid1D g{0.0, 1.0, 101};
  std::vector<double> raw(101, 0.0);
  for (int i = 10; i <= 40; ++i) raw[i] = 1.0;
  for (int i = 60; i <= 90; ++i) raw[i] = 1.0;
  Signal1D r = normalize(raw, g);
  CHECK(throws_code(ErrorCode::BadReference, [&] { cdt_forward(box(g, 0.2, 0.8), r); }));
}

TEST_CASE("constant map cannot be inverted") {
  Grid1D g{0.0, 1.0, 64};
  Signal1D r = box(g, 0.0, 1.0);
  TransportMap1D flat(g, std::vector<double>(64, 0.5));
  CHECK(throws_code(ErrorCode::DegenerateMap, [&] { cdt_inverse(flat, r, g); }));
}

TEST_CASE("roundtrip reconstructs a two-box density") {
  Grid1D g{0.0, 1.0, 1024};
  Signal1D r = box(g, 0.0, 1.0);
  std::vector<double> raw(1024, 0.0);
  for (int i = 0; i < 1024; ++i) {
    double x = g.node(i);
    if (x >= 0.2 && x <= 0.45) raw[static_cast<size_t>(i)] = 1.0;
    if (x > 0.45 && x <= 0.7) raw[static_cast<size_t>(i)] = 2.0;
  }
  Signal1D p = normalize(raw, g);
  Signal1D back = cdt_inverse(cdt_forward(p, r), r, g);
  CHECK(l1_distance(back, p) <= 1e-2);
}

TEST_CASE("apply_diffeo_1d matches the generative model") {
  Grid1D g{0.0, 1.0, 1024};
  Signal1D p = box(g, 0.3, 0.6);
  // h(x) = x - 0.1 shifts the density right by 0.1
  Signal1D ph = apply_diffeo_1d(p, Diffeo1D::affine(1.0, 0.1));
  auto [lo, hi] = support_interval(ph);
  CHECK(lo == doctest::Approx(0.4).epsilon(0.01));
  CHECK(hi == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("composition property for an affine deformation") {
  Grid1D g{0.0, 1.0, 2048};
  Signal1D r = box(g, 0.0, 1.0);
  Signal1D p = box(g, 0.3, 0.7);
  Diffeo1D h = Diffeo1D::affine(1.15, 0.05);
  TransportMap1D direct = cdt_forward(apply_diffeo_1d(p, h), r);
  TransportMap1D pushed = composition_push(h, cdt_forward(p, r));
  CHECK(sup_gap(direct, pushed) <= 3.0 * g.dx());
}

TEST_CASE("w2 distance of box vs half box") {
  Grid1D g{0.0, 1.0, 2048};
  Signal1D r = box(g, 0.0, 1.0);
  Signal1D q = box(g, 0.0, 0.5);
  CHECK(std::abs(w2_distance(r, q, r) - 1.0 / (2.0 * std::sqrt(3.0))) <= 1e-4);
}

TEST_CASE("transport map validation rejects decreasing values") {
  Grid1D g{0.0, 1.0, 8};
  std::vector<double> bad = {0.0, 0.2, 0.1, 0.3, 0.4, 0.5, 0.6, 0.7};
  CHECK_THROWS_AS(TransportMap1D(g, bad), Error);
}
