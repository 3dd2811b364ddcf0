#include <doctest.h>

#include <cmath>

#include "otsig/diffeo2d.hpp"

using namespace otsig;

TEST_CASE("quadratic/identity instance evaluates and inverts exactly") {
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.1, 1.0), Profile::affine(1.0, 0.0));
  Vec2 v = h.eval(1.0, 1.0);
  CHECK(std::abs(v.x - 1.2) <= 1e-12);
  CHECK(std::abs(v.y - 1.2) <= 1e-12);
  Vec2 w = hr_inverse(h).eval(1.2, 1.2);
  CHECK(std::abs(w.x - 1.0) <= 1e-10);
  CHECK(std::abs(w.y - 1.0) <= 1e-10);
}

TEST_CASE("ha maps express exactly through profiles") {
  Diffeo2D h = Diffeo2D::ha(2.0, {0.3, -0.1});
  Diffeo2D hr = to_hr(h);
  for (double x : {-1.0, 0.2, 0.9})
    for (double y : {-0.5, 0.0, 1.1}) {
      Vec2 a = h.eval(x, y), b = hr.eval(x, y);
      CHECK(std::abs(a.x - b.x) <= 1e-12);
      CHECK(std::abs(a.y - b.y) <= 1e-12);
    }
}

TEST_CASE("hs jacobian is symmetric with equal diagonal") {
  Diffeo2D h = Diffeo2D::hs(0.7, 0.4, 0.1, -0.2);
  Mat2 J = h.jacobian(0.3, -0.8);
  CHECK(J.a12 == doctest::Approx(J.a21));
  CHECK(J.a11 == doctest::Approx(J.a22));
  CHECK(hs_membership(J, {0.0, 0.0}, 1e-9));
}

TEST_CASE("hs membership rejects asymmetric and indefinite matrices") {
  CHECK(!hs_membership(Mat2{1.0, 0.3, -0.3, 1.0}, {0, 0}, 1e-9));
  CHECK(!hs_membership(Mat2{1.0, 0.2, 0.2, 1.3}, {0, 0}, 1e-9));   // unequal diagonal
  CHECK(!hs_membership(Mat2{0.5, 0.8, 0.8, 0.5}, {0, 0}, 1e-9));   // a2 < 0
  CHECK(hs_membership(Mat2{1.1, 0.3, 0.3, 1.1}, {0.2, -0.4}, 1e-9));
}

TEST_CASE("composition nests evaluations") {
  Diffeo2D h1 = Diffeo2D::hr(Profile::quadratic(0.05, 1.0), Profile::affine(0.9, 0.1));
  Diffeo2D h2 = Diffeo2D::ha(1.2, {0.1, 0.0});
  Diffeo2D hc = hr_compose(h1, h2);
  for (double x : {-0.5, 0.0, 0.7}) {
    Vec2 mid = h2.eval(x, 0.2);
    Vec2 want = h1.eval(mid.x, mid.y);
    Vec2 got = hc.eval(x, 0.2);
    CHECK(std::abs(got.x - want.x) <= 1e-12);
    CHECK(std::abs(got.y - want.y) <= 1e-12);
  }
}

TEST_CASE("ha pairs compose in closed form") {
  Diffeo2D a = Diffeo2D::ha(2.0, {1.0, 0.0});
  Diffeo2D b = Diffeo2D::ha(0.5, {0.0, 1.0});
  Diffeo2D c = hr_compose(a, b);
  Vec2 v = c.eval(1.0, 1.0);
  // a(b(1,1)) = a(0.5, 1.5) = (2.0, 3.0)
  CHECK(v.x == doctest::Approx(2.0));
  CHECK(v.y == doctest::Approx(3.0));
}

TEST_CASE("profile-group elements are curl-free") {
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.1, 1.0), Profile::affine(1.0, 0.0));
  CHECK(is_curl_free(h, Box2D{-2, 2, -2, 2}, 41, 1e-4));
}

TEST_CASE("potential gradient matches the map") {
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.08, 1.1), Profile::affine(0.95, 0.0));
  const double eps = 1e-6;
  for (double x : {-0.4, 0.3}) {
    for (double y : {-0.2, 0.5}) {
      double gx = (potential_value(h, x + eps, y) - potential_value(h, x - eps, y)) / (2 * eps);
      double gy = (potential_value(h, x, y + eps) - potential_value(h, x, y - eps)) / (2 * eps);
      Vec2 v = h.eval(x, y);
      CHECK(gx == doctest::Approx(v.x).epsilon(1e-5));
      CHECK(gy == doctest::Approx(v.y).epsilon(1e-5));
    }
  }
}

TEST_CASE("hs inverse round trips") {
  Diffeo2D h = Diffeo2D::hs(0.8, 0.6, 0.15, -0.25);
  Diffeo2D hi = hr_inverse(h);
  for (double x : {-0.7, 0.1, 0.9}) {
    Vec2 v = h.eval(x, 0.4);
    Vec2 back = hi.eval(v.x, v.y);
    CHECK(back.x == doctest::Approx(x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(0.4).epsilon(1e-12));
  }
}
