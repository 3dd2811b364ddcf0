#include <doctest.h>

#include <cmath>
#include <functional>

#include "otsig/diffeo1d.hpp"

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

}  // namespace

TEST_CASE("affine algebra is exact") {
  Diffeo1D h = Diffeo1D::affine(2.0, 0.5);  // h(x) = 2x - 0.5
  CHECK(h.eval(1.0) == 1.5);
  CHECK(h.derivative(0.3) == 2.0);
  Diffeo1D hi = inverse(h);
  CHECK(hi.eval(1.5) == 1.0);
  Diffeo1D id = compose(hi, h);
  CHECK(id.eval(0.7) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("polynomial construction certifies monotonicity") {
  CHECK_NOTHROW(Diffeo1D::polynomial({0.0, 1.0, 0.2}, 0.0, 1.0));
  CHECK(throws_code(ErrorCode::NotInvertible,
                    [] { Diffeo1D::polynomial({0.0, 1.0, -2.0}, 0.0, 1.0); }));
}

TEST_CASE("polynomial inverse round trip") {
  Diffeo1D h = Diffeo1D::polynomial({0.05, 0.9, 0.1}, 0.0, 1.0);
  Diffeo1D hi = inverse(h);
  // the table inverse interpolates between 4096 nodes, so expect ~1e-8
  for (double x : {0.05, 0.3, 0.62, 0.95})
    CHECK(std::abs(hi.eval(h.eval(x)) - x) <= 1e-6);
}

TEST_CASE("evaluation outside the validity interval throws") {
  Diffeo1D h = Diffeo1D::polynomial({0.0, 1.0}, 0.2, 0.8);
  CHECK(throws_code(ErrorCode::OutOfDomain, [&] { h.eval(0.9); }));
}

TEST_CASE("convex combination of inverses hits the exact endpoints") {
  Diffeo1D h1 = Diffeo1D::polynomial({0.02, 1.05, -0.05}, 0.0, 1.0);
  Diffeo1D h2 = Diffeo1D::polynomial({-0.02, 0.9, 0.1}, 0.0, 1.0);
  Diffeo1D g1 = convex_combo_of_inverses(h1, h2, 1.0);
  Diffeo1D g0 = convex_combo_of_inverses(h1, h2, 0.0);
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(g1.eval(x) == doctest::Approx(h1.eval(x)).epsilon(1e-12));
    CHECK(g0.eval(x) == doctest::Approx(h2.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("convex combination inverse identity") {
  // g^{-1} must equal the pointwise combination of the inverses
  Diffeo1D h1 = Diffeo1D::affine(1.2, 0.1);
  Diffeo1D h2 = Diffeo1D::affine(0.8, -0.2);
  double alpha = 0.3;
  Diffeo1D g = convex_combo_of_inverses(h1, h2, alpha);
  Diffeo1D gi = inverse(g);
  for (double y : {-0.4, 0.0, 0.6, 1.3}) {
    double want = alpha * inverse(h1).eval(y) + (1 - alpha) * inverse(h2).eval(y);
    CHECK(gi.eval(y) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("group membership predicates") {
  CHECK(group_membership(GroupSpec1D::translations(), Diffeo1D::affine(1.0, 0.37), 1e-9));
  CHECK(!group_membership(GroupSpec1D::translations(), Diffeo1D::affine(1.1, 0.0), 1e-9));
  CHECK(group_membership(GroupSpec1D::isotropic_scaling(), Diffeo1D::affine(1.8, 0.0), 1e-9));
  CHECK(group_membership(GroupSpec1D::increasing_affine(), Diffeo1D::affine(1.3, -0.2), 1e-9));
  Diffeo1D fix01 = Diffeo1D::polynomial({0.0, 1.4, -0.4}, 0.0, 1.0);
  CHECK(group_membership(GroupSpec1D::fixing_points({0.0, 1.0}), fix01, 1e-9));
  CHECK(!group_membership(GroupSpec1D::fixing_points({0.5}), fix01, 1e-6));
}

TEST_CASE("sampler is deterministic and respects the support constraint") {
  SupportConstraint sc{0.2, 0.7, 0.0, 1.0};
  auto a = sample_polynomial_diffeos(5, 10, 123, sc);
  auto b = sample_polynomial_diffeos(5, 10, 123, sc);
  REQUIRE(a.size() == 10);
  for (size_t i = 0; i < a.size(); ++i)
    for (double x : {0.0, 0.31, 0.77, 1.0})
      CHECK(a[i].eval(x) == b[i].eval(x));
  for (const auto& h : a) {
    CHECK(h.eval(0.0) <= 0.2 + 1e-12);
    CHECK(h.eval(1.0) >= 0.7 - 1e-12);
  }
}

TEST_CASE("impossible support constraint exhausts the sampler") {
  std::vector<CoeffBox> tight = {{0.0, 0.0}, {0.1, 0.11}};  // h(1) < 0.2
  CHECK(throws_code(ErrorCode::SamplingExhausted, [&] {
    sample_polynomial_diffeos(1, 5, 7, SupportConstraint{0.2, 0.7, 0.0, 1.0}, tight);
  }));
}
