#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "otsig/io.hpp"

using namespace otsig;

namespace {

bool throws_format(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == ErrorCode::FormatError;
  }
  return false;
}

}  // namespace

TEST_CASE("signal CSV round trip is byte identical") {
  Grid1D g{0.0, 1.0, 64};
  std::vector<double> raw(64, 0.0);
  for (int i = 20; i < 45; ++i) raw[i] = 1.0 + 0.01 * i;
  Signal1D p = normalize(raw, g);
  std::string text = signal_to_csv(p);
  Signal1D q = signal_from_csv(text);
  CHECK(signal_to_csv(q) == text);
}

TEST_CASE("malformed signal headers are format errors") {
  CHECK(throws_format([] { signal_from_csv("garbage\n0,1\n"); }));
  CHECK(throws_format([] { signal_from_csv("# grid1d 0 1\n"); }));
  CHECK(throws_format([] { signal_from_csv("# grid1d 0 1 4\n0,1\n"); }));  // short body
  CHECK(throws_format([] { signal_from_csv("# grid1d 0 1 2\n0,1\n0.5;2\n"); }));
}

TEST_CASE("transport map CSV round trip") {
  Grid1D g{0.2, 0.8, 16};
  std::vector<double> vals(16);
  for (int i = 0; i < 16; ++i) vals[i] = 0.1 + 0.05 * i;
  TransportMap1D t(g, vals);
  std::string text = tmap1d_to_csv(t);
  TransportMap1D u = tmap1d_from_csv(text);
  CHECK(tmap1d_to_csv(u) == text);
}

TEST_CASE("2D map CSV keeps the validity mask through nan cells") {
  TransportMap2D t;
  t.grid = Grid2D{0.0, 1.0, 3, 0.0, 1.0, 3};
  t.values.assign(9, Vec2{0.5, 0.5});
  t.valid.assign(9, 1);
  t.valid[4] = 0;
  TransportMap2D u = tmap2d_from_csv(tmap2d_to_csv(t));
  CHECK(!u.is_valid(1, 1));
  CHECK(u.is_valid(0, 0));
  CHECK(u.value(2, 2).x == 0.5);
}

TEST_CASE("image CSV round trip") {
  Grid2D g{-1.0, 1.0, 9, -1.0, 1.0, 9};
  std::vector<double> raw(81, 0.0);
  for (int i = 2; i < 7; ++i)
    for (int j = 2; j < 7; ++j) raw[static_cast<size_t>(i) * 9 + j] = 1.0 + i * 0.1;
  Image2D p = normalize_image(raw, g);
  std::string text = image_to_csv(p);
  CHECK(image_to_csv(image_from_csv(text)) == text);
}

TEST_CASE("diffeo JSON round trips across variants") {
  Diffeo1D a = Diffeo1D::affine(1.5, -0.25);
  Diffeo1D a2 = diffeo1d_from_json(diffeo1d_to_json(a));
  CHECK(a2.eval(0.4) == a.eval(0.4));

  Diffeo1D p = Diffeo1D::polynomial({0.01, 1.1, -0.1}, 0.0, 1.0);
  Diffeo1D p2 = diffeo1d_from_json(diffeo1d_to_json(p));
  CHECK(p2.eval(0.6) == doctest::Approx(p.eval(0.6)).epsilon(1e-15));

  Diffeo1D s = Diffeo1D::sampled({0.0, 0.5, 1.0}, {0.0, 0.6, 1.0});
  Diffeo1D s2 = diffeo1d_from_json(diffeo1d_to_json(s));
  CHECK(s2.eval(0.25) == s.eval(0.25));
}

TEST_CASE("2D diffeo JSON keeps affine families exact") {
  Diffeo2D h = Diffeo2D::hs(0.7, 0.4, 0.1, -0.2);
  Diffeo2D h2 = diffeo2d_from_json(diffeo2d_to_json(h));
  Vec2 a = h.eval(0.3, -0.5), b = h2.eval(0.3, -0.5);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
}

TEST_CASE("fmt17 round trips doubles exactly") {
  for (double v : {1.0 / 3.0, 0.1, 12345.6789e-7, -2.5e101}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("atomic write replaces the file completely") {
  std::string path = "io_test_tmp.csv";
  write_text_atomic(path, "first\n");
  write_text_atomic(path, "second\n");
  CHECK(read_text(path) == "second\n");
  std::remove(path.c_str());
}

TEST_CASE("config digest is stable and content-sensitive") {
  CHECK(config_digest("a b c") == config_digest("a b c"));
  CHECK(config_digest("a b c") != config_digest("a b d"));
}
