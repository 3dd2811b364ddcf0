#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "otsig/convexity_lab.hpp"
#include "otsig/rng.hpp"

using namespace otsig;

namespace {

Signal1D uniform01(int n) {
  Grid1D g{0.0, 1.0, n};
  return normalize(std::vector<double>(static_cast<size_t>(n), 1.0), g);
}

}  // namespace

TEST_CASE("identity class holds just the template") {
  Grid1D g{0.0, 1.0, 256};
  Signal1D tmpl = make_template("one-bump", g);
  SignalClass1D c = generate_class(tmpl, {Diffeo1D::identity()});
  REQUIRE(c.members.size() == 1);
  CHECK(l1_distance(c.members[0], tmpl) <= 1e-9);
}

TEST_CASE("translation class transforms to shifted identities") {
  Grid1D g{0.0, 1.0, 512};
  Signal1D r = uniform01(512);
  Signal1D tmpl = make_template("one-bump", g);
  SignalClass1D c = generate_class(
      tmpl, {Diffeo1D::affine(1.0, -0.1), Diffeo1D::affine(1.0, 0.15)});
  auto maps = transform_class(c, r);
  TransportMap1D base = cdt_forward(tmpl, r);
  double mu[2] = {-0.1, 0.15};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < maps[k].n(); ++i)
      CHECK(std::abs(maps[k].value(i) - (base.value(i) + mu[k])) <= 3.0 * g.dx());
}

TEST_CASE("witness accepts the translation family") {
  Grid1D g{0.0, 1.0, 1024};
  Signal1D r = uniform01(1024);
  Rng rng(9);
  std::vector<Diffeo1D> hs;
  for (int i = 0; i < 10; ++i) hs.push_back(Diffeo1D::affine(1.0, rng.uniform(-0.25, 0.25)));
  SignalClass1D c = generate_class(make_template("one-bump", g), std::move(hs));
  GroupSpec1D spec = GroupSpec1D::translations();
  WitnessReport w = convexity_witness(c, r, 25, 5, &spec);
  CHECK(w.passed);
  CHECK(w.group_escapes == 0);
}

TEST_CASE("partition margin vanishes for identical classes") {
  Grid1D g{0.0, 1.0, 256};
  Signal1D r = uniform01(256);
  Rng rng(4);
  std::vector<Diffeo1D> hs;
  for (int i = 0; i < 8; ++i) hs.push_back(Diffeo1D::affine(1.0, rng.uniform(-0.2, 0.2)));
  SignalClass1D c = generate_class(make_template("one-bump", g), hs);
  PartitionReport rep = partition_check(c, c, r, 50, 11);
  CHECK(rep.margin == 0.0);
}

TEST_CASE("partition separates one-bump from two-bump translates") {
  Grid1D g{0.0, 1.0, 256};
  Signal1D r = uniform01(256);
  auto build = [&](const char* tmpl, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Diffeo1D> hs;
    for (int i = 0; i < 20; ++i) hs.push_back(Diffeo1D::affine(1.0, rng.uniform(-0.25, 0.25)));
    return generate_class(make_template(tmpl, g), std::move(hs));
  };
  PartitionReport rep = partition_check(build("one-bump", 1), build("two-bump", 2), r, 100, 3);
  CHECK(rep.margin > 0.0);
}

TEST_CASE("lda on singleton opposite classes") {
  std::vector<std::vector<double>> a = {{-1.0, 0.0, 0.0}};
  std::vector<std::vector<double>> b = {{1.0, 0.0, 0.0}};
  LdaModel m = lda_fit(a, b);
  CHECK(std::abs(std::abs(m.direction[0]) - 1.0) <= 1e-9);
  CHECK(std::abs(m.threshold) <= 1e-12);
  CHECK(lda_accuracy(m, a, b) == 1.0);
}

TEST_CASE("identical classes are degenerate") {
  std::vector<std::vector<double>> a = {{0.5, 0.1}, {0.4, 0.2}};
  LdaModel m = lda_fit(a, a);
  CHECK(m.degenerate);
  CHECK(lda_accuracy(m, a, a) == doctest::Approx(0.5));
}

TEST_CASE("dimension mismatch is rejected") {
  std::vector<std::vector<double>> a = {{1.0, 2.0}};
  std::vector<std::vector<double>> b = {{1.0, 2.0, 3.0}};
  bool caught = false;
  try {
    lda_fit(a, b);
  } catch (const Error& e) {
    caught = e.code() == ErrorCode::DimensionMismatch;
  }
  CHECK(caught);
}

TEST_CASE("lda direction is stable under consistent feature permutation") {
  std::vector<std::vector<double>> a = {{0.1, 0.9, 0.3}, {0.2, 0.8, 0.4}};
  std::vector<std::vector<double>> b = {{0.9, 0.1, 0.5}, {0.8, 0.2, 0.6}};
  LdaModel m = lda_fit(a, b);
  auto permute = [](std::vector<std::vector<double>> f) {
    for (auto& v : f) std::swap(v[0], v[2]);
    return f;
  };
  LdaModel mp = lda_fit(permute(a), permute(b));
  CHECK(std::abs(m.direction[0]) == doctest::Approx(std::abs(mp.direction[2])).epsilon(1e-9));
  CHECK(std::abs(m.direction[2]) == doctest::Approx(std::abs(mp.direction[0])).epsilon(1e-9));
  CHECK(lda_accuracy(mp, permute(a), permute(b)) == lda_accuracy(m, a, b));
}

TEST_CASE("smoke-scale experiment separates perfectly in transform domain") {
  SeparabilityConfig cfg;
  cfg.count_per_class = 10;
  cfg.grid_n = 128;
  cfg.seed = 17;
  SeparabilityReport rep = separability_experiment(cfg);
  CHECK(rep.transform_accuracy == 1.0);
  CHECK(rep.transform_margin > 0.0);
}

TEST_CASE("bad experiment configs are rejected") {
  SeparabilityConfig cfg;
  cfg.templates = {"one-bump"};
  bool caught = false;
  try {
    separability_experiment(cfg);
  } catch (const Error& e) {
    caught = e.code() == ErrorCode::ConfigError;
  }
  CHECK(caught);
  bool caught2 = false;
  try {
    Grid1D g{0.0, 1.0, 64};
    make_template("three-bump", g);
  } catch (const Error& e) {
    caught2 = e.code() == ErrorCode::ConfigError;
  }
  CHECK(caught2);
}
