#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "otsig/cdt.hpp"
#include "otsig/diffeo1d.hpp"
#include "otsig/ot_oracle.hpp"
#include "otsig/radon_cdt.hpp"
#include "otsig/signal.hpp"

namespace {

otsig::Signal1D bumpy_signal(int n) {
  otsig::Grid1D g{0.0, 1.0, n};
  std::vector<double> raw(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = g.node(i);
    if (x < 0.15 || x > 0.85) continue;
    raw[static_cast<size_t>(i)] = 0.3 + std::exp(-80.0 * (x - 0.4) * (x - 0.4)) +
                                  0.7 * std::exp(-120.0 * (x - 0.7) * (x - 0.7));
  }
  return otsig::normalize(raw, g);
}

otsig::Signal1D uniform_signal(int n) {
  otsig::Grid1D g{0.0, 1.0, n};
  return otsig::normalize(std::vector<double>(static_cast<size_t>(n), 1.0), g);
}

otsig::Image2D gaussian_image(int n) {
  otsig::Grid2D g{-1.0, 1.0, n, -1.0, 1.0, n};
  std::vector<double> raw(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dx = g.xnode(i) / 0.25, dy = g.ynode(j) / 0.25;
      raw[static_cast<size_t>(i) * n + j] = std::exp(-0.5 * (dx * dx + dy * dy));
    }
  return otsig::normalize_image(raw, g);
}

void BM_cdt_forward_1024(benchmark::State& state) {
  auto p = bumpy_signal(1024);
  auto r = uniform_signal(1024);
  for (auto _ : state) benchmark::DoNotOptimize(otsig::cdt_forward(p, r));
}
BENCHMARK(BM_cdt_forward_1024);

void BM_radon_128x128_k32(benchmark::State& state) {
  auto p = gaussian_image(128);
  auto angles = otsig::uniform_angles(32);
  otsig::Grid1D offset{-1.5, 1.5, 181};
  for (auto _ : state) benchmark::DoNotOptimize(otsig::radon(p, angles, offset));
}
BENCHMARK(BM_radon_128x128_k32);

void BM_kantorovich_lp_10x10(benchmark::State& state) {
  auto p = gaussian_image(10);
  otsig::Grid2D g{-1.0, 1.0, 10, -1.0, 1.0, 10};
  std::vector<double> raw(100, 0.0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      double dx = (g.xnode(i) - 0.2) / 0.3, dy = (g.ynode(j) + 0.1) / 0.3;
      raw[static_cast<size_t>(i) * 10 + j] = std::exp(-0.5 * (dx * dx + dy * dy));
    }
  auto q = otsig::normalize_image(raw, g);
  for (auto _ : state) benchmark::DoNotOptimize(otsig::kantorovich_lp_2d(p, q, 400));
}
BENCHMARK(BM_kantorovich_lp_10x10);

void BM_sample_degree5_diffeos(benchmark::State& state) {
  otsig::SupportConstraint sc{0.2, 0.7, 0.0, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(otsig::sample_polynomial_diffeos(5, 10, ++seed, sc));
}
BENCHMARK(BM_sample_degree5_diffeos);

}  // namespace

BENCHMARK_MAIN();
