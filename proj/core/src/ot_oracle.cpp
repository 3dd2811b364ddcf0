#include "otsig/ot_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace otsig {

namespace {

// Local inverse CDF (same sup/plateau conventions as the library quantile,
// re-derived here so the oracle does not share code with what it checks).
struct InverseCdf {
  std::vector<double> x, F;

  explicit InverseCdf(const Signal1D& p) {
    const int n = p.n();
    x.resize(n);
    F.resize(n);
    F[0] = 0.0;
    x[0] = p.grid().node(0);
    for (int i = 1; i < n; ++i) {
      x[i] = p.grid().node(i);
      F[i] = F[i - 1] + 0.5 * (p.value(i - 1) + p.value(i)) * p.grid().dx();
    }
    for (double& f : F) f /= F.back();
    F.back() = 1.0;
  }

  double operator()(double u) const {
    const int n = static_cast<int>(F.size());
    if (u >= 1.0) {
      int j = 0;
      while (j < n && F[j] < 1.0) ++j;
      if (j > 0 && F[j] > F[j - 1])
        return x[j - 1] + (x[j] - x[j - 1]) * (1.0 - F[j - 1]) / (F[j] - F[j - 1]);
      return x[std::min(j, n - 1)];
    }
    int lo = 0, hi = n - 1;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (F[mid] <= u)
        lo = mid;
      else
        hi = mid - 1;
    }
    if (lo >= n - 1) return x[n - 1];
    return x[lo] + (x[lo + 1] - x[lo]) * (u - F[lo]) / (F[lo + 1] - F[lo]);
  }
};

double sq_cost(Vec2 a, Vec2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::vector<WeightedPoint> cloud_from_image(const Image2D& img) {
  const Grid2D& g = img.grid();
  std::vector<WeightedPoint> pts;
  for (int i = 0; i < g.nx; ++i) {
    double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.ny; ++j) {
      double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      double m = wx * wy * img.value(i, j) * g.dx() * g.dy();
      if (m > 0.0) pts.push_back({{g.xnode(i), g.ynode(j)}, m});
    }
  }
  double total = 0.0;
  for (const auto& p : pts) total += p.mass;
  for (auto& p : pts) p.mass /= total;
  return pts;
}

double w2_quantile_oracle(const Signal1D& p, const Signal1D& q, int m) {
  if (m < 100) throw Error(ErrorCode::OutOfRange, "oracle needs at least 100 nodes");
  InverseCdf qp(p), qq(q);
  double du = 1.0 / m;
  double s = 0.0;
  for (int j = 0; j < m; ++j) {
    double u = (j + 0.5) * du;
    double d = qp(u) - qq(u);
    s += d * d * du;
  }
  return std::sqrt(s);
}

CouplingPlan kantorovich_lp_clouds(std::vector<WeightedPoint> source,
                                   std::vector<WeightedPoint> target,
                                   const Grid2D& source_grid, int max_points) {
  if (max_points > 400)
    throw Error(ErrorCode::TooLarge, "oracle point cap is 400");
  CouplingPlan out;
  out.source = std::move(source);
  out.target = std::move(target);
  out.source_grid = source_grid;
  const int m = static_cast<int>(out.source.size());
  const int n = static_cast<int>(out.target.size());
  if (m > max_points || n > max_points)
    throw Error(ErrorCode::TooLarge, "positive-mass cell count exceeds max_points");
  if (m == 0 || n == 0) throw Error(ErrorCode::Infeasible, "empty point cloud");

  // Min-cost flow by successive shortest augmenting paths (Dijkstra with
  // potentials). Node ids: sources 0..m-1, targets m..m+n-1.
  const int N = m + n;
  std::vector<double> pot(static_cast<size_t>(N), 0.0);
  std::vector<double> supply(static_cast<size_t>(m)), demand(static_cast<size_t>(n));
  for (int i = 0; i < m; ++i) supply[i] = out.source[i].mass;
  for (int j = 0; j < n; ++j) demand[j] = out.target[j].mass;
  out.plan.assign(static_cast<size_t>(m) * n, 0.0);
  auto cost_ij = [&](int i, int j) {
    return sq_cost(out.source[i].pos, out.target[j].pos);
  };

  const double inf = std::numeric_limits<double>::infinity();
  double remaining = 1.0;
  int guard = 0;
  const int guard_cap = 16 * N * N;
  while (remaining > 1e-12) {
    if (++guard > guard_cap)
      throw Error(ErrorCode::Infeasible, "augmentation did not converge");
    std::vector<double> dist(static_cast<size_t>(N), inf);
    std::vector<int> prev(static_cast<size_t>(N), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int i = 0; i < m; ++i) {
      if (supply[i] > 1e-15) {
        dist[i] = 0.0;
        heap.push({0.0, i});
      }
    }
    while (!heap.empty()) {
      auto [d, node] = heap.top();
      heap.pop();
      if (d > dist[node] + 1e-15) continue;
      if (node < m) {
        int i = node;
        for (int j = 0; j < n; ++j) {
          double rc = cost_ij(i, j) + pot[i] - pot[m + j];
          double nd = d + std::max(rc, 0.0);
          if (nd < dist[m + j] - 1e-15) {
            dist[m + j] = nd;
            prev[m + j] = i;
            heap.push({nd, m + j});
          }
        }
      } else {
        int j = node - m;
        for (int i = 0; i < m; ++i) {
          if (out.plan[static_cast<size_t>(i) * n + j] <= 1e-18) continue;
          double rc = -cost_ij(i, j) + pot[m + j] - pot[i];
          double nd = d + std::max(rc, 0.0);
          if (nd < dist[i] - 1e-15) {
            dist[i] = nd;
            prev[i] = m + j;
            heap.push({nd, i});
          }
        }
      }
    }
    // Closest reachable target with unmet demand.
    int best = -1;
    double best_d = inf;
    for (int j = 0; j < n; ++j) {
      if (demand[j] > 1e-15 && dist[m + j] < best_d) {
        best_d = dist[m + j];
        best = j;
      }
    }
    if (best < 0) throw Error(ErrorCode::Infeasible, "no augmenting path");
    // Johnson-style update capped at the chosen target's distance keeps every
    // reduced cost nonnegative, including arcs at exhausted or unreachable
    // nodes, so the final potentials are valid duals.
    for (int k = 0; k < N; ++k) pot[k] += std::min(dist[k], best_d);
    // Bottleneck along the path: demand at the end, supply at the root,
    // residual plan mass on every backward arc.
    double bottleneck = demand[best];
    {
      int cur = m + best;
      while (prev[cur] >= 0) {
        int pr = prev[cur];
        if (cur < m)
          bottleneck = std::min(bottleneck, out.plan[static_cast<size_t>(cur) * n + (pr - m)]);
        cur = pr;
      }
      bottleneck = std::min(bottleneck, supply[cur]);
    }
    // Apply the augmentation.
    {
      int cur = m + best;
      while (prev[cur] >= 0) {
        int pr = prev[cur];
        if (cur >= m) {
          out.plan[static_cast<size_t>(pr) * n + (cur - m)] += bottleneck;
        } else {
          out.plan[static_cast<size_t>(cur) * n + (pr - m)] -= bottleneck;
        }
        cur = pr;
      }
      supply[cur] -= bottleneck;
      demand[best] -= bottleneck;
      remaining -= bottleneck;
    }
  }

  out.cost = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      out.cost += out.plan[static_cast<size_t>(i) * n + j] * cost_ij(i, j);
  out.u.assign(pot.begin(), pot.begin() + m);
  out.v.assign(pot.begin() + m, pot.end());
  return out;
}

CouplingPlan kantorovich_lp_2d(const Image2D& source, const Image2D& target, int max_points) {
  return kantorovich_lp_clouds(cloud_from_image(source), cloud_from_image(target),
                               source.grid(), max_points);
}

double lp_optimality_residual(const CouplingPlan& plan) {
  const size_t m = plan.source.size(), n = plan.target.size();
  double worst = 0.0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double c = sq_cost(plan.source[i].pos, plan.target[j].pos);
      double rc = c + plan.u[i] - plan.v[j];
      worst = std::max(worst, -rc);                       // dual feasibility
      if (plan.entry(i, j) > 1e-12) worst = std::max(worst, std::abs(rc));  // slackness
    }
  }
  return worst;
}

TransportMap2D barycentric_map(const CouplingPlan& plan) {
  const Grid2D& g = plan.source_grid;
  TransportMap2D map;
  map.grid = g;
  map.values.assign(static_cast<size_t>(g.nx) * g.ny, Vec2{0.0, 0.0});
  map.valid.assign(static_cast<size_t>(g.nx) * g.ny, 0);
  const size_t n = plan.target.size();
  for (size_t i = 0; i < plan.source.size(); ++i) {
    double row_mass = 0.0;
    Vec2 acc{0.0, 0.0};
    for (size_t j = 0; j < n; ++j) {
      double w = plan.entry(i, j);
      row_mass += w;
      acc.x += w * plan.target[j].pos.x;
      acc.y += w * plan.target[j].pos.y;
    }
    if (row_mass <= 0.0) continue;  // zero-mass point skipped
    int ix = static_cast<int>(std::lround((plan.source[i].pos.x - g.xmin) / g.dx()));
    int iy = static_cast<int>(std::lround((plan.source[i].pos.y - g.ymin) / g.dy()));
    ix = std::clamp(ix, 0, g.nx - 1);
    iy = std::clamp(iy, 0, g.ny - 1);
    size_t idx = static_cast<size_t>(ix) * g.ny + iy;
    map.values[idx] = {acc.x / row_mass, acc.y / row_mass};
    map.valid[idx] = 1;
  }
  return map;
}

double mean_displacement(const TransportMap2D& a, const TransportMap2D& b,
                         const Image2D& weights) {
  if (!a.grid.same_as(b.grid))
    throw Error(ErrorCode::DimensionMismatch, "maps live on different grids");
  double acc = 0.0, wsum = 0.0;
  for (int i = 0; i < a.grid.nx; ++i) {
    for (int j = 0; j < a.grid.ny; ++j) {
      if (!a.is_valid(i, j) || !b.is_valid(i, j)) continue;
      double w = weights.value(i, j);
      if (w <= 0.0) continue;
      Vec2 va = a.value(i, j), vb = b.value(i, j);
      acc += w * std::hypot(va.x - vb.x, va.y - vb.y);
      wsum += w;
    }
  }
  if (wsum <= 0.0) throw Error(ErrorCode::EmptySupport, "no overlapping mass");
  return acc / wsum;
}

}  // namespace otsig
