#include "otsig/convexity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "otsig/rng.hpp"

namespace otsig {

namespace {

std::vector<double> solve_spd(std::vector<double> A, std::vector<double> b) {
  // Gaussian elimination with partial pivoting; A is d x d row-major.
  const int d = static_cast<int>(b.size());
  for (int k = 0; k < d; ++k) {
    int piv = k;
    for (int i = k + 1; i < d; ++i)
      if (std::abs(A[static_cast<size_t>(i) * d + k]) >
          std::abs(A[static_cast<size_t>(piv) * d + k]))
        piv = i;
    if (piv != k) {
      for (int j = 0; j < d; ++j)
        std::swap(A[static_cast<size_t>(k) * d + j], A[static_cast<size_t>(piv) * d + j]);
      std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
    }
    double pk = A[static_cast<size_t>(k) * d + k];
    for (int i = k + 1; i < d; ++i) {
      double f = A[static_cast<size_t>(i) * d + k] / pk;
      if (f == 0.0) continue;
      for (int j = k; j < d; ++j)
        A[static_cast<size_t>(i) * d + j] -= f * A[static_cast<size_t>(k) * d + j];
      b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
    }
  }
  for (int k = d - 1; k >= 0; --k) {
    double acc = b[static_cast<size_t>(k)];
    for (int j = k + 1; j < d; ++j)
      acc -= A[static_cast<size_t>(k) * d + j] * b[static_cast<size_t>(j)];
    b[static_cast<size_t>(k)] = acc / A[static_cast<size_t>(k) * d + k];
  }
  return b;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::vector<double>> hull_samples(
    const std::vector<TransportMap1D>& maps, int draws, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<size_t>(draws));
  const size_t m = maps.size();
  for (int k = 0; k < draws; ++k) {
    size_t i = rng.below(m), j = rng.below(m);
    double a = rng.uniform01();
    const auto& vi = maps[i].values();
    const auto& vj = maps[j].values();
    std::vector<double> v(vi.size());
    for (size_t t = 0; t < vi.size(); ++t) v[t] = a * vi[t] + (1.0 - a) * vj[t];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

SignalClass1D generate_class(const Signal1D& tmpl, std::vector<Diffeo1D> diffeos) {
  SignalClass1D c{tmpl, std::move(diffeos), {}};
  c.members.reserve(c.diffeos.size());
  for (const Diffeo1D& h : c.diffeos) c.members.push_back(apply_diffeo_1d(tmpl, h));
  return c;
}

std::vector<TransportMap1D> transform_class(const SignalClass1D& c, const Signal1D& r) {
  std::vector<TransportMap1D> maps;
  maps.reserve(c.members.size());
  for (const Signal1D& m : c.members) maps.push_back(cdt_forward(m, r));
  return maps;
}

WitnessReport convexity_witness(const SignalClass1D& c, const Signal1D& r,
                                int trials, std::uint64_t seed,
                                const GroupSpec1D* group) {
  auto maps = transform_class(c, r);
  const Grid1D mg = maps.front().reference_grid();

  WitnessReport rep;
  rep.trials = trials;
  rep.map_tol = 3.0 * mg.dx();
  rep.member_tol = 2e-2;

  Rng rng(derive_seed(seed, "convexity-witness"));
  for (int t = 0; t < trials; ++t) {
    size_t i = rng.below(c.members.size());
    size_t j = rng.below(c.members.size());
    double alpha = rng.uniform01();

    std::vector<double> mixed(maps[i].values().size());
    for (size_t k = 0; k < mixed.size(); ++k)
      mixed[k] = alpha * maps[i].value(static_cast<int>(k)) +
                 (1.0 - alpha) * maps[j].value(static_cast<int>(k));
    TransportMap1D M(mg, std::move(mixed));

    Diffeo1D g = convex_combo_of_inverses(c.diffeos[i], c.diffeos[j], alpha);
    if (group && !group_membership(*group, g, 1e-6)) ++rep.group_escapes;
    Signal1D p_g = apply_diffeo_1d(c.template_signal, g);

    rep.max_map_gap = std::max(rep.max_map_gap, sup_gap(M, cdt_forward(p_g, r)));
    Signal1D recon = cdt_inverse(M, r, c.template_signal.grid());
    rep.max_member_l1 = std::max(rep.max_member_l1, l1_distance(recon, p_g));
  }
  rep.passed = rep.max_map_gap <= rep.map_tol && rep.max_member_l1 <= rep.member_tol;
  return rep;
}

PartitionReport partition_check(const SignalClass1D& c1, const SignalClass1D& c2,
                                const Signal1D& r, int draws, std::uint64_t seed) {
  // Both hulls use the same draw sequence, so identical classes collapse to
  // margin exactly zero.
  std::uint64_t hull_seed = derive_seed(seed, "partition-hull");
  auto s1 = hull_samples(transform_class(c1, r), draws, hull_seed);
  auto s2 = hull_samples(transform_class(c2, r), draws, hull_seed);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : s1)
    for (const auto& b : s2) {
      double acc = 0.0;
      for (size_t t = 0; t < a.size(); ++t) {
        double d = a[t] - b[t];
        acc += d * d;
      }
      best = std::min(best, acc);
    }
  return {std::sqrt(best), draws};
}

double LdaModel::project(const std::vector<double>& x) const {
  return dot(direction, x);
}

LdaModel lda_fit(const std::vector<std::vector<double>>& features_a,
                 const std::vector<std::vector<double>>& features_b) {
  if (features_a.empty() || features_b.empty())
    throw Error(ErrorCode::DimensionMismatch, "both classes need samples");
  const size_t d = features_a.front().size();
  for (const auto& v : features_a)
    if (v.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "inconsistent feature length");
  for (const auto& v : features_b)
    if (v.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "inconsistent feature length");

  auto mean_of = [d](const std::vector<std::vector<double>>& f) {
    std::vector<double> m(d, 0.0);
    for (const auto& v : f)
      for (size_t t = 0; t < d; ++t) m[t] += v[t];
    for (double& x : m) x /= static_cast<double>(f.size());
    return m;
  };

  LdaModel model;
  model.mean_a = mean_of(features_a);
  model.mean_b = mean_of(features_b);

  std::vector<double> S(d * d, 0.0);
  auto accumulate = [&](const std::vector<std::vector<double>>& f,
                        const std::vector<double>& mean) {
    std::vector<double> c(d);
    for (const auto& v : f) {
      for (size_t t = 0; t < d; ++t) c[t] = v[t] - mean[t];
      for (size_t i = 0; i < d; ++i) {
        if (c[i] == 0.0) continue;
        double ci = c[i];
        double* row = S.data() + i * d;
        for (size_t j = 0; j < d; ++j) row[j] += ci * c[j];
      }
    }
  };
  accumulate(features_a, model.mean_a);
  accumulate(features_b, model.mean_b);

  double trace = 0.0;
  for (size_t i = 0; i < d; ++i) trace += S[i * d + i];
  model.scatter_trace = trace;
  double lam = trace > 0.0 ? 1e-6 * trace / static_cast<double>(d) : 1e-12;
  for (size_t i = 0; i < d; ++i) S[i * d + i] += lam;

  std::vector<double> rhs(d);
  for (size_t t = 0; t < d; ++t) rhs[t] = model.mean_b[t] - model.mean_a[t];
  double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    model.direction.assign(d, 0.0);
    model.direction[0] = 1.0;
    model.degenerate = true;
    model.threshold = model.project(model.mean_a);
    return model;
  }

  model.direction = solve_spd(std::move(S), std::move(rhs));
  double norm = std::sqrt(dot(model.direction, model.direction));
  for (double& x : model.direction) x /= norm;

  double pa = model.project(model.mean_a);
  double pb = model.project(model.mean_b);
  if (pb < pa) {
    for (double& x : model.direction) x = -x;
    std::swap(pa, pb);
  }
  model.threshold = 0.5 * (pa + pb);
  model.degenerate = std::abs(pb - pa) <= 1e-12 * std::max(1.0, std::abs(pa) + std::abs(pb));
  return model;
}

double lda_accuracy(const LdaModel& model,
                    const std::vector<std::vector<double>>& features_a,
                    const std::vector<std::vector<double>>& features_b) {
  size_t correct = 0;
  for (const auto& v : features_a)
    if (model.project(v) < model.threshold) ++correct;
  for (const auto& v : features_b)
    if (model.project(v) > model.threshold) ++correct;
  return static_cast<double>(correct) /
         static_cast<double>(features_a.size() + features_b.size());
}

Signal1D make_template(const std::string& name, const Grid1D& grid) {
  std::vector<double> raw(static_cast<size_t>(grid.n), 0.0);
  auto box = [&](double lo, double hi) {
    for (int i = 0; i < grid.n; ++i) {
      double x = grid.node(i);
      if (x >= lo && x <= hi) raw[static_cast<size_t>(i)] += 1.0;
    }
  };
  if (name == "one-bump") {
    box(0.35, 0.65);
  } else if (name == "two-bump") {
    box(0.35, 0.45);
    box(0.55, 0.65);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown template '" + name + "'");
  }
  return normalize(raw, grid);
}

SeparabilityReport separability_experiment(const SeparabilityConfig& config) {
  if (config.templates.size() != 2)
    throw Error(ErrorCode::ConfigError, "experiment needs exactly two classes");
  if (config.count_per_class < 2 || config.grid_n < 16)
    throw Error(ErrorCode::ConfigError, "counts or grid too small");
  if (config.shift_range < 0.0 || config.shift_range > 0.34)
    throw Error(ErrorCode::ConfigError, "shift range must keep supports inside [0,1]");

  Grid1D grid{0.0, 1.0, config.grid_n};
  Signal1D r = normalize(std::vector<double>(static_cast<size_t>(config.grid_n), 1.0), grid);

  auto build = [&](const std::string& tmpl_name, std::string_view tag) {
    Rng rng(derive_seed(config.seed, tag));
    std::vector<Diffeo1D> hs;
    hs.reserve(static_cast<size_t>(config.count_per_class));
    for (int i = 0; i < config.count_per_class; ++i) {
      double mu = rng.uniform(-config.shift_range, config.shift_range);
      hs.push_back(Diffeo1D::affine(1.0, mu));
    }
    return generate_class(make_template(tmpl_name, grid), std::move(hs));
  };
  SignalClass1D ca = build(config.templates[0], "class-a");
  SignalClass1D cb = build(config.templates[1], "class-b");

  auto raw_features = [](const SignalClass1D& c) {
    std::vector<std::vector<double>> f;
    f.reserve(c.members.size());
    for (const Signal1D& m : c.members) f.push_back(m.values());
    return f;
  };
  auto map_features = [&](const SignalClass1D& c) {
    std::vector<std::vector<double>> f;
    f.reserve(c.members.size());
    for (const TransportMap1D& t : transform_class(c, r)) f.push_back(t.values());
    return f;
  };

  SeparabilityReport rep;
  auto run_domain = [](const std::vector<std::vector<double>>& fa,
                       const std::vector<std::vector<double>>& fb, double& accuracy,
                       double& margin, std::vector<double>& pa, std::vector<double>& pb) {
    LdaModel model = lda_fit(fa, fb);
    accuracy = lda_accuracy(model, fa, fb);
    margin = std::numeric_limits<double>::infinity();
    for (const auto& v : fa) {
      pa.push_back(model.project(v));
      margin = std::min(margin, std::abs(pa.back() - model.threshold));
    }
    for (const auto& v : fb) {
      pb.push_back(model.project(v));
      margin = std::min(margin, std::abs(pb.back() - model.threshold));
    }
  };
  run_domain(raw_features(ca), raw_features(cb), rep.raw_accuracy, rep.raw_margin,
             rep.raw_proj_a, rep.raw_proj_b);
  run_domain(map_features(ca), map_features(cb), rep.transform_accuracy,
             rep.transform_margin, rep.cdt_proj_a, rep.cdt_proj_b);
  return rep;
}

}  // namespace otsig
