#include "otsig/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "otsig/cdt.hpp"
#include "otsig/convexity_lab.hpp"
#include "otsig/diffeo1d.hpp"
#include "otsig/diffeo2d.hpp"
#include "otsig/io.hpp"
#include "otsig/lot2d.hpp"
#include "otsig/ot_oracle.hpp"
#include "otsig/radon_cdt.hpp"
#include "otsig/rng.hpp"
#include "otsig/signal.hpp"

namespace otsig {

void VerifyResult::check_le(const std::string& name, double value, double bound) {
  checks.push_back({name, value, bound, value <= bound});
}

void VerifyResult::check_ge(const std::string& name, double value, double bound) {
  checks.push_back({name, value, bound, value >= bound});
}

bool VerifyResult::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

std::string VerifyResult::csv() const {
  std::string out = "check,value,bound,pass\n";
  for (const auto& c : checks)
    out += c.name + "," + fmt17(c.value) + "," + fmt17(c.bound) + "," +
           (c.passed ? "1" : "0") + "\n";
  return out;
}

namespace {

Signal1D uniform_signal(const Grid1D& g) {
  return normalize(std::vector<double>(static_cast<size_t>(g.n), 1.0), g);
}

// Strictly positive smooth density on the whole grid: floor plus bumps.
Signal1D random_positive_density(const Grid1D& g, Rng& rng) {
  std::vector<double> raw(static_cast<size_t>(g.n), 0.3);
  int bumps = 2 + static_cast<int>(rng.below(3));
  for (int b = 0; b < bumps; ++b) {
    double c = rng.uniform(g.xmin + 0.1, g.xmax - 0.1);
    double s = rng.uniform(0.04, 0.12);
    double a = rng.uniform(0.5, 2.5);
    for (int i = 0; i < g.n; ++i) {
      double d = (g.node(i) - c) / s;
      raw[static_cast<size_t>(i)] += a * std::exp(-0.5 * d * d);
    }
  }
  return normalize(raw, g);
}

// Density supported exactly on [lo, hi]: floor + truncated bumps + boxes.
Signal1D random_compact_density(const Grid1D& g, double lo, double hi, Rng& rng) {
  std::vector<double> raw(static_cast<size_t>(g.n), 0.0);
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    if (x < lo || x > hi) continue;
    double v = 0.3;
    raw[static_cast<size_t>(i)] = v;
  }
  int bumps = 1 + static_cast<int>(rng.below(3));
  for (int b = 0; b < bumps; ++b) {
    double c = rng.uniform(lo + 0.05, hi - 0.05);
    double s = rng.uniform(0.03, 0.08);
    double a = rng.uniform(0.5, 2.0);
    for (int i = 0; i < g.n; ++i) {
      double x = g.node(i);
      if (x < lo || x > hi) continue;
      double d = (x - c) / s;
      raw[static_cast<size_t>(i)] += a * std::exp(-0.5 * d * d);
    }
  }
  int boxes = 1 + static_cast<int>(rng.below(2));
  for (int b = 0; b < boxes; ++b) {
    double c = rng.uniform(lo + 0.08, hi - 0.08);
    double w = rng.uniform(0.02, 0.06);
    double a = rng.uniform(0.4, 1.5);
    for (int i = 0; i < g.n; ++i) {
      double x = g.node(i);
      if (x >= c - w && x <= c + w) raw[static_cast<size_t>(i)] += a;
    }
  }
  return normalize(raw, g);
}

// Smooth bump supported on [lo, hi] (cosine squared).
Signal1D cosine_bump(const Grid1D& g, double lo, double hi) {
  std::vector<double> raw(static_cast<size_t>(g.n), 0.0);
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    if (x <= lo || x >= hi) continue;
    double t = (x - lo) / (hi - lo);
    double c = std::cos(std::numbers::pi * (t - 0.5));
    raw[static_cast<size_t>(i)] = c * c;
  }
  return normalize(raw, g);
}

Image2D truncated_gaussian(const Grid2D& g, double sigma) {
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  double cx = 0.5 * (g.xmin + g.xmax), cy = 0.5 * (g.ymin + g.ymax);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double dx = (g.xnode(i) - cx) / sigma, dy = (g.ynode(j) - cy) / sigma;
      raw[static_cast<size_t>(i) * g.ny + j] = std::exp(-0.5 * (dx * dx + dy * dy));
    }
  return normalize_image(raw, g);
}

// Compactly supported cos^2 bump; zero tails keep projection support edges
// moving exactly with the image under translation.
Image2D compact_bump_2d(const Grid2D& g, double cx, double cy, double radius) {
  std::vector<double> raw(static_cast<size_t>(g.nx) * g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double rr = std::hypot(g.xnode(i) - cx, g.ynode(j) - cy);
      if (rr >= radius) continue;
      double c = std::cos(0.5 * std::numbers::pi * rr / radius);
      raw[static_cast<size_t>(i) * g.ny + j] = c * c;
    }
  return normalize_image(raw, g);
}

double sup_identity_gap(const TransportMap1D& t, double offset, double scale) {
  // gap against x -> scale*x + offset on the map's grid
  double worst = 0.0;
  const Grid1D& g = t.reference_grid();
  for (int i = 0; i < g.n; ++i)
    worst = std::max(worst, std::abs(t.value(i) - (scale * g.node(i) + offset)));
  return worst;
}

}  // namespace

VerifyResult verify_cdt_analytic(int n) {
  VerifyResult res{"cdt-analytic", {}};
  Grid1D gr{0.0, 1.0, n};
  Signal1D r = uniform_signal(gr);

  // translation by mu
  const double mu = 0.25;
  Grid1D gp{-0.5, 1.5, n};
  std::vector<double> raw(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = gp.node(i);
    if (x >= mu && x <= 1.0 + mu) raw[static_cast<size_t>(i)] = 1.0;
  }
  TransportMap1D t1 = cdt_forward(normalize(raw, gp), r);
  res.check_le("translation-sup-gap", sup_identity_gap(t1, mu, 1.0),
               2.0 * std::max(gp.dx(), gr.dx()));

  // scaling h(x) = a x, a = 2: p(x) = 2 r(2x)
  const double a = 2.0;
  std::vector<double> raw2(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = gr.node(i);
    if (x <= 1.0 / a) raw2[static_cast<size_t>(i)] = 1.0;
  }
  TransportMap1D t2 = cdt_forward(normalize(raw2, gr), r);
  res.check_le("scaling-sup-gap", sup_identity_gap(t2, 0.0, 1.0 / a), 2.0 * gr.dx());
  return res;
}

VerifyResult verify_cdt_roundtrip(std::uint64_t seed, int cases, int n) {
  VerifyResult res{"cdt-roundtrip", {}};
  Grid1D g{0.0, 1.0, n};
  Signal1D r = uniform_signal(g);
  Rng rng(derive_seed(seed, "cdt-roundtrip"));
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    double lo = rng.uniform(0.05, 0.25);
    double hi = rng.uniform(0.75, 0.95);
    Signal1D p = random_compact_density(g, lo, hi, rng);
    Signal1D back = cdt_inverse(cdt_forward(p, r), r, g);
    worst = std::max(worst, l1_distance(back, p));
  }
  res.check_le("max-roundtrip-l1", worst, 1e-2);
  return res;
}

VerifyResult verify_composition_1d(std::uint64_t seed, int cases, int n) {
  VerifyResult res{"composition-1d", {}};
  Grid1D g{0.0, 1.0, n};
  Signal1D r = uniform_signal(g);
  Rng rng(derive_seed(seed, "composition-template"));
  Signal1D p = random_compact_density(g, 0.2, 0.7, rng);
  TransportMap1D phat = cdt_forward(p, r);

  auto hs = sample_polynomial_diffeos(5, cases, derive_seed(seed, "composition-diffeos"),
                                      SupportConstraint{0.2, 0.7, 0.0, 1.0});
  double worst = 0.0;
  for (const Diffeo1D& h : hs) {
    TransportMap1D direct = cdt_forward(apply_diffeo_1d(p, h), r);
    TransportMap1D pushed = composition_push(h, phat);
    worst = std::max(worst, sup_gap(direct, pushed));
  }
  res.check_le("max-sup-gap", worst, 3.0 * g.dx());
  return res;
}

VerifyResult verify_w2_embedding(std::uint64_t seed, int pairs, int n) {
  VerifyResult res{"w2-embedding", {}};
  Grid1D g{0.0, 1.0, n};
  Signal1D r = uniform_signal(g);

  // box vs half box: exact distance 1/(2 sqrt 3)
  std::vector<double> half(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    if (g.node(i) <= 0.5) half[static_cast<size_t>(i)] = 1.0;
  Signal1D q = normalize(half, g);
  const double exact = 1.0 / (2.0 * std::sqrt(3.0));
  res.check_le("halfbox-transform-error", std::abs(w2_distance(r, q, r) - exact), 1e-4);
  res.check_le("halfbox-oracle-error", std::abs(w2_quantile_oracle(r, q, 20000) - exact),
               1e-4);

  Rng rng(derive_seed(seed, "w2-pairs"));
  double worst = 0.0;
  for (int c = 0; c < pairs; ++c) {
    Signal1D a = random_positive_density(g, rng);
    Signal1D b = random_positive_density(g, rng);
    double lib = w2_distance(a, b, r);
    double orc = w2_quantile_oracle(a, b, 20000);
    worst = std::max(worst, std::abs(lib - orc) / std::max(orc, 1e-12));
  }
  res.check_le("max-relative-gap", worst, 1e-3);
  return res;
}

VerifyResult verify_convexity_1d(std::uint64_t seed, int trials, int n) {
  VerifyResult res{"convexity-1d", {}};
  Grid1D g{0.0, 1.0, n};
  Signal1D r = uniform_signal(g);
  Signal1D tmpl = cosine_bump(g, 0.35, 0.65);

  auto run_family = [&](const std::string& name, std::vector<Diffeo1D> hs,
                        const GroupSpec1D* group) {
    SignalClass1D c = generate_class(tmpl, std::move(hs));
    WitnessReport w = convexity_witness(c, r, trials, derive_seed(seed, name), group);
    res.check_le(name + "-map-gap", w.max_map_gap, w.map_tol);
    res.check_le(name + "-member-l1", w.max_member_l1, w.member_tol);
    if (group) res.check_le(name + "-group-escapes", w.group_escapes, 0.0);
  };

  Rng rng(derive_seed(seed, "families"));
  {
    std::vector<Diffeo1D> hs;
    for (int i = 0; i < 30; ++i) hs.push_back(Diffeo1D::affine(1.0, rng.uniform(-0.3, 0.3)));
    GroupSpec1D spec = GroupSpec1D::translations();
    run_family("translations", std::move(hs), &spec);
  }
  {
    std::vector<Diffeo1D> hs;
    for (int i = 0; i < 30; ++i) {
      double alpha = rng.uniform(0.85, 1.2);
      double mu = rng.uniform(-0.3, alpha - 0.66);
      hs.push_back(Diffeo1D::affine(alpha, mu));
    }
    GroupSpec1D spec = GroupSpec1D::increasing_affine();
    run_family("increasing-affine", std::move(hs), &spec);
  }
  {
    std::vector<Diffeo1D> hs;
    for (int i = 0; i < 30; ++i) {
      double c = rng.uniform(-0.6, 0.6);
      hs.push_back(Diffeo1D::polynomial({0.0, 1.0 + c, -c}, 0.0, 1.0));
    }
    GroupSpec1D spec = GroupSpec1D::fixing_points({0.0, 1.0});
    run_family("fixed-points", std::move(hs), &spec);
  }
  {
    auto hs = sample_polynomial_diffeos(5, 30, derive_seed(seed, "degree5"),
                                        SupportConstraint{0.35, 0.65, 0.0, 1.0});
    run_family("degree5", std::move(hs), nullptr);
  }

  // Negative control: integer translations with the unit shift excluded from
  // the roster. The midpoint of the shift-0 and shift-2 transforms is the
  // shift-1 transform: a valid map whose density is far from every roster
  // member.
  {
    Grid1D gg{-0.5, 3.5, n};
    Signal1D bump = cosine_bump(gg, 0.1, 0.4);
    SignalClass1D c = generate_class(
        bump, {Diffeo1D::affine(1.0, 0.0), Diffeo1D::affine(1.0, 2.0)});
    auto maps = transform_class(c, r);
    std::vector<double> mid(maps[0].values().size());
    for (size_t k = 0; k < mid.size(); ++k)
      mid[k] = 0.5 * (maps[0].values()[k] + maps[1].values()[k]);
    TransportMap1D M(maps[0].reference_grid(), std::move(mid));
    Signal1D recon = cdt_inverse(M, r, gg);
    double nearest_roster = std::min(l1_distance(recon, c.members[0]),
                                     l1_distance(recon, c.members[1]));
    Signal1D unit_shift = apply_diffeo_1d(bump, Diffeo1D::affine(1.0, 1.0));
    res.check_ge("integer-control-roster-escape", nearest_roster, 0.5);
    res.check_le("integer-control-midpoint-l1", l1_distance(recon, unit_shift), 2e-2);
  }
  return res;
}

VerifyResult verify_separability(std::uint64_t seed, int per_class, int n) {
  VerifyResult res{"separability", {}};
  SeparabilityConfig cfg;
  cfg.count_per_class = per_class;
  cfg.grid_n = n;
  cfg.seed = seed;
  SeparabilityReport rep = separability_experiment(cfg);
  res.check_ge("transform-lda-accuracy", rep.transform_accuracy, 1.0);
  res.check_ge("transform-lda-margin", rep.transform_margin, 1e-12);

  Grid1D g{0.0, 1.0, n};
  Signal1D r = uniform_signal(g);
  auto build = [&](const std::string& tmpl, std::string_view tag) {
    Rng rng(derive_seed(seed, tag));
    std::vector<Diffeo1D> hs;
    int count = std::min(per_class, 100);
    for (int i = 0; i < count; ++i)
      hs.push_back(Diffeo1D::affine(1.0, rng.uniform(-0.3, 0.3)));
    return generate_class(make_template(tmpl, g), std::move(hs));
  };
  PartitionReport part = partition_check(build("one-bump", "part-a"),
                                         build("two-bump", "part-b"), r, 1000,
                                         seed);
  res.check_ge("hull-margin", part.margin, 1e-9);
  return res;
}

VerifyResult verify_hr_group(std::uint64_t seed) {
  VerifyResult res{"hr-group", {}};

  // The quadratic/identity instance: f'(t) = t + 0.1 t^2, g'(t) = t.
  Diffeo2D h = Diffeo2D::hr(Profile::quadratic(0.1, 1.0), Profile::affine(1.0, 0.0));
  Vec2 fwd = h.eval(1.0, 1.0);
  res.check_le("instance-forward", std::hypot(fwd.x - 1.2, fwd.y - 1.2), 1e-10);
  Vec2 bwd = hr_inverse(h).eval(1.2, 1.2);
  res.check_le("instance-inverse", std::hypot(bwd.x - 1.0, bwd.y - 1.0), 1e-10);

  Box2D box;
  res.check_le("instance-curl",
               curl_max([&](double x, double y) { return h.eval(x, y); }, box, 41), 1e-4);

  Rng rng(derive_seed(seed, "hr-pairs"));
  auto random_profile = [&]() {
    if (rng.below(2) == 0) return Profile::affine(rng.uniform(0.85, 1.2), rng.uniform(-0.2, 0.2));
    return Profile::quadratic(rng.uniform(0.01, 0.08), rng.uniform(0.9, 1.15));
  };
  double compose_gap = 0.0, inverse_gap = 0.0, compose_curl = 0.0;
  for (int c = 0; c < 10; ++c) {
    Diffeo2D h1 = Diffeo2D::hr(random_profile(), random_profile());
    Diffeo2D h2 = Diffeo2D::hr(random_profile(), random_profile());
    Diffeo2D hc = hr_compose(h1, h2);
    Diffeo2D hid = hr_compose(h1, hr_inverse(h1));
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        double x = -1.5 + 3.0 * i / 20.0, y = -1.5 + 3.0 * j / 20.0;
        if (hc.in_domain(x, y) && h2.in_domain(x, y)) {
          Vec2 inner = h2.eval(x, y);
          if (h1.in_domain(inner.x, inner.y)) {
            Vec2 a = hc.eval(x, y), b = h1.eval(inner.x, inner.y);
            compose_gap = std::max(compose_gap, std::hypot(a.x - b.x, a.y - b.y));
          }
        }
        if (hid.in_domain(x, y)) {
          Vec2 v = hid.eval(x, y);
          inverse_gap = std::max(inverse_gap, std::hypot(v.x - x, v.y - y));
        }
      }
    Box2D small{-1.0, 1.0, -1.0, 1.0};
    compose_curl = std::max(
        compose_curl,
        curl_max([&](double x, double y) { return hc.eval(x, y); }, small, 33));
  }
  res.check_le("compose-pointwise-gap", compose_gap, 1e-9);
  res.check_le("compose-inverse-identity", inverse_gap, 1e-8);
  res.check_le("compose-curl", compose_curl, 1e-4);
  return res;
}

VerifyResult verify_theorem_4_10(std::uint64_t seed, int pairs, int n) {
  VerifyResult res{"theorem-4-10", {}};
  Grid2D g{-1.0, 1.0, n, -1.0, 1.0, n};
  Image2D r = truncated_gaussian(g, 0.35);
  Rng rng(derive_seed(seed, "t410"));
  auto mild_profile = [&]() {
    return Profile::quadratic(rng.uniform(0.02, 0.08), rng.uniform(0.9, 1.1));
  };
  double two_path = 0.0, lp_gap = 0.0;
  const double cell = std::max(g.dx(), g.dy());
  for (int c = 0; c < pairs; ++c) {
    Diffeo2D h = Diffeo2D::hr(mild_profile(), mild_profile());
    Diffeo2D gm = Diffeo2D::hr(mild_profile(), mild_profile());
    PrMember m = generate_pr_member(r, h);
    Diffeo2D composed = hr_compose(hr_inverse(gm), h);
    PrMember direct = generate_pr_member(r, composed);

    TransportMap2D t1 = lot_compose_pr(m, gm);
    TransportMap2D t2 = lot_forward_pr(direct);
    for (size_t k = 0; k < t1.values.size(); ++k)
      if (t1.valid[k] && t2.valid[k])
        two_path = std::max(two_path, std::hypot(t1.values[k].x - t2.values[k].x,
                                                 t1.values[k].y - t2.values[k].y));

    CouplingPlan plan = kantorovich_lp_2d(r, direct.density, 400);
    lp_gap = std::max(lp_gap, mean_displacement(t1, barycentric_map(plan), r));
  }
  res.check_le("two-path-pointwise", two_path, 1e-8);
  res.check_le("lp-mean-displacement", lp_gap, 1.5 * cell);
  return res;
}

VerifyResult verify_theorem_4_5(int n) {
  VerifyResult res{"theorem-4-5", {}};
  ViolationReport rep = composition_violation_demo(Mat2{2.0, 0.0, 0.0, 1.0},
                                                   Mat2{2.0, 1.0, 1.0, 2.0}, n);
  const double cell = 2.0 / (n - 1);
  res.check_ge("violation-ratio", rep.ratio, 5.0);
  res.check_le("control-gap", rep.control_gap, cell);
  return res;
}

VerifyResult verify_rcdt_shift(std::uint64_t seed, int translations, int k, int image_n) {
  VerifyResult res{"rcdt-shift", {}};
  Grid2D g{-1.0, 1.0, image_n, -1.0, 1.0, image_n};
  Image2D base = compact_bump_2d(g, 0.0, 0.0, 0.5);
  Grid1D offset{-1.5, 1.5, 181};
  Signal1D r1 = uniform_reference(offset);
  auto angles = uniform_angles(k);
  RcdtStack base_stack = rcdt(base, r1, angles);

  Rng rng(derive_seed(seed, "rcdt-shift"));
  double worst = 0.0;
  for (int c = 0; c < translations; ++c) {
    double tx = rng.uniform(-0.2, 0.2), ty = rng.uniform(-0.2, 0.2);
    // apply_diffeo_2d with h(x) = x + u yields p(x + u): a shift by -u.
    Image2D shifted = apply_diffeo_2d(base, Diffeo2D::ha(1.0, {-tx, -ty}));
    RcdtStack stack = rcdt(shifted, r1, angles);
    for (int a = 0; a < k; ++a) {
      double proj_shift = tx * std::cos(angles[static_cast<size_t>(a)]) +
                          ty * std::sin(angles[static_cast<size_t>(a)]);
      const auto& t0 = base_stack.maps[static_cast<size_t>(a)];
      const auto& t1 = stack.maps[static_cast<size_t>(a)];
      for (int i = 0; i < t0.n(); ++i)
        worst = std::max(worst, std::abs(t1.value(i) - (t0.value(i) + proj_shift)));
    }
  }
  res.check_le("max-shift-gap", worst, 3.0 * offset.dx());
  return res;
}

}  // namespace otsig
