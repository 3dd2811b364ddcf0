#include "otsig/diffeo1d.hpp"

#include <algorithm>
#include <cmath>

#include "otsig/rng.hpp"

namespace otsig {

namespace {

constexpr int kScanPoints = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

double poly_eval(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (size_t k = c.size(); k-- > 0;) y = y * x + c[k];
  return y;
}

double poly_deriv(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (size_t k = c.size(); k-- > 1;) y = y * x + c[k] * static_cast<double>(k);
  return y;
}

// Piecewise-linear table lookup on strictly increasing nodes.
double table_eval(const SampledMonotone1D& t, double x) {
  const auto& xs = t.nodes;
  const auto& ys = t.values;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t i = (it == xs.begin()) ? 0 : static_cast<size_t>(it - xs.begin()) - 1;
  if (i >= xs.size() - 1) i = xs.size() - 2;
  double f = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + f * (ys[i + 1] - ys[i]);
}

}  // namespace

Diffeo1D Diffeo1D::affine(double alpha, double mu) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::NotInvertible, "affine map requires alpha > 0");
  return Diffeo1D(AffineMap1D{alpha, mu});
}

Diffeo1D Diffeo1D::polynomial(std::vector<double> coeffs, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::OutOfRange, "polynomial validity interval is empty");
  if (coeffs.empty()) throw Error(ErrorCode::OutOfRange, "polynomial has no coefficients");
  PolynomialMonotone1D p{std::move(coeffs), a, b};
  for (int i = 0; i < kScanPoints; ++i) {
    double x = a + (b - a) * i / (kScanPoints - 1);
    if (!(poly_deriv(p.coeffs, x) > 0.0))
      throw Error(ErrorCode::NotInvertible, "polynomial derivative not positive on [a,b]");
  }
  return Diffeo1D(Rep(std::move(p)));
}

Diffeo1D Diffeo1D::sampled(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() != values.size() || nodes.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "sampled table needs matching arrays, size >= 2");
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]) || !(values[i] > values[i - 1]))
      throw Error(ErrorCode::NotInvertible, "sampled table must be strictly increasing");
  }
  return Diffeo1D(Rep(SampledMonotone1D{std::move(nodes), std::move(values)}));
}

double Diffeo1D::domain_lo() const {
  if (auto* p = std::get_if<PolynomialMonotone1D>(&rep_)) return p->a;
  if (auto* s = std::get_if<SampledMonotone1D>(&rep_)) return s->nodes.front();
  return -kInf;
}

double Diffeo1D::domain_hi() const {
  if (auto* p = std::get_if<PolynomialMonotone1D>(&rep_)) return p->b;
  if (auto* s = std::get_if<SampledMonotone1D>(&rep_)) return s->nodes.back();
  return kInf;
}

double Diffeo1D::eval(double x) const {
  constexpr double slack = 1e-12;
  if (x < domain_lo() - slack || x > domain_hi() + slack)
    throw Error(ErrorCode::OutOfDomain, "eval outside validity interval");
  if (auto* a = std::get_if<AffineMap1D>(&rep_)) return a->alpha * x - a->mu;
  if (auto* p = std::get_if<PolynomialMonotone1D>(&rep_)) return poly_eval(p->coeffs, x);
  return table_eval(std::get<SampledMonotone1D>(rep_), x);
}

double Diffeo1D::derivative(double x) const {
  constexpr double slack = 1e-12;
  if (x < domain_lo() - slack || x > domain_hi() + slack)
    throw Error(ErrorCode::OutOfDomain, "derivative outside validity interval");
  if (auto* a = std::get_if<AffineMap1D>(&rep_)) return a->alpha;
  if (auto* p = std::get_if<PolynomialMonotone1D>(&rep_)) return poly_deriv(p->coeffs, x);
  const auto& t = std::get<SampledMonotone1D>(rep_);
  double h = (t.nodes.back() - t.nodes.front()) / (t.nodes.size() - 1);
  double lo = std::max(t.nodes.front(), x - h);
  double hi = std::min(t.nodes.back(), x + h);
  return (table_eval(t, hi) - table_eval(t, lo)) / (hi - lo);
}

Diffeo1D inverse(const Diffeo1D& h) {
  if (auto* a = std::get_if<AffineMap1D>(&h.rep())) {
    // y = alpha x - mu  =>  x = y/alpha + mu/alpha
    return Diffeo1D::affine(1.0 / a->alpha, -a->mu / a->alpha);
  }
  if (auto* s = std::get_if<SampledMonotone1D>(&h.rep())) {
    // Piecewise-linear inverse is the swapped table.
    return Diffeo1D::sampled(s->values, s->nodes);
  }
  const auto& p = std::get<PolynomialMonotone1D>(h.rep());
  double ya = poly_eval(p.coeffs, p.a);
  double yb = poly_eval(p.coeffs, p.b);
  std::vector<double> nodes(kScanPoints), values(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    double y = ya + (yb - ya) * i / (kScanPoints - 1);
    double lo = p.a, hi = p.b;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      if (poly_eval(p.coeffs, mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    nodes[i] = y;
    values[i] = 0.5 * (lo + hi);
  }
  nodes.front() = ya;
  values.front() = p.a;
  nodes.back() = yb;
  values.back() = p.b;
  return Diffeo1D::sampled(std::move(nodes), std::move(values));
}

Diffeo1D compose(const Diffeo1D& h1, const Diffeo1D& h2) {
  auto* a1 = std::get_if<AffineMap1D>(&h1.rep());
  auto* a2 = std::get_if<AffineMap1D>(&h2.rep());
  if (a1 && a2) {
    // a1.alpha (a2.alpha x - a2.mu) - a1.mu
    return Diffeo1D::affine(a1->alpha * a2->alpha, a1->alpha * a2->mu + a1->mu);
  }
  // Domain of the composite: x in dom(h2) with h2(x) in dom(h1).
  double lo = h2.domain_lo(), hi = h2.domain_hi();
  if (h1.bounded()) {
    Diffeo1D h2inv = inverse(h2);
    double lo1 = h1.domain_lo(), hi1 = h1.domain_hi();
    if (h2.bounded()) {
      double range_lo = h2.eval(lo), range_hi = h2.eval(hi);
      if (range_hi < lo1 || range_lo > hi1)
        throw Error(ErrorCode::DomainMismatch, "range of h2 misses domain of h1");
      if (lo1 > range_lo) lo = h2inv.eval(lo1);
      if (hi1 < range_hi) hi = h2inv.eval(hi1);
    } else {
      lo = h2inv.eval(lo1);
      hi = h2inv.eval(hi1);
    }
  }
  if (!(lo < hi)) throw Error(ErrorCode::DomainMismatch, "empty composite domain");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::DomainMismatch, "composition of unbounded non-affine maps");
  std::vector<double> nodes(kScanPoints), values(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    double x = lo + (hi - lo) * i / (kScanPoints - 1);
    nodes[i] = x;
    values[i] = h1.eval(h2.eval(x));
  }
  return Diffeo1D::sampled(std::move(nodes), std::move(values));
}

Diffeo1D convex_combo_of_inverses(const Diffeo1D& h1, const Diffeo1D& h2, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw Error(ErrorCode::OutOfRange, "combination weight must be in [0,1]");
  if (alpha == 1.0) return h1;
  if (alpha == 0.0) return h2;
  Diffeo1D i1 = inverse(h1);
  Diffeo1D i2 = inverse(h2);
  auto* a1 = std::get_if<AffineMap1D>(&i1.rep());
  auto* a2 = std::get_if<AffineMap1D>(&i2.rep());
  if (a1 && a2) {
    double alpha_c = alpha * a1->alpha + (1.0 - alpha) * a2->alpha;
    double mu_c = alpha * a1->mu + (1.0 - alpha) * a2->mu;
    return inverse(Diffeo1D::affine(alpha_c, mu_c));
  }
  double lo = std::max(i1.domain_lo(), i2.domain_lo());
  double hi = std::min(i1.domain_hi(), i2.domain_hi());
  if (!(lo < hi)) throw Error(ErrorCode::DomainMismatch, "inverse domains do not overlap");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::DomainMismatch, "combination needs a bounded shared domain");
  std::vector<double> ys(kScanPoints), xs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    double y = lo + (hi - lo) * i / (kScanPoints - 1);
    ys[i] = y;
    xs[i] = alpha * i1.eval(y) + (1.0 - alpha) * i2.eval(y);
  }
  // xs is the combined inverse sampled over ys; the forward map is the swap.
  return Diffeo1D::sampled(std::move(xs), std::move(ys));
}

GroupSpec1D GroupSpec1D::fixing_points(std::vector<double> xs) {
  if (xs.empty()) throw Error(ErrorCode::OutOfRange, "fixed point set must be nonempty");
  return {Kind::FixedPoints, std::move(xs), 0, 1};
}

GroupSpec1D GroupSpec1D::fixing_interval(double lo, double hi) {
  if (!(lo <= hi)) throw Error(ErrorCode::OutOfRange, "fixed interval is empty");
  return {Kind::FixedInterval, {}, lo, hi};
}

bool group_membership(const GroupSpec1D& g, const Diffeo1D& h, double tol) {
  constexpr int kMembershipScan = 1024;
  double lo = h.bounded() ? h.domain_lo() : -1.0;
  double hi = h.bounded() ? h.domain_hi() : 2.0;
  auto scan_max = [&](auto&& residual, double a, double b) {
    double m = 0.0;
    for (int i = 0; i < kMembershipScan; ++i) {
      double x = a + (b - a) * i / (kMembershipScan - 1);
      m = std::max(m, std::abs(residual(x)));
    }
    return m;
  };
  switch (g.kind) {
    case GroupSpec1D::Kind::Identity:
      return scan_max([&](double x) { return h.eval(x) - x; }, lo, hi) <= tol;
    case GroupSpec1D::Kind::IsotropicScaling: {
      double a = (h.eval(hi) - h.eval(lo)) / (hi - lo);
      if (!(a > 0.0)) return false;
      return scan_max([&](double x) { return h.eval(x) - a * x; }, lo, hi) <= tol;
    }
    case GroupSpec1D::Kind::Translations: {
      double c = h.eval(lo) - lo;
      return scan_max([&](double x) { return h.eval(x) - x - c; }, lo, hi) <= tol;
    }
    case GroupSpec1D::Kind::IncreasingAffine: {
      double a = (h.eval(hi) - h.eval(lo)) / (hi - lo);
      if (!(a > 0.0)) return false;
      double c = h.eval(lo) - a * lo;
      return scan_max([&](double x) { return h.eval(x) - (a * x + c); }, lo, hi) <= tol;
    }
    case GroupSpec1D::Kind::FixedPoints: {
      // Sampled maps can carry domain endpoints a few ulps inside the exact
      // ones; a fixed point within tol of the domain still counts.
      for (double x0 : g.fixed_points) {
        if (x0 < h.domain_lo() - tol || x0 > h.domain_hi() + tol) return false;
        double xe = std::clamp(x0, h.domain_lo(), h.domain_hi());
        if (std::abs(h.eval(xe) - x0) > tol) return false;
      }
      return true;
    }
    case GroupSpec1D::Kind::FixedInterval: {
      if (g.interval_lo < h.domain_lo() - tol || g.interval_hi > h.domain_hi() + tol)
        return false;
      double a = std::clamp(g.interval_lo, h.domain_lo(), h.domain_hi());
      double b = std::clamp(g.interval_hi, h.domain_lo(), h.domain_hi());
      if (a == b) return std::abs(h.eval(a) - g.interval_lo) <= tol;
      return scan_max([&](double x) { return h.eval(x) - x; }, a, b) <= tol;
    }
  }
  return false;
}

std::vector<CoeffBox> default_coeff_boxes(int degree) {
  std::vector<CoeffBox> boxes(static_cast<size_t>(degree) + 1);
  boxes[0] = {-0.05, 0.05};
  boxes[1] = {0.75, 1.25};
  for (int k = 2; k <= degree; ++k) boxes[static_cast<size_t>(k)] = {-0.1, 0.1};
  return boxes;
}

std::vector<Diffeo1D> sample_polynomial_diffeos(int degree, int count, std::uint64_t seed,
                                                const SupportConstraint& constraint,
                                                std::vector<CoeffBox> boxes) {
  if (degree < 1 || count < 1)
    throw Error(ErrorCode::OutOfRange, "sampler needs degree >= 1 and count >= 1");
  if (boxes.empty()) boxes = default_coeff_boxes(degree);
  if (boxes.size() != static_cast<size_t>(degree) + 1)
    throw Error(ErrorCode::DimensionMismatch, "need one coefficient box per degree");
  Rng rng(seed);
  std::vector<Diffeo1D> out;
  out.reserve(static_cast<size_t>(count));
  const double a = constraint.domain_lo, b = constraint.domain_hi;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    ++attempts;
    if (attempts >= 10000 && static_cast<double>(out.size()) / attempts < 1e-4)
      throw Error(ErrorCode::SamplingExhausted, "acceptance rate below 1/10000");
    std::vector<double> c(boxes.size());
    for (size_t k = 0; k < boxes.size(); ++k) c[k] = rng.uniform(boxes[k].lo, boxes[k].hi);
    // Positivity of h' on [a,b].
    bool increasing = true;
    for (int i = 0; i < kScanPoints && increasing; ++i) {
      double x = a + (b - a) * i / (kScanPoints - 1);
      increasing = poly_deriv(c, x) > 0.0;
    }
    if (!increasing) continue;
    // Support containment: h^{-1}(supp) inside [a,b]  <=>  h(a) <= lo, h(b) >= hi.
    if (poly_eval(c, a) > constraint.support_lo) continue;
    if (poly_eval(c, b) < constraint.support_hi) continue;
    out.push_back(Diffeo1D::polynomial(std::move(c), a, b));
  }
  return out;
}

}  // namespace otsig
