#include "otsig/diffeo2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otsig {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Mat2 mat_inverse(const Mat2& m) {
  double d = m.det();
  if (std::abs(d) < 1e-300) throw Error(ErrorCode::NotInvertible, "singular 2x2 matrix");
  return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

class Profile::Impl {
 public:
  virtual ~Impl() = default;
  virtual double eval(double t) const = 0;
  virtual double deriv(double t) const = 0;
  virtual double anti(double t) const = 0;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual std::shared_ptr<const Impl> invert() const = 0;
};

namespace {

void check_range(double t, double lo, double hi, const char* what) {
  if (t < lo - 1e-12 || t > hi + 1e-12)
    throw Error(ErrorCode::OutOfDomain, what);
}

class AffineProfile final : public Profile::Impl {
 public:
  AffineProfile(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0)) throw Error(ErrorCode::NotInvertible, "affine profile needs a > 0");
  }
  double eval(double t) const override { return a_ * t + b_; }
  double deriv(double) const override { return a_; }
  double anti(double t) const override { return 0.5 * a_ * t * t + b_ * t; }
  double lo() const override { return -kInf; }
  double hi() const override { return kInf; }
  std::shared_ptr<const Profile::Impl> invert() const override {
    return std::make_shared<AffineProfile>(1.0 / a_, -b_ / a_);
  }

 private:
  double a_, b_;
};

class QuadraticInverseProfile;

// f'(t) = b t + a t^2 on the increasing half-line t > -b/(2a).
class QuadraticProfile final : public Profile::Impl {
 public:
  QuadraticProfile(double a, double b) : a_(a), b_(b) {
    if (!(b > 0.0) || !(a > 0.0))
      throw Error(ErrorCode::NotInvertible, "quadratic profile needs a > 0, b > 0");
  }
  double eval(double t) const override {
    check_range(t, lo(), hi(), "quadratic profile evaluated past its vertex");
    return b_ * t + a_ * t * t;
  }
  double deriv(double t) const override {
    check_range(t, lo(), hi(), "quadratic profile evaluated past its vertex");
    return b_ + 2.0 * a_ * t;
  }
  double anti(double t) const override {
    check_range(t, lo(), hi(), "quadratic profile evaluated past its vertex");
    return 0.5 * b_ * t * t + a_ * t * t * t / 3.0;
  }
  double lo() const override { return -b_ / (2.0 * a_); }
  double hi() const override { return kInf; }
  std::shared_ptr<const Profile::Impl> invert() const override;

 private:
  double a_, b_;
};

// Quadratic-formula inverse of the profile above: s -> (-b + sqrt(b^2+4as)) / (2a).
class QuadraticInverseProfile final : public Profile::Impl {
 public:
  QuadraticInverseProfile(double a, double b) : a_(a), b_(b) {}
  double eval(double s) const override {
    double disc = disc_at(s);
    return (-b_ + std::sqrt(disc)) / (2.0 * a_);
  }
  double deriv(double s) const override { return 1.0 / std::sqrt(disc_at(s)); }
  double anti(double s) const override {
    double disc = disc_at(s);
    return (-b_ * s + (std::pow(disc, 1.5) - b_ * b_ * b_) / (6.0 * a_)) / (2.0 * a_);
  }
  double lo() const override { return -b_ * b_ / (4.0 * a_); }
  double hi() const override { return kInf; }
  std::shared_ptr<const Profile::Impl> invert() const override {
    return std::make_shared<QuadraticProfile>(a_, b_);
  }

 private:
  double disc_at(double s) const {
    double disc = b_ * b_ + 4.0 * a_ * s;
    if (disc < 0.0)
      throw Error(ErrorCode::OutOfDomain, "inverse quadratic profile below its branch point");
    return disc;
  }
  double a_, b_;
};

std::shared_ptr<const Profile::Impl> QuadraticProfile::invert() const {
  return std::make_shared<QuadraticInverseProfile>(a_, b_);
}

class SampledProfile final : public Profile::Impl {
 public:
  SampledProfile(std::vector<double> nodes, std::vector<double> values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size() || nodes_.size() < 2)
      throw Error(ErrorCode::DimensionMismatch, "profile table needs matching arrays");
    for (size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1]) || !(values_[i] > values_[i - 1]))
        throw Error(ErrorCode::NotInvertible, "profile table must be strictly increasing");
    // Exact antiderivative of the piecewise-linear profile, anchored so that
    // anti(0) = 0 when 0 is inside the table (anti(lo) = 0 otherwise).
    cum_.resize(nodes_.size(), 0.0);
    for (size_t i = 1; i < nodes_.size(); ++i)
      cum_[i] = cum_[i - 1] +
                0.5 * (values_[i - 1] + values_[i]) * (nodes_[i] - nodes_[i - 1]);
    if (nodes_.front() <= 0.0 && nodes_.back() >= 0.0) {
      double at0 = anti_raw(0.0);
      for (double& c : cum_) c -= at0;
    }
  }
  double eval(double t) const override {
    check_range(t, lo(), hi(), "sampled profile out of its table");
    return interp(t);
  }
  double deriv(double t) const override {
    check_range(t, lo(), hi(), "sampled profile out of its table");
    double h = (nodes_.back() - nodes_.front()) / (nodes_.size() - 1);
    double a = std::max(nodes_.front(), t - h);
    double b = std::min(nodes_.back(), t + h);
    return (interp(b) - interp(a)) / (b - a);
  }
  double anti(double t) const override {
    check_range(t, lo(), hi(), "sampled profile out of its table");
    return anti_raw(t);
  }
  double lo() const override { return nodes_.front(); }
  double hi() const override { return nodes_.back(); }
  std::shared_ptr<const Profile::Impl> invert() const override {
    return std::make_shared<SampledProfile>(values_, nodes_);
  }

 private:
  size_t segment(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    size_t i = (it == nodes_.begin()) ? 0 : static_cast<size_t>(it - nodes_.begin()) - 1;
    return std::min(i, nodes_.size() - 2);
  }
  double interp(double t) const {
    size_t i = segment(t);
    double f = (t - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return values_[i] + f * (values_[i + 1] - values_[i]);
  }
  double anti_raw(double t) const {
    size_t i = segment(t);
    return cum_[i] + 0.5 * (values_[i] + interp(t)) * (t - nodes_[i]);
  }
  std::vector<double> nodes_, values_;
  std::vector<double> cum_;
};

class ComposedProfile final : public Profile::Impl {
 public:
  ComposedProfile(std::shared_ptr<const Profile::Impl> outer,
                  std::shared_ptr<const Profile::Impl> inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {
    lo_ = inner_->lo();
    hi_ = inner_->hi();
    auto inner_inv = inner_->invert();
    if (outer_->lo() > inner_inv->lo())
      lo_ = std::max(lo_, inner_inv->eval(outer_->lo()));
    if (outer_->hi() < inner_inv->hi())
      hi_ = std::min(hi_, inner_inv->eval(outer_->hi()));
    if (!(lo_ < hi_))
      throw Error(ErrorCode::DomainMismatch, "composed profile has empty domain");
  }
  double eval(double t) const override {
    check_range(t, lo_, hi_, "composed profile out of domain");
    return outer_->eval(inner_->eval(t));
  }
  double deriv(double t) const override {
    check_range(t, lo_, hi_, "composed profile out of domain");
    return outer_->deriv(inner_->eval(t)) * inner_->deriv(t);
  }
  double anti(double t) const override {
    // Composite Simpson from the anchor; composed antiderivatives have no
    // closed form in general.
    check_range(t, lo_, hi_, "composed profile out of domain");
    double base = (lo_ <= 0.0 && hi_ >= 0.0) ? 0.0 : lo_;
    const int segments = 512;
    double hstep = (t - base) / segments;
    if (hstep == 0.0) return 0.0;
    double s = eval(base) + eval(t);
    for (int i = 1; i < segments; ++i)
      s += (i % 2 ? 4.0 : 2.0) * eval(base + hstep * i);
    return s * hstep / 3.0;
  }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  std::shared_ptr<const Profile::Impl> invert() const override {
    return std::make_shared<ComposedProfile>(inner_->invert(), outer_->invert());
  }

 private:
  std::shared_ptr<const Profile::Impl> outer_, inner_;
  double lo_, hi_;
};

const AffineProfile* as_affine(const Profile& p) {
  return dynamic_cast<const AffineProfile*>(&p.impl());
}

}  // namespace

Profile Profile::affine(double a, double b) {
  return Profile(std::make_shared<AffineProfile>(a, b));
}

Profile Profile::quadratic(double a, double b) {
  if (a == 0.0) return affine(b, 0.0);  // f'(t) = b t
  return Profile(std::make_shared<QuadraticProfile>(a, b));
}

Profile Profile::sampled(std::vector<double> nodes, std::vector<double> values) {
  return Profile(std::make_shared<SampledProfile>(std::move(nodes), std::move(values)));
}

Profile Profile::composed(const Profile& outer, const Profile& inner) {
  // Affine pairs stay exact so Ha/Hs algebra does not decay numerically.
  if (auto* ao = as_affine(outer)) {
    if (auto* ai = as_affine(inner)) {
      double a_o = ao->eval(1.0) - ao->eval(0.0), b_o = ao->eval(0.0);
      double a_i = ai->eval(1.0) - ai->eval(0.0), b_i = ai->eval(0.0);
      return affine(a_o * a_i, a_o * b_i + b_o);
    }
  }
  return Profile(
      std::make_shared<ComposedProfile>(outer.shared_impl(), inner.shared_impl()));
}

double Profile::eval(double t) const { return impl_->eval(t); }
double Profile::deriv(double t) const { return impl_->deriv(t); }
double Profile::anti(double t) const { return impl_->anti(t); }
Profile Profile::inverted() const { return Profile(impl_->invert()); }
double Profile::lo() const { return impl_->lo(); }
double Profile::hi() const { return impl_->hi(); }
bool Profile::contains(double t) const { return t >= lo() - 1e-12 && t <= hi() + 1e-12; }

Diffeo2D Diffeo2D::ha(double a, Vec2 u) {
  if (!(a > 0.0)) throw Error(ErrorCode::NotInvertible, "Ha requires a > 0");
  return Diffeo2D(Rep(HaForm{a, u}));
}

Diffeo2D Diffeo2D::hs(double a1, double a2, double b1, double b2) {
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw Error(ErrorCode::NotInvertible, "Hs requires a1, a2 > 0");
  return Diffeo2D(Rep(HsForm{a1, a2, b1, b2}));
}

Diffeo2D Diffeo2D::hr(Profile fp, Profile gp) {
  return Diffeo2D(Rep(HrForm{std::move(fp), std::move(gp)}));
}

namespace {

Vec2 hs_shift(const HsForm& s) { return {0.5 * (s.b1 + s.b2), 0.5 * (s.b1 - s.b2)}; }

Mat2 hs_matrix(const HsForm& s) {
  return {s.a1 + s.a2, s.a1 - s.a2, s.a1 - s.a2, s.a1 + s.a2};
}

}  // namespace

bool Diffeo2D::in_domain(double x, double y) const {
  if (auto* r = std::get_if<HrForm>(&rep_))
    return r->fp.contains(x + y) && r->gp.contains(x - y);
  return true;
}

Vec2 Diffeo2D::eval(double x, double y) const {
  if (auto* a = std::get_if<HaForm>(&rep_))
    return {a->a * x + a->u.x, a->a * y + a->u.y};
  if (auto* s = std::get_if<HsForm>(&rep_)) {
    Vec2 v = mat_apply(hs_matrix(*s), {x, y});
    Vec2 u = hs_shift(*s);
    return {v.x + u.x, v.y + u.y};
  }
  const auto& r = std::get<HrForm>(rep_);
  double fv = r.fp.eval(x + y);
  double gv = r.gp.eval(x - y);
  return {0.5 * (fv + gv), 0.5 * (fv - gv)};
}

Mat2 Diffeo2D::jacobian(double x, double y) const {
  if (auto* a = std::get_if<HaForm>(&rep_)) return {a->a, 0.0, 0.0, a->a};
  if (auto* s = std::get_if<HsForm>(&rep_)) return hs_matrix(*s);
  const auto& r = std::get<HrForm>(rep_);
  double fpp = r.fp.deriv(x + y);
  double gpp = r.gp.deriv(x - y);
  return {0.5 * (fpp + gpp), 0.5 * (fpp - gpp), 0.5 * (fpp - gpp), 0.5 * (fpp + gpp)};
}

Diffeo2D to_hr(const Diffeo2D& h) {
  if (auto* a = std::get_if<HaForm>(&h.rep()))
    return Diffeo2D::hr(Profile::affine(a->a, a->u.x + a->u.y),
                        Profile::affine(a->a, a->u.x - a->u.y));
  if (auto* s = std::get_if<HsForm>(&h.rep()))
    return Diffeo2D::hr(Profile::affine(2.0 * s->a1, s->b1),
                        Profile::affine(2.0 * s->a2, s->b2));
  return h;
}

Diffeo2D hr_inverse(const Diffeo2D& h) {
  if (auto* a = std::get_if<HaForm>(&h.rep()))
    return Diffeo2D::ha(1.0 / a->a, {-a->u.x / a->a, -a->u.y / a->a});
  if (auto* s = std::get_if<HsForm>(&h.rep())) {
    double a1 = 1.0 / (4.0 * s->a1), a2 = 1.0 / (4.0 * s->a2);
    Vec2 u = hs_shift(*s);
    Vec2 w = mat_apply(mat_inverse(hs_matrix(*s)), u);
    Vec2 up{-w.x, -w.y};
    return Diffeo2D::hs(a1, a2, up.x + up.y, up.x - up.y);
  }
  const auto& r = std::get<HrForm>(h.rep());
  return Diffeo2D::hr(r.fp.inverted(), r.gp.inverted());
}

Diffeo2D hr_compose(const Diffeo2D& h1, const Diffeo2D& h2) {
  auto* a1 = std::get_if<HaForm>(&h1.rep());
  auto* a2 = std::get_if<HaForm>(&h2.rep());
  if (a1 && a2)
    return Diffeo2D::ha(a1->a * a2->a,
                        {a1->a * a2->u.x + a1->u.x, a1->a * a2->u.y + a1->u.y});
  bool affine1 = a1 || std::holds_alternative<HsForm>(h1.rep());
  bool affine2 = a2 || std::holds_alternative<HsForm>(h2.rep());
  if (affine1 && affine2) {
    auto as_hs = [](const Diffeo2D& d) -> HsForm {
      if (auto* a = std::get_if<HaForm>(&d.rep()))
        return HsForm{0.5 * a->a, 0.5 * a->a, a->u.x + a->u.y, a->u.x - a->u.y};
      return std::get<HsForm>(d.rep());
    };
    HsForm s1 = as_hs(h1), s2 = as_hs(h2);
    double na1 = 2.0 * s1.a1 * s2.a1, na2 = 2.0 * s1.a2 * s2.a2;
    Vec2 u1 = hs_shift(s1), u2 = hs_shift(s2);
    Vec2 v = mat_apply(hs_matrix(s1), u2);
    Vec2 u{v.x + u1.x, v.y + u1.y};
    return Diffeo2D::hs(na1, na2, u.x + u.y, u.x - u.y);
  }
  Diffeo2D r1 = to_hr(h1), r2 = to_hr(h2);
  const auto& f1 = std::get<HrForm>(r1.rep());
  const auto& f2 = std::get<HrForm>(r2.rep());
  return Diffeo2D::hr(Profile::composed(f1.fp, f2.fp), Profile::composed(f1.gp, f2.gp));
}

double potential_value(const Diffeo2D& h, double x, double y) {
  Diffeo2D r = to_hr(h);
  const auto& f = std::get<HrForm>(r.rep());
  return 0.5 * (f.fp.anti(x + y) + f.gp.anti(x - y));
}

double curl_max(const std::function<Vec2(double, double)>& field, const Box2D& box, int n) {
  if (n < 3) throw Error(ErrorCode::OutOfRange, "curl scan needs n >= 3");
  double hx = (box.xmax - box.xmin) / (n - 1);
  double hy = (box.ymax - box.ymin) / (n - 1);
  double m = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    double x = box.xmin + hx * i;
    for (int j = 1; j + 1 < n; ++j) {
      double y = box.ymin + hy * j;
      double dh1_dy = (field(x, y + hy).x - field(x, y - hy).x) / (2.0 * hy);
      double dh2_dx = (field(x + hx, y).y - field(x - hx, y).y) / (2.0 * hx);
      m = std::max(m, std::abs(dh1_dy - dh2_dx));
    }
  }
  return m;
}

bool is_curl_free(const Diffeo2D& h, const Box2D& box, int n, double tol) {
  return curl_max([&](double x, double y) { return h.eval(x, y); }, box, n) < tol;
}

bool hs_membership(const Mat2& A, const Vec2& /*u*/, double tol) {
  if (std::abs(A.a12 - A.a21) > tol) return false;
  if (std::abs(A.a11 - A.a22) > tol) return false;
  double a1 = 0.5 * (A.a11 + A.a12);
  double a2 = 0.5 * (A.a11 - A.a12);
  return a1 > 0.0 && a2 > 0.0;
}

}  // namespace otsig
