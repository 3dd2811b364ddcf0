#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "otsig/errors.hpp"

namespace otsig {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
  double det() const { return a11 * a22 - a12 * a21; }
};

inline Vec2 mat_apply(const Mat2& m, Vec2 v) {
  return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
}

Mat2 mat_inverse(const Mat2& m);

// A strictly increasing profile t -> f'(t), together with its derivative f''
// and the antiderivative f normalized by f(0) = 0. Closed under inversion and
// composition; affine and quadratic forms stay exact, including the
// quadratic-formula inverse.
class Profile {
 public:
  class Impl;

  // f'(t) = a t + b, a > 0
  static Profile affine(double a, double b);
  // f'(t) = b t + a t^2 with b > 0, a >= 0; valid on t > -b/(2a)
  static Profile quadratic(double a, double b);
  // strictly increasing piecewise-linear table
  static Profile sampled(std::vector<double> nodes, std::vector<double> values);
  static Profile composed(const Profile& outer, const Profile& inner);

  double eval(double t) const;
  double deriv(double t) const;
  double anti(double t) const;
  Profile inverted() const;
  double lo() const;  // validity interval (may be +-inf)
  double hi() const;
  bool contains(double t) const;

  const Impl& impl() const { return *impl_; }
  const std::shared_ptr<const Impl>& shared_impl() const { return impl_; }

 private:
  explicit Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct HaForm {
  double a = 1.0;  // a > 0
  Vec2 u;
};

// h(x,y) = A (x,y) + (b1-b2, b1+b2) with A = [[a1+a2, a1-a2], [a1-a2, a1+a2]].
struct HsForm {
  double a1 = 0.5, a2 = 0.5;  // both > 0
  double b1 = 0.0, b2 = 0.0;
};

// h(x,y) = 1/2 (f'(x+y)+g'(x-y), f'(x+y)-g'(x-y)).
struct HrForm {
  Profile fp;
  Profile gp;
};

class Diffeo2D {
 public:
  using Rep = std::variant<HaForm, HsForm, HrForm>;

  static Diffeo2D identity() { return ha(1.0, {0.0, 0.0}); }
  static Diffeo2D ha(double a, Vec2 u);
  static Diffeo2D hs(double a1, double a2, double b1, double b2);
  static Diffeo2D hr(Profile fp, Profile gp);

  const Rep& rep() const { return rep_; }
  bool is_hr() const { return std::holds_alternative<HrForm>(rep_); }

  bool in_domain(double x, double y) const;
  Vec2 eval(double x, double y) const;   // throws OutOfDomain
  Mat2 jacobian(double x, double y) const;

 private:
  explicit Diffeo2D(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

inline Vec2 eval2(const Diffeo2D& h, double x, double y) { return h.eval(x, y); }
inline Mat2 jacobian(const Diffeo2D& h, double x, double y) { return h.jacobian(x, y); }

// Express any variant through its Hr profiles (exact affine profiles for
// Ha and Hs).
Diffeo2D to_hr(const Diffeo2D& h);

// Profile-wise inverse; Ha and Hs stay in closed form.
Diffeo2D hr_inverse(const Diffeo2D& h);

// h1 after h2 via composed profiles; Ha/Hs pairs stay in closed form.
Diffeo2D hr_compose(const Diffeo2D& h1, const Diffeo2D& h2);

// The convex potential with h = grad(potential), normalized to 0 at (0,0).
double potential_value(const Diffeo2D& h, double x, double y);

struct Box2D {
  double xmin = -2.0, xmax = 2.0;
  double ymin = -2.0, ymax = 2.0;
};

// Max |d h1/dy - d h2/dx| over an n-by-n central-difference scan.
double curl_max(const std::function<Vec2(double, double)>& field, const Box2D& box, int n);

bool is_curl_free(const Diffeo2D& h, const Box2D& box, int n, double tol = 1e-4);

// Membership in the affine family of Example 4.9: A symmetric with equal
// diagonal and the recovered a1, a2 both positive.
bool hs_membership(const Mat2& A, const Vec2& u, double tol);

}  // namespace otsig
