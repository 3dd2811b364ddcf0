#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "otsig/errors.hpp"

namespace otsig {

// h(x) = alpha*x - mu, alpha > 0. Valid on all of R.
struct AffineMap1D {
  double alpha = 1.0;
  double mu = 0.0;
};

// h(x) = sum coeffs[k] x^k, strictly increasing on [a, b]
// (certified by a 4096-point derivative scan at construction).
struct PolynomialMonotone1D {
  std::vector<double> coeffs;
  double a = 0.0;
  double b = 1.0;
};

// Strictly increasing piecewise-linear table; nodes need not be uniform.
struct SampledMonotone1D {
  std::vector<double> nodes;
  std::vector<double> values;
};

// An increasing 1D diffeomorphism in one of three representations.
// Exact affine algebra where possible; compositions and numeric inverses
// downgrade to the sampled table.
class Diffeo1D {
 public:
  using Rep = std::variant<AffineMap1D, PolynomialMonotone1D, SampledMonotone1D>;

  static Diffeo1D identity() { return affine(1.0, 0.0); }
  static Diffeo1D affine(double alpha, double mu);
  static Diffeo1D polynomial(std::vector<double> coeffs, double a, double b);
  static Diffeo1D sampled(std::vector<double> nodes, std::vector<double> values);

  const Rep& rep() const { return rep_; }
  bool is_affine() const { return std::holds_alternative<AffineMap1D>(rep_); }

  // Validity interval; +-infinity for affine maps.
  double domain_lo() const;
  double domain_hi() const;
  bool bounded() const { return !is_affine(); }

  double eval(double x) const;        // throws OutOfDomain
  double derivative(double x) const;  // analytic, or central differences for tables

 private:
  explicit Diffeo1D(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// h^{-1}; exact for affine, bisection-to-1e-12 table (4096 nodes) otherwise.
Diffeo1D inverse(const Diffeo1D& h);

// h1 after h2; exact for affine pairs, sampled table otherwise.
Diffeo1D compose(const Diffeo1D& h1, const Diffeo1D& h2);

// The diffeomorphism g with g^{-1} = alpha*h1^{-1} + (1-alpha)*h2^{-1}.
// The combined inverse is increasing, so g always exists on the shared range.
Diffeo1D convex_combo_of_inverses(const Diffeo1D& h1, const Diffeo1D& h2, double alpha);

struct GroupSpec1D {
  enum class Kind {
    Identity,
    IsotropicScaling,
    Translations,
    IncreasingAffine,
    FixedPoints,
    FixedInterval,
  };
  Kind kind = Kind::Identity;
  std::vector<double> fixed_points;                 // FixedPoints
  double interval_lo = 0.0, interval_hi = 1.0;      // FixedInterval

  static GroupSpec1D identity() { return {Kind::Identity, {}, 0, 1}; }
  static GroupSpec1D isotropic_scaling() { return {Kind::IsotropicScaling, {}, 0, 1}; }
  static GroupSpec1D translations() { return {Kind::Translations, {}, 0, 1}; }
  static GroupSpec1D increasing_affine() { return {Kind::IncreasingAffine, {}, 0, 1}; }
  static GroupSpec1D fixing_points(std::vector<double> xs);
  static GroupSpec1D fixing_interval(double lo, double hi);
};

// True iff h satisfies the family's defining predicate within tol on a scan
// of its validity interval ([-1, 2] for unbounded affine maps).
bool group_membership(const GroupSpec1D& g, const Diffeo1D& h, double tol);

struct CoeffBox {
  double lo = 0.0, hi = 0.0;
};

// Support-containment constraint for the random polynomial sampler: accepted
// h keep h^{-1}([support_lo, support_hi]) inside [domain_lo, domain_hi].
struct SupportConstraint {
  double support_lo = 0.2;
  double support_hi = 0.7;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
};

// Default coefficient boxes center the polynomial on the identity.
std::vector<CoeffBox> default_coeff_boxes(int degree);

// Rejection sampler over coefficient boxes; deterministic in the seed.
// Throws SamplingExhausted if the acceptance rate drops below 1/10000.
std::vector<Diffeo1D> sample_polynomial_diffeos(int degree, int count, std::uint64_t seed,
                                                const SupportConstraint& constraint,
                                                std::vector<CoeffBox> boxes = {});

}  // namespace otsig
