#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace otsig {

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;  // pass means value <= bound
  bool passed = false;
};

struct VerifyResult {
  std::string suite;
  std::vector<VerifyCheck> checks;

  void check_le(const std::string& name, double value, double bound);
  void check_ge(const std::string& name, double value, double bound);
  bool passed() const;
  std::string csv() const;  // header + check,value,bound,pass rows
};

// Uniform reference on [0,1]: translation maps to Id+mu, scaling to Id/a.
VerifyResult verify_cdt_analytic(int n = 1024);

// L1 roundtrip error of cdt_inverse(cdt_forward(p)) over random box/bump
// mixtures with connected support.
VerifyResult verify_cdt_roundtrip(std::uint64_t seed, int cases = 20, int n = 1024);

// Transform of the deformed signal against the deformation applied to the
// transform, over random degree-5 monotone diffeomorphisms.
VerifyResult verify_composition_1d(std::uint64_t seed, int cases = 100, int n = 2048);

// Transform-domain L2 against the quantile-integral oracle, plus the exact
// box-vs-halfbox distance 1/(2*sqrt(3)).
VerifyResult verify_w2_embedding(std::uint64_t seed, int pairs = 50, int n = 1024);

// Convex-combination witnesses for the convex 1D families plus the
// integer-translation negative control (midpoint escapes the roster).
VerifyResult verify_convexity_1d(std::uint64_t seed, int trials = 200, int n = 2048);

// One-bump vs two-bump translation classes: transform-domain LDA accuracy
// and the convex-hull separation margin.
VerifyResult verify_separability(std::uint64_t seed, int per_class = 500, int n = 512);

// Profile-group algebra: composition, inverse, curl-freeness, and the
// quadratic/identity example instance.
VerifyResult verify_hr_group(std::uint64_t seed);

// Closed-form transform of deformed members against the LP oracle.
VerifyResult verify_theorem_4_10(std::uint64_t seed, int pairs = 20, int n = 12);

// Composition-property violation for an anisotropic linear map against the
// isotropic control.
VerifyResult verify_theorem_4_5(int n = 12);

// Per-angle map offsets of translated images.
VerifyResult verify_rcdt_shift(std::uint64_t seed, int translations = 10, int k = 32,
                               int image_n = 128);

}  // namespace otsig
