#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otsig/cdt.hpp"
#include "otsig/diffeo1d.hpp"
#include "otsig/signal.hpp"

namespace otsig {

// A generative class: every member is the template deformed by one of the
// recorded diffeomorphisms, so membership stays checkable by certificate.
struct SignalClass1D {
  Signal1D template_signal;
  std::vector<Diffeo1D> diffeos;
  std::vector<Signal1D> members;
};

SignalClass1D generate_class(const Signal1D& tmpl, std::vector<Diffeo1D> diffeos);

// Transform of every member against the shared reference.
std::vector<TransportMap1D> transform_class(const SignalClass1D& c, const Signal1D& r);

struct WitnessReport {
  int trials = 0;
  double max_map_gap = 0.0;     // sup gap: combined map vs regenerated member's map
  double max_member_l1 = 0.0;   // L1 gap: inverted combination vs certificate member
  double map_tol = 0.0;         // 3 grid steps of the reference support grid
  double member_tol = 2e-2;
  int group_escapes = 0;        // witnesses outside the declared family
  bool passed = false;
};

// Convexity of the transformed class: a convex combination of two member
// maps must itself be the map of a class member. The combination
// alpha*h_i^{-1} + (1-alpha)*h_j^{-1} is the inverse of the witnessing
// diffeomorphism g, so g comes straight from convex_combo_of_inverses; the
// combined map is checked against cdt_forward of the regenerated member and
// against cdt_inverse membership.
// When a group spec is supplied, every witnessing diffeomorphism is also
// checked for family membership (group_escapes counts failures).
WitnessReport convexity_witness(const SignalClass1D& c, const Signal1D& r,
                                int trials, std::uint64_t seed,
                                const GroupSpec1D* group = nullptr);

struct PartitionReport {
  double margin = 0.0;  // min pairwise L2 distance between sampled hulls
  int draws = 0;
};

// Samples random convex combinations inside each transformed class's hull
// (same draw sequence for both classes, so identical classes give margin 0)
// and reports the minimum cross-class distance.
PartitionReport partition_check(const SignalClass1D& c1, const SignalClass1D& c2,
                                const Signal1D& r, int draws, std::uint64_t seed);

struct LdaModel {
  std::vector<double> direction;  // unit norm, oriented mean_a -> mean_b
  double threshold = 0.0;         // midpoint of projected means
  std::vector<double> mean_a;
  std::vector<double> mean_b;
  double scatter_trace = 0.0;
  bool degenerate = false;        // coincident projected means

  double project(const std::vector<double>& x) const;
};

// Fisher discriminant with a fixed ridge 1e-6 * trace(S_w)/dim.
// Throws DimensionMismatch on inconsistent feature lengths or empty classes.
LdaModel lda_fit(const std::vector<std::vector<double>>& features_a,
                 const std::vector<std::vector<double>>& features_b);

// Fraction of samples on the correct side of the threshold.
double lda_accuracy(const LdaModel& model,
                    const std::vector<std::vector<double>>& features_a,
                    const std::vector<std::vector<double>>& features_b);

struct SeparabilityConfig {
  std::vector<std::string> templates = {"one-bump", "two-bump"};
  int count_per_class = 500;
  int grid_n = 512;
  double shift_range = 0.3;  // translations drawn uniformly in [-range, range]
  std::uint64_t seed = 42;
};

struct SeparabilityReport {
  double raw_accuracy = 0.0;
  double transform_accuracy = 0.0;
  double raw_margin = 0.0;        // min |projection - threshold| over samples
  double transform_margin = 0.0;
  std::vector<double> raw_proj_a, raw_proj_b;
  std::vector<double> cdt_proj_a, cdt_proj_b;
};

// Translation classes of the named templates, LDA in the raw signal domain
// and in the transform domain. Throws ConfigError on anything but exactly
// two known templates or non-positive counts.
SeparabilityReport separability_experiment(const SeparabilityConfig& config);

// Named 1D template densities on [0, 1]: "one-bump" (single box) and
// "two-bump" (sum of two boxes). Throws ConfigError for unknown names.
Signal1D make_template(const std::string& name, const Grid1D& grid);

}  // namespace otsig
