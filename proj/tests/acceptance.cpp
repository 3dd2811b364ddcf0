// Acceptance gate: one line per criterion, exit 0 only if every criterion
// passes. An optional argv[1] names the CLI binary used by the determinism
// criterion; without it the experiment is re-run in process.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

#include "otsig/convexity_lab.hpp"
#include "otsig/io.hpp"
#include "otsig/verify.hpp"

namespace {

int failures = 0;

void report(int index, const std::string& label, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", index,
              label.c_str(), detail.c_str());
  if (!ok) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string describe(const otsig::VerifyResult& res, double elapsed, double budget) {
  std::string out;
  for (const auto& c : res.checks) {
    if (!out.empty()) out += "; ";
    out += c.name + "=" + otsig::fmt17(c.value);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "; %.2fs of %.0fs", elapsed, budget);
  return out + buf;
}

void run_suite(int index, const std::string& label, double budget_s,
               otsig::VerifyResult (*suite)()) {
  Timer t;
  try {
    otsig::VerifyResult res = suite();
    double el = t.seconds();
    report(index, label, res.passed() && (budget_s <= 0 || el < budget_s),
           describe(res, el, budget_s));
  } catch (const std::exception& e) {
    report(index, label, false, e.what());
  }
}

constexpr std::uint64_t kSeed = 42;

}  // namespace

int main(int argc, char** argv) {
  run_suite(1, "CDT analytic translation/scaling", 1.0,
            [] { return otsig::verify_cdt_analytic(1024); });
  run_suite(2, "CDT roundtrip L1 <= 1e-2", 5.0,
            [] { return otsig::verify_cdt_roundtrip(kSeed, 20, 1024); });
  run_suite(3, "1D composition property <= 3dx", 30.0,
            [] { return otsig::verify_composition_1d(kSeed, 100, 2048); });
  run_suite(4, "Wasserstein embedding vs oracle", 0.0,
            [] { return otsig::verify_w2_embedding(kSeed, 50, 1024); });
  run_suite(5, "transform-domain convexity witnesses", 0.0,
            [] { return otsig::verify_convexity_1d(kSeed, 200, 2048); });
  run_suite(6, "LDA separability + hull margin", 60.0,
            [] { return otsig::verify_separability(kSeed, 500, 512); });
  run_suite(7, "profile-group algebra", 0.0,
            [] { return otsig::verify_hr_group(kSeed); });
  run_suite(8, "closed-form transform vs LP oracle", 120.0,
            [] { return otsig::verify_theorem_4_10(kSeed, 20, 12); });
  run_suite(9, "composition violation for anisotropic maps", 0.0,
            [] { return otsig::verify_theorem_4_5(12); });
  run_suite(10, "R-CDT shift property", 0.0,
            [] { return otsig::verify_rcdt_shift(kSeed, 10, 32, 128); });

  // determinism: identical command + seed => byte-identical CSV
  try {
    bool ok;
    std::string detail;
    if (argc > 1) {
      std::string cli = argv[1];
      if (std::system("rm -rf acceptance-det && mkdir -p acceptance-det/a acceptance-det/b") != 0)
        throw std::runtime_error("could not prepare scratch directories");
      std::string cmd1 = cli + " experiment one-two-bump --seed 7 --out acceptance-det/a";
      std::string cmd2 = cli + " experiment one-two-bump --seed 7 --out acceptance-det/b";
      ok = std::system(cmd1.c_str()) == 0 && std::system(cmd2.c_str()) == 0 &&
           otsig::read_text("acceptance-det/a/one-two-bump.csv") ==
               otsig::read_text("acceptance-det/b/one-two-bump.csv");
      detail = "CLI run twice with --seed 7";
    } else {
      otsig::SeparabilityConfig cfg;
      cfg.seed = 7;
      auto once = otsig::separability_experiment(cfg);
      auto twice = otsig::separability_experiment(cfg);
      ok = once.cdt_proj_a == twice.cdt_proj_a && once.cdt_proj_b == twice.cdt_proj_b &&
           once.raw_proj_a == twice.raw_proj_a;
      detail = "in-process double run";
    }
    report(11, "deterministic experiment outputs", ok, detail);
  } catch (const std::exception& e) {
    report(11, "deterministic experiment outputs", false, e.what());
  }

  if (failures) {
    std::printf("%d of 11 criteria failing\n", failures);
    return 1;
  }
  std::printf("all 11 criteria pass\n");
  return 0;
}
