#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otsig/convexity_lab.hpp"
#include "otsig/diffeo2d.hpp"
#include "otsig/io.hpp"
#include "otsig/ot_oracle.hpp"
#include "otsig/rng.hpp"
#include "otsig/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int error_exit_code(const otsig::Error& e) {
  switch (e.code()) {
    case otsig::ErrorCode::FormatError:
    case otsig::ErrorCode::ConfigError:
      return 2;
    case otsig::ErrorCode::BadReference:
      return 3;
    default:
      return 1;
  }
}

std::string default_outdir() {
  const char* env = std::getenv("OTSIG_OUT_DIR");
  return env ? env : ".";
}

void emit_manifest(const std::string& outdir, const std::string& command,
                   const std::string& config, std::uint64_t seed,
                   const std::string& started,
                   const std::vector<std::string>& outputs) {
  otsig::RunManifest m;
  m.command = command;
  m.config_digest = otsig::config_digest(config);
  m.seed = seed;
  m.version = kVersion;
  m.started_at = started;
  m.finished_at = otsig::utc_timestamp();
  m.outputs = outputs;
  otsig::write_text_atomic(outdir + "/manifest.json", otsig::manifest_to_json(m));
}

int run_cdt(const std::string& in_path, const std::string& ref_path,
            const std::string& out_path) {
  otsig::Signal1D p = otsig::signal_from_csv(otsig::read_text(in_path));
  otsig::Signal1D r =
      ref_path == "uniform"
          ? otsig::normalize(std::vector<double>(static_cast<size_t>(p.grid().n), 1.0),
                             p.grid())
          : otsig::signal_from_csv(otsig::read_text(ref_path));
  otsig::write_text_atomic(out_path, otsig::tmap1d_to_csv(otsig::cdt_forward(p, r)));
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, std::string out_path) {
  otsig::VerifyResult res;
  if (suite == "cdt-roundtrip")
    res = otsig::verify_cdt_roundtrip(seed);
  else if (suite == "composition-1d")
    res = otsig::verify_composition_1d(seed);
  else if (suite == "convexity-1d")
    res = otsig::verify_convexity_1d(seed);
  else if (suite == "hr-group")
    res = otsig::verify_hr_group(seed);
  else if (suite == "theorem-4-10")
    res = otsig::verify_theorem_4_10(seed);
  else if (suite == "theorem-4-5")
    res = otsig::verify_theorem_4_5();
  else if (suite == "rcdt-shift")
    res = otsig::verify_rcdt_shift(seed);
  else if (suite == "w2-embedding")
    res = otsig::verify_w2_embedding(seed);
  else {
    std::cerr << "unknown suite '" << suite << "'\n";
    return 2;
  }
  if (out_path.empty()) out_path = default_outdir() + "/" + suite + "-report.csv";
  otsig::write_text_atomic(out_path, res.csv());
  for (const auto& c : res.checks)
    std::cout << suite << ": " << c.name << " = " << otsig::fmt17(c.value)
              << " (bound " << otsig::fmt17(c.bound) << ") "
              << (c.passed ? "ok" : "FAIL") << "\n";
  if (!res.passed()) {
    std::cerr << suite << ": assertion failure, see " << out_path << "\n";
    return 1;
  }
  return 0;
}

std::string projections_csv(const std::string& name, const otsig::SeparabilityReport& rep) {
  std::string out = "record,domain,class,index,value\n";
  auto proj = [&out](const char* domain, const char* cls, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i)
      out += std::string("projection,") + domain + "," + cls + "," + std::to_string(i) +
             "," + otsig::fmt17(v[i]) + "\n";
  };
  proj("raw", "a", rep.raw_proj_a);
  proj("raw", "b", rep.raw_proj_b);
  proj("transform", "a", rep.cdt_proj_a);
  proj("transform", "b", rep.cdt_proj_b);
  out += "accuracy,raw,,," + otsig::fmt17(rep.raw_accuracy) + "\n";
  out += "accuracy,transform,,," + otsig::fmt17(rep.transform_accuracy) + "\n";
  out += "margin,raw,,," + otsig::fmt17(rep.raw_margin) + "\n";
  out += "margin,transform,,," + otsig::fmt17(rep.transform_margin) + "\n";
  (void)name;
  return out;
}

int run_experiment(const std::string& name, std::uint64_t seed, int grid_n,
                   const std::string& outdir, const std::string& config_path) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw otsig::Error(otsig::ErrorCode::FormatError,
                             "cannot create output directory '" + outdir + "'");
  std::string started = otsig::utc_timestamp();
  std::string config = "experiment=" + name + " seed=" + std::to_string(seed) +
                       " grid_n=" + std::to_string(grid_n);
  if (!config_path.empty()) config += "\n" + otsig::read_text(config_path);

  std::vector<std::string> outputs;
  if (name == "one-two-bump") {
    otsig::SeparabilityConfig cfg;
    cfg.seed = seed;
    cfg.grid_n = grid_n > 0 ? grid_n : 512;
    std::string path = outdir + "/one-two-bump.csv";
    otsig::write_text_atomic(path,
                             projections_csv(name, otsig::separability_experiment(cfg)));
    outputs.push_back(path);
  } else if (name == "lda-degree5") {
    int n = grid_n > 0 ? grid_n : 256;
    otsig::Grid1D g{0.0, 1.0, n};
    otsig::Signal1D r =
        otsig::normalize(std::vector<double>(static_cast<size_t>(n), 1.0), g);
    auto build = [&](const std::string& tmpl, std::string_view tag) {
      auto hs = otsig::sample_polynomial_diffeos(
          5, 100, otsig::derive_seed(seed, tag),
          otsig::SupportConstraint{0.35, 0.65, 0.0, 1.0});
      return otsig::generate_class(otsig::make_template(tmpl, g), std::move(hs));
    };
    auto ca = build("one-bump", "degree5-a");
    auto cb = build("two-bump", "degree5-b");
    auto features = [&](const otsig::SignalClass1D& c) {
      std::vector<std::vector<double>> f;
      for (const auto& t : otsig::transform_class(c, r)) f.push_back(t.values());
      return f;
    };
    auto fa = features(ca), fb = features(cb);
    otsig::LdaModel model = otsig::lda_fit(fa, fb);
    otsig::SeparabilityReport rep;
    rep.transform_accuracy = otsig::lda_accuracy(model, fa, fb);
    rep.transform_margin = std::numeric_limits<double>::infinity();
    for (const auto& v : fa) {
      rep.cdt_proj_a.push_back(model.project(v));
      rep.transform_margin =
          std::min(rep.transform_margin, std::abs(rep.cdt_proj_a.back() - model.threshold));
    }
    for (const auto& v : fb) {
      rep.cdt_proj_b.push_back(model.project(v));
      rep.transform_margin =
          std::min(rep.transform_margin, std::abs(rep.cdt_proj_b.back() - model.threshold));
    }
    std::string path = outdir + "/lda-degree5.csv";
    otsig::write_text_atomic(path, projections_csv(name, rep));
    outputs.push_back(path);
  } else if (name == "vector-field") {
    otsig::Diffeo2D h = otsig::Diffeo2D::hr(otsig::Profile::quadratic(0.1, 1.0),
                                            otsig::Profile::affine(1.0, 0.0));
    int n = grid_n > 0 ? grid_n : 21;
    otsig::Grid2D g{-2.0, 2.0, n, -2.0, 2.0, n};
    otsig::TransportMap2D t;
    t.grid = g;
    t.values.assign(static_cast<size_t>(n) * n, {});
    t.valid.assign(t.values.size(), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = g.xnode(i), y = g.ynode(j);
        if (!h.in_domain(x, y)) continue;
        size_t k = static_cast<size_t>(i) * n + j;
        t.values[k] = h.eval(x, y);
        t.valid[k] = 1;
      }
    std::string path = outdir + "/vector-field.csv";
    otsig::write_text_atomic(path, otsig::tmap2d_to_csv(t));
    outputs.push_back(path);
  } else {
    std::cerr << "unknown experiment '" << name << "'\n";
    return 2;
  }
  emit_manifest(outdir, "experiment " + name, config, seed, started, outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport-based signal transforms and verification suites"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  int grid_n = 0;
  std::string out, config;

  auto* cdt = app.add_subcommand("cdt", "1D transform of a signal file");
  std::string in_path, ref_path = "uniform";
  cdt->add_option("--in", in_path, "input signal CSV")->required();
  cdt->add_option("--ref", ref_path, "reference signal CSV or 'uniform'");
  cdt->add_option("--out", out, "output transport map CSV")->required();

  auto* verify = app.add_subcommand("verify", "run a property suite");
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--out", out, "report CSV path");

  auto* experiment = app.add_subcommand("experiment", "reproduce experiment data");
  std::string exp_name;
  experiment->add_option("name", exp_name, "one-two-bump | lda-degree5 | vector-field")
      ->required();
  experiment->add_option("--seed", seed, "master seed");
  experiment->add_option("--grid-n", grid_n, "grid resolution override");
  experiment->add_option("--out", out, "output directory");
  experiment->add_option("--config", config, "config JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cdt) return run_cdt(in_path, ref_path, out);
    if (*verify) return run_verify(suite, seed, out);
    if (*experiment)
      return run_experiment(exp_name, seed, grid_n, out.empty() ? default_outdir() : out,
                            config);
  } catch (const otsig::Error& e) {
    std::cerr << otsig::error_code_name(e.code()) << ": " << e.what() << "\n";
    return error_exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
