#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otsig/cdt.hpp"
#include "otsig/convexity_lab.hpp"
#include "otsig/diffeo1d.hpp"
#include "otsig/diffeo2d.hpp"
#include "otsig/ot_oracle.hpp"
#include "otsig/radon_cdt.hpp"
#include "otsig/signal.hpp"

namespace otsig {

// 17 significant digits: decimal round-trips a double exactly.
std::string fmt17(double v);

// Write via temp file + rename so readers never see a partial file.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);  // throws FormatError

// CSV, header `# grid1d <xmin> <xmax> <n>`, rows `x,value`.
std::string signal_to_csv(const Signal1D& p);
Signal1D signal_from_csv(const std::string& text);

// CSV, header `# grid2d <xmin> <xmax> <nx> <ymin> <ymax> <ny>`, rows
// `x,y,value` row-major.
std::string image_to_csv(const Image2D& p);
Image2D image_from_csv(const std::string& text);

// CSV, header `# tmap1d <xmin> <xmax> <n>`, rows `x,T(x)`.
std::string tmap1d_to_csv(const TransportMap1D& t);
TransportMap1D tmap1d_from_csv(const std::string& text);

// CSV, header `# tmap2d <xmin> <xmax> <nx> <ymin> <ymax> <ny>`, rows
// `x,y,Tx,Ty`; cells without a value serialize as nan.
std::string tmap2d_to_csv(const TransportMap2D& t);
TransportMap2D tmap2d_from_csv(const std::string& text);

// One `# angle <theta>` block per projection over a shared offset grid.
std::string sinogram_to_csv(const Sinogram& s);
std::string rcdt_to_csv(const RcdtStack& s, const Grid1D& offset_grid);

// JSON point clouds plus `i,j,mass` triplets of the support cells.
std::string coupling_to_csv(const CouplingPlan& plan);

// JSON {variant, params, domain}; sampled tables stored inline.
std::string diffeo1d_to_json(const Diffeo1D& h);
Diffeo1D diffeo1d_from_json(const std::string& text);

// Same scheme; Ha/Hs are exact, Hr profiles are stored as sampled tables
// (clipped to [-8, 8] when a profile's validity interval is unbounded).
std::string diffeo2d_to_json(const Diffeo2D& h);
Diffeo2D diffeo2d_from_json(const std::string& text);

struct RunManifest {
  std::string command;
  std::string config_digest;  // FNV-1a hex of the canonical config text
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;
};

std::string config_digest(const std::string& canonical_config);
std::string manifest_to_json(const RunManifest& m);
std::string utc_timestamp();

}  // namespace otsig
