#include "otsig/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace otsig {

namespace {

using nlohmann::json;

Error format_error(const std::string& what) {
  return Error(ErrorCode::FormatError, what);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_row(const std::string& line, size_t expect) {
  std::vector<double> out;
  const char* s = line.c_str();
  char* end = nullptr;
  while (true) {
    double v = std::strtod(s, &end);
    if (end == s) throw format_error("bad numeric field in '" + line + "'");
    out.push_back(v);
    s = end;
    while (*s == ' ') ++s;
    if (*s == '\0') break;
    if (*s != ',') throw format_error("expected ',' in '" + line + "'");
    ++s;
  }
  if (out.size() != expect)
    throw format_error("expected " + std::to_string(expect) + " fields in '" + line + "'");
  return out;
}

// Header tokens after the leading "# <tag>".
std::vector<double> parse_header(const std::string& line, const std::string& tag,
                                 size_t expect) {
  std::istringstream is(line);
  std::string hash, got;
  is >> hash >> got;
  if (hash != "#" || got != tag) throw format_error("expected '# " + tag + "' header");
  std::vector<double> vals;
  double v;
  while (is >> v) vals.push_back(v);
  if (vals.size() != expect) throw format_error("bad '" + tag + "' header arity");
  return vals;
}

std::string grid1d_header(const char* tag, const Grid1D& g) {
  return std::string("# ") + tag + " " + fmt17(g.xmin) + " " + fmt17(g.xmax) + " " +
         std::to_string(g.n) + "\n";
}

std::string grid2d_header(const char* tag, const Grid2D& g) {
  return std::string("# ") + tag + " " + fmt17(g.xmin) + " " + fmt17(g.xmax) + " " +
         std::to_string(g.nx) + " " + fmt17(g.ymin) + " " + fmt17(g.ymax) + " " +
         std::to_string(g.ny) + "\n";
}

Grid1D grid1d_from_header(const std::string& line, const std::string& tag) {
  auto v = parse_header(line, tag, 3);
  int n = static_cast<int>(v[2]);
  if (n < 2 || v[1] <= v[0]) throw format_error("degenerate 1D grid header");
  return Grid1D{v[0], v[1], n};
}

Grid2D grid2d_from_header(const std::string& line, const std::string& tag) {
  auto v = parse_header(line, tag, 6);
  int nx = static_cast<int>(v[2]), ny = static_cast<int>(v[5]);
  if (nx < 2 || ny < 2 || v[1] <= v[0] || v[4] <= v[3])
    throw format_error("degenerate 2D grid header");
  return Grid2D{v[0], v[1], nx, v[3], v[4], ny};
}

json profile_to_json(const Profile& p) {
  double lo = std::max(p.lo(), -8.0);
  double hi = std::min(p.hi(), 8.0);
  const int n = 513;
  json nodes = json::array(), values = json::array();
  double pad = 1e-9 * (hi - lo);
  lo += pad;
  hi -= pad;
  for (int i = 0; i < n; ++i) {
    double t = lo + (hi - lo) * i / (n - 1);
    nodes.push_back(t);
    values.push_back(p.eval(t));
  }
  return json{{"kind", "sampled"}, {"nodes", nodes}, {"values", values}};
}

Profile profile_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine") return Profile::affine(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "quadratic")
    return Profile::quadratic(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "sampled")
    return Profile::sampled(j.at("nodes").get<std::vector<double>>(),
                            j.at("values").get<std::vector<double>>());
  throw format_error("unknown profile kind '" + kind + "'");
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw format_error("cannot open '" + tmp + "' for writing");
    os << content;
    if (!os.flush()) throw format_error("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw format_error("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw format_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string signal_to_csv(const Signal1D& p) {
  std::string out = grid1d_header("grid1d", p.grid());
  for (int i = 0; i < p.grid().n; ++i)
    out += fmt17(p.grid().node(i)) + "," + fmt17(p.values()[static_cast<size_t>(i)]) + "\n";
  return out;
}

Signal1D signal_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw format_error("empty signal file");
  Grid1D g = grid1d_from_header(lines[0], "grid1d");
  if (lines.size() != static_cast<size_t>(g.n) + 1)
    throw format_error("signal row count does not match header");
  std::vector<double> raw(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i)
    raw[static_cast<size_t>(i)] = parse_row(lines[static_cast<size_t>(i) + 1], 2)[1];
  return normalize(raw, g);
}

std::string image_to_csv(const Image2D& p) {
  const Grid2D& g = p.grid();
  std::string out = grid2d_header("grid2d", g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      out += fmt17(g.xnode(i)) + "," + fmt17(g.ynode(j)) + "," + fmt17(p.value(i, j)) + "\n";
  return out;
}

Image2D image_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw format_error("empty image file");
  Grid2D g = grid2d_from_header(lines[0], "grid2d");
  size_t cells = static_cast<size_t>(g.nx) * g.ny;
  if (lines.size() != cells + 1) throw format_error("image row count does not match header");
  std::vector<double> raw(cells);
  for (size_t k = 0; k < cells; ++k) raw[k] = parse_row(lines[k + 1], 3)[2];
  return normalize_image(raw, g);
}

std::string tmap1d_to_csv(const TransportMap1D& t) {
  const Grid1D& g = t.reference_grid();
  std::string out = grid1d_header("tmap1d", g);
  for (int i = 0; i < g.n; ++i)
    out += fmt17(g.node(i)) + "," + fmt17(t.value(i)) + "\n";
  return out;
}

TransportMap1D tmap1d_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw format_error("empty transport map file");
  Grid1D g = grid1d_from_header(lines[0], "tmap1d");
  if (lines.size() != static_cast<size_t>(g.n) + 1)
    throw format_error("map row count does not match header");
  std::vector<double> vals(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i)
    vals[static_cast<size_t>(i)] = parse_row(lines[static_cast<size_t>(i) + 1], 2)[1];
  return TransportMap1D(g, std::move(vals));
}

std::string tmap2d_to_csv(const TransportMap2D& t) {
  const Grid2D& g = t.grid;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string out = grid2d_header("tmap2d", g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      Vec2 v = t.is_valid(i, j) ? t.value(i, j) : Vec2{nan, nan};
      out += fmt17(g.xnode(i)) + "," + fmt17(g.ynode(j)) + "," + fmt17(v.x) + "," +
             fmt17(v.y) + "\n";
    }
  return out;
}

TransportMap2D tmap2d_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw format_error("empty transport map file");
  TransportMap2D t;
  t.grid = grid2d_from_header(lines[0], "tmap2d");
  size_t cells = static_cast<size_t>(t.grid.nx) * t.grid.ny;
  if (lines.size() != cells + 1) throw format_error("map row count does not match header");
  t.values.assign(cells, Vec2{});
  t.valid.assign(cells, 0);
  for (size_t k = 0; k < cells; ++k) {
    auto row = parse_row(lines[k + 1], 4);
    if (std::isnan(row[2]) || std::isnan(row[3])) continue;
    t.values[k] = {row[2], row[3]};
    t.valid[k] = 1;
  }
  return t;
}

std::string sinogram_to_csv(const Sinogram& s) {
  std::string out = grid1d_header("sinogram", s.offset_grid);
  for (size_t a = 0; a < s.angles.size(); ++a) {
    out += "# angle " + fmt17(s.angles[a]) + "\n";
    const auto& v = s.projections[a].values();
    for (int i = 0; i < s.offset_grid.n; ++i)
      out += fmt17(s.offset_grid.node(i)) + "," + fmt17(v[static_cast<size_t>(i)]) + "\n";
  }
  return out;
}

std::string rcdt_to_csv(const RcdtStack& s, const Grid1D& offset_grid) {
  std::string out = grid1d_header("rcdt", offset_grid);
  for (size_t a = 0; a < s.angles.size(); ++a) {
    out += "# angle " + fmt17(s.angles[a]) + "\n";
    const Grid1D& g = s.maps[a].reference_grid();
    for (int i = 0; i < g.n; ++i)
      out += fmt17(g.node(i)) + "," + fmt17(s.maps[a].value(i)) + "\n";
  }
  return out;
}

std::string coupling_to_csv(const CouplingPlan& plan) {
  json header;
  json src = json::array(), tgt = json::array();
  for (const auto& p : plan.source) src.push_back({p.pos.x, p.pos.y, p.mass});
  for (const auto& p : plan.target) tgt.push_back({p.pos.x, p.pos.y, p.mass});
  header["source"] = src;
  header["target"] = tgt;
  header["cost"] = plan.cost;
  std::string out = "# coupling " + header.dump() + "\n";
  for (size_t i = 0; i < plan.source.size(); ++i)
    for (size_t j = 0; j < plan.target.size(); ++j) {
      double m = plan.entry(i, j);
      if (m > 0.0)
        out += std::to_string(i) + "," + std::to_string(j) + "," + fmt17(m) + "\n";
    }
  return out;
}

std::string diffeo1d_to_json(const Diffeo1D& h) {
  json j;
  if (const auto* a = std::get_if<AffineMap1D>(&h.rep())) {
    j["variant"] = "affine";
    j["params"] = {{"alpha", a->alpha}, {"mu", a->mu}};
    j["domain"] = nullptr;
  } else if (const auto* p = std::get_if<PolynomialMonotone1D>(&h.rep())) {
    j["variant"] = "polynomial";
    j["params"] = {{"coeffs", p->coeffs}};
    j["domain"] = {p->a, p->b};
  } else {
    const auto& s = std::get<SampledMonotone1D>(h.rep());
    j["variant"] = "sampled";
    j["params"] = {{"nodes", s.nodes}, {"values", s.values}};
    j["domain"] = {s.nodes.front(), s.nodes.back()};
  }
  return j.dump(2);
}

Diffeo1D diffeo1d_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    std::string variant = j.at("variant").get<std::string>();
    const json& p = j.at("params");
    if (variant == "affine")
      return Diffeo1D::affine(p.at("alpha").get<double>(), p.at("mu").get<double>());
    if (variant == "polynomial") {
      auto dom = j.at("domain").get<std::vector<double>>();
      if (dom.size() != 2) throw format_error("polynomial domain needs two numbers");
      return Diffeo1D::polynomial(p.at("coeffs").get<std::vector<double>>(), dom[0], dom[1]);
    }
    if (variant == "sampled")
      return Diffeo1D::sampled(p.at("nodes").get<std::vector<double>>(),
                               p.at("values").get<std::vector<double>>());
    throw format_error("unknown diffeo variant '" + variant + "'");
  } catch (const json::exception& e) {
    throw format_error(std::string("bad diffeo JSON: ") + e.what());
  }
}

std::string diffeo2d_to_json(const Diffeo2D& h) {
  json j;
  if (const auto* a = std::get_if<HaForm>(&h.rep())) {
    j["variant"] = "ha";
    j["params"] = {{"a", a->a}, {"u", {a->u.x, a->u.y}}};
  } else if (const auto* s = std::get_if<HsForm>(&h.rep())) {
    j["variant"] = "hs";
    j["params"] = {{"a1", s->a1}, {"a2", s->a2}, {"b1", s->b1}, {"b2", s->b2}};
  } else {
    const auto& r = std::get<HrForm>(h.rep());
    j["variant"] = "hr";
    j["params"] = {{"fp", profile_to_json(r.fp)}, {"gp", profile_to_json(r.gp)}};
  }
  return j.dump(2);
}

Diffeo2D diffeo2d_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    std::string variant = j.at("variant").get<std::string>();
    const json& p = j.at("params");
    if (variant == "ha") {
      auto u = p.at("u").get<std::vector<double>>();
      if (u.size() != 2) throw format_error("ha shift needs two numbers");
      return Diffeo2D::ha(p.at("a").get<double>(), {u[0], u[1]});
    }
    if (variant == "hs")
      return Diffeo2D::hs(p.at("a1").get<double>(), p.at("a2").get<double>(),
                          p.at("b1").get<double>(), p.at("b2").get<double>());
    if (variant == "hr")
      return Diffeo2D::hr(profile_from_json(p.at("fp")), profile_from_json(p.at("gp")));
    throw format_error("unknown diffeo variant '" + variant + "'");
  } catch (const json::exception& e) {
    throw format_error(std::string("bad diffeo JSON: ") + e.what());
  }
}

std::string config_digest(const std::string& canonical_config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : canonical_config) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config_digest"] = m.config_digest;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace otsig
