#include "gfunc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gf {

using nlohmann::json;

std::pair<double, double> RunConfig::r_range() const {
  if (rmax > 0.0) return {rmin > 0.0 ? rmin : rmax / steps, rmax};
  auto bp = breakpoints(spec);
  double lo = rmin > 0.0 ? rmin : 0.02 * bp.front();
  double hi = spec.bounded() ? spec.outer * 1.1 : bp.back() * 1.25;
  return {lo, hi};
}

namespace {

cplx read_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

void apply_run_params(const json& j, RunConfig& cfg) {
  if (j.contains("rmin")) cfg.rmin = j["rmin"].get<double>();
  if (j.contains("rmax")) cfg.rmax = j["rmax"].get<double>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
  if (j.contains("refine")) cfg.refine = j["refine"].get<bool>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("walkers")) cfg.walkers = j["walkers"].get<long>();
  if (j.contains("epsilon")) cfg.epsilon_rel = j["epsilon"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Slit> cantor_set(int k) {
  std::vector<Slit> e = {{1.0, 2.0}};
  for (int i = 0; i < k; ++i) {
    std::vector<Slit> next;
    for (const Slit& s : e) next.push_back({(s.a + 2.0) / 3.0, (s.b + 2.0) / 3.0});
    for (const Slit& s : e) next.push_back({(s.a + 4.0) / 3.0, (s.b + 4.0) / 3.0});
    std::sort(next.begin(), next.end(), [](const Slit& a, const Slit& b) { return a.a < b.a; });
    e = std::move(next);
  }
  return e;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  cplx basepoint = j.contains("basepoint") ? read_point(j["basepoint"]) : cplx(0, 0);
  double outer = j.value("outer_radius", 0.0);
  bool has_circles = j.contains("circles"), has_slits = j.contains("slits");
  if (has_circles == has_slits)
    throw ConfigError("exactly one of \"circles\"/\"slits\" must be present");
  try {
    if (has_circles) {
      std::vector<Circle> circles;
      for (const auto& c : j["circles"])
        circles.push_back({read_point(c.at("center")), c.at("radius").get<double>()});
      cfg.spec = DomainSpec::make_circles(basepoint, circles, outer);
    } else {
      std::vector<Slit> slits;
      for (const auto& s : j["slits"]) {
        if (!s.is_array() || s.size() != 2) throw ConfigError("slit must be [a, b]");
        slits.push_back({s[0].get<double>(), s[1].get<double>()});
      }
      cfg.spec = DomainSpec::make_slits(basepoint, slits, outer);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad domain definition: ") + e.what());
  }
  apply_run_params(j, cfg);
  return cfg;
}

RunConfig preset_config(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  const std::string& head = parts.front();
  auto arg = [&](std::size_t i, long fallback) -> long {
    if (parts.size() <= i) return fallback;
    return std::stol(parts[i]);
  };

  RunConfig cfg;
  if (head == "fig3") {
    cfg.spec = DomainSpec::make_circles(0.0, {{cplx(0.8, 0), 0.4}, {cplx(1.6, 0), 0.4}});
  } else if (head == "fig4") {
    cfg.spec = DomainSpec::make_slits(0.0, {{0.4, 1.2}, {1.4, 2.2}});
  } else if (head == "caseI" || head == "caseII" || head == "caseIII") {
    long ell = arg(1, 5);
    if (ell < 1) throw ConfigError("preset needs l >= 1");
    std::vector<Circle> circles;
    for (long k = 1; k <= ell; ++k) {
      double theta = 0.0;
      if (head == "caseII") theta = 2.0 * (k - 1) * kPi / ell;
      if (head == "caseIII") {
        std::uint64_t s = mix64(static_cast<std::uint64_t>(arg(2, 7)) * 1000 + k);
        theta = 2.0 * kPi * (s >> 11) * 0x1p-53;
      }
      circles.push_back({std::polar(double(k), theta), 0.4});
    }
    cfg.spec = DomainSpec::make_circles(0.0, circles);
  } else if (head == "intervals") {
    long k = arg(1, 1);
    std::vector<Slit> slits;
    if (k == 0) slits = {{1, 8}};
    else
      for (long i = 0; i < k; ++i) slits.push_back({2.0 * i + 1.0, 2.0 * i + 2.0});
    if (k < 0 || k > 4) throw ConfigError("intervals preset supports k in 0..4");
    cfg.spec = DomainSpec::make_slits(0.0, slits);
  } else if (head == "cantor") {
    long k = arg(1, 2);
    if (k < 0 || k > 8) throw ConfigError("cantor preset supports k in 0..8");
    cfg.spec = DomainSpec::make_slits(0.0, cantor_set(static_cast<int>(k)));
  } else if (head == "ring" || head == "boundedring") {
    long ell = arg(1, 10);
    if (ell < 2) throw ConfigError("ring preset needs l >= 2");
    std::vector<Circle> circles;
    for (long k = 1; k <= ell; ++k)
      circles.push_back({5.0 * std::polar(1.0, 2.0 * kPi * (k - 1) / ell), 1.0});
    cfg.spec = DomainSpec::make_circles(0.0, circles, head == "boundedring" ? 12.0 : 0.0);
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return cfg;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (char& c : buf) {
    if (c == ',') c = '.';  // guard against non-C numeric locales
    if (c == '\0') break;
  }
  return buf;
}

int cmd_compute(const RunConfig& cfg, std::ostream& csv) {
  auto [lo, hi] = cfg.r_range();
  std::vector<double> grid = default_grid(cfg.spec, lo, hi, cfg.steps, cfg.refine);
  GCurve curve = sweep(cfg.spec, grid, {cfg.n});
  csv << "r,g,regime,m,pathway,health,reason\n";
  bool any_failed = false;
  for (const GPoint& p : curve.points) {
    any_failed |= p.failed();
    csv << format_g17(p.r) << ',' << format_g17(p.g) << ','
        << (p.failed() ? "-" : topology_name(p.regime)) << ',' << p.m << ','
        << (p.failed() ? "-" : pathway_name(p.pathway)) << ',' << format_g17(p.health)
        << ',' << p.error << '\n';
  }
  return any_failed ? 2 : 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& csv) {
  auto [lo, hi] = cfg.r_range();
  std::vector<double> grid = default_grid(cfg.spec, lo, hi, cfg.steps, false);
  csv << "r,g_bie,g_mc,stderr,z_score,g_ref\n";
  bool breach = false, any_failed = false;
  SweepCache cache;
  for (double r : grid) {
    try {
      GPoint p = g_at(cfg.spec, r, {cfg.n}, &cache);
      McEstimate mc = wos_g(cfg.spec, r, {cfg.walkers, cfg.epsilon_rel, cfg.seed});
      double z = mc.stderror > 0.0 ? (p.g - mc.mean) / mc.stderror : 0.0;
      breach |= std::abs(z) > 4.0;
      std::string ref;
      if (cfg.spec.kind == DomainKind::Circles && cfg.spec.circles.size() == 1 &&
          p.regime == Topology::ContinuousData) {
        const Circle& c = cfg.spec.circles[0];
        ref = format_g17(eccentric_annulus_g(std::abs(c.center), c.radius, r));
      }
      csv << format_g17(r) << ',' << format_g17(p.g) << ',' << format_g17(mc.mean) << ','
          << format_g17(mc.stderror) << ',' << format_g17(z) << ',' << ref << '\n';
    } catch (const Error& e) {
      any_failed = true;
      csv << format_g17(r) << ",nan,nan,nan,nan," << '\n';
    }
  }
  if (breach) return 3;
  return any_failed ? 2 : 0;
}

int cmd_info(const RunConfig& cfg, std::ostream& out) {
  auto bp = breakpoints(cfg.spec);
  out << "breakpoints:";
  for (double b : bp) out << ' ' << format_g17(b);
  out << "\n\ninterval            regime                pathway\n";
  std::vector<double> edges = {0.0};
  edges.insert(edges.end(), bp.begin(), bp.end());
  edges.push_back(cfg.spec.bounded() ? cfg.spec.outer : bp.back() * 2.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i], b = edges[i + 1];
    if (!(b - a > 4e-9)) continue;
    double mid = 0.5 * (a + b);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%-8.4g,%8.4g)", a, b);
    out << buf;
    try {
      GPoint p = g_at(cfg.spec, mid, {64});
      std::snprintf(buf, sizeof(buf), "  %-20s m=%-3d %s\n", topology_name(p.regime), p.m,
                    pathway_name(p.pathway));
      out << buf;
    } catch (const Error& e) {
      out << "  unsupported: " << e.what() << "\n";
    }
  }
  if (!cfg.spec.bounded()) {
    double mid = bp.back() * 2.0;
    out << "(" << format_g17(bp.back()) << ", inf)  ";
    GPoint p = g_at(cfg.spec, mid, {64});
    out << topology_name(p.regime) << " m=" << p.m << " " << pathway_name(p.pathway)
        << "\n";
  } else {
    out << "[" << format_g17(cfg.spec.outer) << ", inf)  FullyCovered g=1\n";
  }
  return 0;
}

std::vector<CsvRow> parse_compute_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string f[7];
    for (int i = 0; i < 7; ++i) std::getline(ls, f[i], ',');
    CsvRow row;
    row.r = std::strtod(f[0].c_str(), nullptr);
    row.g = std::strtod(f[1].c_str(), nullptr);
    row.regime = f[2];
    row.m = static_cast<int>(std::strtol(f[3].c_str(), nullptr, 10));
    row.pathway = f[4];
    row.health = std::strtod(f[5].c_str(), nullptr);
    row.reason = f[6];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gf
