#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gfunc/gcurve.hpp"
#include "gfunc/geometry.hpp"
#include "gfunc/oracle.hpp"

namespace gf {

struct RunConfig {
  DomainSpec spec;
  double rmin = 0.0, rmax = 0.0;  // 0/0 = derive from the breakpoints
  int steps = 400;
  bool refine = true;
  int n = 256;
  long walkers = 100000;
  double epsilon_rel = 1e-4;
  std::uint64_t seed = 1;
  std::string out;  // output path; empty = stdout

  std::pair<double, double> r_range() const;  // resolved range
};

// Domain config document:
//   {"basepoint":[x,y], "circles":[{"center":[x,y],"radius":R}],
//    "slits":[[a,b]], "outer_radius":R0, ...run parameters...}
// Exactly one of "circles"/"slits" must be present.
RunConfig parse_config_json(const std::string& text);

// Built-in generators for the studied configurations: fig3, fig4, caseI:<l>,
// caseII:<l>, caseIII:<l>:<seed>, intervals:<k>, cantor:<k>, ring:<l>,
// boundedring:<l>.
RunConfig preset_config(const std::string& name);

// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 z-score breach.
int cmd_compute(const RunConfig& cfg, std::ostream& csv);
int cmd_validate(const RunConfig& cfg, std::ostream& csv);
int cmd_info(const RunConfig& cfg, std::ostream& out);

// Locale-independent formatting with 17 significant digits.
std::string format_g17(double v);

struct CsvRow {
  double r, g;
  std::string regime, pathway, reason;
  int m;
  double health;
};
std::vector<CsvRow> parse_compute_csv(std::istream& in);

}  // namespace gf
