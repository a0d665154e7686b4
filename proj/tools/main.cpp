// Command-line front end: domain configs in, g-function curves and validation
// reports out.
//
//   gfunc compute  --preset fig3 --out fig3.csv
//   gfunc compute  --config domain.json --rmin 0.1 --rmax 3 --steps 400
//   gfunc validate --preset fig4 --steps 20 --walkers 100000
//   gfunc info     --preset boundedring:10

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>

#include "gfunc/config.hpp"

namespace {

struct CliArgs {
  std::string config_path, preset, out;
  double rmin = 0.0, rmax = 0.0, epsilon = 0.0;
  int steps = 0, n = 0;
  long walkers = 0;
  std::uint64_t seed = 0;
  bool no_refine = false;
};

gf::RunConfig load(const CliArgs& a) {
  gf::RunConfig cfg;
  if (!a.preset.empty() && !a.config_path.empty())
    throw gf::ConfigError("give either --preset or --config, not both");
  if (!a.preset.empty()) {
    cfg = gf::preset_config(a.preset);
  } else if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw gf::ConfigError("cannot open config file: " + a.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = gf::parse_config_json(buf.str());
  } else {
    throw gf::ConfigError("one of --preset/--config is required");
  }
  if (a.rmin > 0) cfg.rmin = a.rmin;
  if (a.rmax > 0) cfg.rmax = a.rmax;
  if (a.steps > 0) cfg.steps = a.steps;
  if (a.n > 0) cfg.n = a.n;
  if (a.walkers > 0) cfg.walkers = a.walkers;
  if (a.epsilon > 0) cfg.epsilon_rel = a.epsilon;
  if (a.seed > 0) cfg.seed = a.seed;
  if (!a.out.empty()) cfg.out = a.out;
  if (a.no_refine) cfg.refine = false;
  return cfg;
}

int run(const CliArgs& a, int (*cmd)(const gf::RunConfig&, std::ostream&)) {
  gf::RunConfig cfg;
  try {
    cfg = load(a);
  } catch (const gf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    if (!cfg.out.empty()) {
      std::ofstream out(cfg.out);
      if (!out) {
        std::cerr << "cannot open output file: " << cfg.out << "\n";
        return 1;
      }
      return cmd(cfg, out);
    }
    return cmd(cfg, std::cout);
  } catch (const gf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const gf::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());

  CLI::App app{"Stephenson g-function computation for circle and slit domains"};
  app.require_subcommand(1);
  CliArgs a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", a.config_path, "JSON domain config file");
    sub->add_option("--preset", a.preset,
                    "built-in configuration (fig3, fig4, caseI:<l>, caseII:<l>, "
                    "caseIII:<l>:<seed>, intervals:<k>, cantor:<k>, ring:<l>, "
                    "boundedring:<l>)");
    sub->add_option("--rmin", a.rmin, "smallest capture radius");
    sub->add_option("--rmax", a.rmax, "largest capture radius");
    sub->add_option("--steps", a.steps, "uniform grid size");
    sub->add_option("--n", a.n, "nodes per boundary component");
    sub->add_option("--out", a.out, "output file (default stdout)");
    sub->add_flag("--no-refine", a.no_refine, "skip breakpoint grid refinement");
  };

  CLI::App* compute = app.add_subcommand("compute", "write the g(r) curve as CSV");
  add_common(compute);
  CLI::App* validate =
      app.add_subcommand("validate", "compare the curve against walk-on-spheres");
  add_common(validate);
  validate->add_option("--walkers", a.walkers, "Monte Carlo walkers per grid point");
  validate->add_option("--epsilon", a.epsilon, "absorption shell, relative to r");
  validate->add_option("--seed", a.seed, "Monte Carlo seed");
  CLI::App* info = app.add_subcommand("info", "print breakpoints and regime intervals");
  add_common(info);

  CLI11_PARSE(app, argc, argv);

  if (compute->parsed()) return run(a, gf::cmd_compute);
  if (validate->parsed()) return run(a, gf::cmd_validate);
  return run(a, gf::cmd_info);
}
