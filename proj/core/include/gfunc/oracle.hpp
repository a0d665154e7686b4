#pragma once

#include <cstdint>

#include "gfunc/geometry.hpp"
#include "gfunc/types.hpp"

namespace gf {

struct McEstimate {
  double mean = 0.0;
  double stderror = 0.0;  // sqrt(mean (1-mean) / walkers)
  long walkers = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

struct WosOptions {
  long walkers = 100000;
  double epsilon_rel = 1e-4;  // absorption shell = epsilon_rel * r
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

// Walk-on-spheres estimate of g(r): each walker jumps from the basepoint to
// uniform points on maximal inscribed disks until absorbed within the epsilon
// shell; scores 1 iff the nearest boundary feature belongs to the captured
// portion E_r. Per-walker RNG streams keyed by (seed, walker index) make the
// estimate independent of thread scheduling.
McEstimate wos_g(const DomainSpec& spec, double r, const WosOptions& opt = {});

// Exact g for one circle fully inside the capture circle (the eccentric
// annulus), via the inversive point pair p q = r^2, (p-c)(q-c) = R^2 and the
// Moebius T(z) = (z-q)/(z-p) that renders the circles concentric.
double eccentric_annulus_g(double center, double R, double r);

}  // namespace gf
