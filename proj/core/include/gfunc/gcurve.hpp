#pragma once

#include <map>
#include <string>
#include <vector>

#include "gfunc/confmap.hpp"
#include "gfunc/geometry.hpp"
#include "gfunc/types.hpp"

namespace gf {

enum class Pathway { Exact01, ClosedForm, BIE, SplitBIE, MappedBIE, RingMap };

const char* pathway_name(Pathway p);

struct GPoint {
  double r = 0.0;
  double g = 0.0;  // NaN when failed
  Topology regime = Topology::Empty;
  int m = 0;
  Pathway pathway = Pathway::Exact01;
  double health = 0.0;  // worst nu deviation / closure defect of the point
  std::string error;    // failure reason, empty on success
  bool failed() const { return !error.empty(); }
};

struct GCurve {
  std::vector<GPoint> points;              // ordered by r
  std::vector<std::string> warnings;       // monotonicity / clamp diagnostics
};

struct GOptions {
  int n = 256;              // nodes per boundary component
  double min_rcond = 2.5e-4;  // conditioning floor before a retry at larger n
};

// Reusable state across a sweep: circular equivalents for slit domains depend
// only on the enclosed prefix, not on r.
struct SweepCache {
  std::map<std::size_t, CircularEquivalent> slit_equivalents;
};

GPoint g_at(const DomainSpec& spec, double r, const GOptions& opt = {},
            SweepCache* cache = nullptr);

GCurve sweep(const DomainSpec& spec, const std::vector<double>& grid,
             const GOptions& opt = {});

// Sorted regime breakpoints ({delta_k -+ R_k} or {a_k,b_k}, plus R0).
std::vector<double> breakpoints(const DomainSpec& spec);

// steps uniform points on [rmin, rmax], optionally refined by geometrically
// spaced points on each side of every interior breakpoint; all points nudged
// off breakpoints by 1e-6 of the local interval length.
std::vector<double> default_grid(const DomainSpec& spec, double rmin, double rmax,
                                 int steps, bool refine);

}  // namespace gf
