#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gfunc/types.hpp"

namespace gf {

struct Circle {
  cplx center;
  double radius = 0.0;
};

struct Slit {
  double a = 0.0;
  double b = 0.0;
};

enum class DomainKind { Circles, Slits };

// The fixed domain. The basepoint is translated to the origin on
// construction; all stored geometry is relative to it.
struct DomainSpec {
  DomainKind kind = DomainKind::Circles;
  std::vector<Circle> circles;  // sorted by delta_k = |center_k|
  std::vector<Slit> slits;      // 0 < a_1 < b_1 < a_2 < ...
  double outer = 0.0;           // bounding circle radius about the basepoint; 0 = unbounded
  cplx basepoint_raw{0.0, 0.0};

  static DomainSpec make_circles(cplx basepoint, std::vector<Circle> circles,
                                 double outer = 0.0);
  static DomainSpec make_slits(cplx basepoint, std::vector<Slit> slits,
                               double outer = 0.0);

  bool bounded() const { return outer > 0.0; }
  std::size_t num_components() const {
    return kind == DomainKind::Circles ? circles.size() : slits.size();
  }
  double delta(std::size_t k) const { return std::abs(circles[k].center); }
  DomainSpec without_outer() const;

  // Scale all geometry by lambda > 0 (basepoint stays at the origin).
  DomainSpec scaled(double lambda) const;
};

enum class Topology { Empty, ContinuousData, OneIntersected, PolycircularRing, FullyCovered };

const char* topology_name(Topology t);

struct CaptureRegime {
  double r = 0.0;
  Topology topology = Topology::Empty;
  std::vector<std::size_t> enclosed;     // component indices fully inside C_r
  std::vector<std::size_t> intersected;  // component indices crossed by C_r
  int m() const { return static_cast<int>(enclosed.size()); }
};

// Regime of the truncated domain Omega_r as the capture circle of radius r
// grows. Throws TangencyDegenerate within kBreakpointGuard of a breakpoint
// and RegimeUnsupported for multi-intersections without ring structure.
CaptureRegime classify_regime(const DomainSpec& spec, double r);

// Sorted breakpoint radii: {delta_k -+ R_k} or {a_k, b_k}, plus R0 if bounded.
std::vector<double> regime_breakpoints(const DomainSpec& spec);

struct CircleIntersection {
  cplx xi1;  // lower intersection point (arg xi1 < arg xi2 about the rotated axis)
  cplx xi2;
  double x = 0.0;  // abscissa in the frame with the circle center on the positive real axis
  double y = 0.0;
};

// Intersection of |z| = r with the circle |z - center| = R (transversal).
CircleIntersection circle_intersection(cplx center, double R, double r);

// Intersection of |z| = r with the slit [a, b]; returns r.
double slit_intersection(double a, double b, double r);

// ---------------------------------------------------------------------------
// Boundary discretization
// ---------------------------------------------------------------------------

// One smooth boundary piece eta(u), u in [0,1], with derivatives in u.
struct Piece {
  std::function<cplx(double)> f;
  std::function<cplx(double)> df;
  std::function<cplx(double)> d2f;
  double weight = 1.0;  // share of the parameter interval (typically arclength)
};

// A parametrized boundary component sampled at n nodes of [0, 2pi).
struct Component {
  std::vector<double> t;
  std::vector<cplx> eta, etap, etapp;
  std::vector<double> corner_t;  // parameter values of corners (empty if smooth)
};

struct BoundaryDiscretization {
  std::vector<Component> components;  // [0] outer (ccw), rest inner (cw)
  cplx alpha{0.0, 0.0};               // evaluation point used in A(t) = eta(t) - alpha
  int n = 0;                          // nodes per component
};

// Circle component on the plain grid t_j = 2pi j/n (+ phase). ccw=false gives
// the clockwise orientation used for inner boundaries.
Component circle_component(cplx center, double R, int n, bool ccw, double phase = 0.0);

// Smooth closed curve given by callables of t in [0, 2pi), plain grid.
Component curve_component(const std::function<cplx(double)>& f,
                          const std::function<cplx(double)>& df,
                          const std::function<cplx(double)>& d2f, int n);

// Piecewise-smooth closed curve. Nodes are offset ((j+1/2)h) so that corners,
// snapped to grid multiples, never collide with nodes. Each piece is graded
// with a sigmoid substitution whose derivative vanishes to order p-1 at both
// ends (default p = 3).
Component composite_component(const std::vector<Piece>& pieces, int n);

// Same, with explicit node counts per piece (sum = n). Used where exact
// discrete symmetry matters (the polycircular ring).
Component composite_component_counts(const std::vector<Piece>& pieces,
                                     const std::vector<int>& counts);

// Circular-arc piece from angle ph0 to ph1 (signed sweep) about center.
Piece arc_piece(cplx center, double R, double ph0, double ph1);

// Grading order used by composite components.
inline constexpr int kGradingOrder = 3;
double grading_sigmoid(double x);
double grading_sigmoid_d1(double x);
double grading_sigmoid_d2(double x);

// Spec-level discretization of Omega_r for circle domains: capture circle (or
// the composite curve \hat C_r for OneIntersected) plus the enclosed circles.
// Throws InvalidRegime for regimes that need no boundary solve.
BoundaryDiscretization parametrize(const CaptureRegime& regime, const DomainSpec& spec,
                                   int n);

// Index pair (i, j), i < j, of a mutually tangent circle pair, if any.
std::optional<std::pair<std::size_t, std::size_t>> tangent_circle_pair(const DomainSpec& spec);

}  // namespace gf
