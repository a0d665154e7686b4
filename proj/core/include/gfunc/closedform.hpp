#pragma once

#include <span>
#include <vector>

#include "gfunc/types.hpp"

namespace gf {

// Parameters of the wedge transplant for a capture circle crossing one circle.
struct WedgeParams {
  double x = 0.0, y = 0.0;  // intersection coordinates in the rotated frame
  cplx xi1, xi2;            // intersection points (original frame)
  double alpha = 0.0;       // rotation of the Moebius image
  double nu = 0.0;          // wedge opening angle
  double d = 0.0;           // r - zeta3, zeta3 = |center| - R (arc bisection point)
  cplx center;              // intersected circle, kept for domain checks
  double R = 0.0, r = 0.0;
};

WedgeParams wedge_params(cplx center, double R, double r);

// Harmonic measure of the captured circle arc w.r.t. the lens-complement
// region: U_r(z) = arg(e^{-i alpha} (z - xi2)/(z - xi1)) / nu.
double wedge_solution(cplx z, const WedgeParams& p);

// g(r) for a simply connected capture crossing one circle (atan-ratio form).
double g_circle_m0(cplx center, double R, double r);

struct SlitMapParams {
  double a = 0.0;  // slit left endpoint
  double r = 0.0;  // capture radius
  double w = 0.0;  // (r - a)/(r + a) in (0,1)
};

SlitMapParams slit_map_params(double a, double r);

// Square-root map of the capture disk minus the captured slit portion onto the
// upper half-plane; branch with Re(sqrt) >= 0. Points on the doubled slit are
// disambiguated by the sign of a tiny imaginary offset.
cplx psi_slit(cplx z, const SlitMapParams& p);

// Half-plane solution: 1 on the captured slit portion, 0 on the capture circle.
double halfplane_slit_solution(cplx z, const SlitMapParams& p);

// g(r) = (2/pi) atan((r - a)/(2 sqrt(r a))) for one intersected slit.
double g_slit_m0(double a, double r);

// Alternating-argument harmonic function on the upper half-plane:
// U(w) = sum_{j>=2} ((-1)^j/pi) arg(w - x[j]); x strictly increasing, indices
// are 1-based in the formula so x[0] here corresponds to x_2. Real w is
// evaluated as a limit from above.
double halfplane_alternating(cplx w, std::span<const double> x);

// Moebius disk -> upper half-plane with phi(z1) = inf, phi(zl1) = 0,
// phi(zstar) = 1.
cplx mobius_disk_to_halfplane(cplx zeta, cplx z1, cplx zl1, cplx zstar);

// Harmonic measure at z of the boundary arc (tha -> thb, ccw) of |w| = radius.
double disk_arc_measure(cplx z, double radius, double tha, double thb);

}  // namespace gf
