#include "gfunc/closedform.hpp"

#include <cmath>

#include "gfunc/geometry.hpp"

namespace gf {

WedgeParams wedge_params(cplx center, double R, double r) {
  auto is = circle_intersection(center, R, r);
  WedgeParams p;
  p.x = is.x;
  p.y = is.y;
  p.xi1 = is.xi1;
  p.xi2 = is.xi2;
  p.center = center;
  p.R = R;
  p.r = r;
  p.d = r - std::abs(center) + R;
  double s = std::sqrt((r - p.x) / (r + p.x));
  p.alpha = 2.0 * std::atan(s);
  p.nu = 2.0 * std::atan((2.0 * r - p.d) / p.d * s);
  return p;
}

double wedge_solution(cplx z, const WedgeParams& p) {
  double tol = 1e-12 * p.r;
  if (std::abs(z) > p.r + tol || std::abs(z - p.center) < p.R - tol)
    throw DomainViolation("point outside the lens-complement region");
  return std::arg(std::polar(1.0, -p.alpha) * (z - p.xi2) / (z - p.xi1)) / p.nu;
}

double g_circle_m0(cplx center, double R, double r) {
  WedgeParams p = wedge_params(center, R, r);
  double s = std::sqrt((r - p.x) / (r + p.x));
  return std::atan(s) / std::atan((2.0 * r - p.d) / p.d * s);
}

SlitMapParams slit_map_params(double a, double r) {
  if (!(0.0 < a && a < r)) throw ConfigError("slit map needs 0 < a < r");
  return {a, r, (r - a) / (r + a)};
}

cplx psi_slit(cplx z, const SlitMapParams& p) {
  cplx q = (p.r - z) / (p.r + z);
  cplx rad = q * q - cplx(p.w * p.w, 0.0);
  // std::sqrt takes the principal branch, Re >= 0; the side of the doubled
  // slit rides on the sign of the (possibly signed-zero) imaginary part.
  return cplx(0, 1) * std::sqrt(rad);
}

double halfplane_slit_solution(cplx z, const SlitMapParams& p) {
  cplx w = psi_slit(z, p);
  return std::arg((w - p.w) / (w + p.w)) / kPi;
}

double g_slit_m0(double a, double r) {
  return (2.0 / kPi) * std::atan((r - a) / (2.0 * std::sqrt(r * a)));
}

namespace {

// arg with the upper-half-plane limit convention: real negatives get pi.
double arg_upper(cplx w) {
  if (w.imag() == 0.0) return w.real() < 0.0 ? kPi : 0.0;
  return std::arg(w);
}

}  // namespace

double halfplane_alternating(cplx w, std::span<const double> x) {
  if (w.imag() < 0.0) throw DomainViolation("point below the real axis");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) throw ConfigError("x_j must be strictly increasing");
  double u = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    int j = static_cast<int>(i) + 2;  // formula index
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    u += sign / kPi * arg_upper(w - x[i]);
  }
  return u;
}

cplx mobius_disk_to_halfplane(cplx zeta, cplx z1, cplx zl1, cplx zstar) {
  double sep = std::min({std::abs(z1 - zl1), std::abs(z1 - zstar), std::abs(zl1 - zstar)});
  if (sep < 1e-14) throw AnchorDegenerate("coincident Moebius anchor points");
  return ((zstar - z1) / (zstar - zl1)) * ((zeta - zl1) / (zeta - z1));
}

double disk_arc_measure(cplx z, double radius, double tha, double thb) {
  cplx za = std::polar(radius, tha), zb = std::polar(radius, thb);
  double span = thb - tha;
  double ang = std::arg((zb - z) / (za - z));
  // continuous branch: the subtended angle lies in (span/2, pi + span/2) for z
  // in the disk; fold the principal value into that window.
  while (ang < 0.5 * span - kPi) ang += 2.0 * kPi;
  while (ang > 0.5 * span + kPi) ang -= 2.0 * kPi;
  return (2.0 * ang - span) / (2.0 * kPi);
}

}  // namespace gf
