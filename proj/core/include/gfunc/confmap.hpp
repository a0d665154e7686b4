#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gfunc/geometry.hpp"
#include "gfunc/types.hpp"

namespace gf {

struct FitReport {
  int iterations = 0;
  int laurent_order = 0;
  double deviation = 0.0;  // max distance of mapped circles to their slits
};

// Conformal map F from the exterior of m disks with real centers onto the
// exterior of m collinear real slits, F(z) = z + O(1/z) at infinity,
// represented by truncated Laurent blocks with real coefficients. In odd mode
// the slit family is mirrored through the origin and F is odd, which halves
// the unknowns for the reflected half-plane problems.
class LaurentMap {
 public:
  static LaurentMap fit(const std::vector<Slit>& slits, bool odd, int order = 16);

  cplx map(cplx z) const;
  cplx dmap(cplx z) const;
  cplx d2map(cplx z) const;
  cplx inverse(cplx w) const { return inverse(w, w); }
  cplx inverse(cplx w, cplx seed) const;

  int size() const { return static_cast<int>(c_.size()); }
  bool odd() const { return odd_; }
  double center(int k) const { return c_[k]; }
  double radius(int k) const { return rho_[k]; }
  const std::vector<Slit>& targets() const { return targets_; }
  const FitReport& report() const { return report_; }

  // Max distance of densely sampled circle images to the target segments.
  double boundary_deviation(int samples_per_circle = 720) const;

 private:
  std::vector<Slit> targets_;
  std::vector<double> c_, rho_;
  Eigen::MatrixXd a_;  // m x J
  bool odd_ = false;
  FitReport report_;

  cplx block(cplx z, int k, int j) const;  // basis function B_kj
  Eigen::VectorXd residual(int Q) const;
};

// Unbounded circular-domain equivalent of a collinear slit domain.
struct CircularEquivalent {
  LaurentMap map;  // forward: circle domain -> slit domain
  std::vector<Circle> circles() const;
};

CircularEquivalent slits_to_circles(const std::vector<Slit>& slits);

// Preimage of the capture circle |w| = r under the forward map, as a smooth
// closed ccw curve with exact chain-rule derivatives.
Component capture_preimage(const CircularEquivalent& eq, double r, int n);

// Bounded circular-domain equivalent of the upper half-plane minus vertical
// slits on the positive imaginary axis (images i*[a,b] of the q-intervals),
// normalized by Phi(i) = infinity and Phi(0) = zeta0.
struct BoundedCircularMap {
  LaurentMap engine;           // odd-mode map in the rotated frame
  cplx p;                      // point with H(p) = zeta0
  std::vector<Circle> gamma;   // inner circles of the unit-disk domain
  cplx zeta0;

  cplx halfplane_map(cplx w) const;       // H: upper half-plane coords
  cplx disk_to_halfplane(cplx zeta) const;  // T
  cplx forward(cplx zeta) const;          // Phi = H o T
};

BoundedCircularMap halfplane_slits_to_bounded_circles(const std::vector<Slit>& q_intervals,
                                                      cplx zeta0);

// Elementary opening of a tangency between two circles: 1/(z - z*) sends the
// touching circles to parallel lines; tanh maps the strip onto the unit disk.
// Harmonic measure is invariant, and the cusp unfolds to two smooth boundary
// points, restoring spectral accuracy for tangent-pair domains.
struct TangencyOpening {
  cplx touch;   // tangency point
  cplx dir;     // unit vector from the first circle center to the second
  double lo = 0.0, hi = 0.0;  // strip edges: lo = -1/(2 R_first), hi = 1/(2 R_second)
  double K = 0.0, mid = 0.0;

  static TangencyOpening between(const Circle& first, const Circle& second);

  cplx line_coord(cplx z) const { return dir / (z - touch); }
  cplx fwd(cplx z) const;
  cplx dfwd(cplx z) const;
  cplx d2fwd(cplx z) const;
  cplx inv(cplx sigma) const;
};

// Boundary correspondence data of the disk map of a polycircular-ring domain:
// corner images zeta_j (ccw, pinned up to the free rotation) and the red/gap
// arc measures they bound.
struct DiskMap {
  std::vector<cplx> zetas;      // 2*ell corner images, zeta_1 at angle 0
  std::vector<double> red;      // measures of arcs (zeta_{2k-1} -> zeta_{2k})
  std::vector<double> gap;      // measures of arcs (zeta_{2k} -> zeta_{2k+1})
  double closure_defect = 0.0;  // |sum of raw measures - 2 pi| before normalizing
  double health = 0.0;          // worst nu deviation across the solves
};

// Disk map of the simply connected domain bounded by the captured circle arcs
// and the visible capture arcs, with psi(0) = 0. Arc measures are computed as
// harmonic measures at the basepoint via wedge/arc splittings and one kernel
// system shared across the right-hand sides.
DiskMap polycircular_to_disk(const DomainSpec& spec, double r, int nodes_per_piece,
                             double min_rcond = 2.5e-4);

}  // namespace gf
