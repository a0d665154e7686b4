#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "gfunc/geometry.hpp"
#include "gfunc/types.hpp"

namespace gf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Nystrom discretization of the generalized Neumann kernel N and the singular
// companion kernel M on a boundary discretization, with trapezoid weights
// folded in. The same-component singular part of M is the periodic cotangent,
// discretized by the odd-offset (Wittich) rule; the smooth remainder and all
// cross-component blocks use the plain trapezoid rule with analytic diagonal
// limits.
class KernelSystem {
 public:
  explicit KernelSystem(const BoundaryDiscretization& disc,
                        double min_rcond = 2.5e-4);

  int total_nodes() const { return static_cast<int>(eta_.size()); }
  int nodes_per_component() const { return n_; }
  int num_components() const { return ncomp_; }
  cplx alpha() const { return alpha_; }
  const std::vector<cplx>& eta() const { return eta_; }
  const std::vector<cplx>& etap() const { return etap_; }
  int component_of(int i) const { return i / n_; }

  const Mat& i_minus_n() const { return IN_; }
  Vec apply_m(const Vec& x) const { return M_ * x; }

  // mu solving (I - N) mu = -M gamma, by dense LU (factored once, reused).
  Vec solve_density(const Vec& gamma) const;

  // nu = [M mu - (I - N) gamma]/2 with per-component constants and an
  // arclength-weighted deviation as a discretization health metric.
  struct NuResult {
    Vec nu;
    std::vector<double> consts;
    std::vector<double> stddevs;
  };
  NuResult compute_nu(const Vec& mu, const Vec& gamma) const;

  // Arclength-weighted mean/deviation of a nodal function over component k.
  double component_mean(const Vec& f, int k) const;
  double component_std(const Vec& f, int k) const;

  // Reciprocal condition estimate of (I - N). Corner discretizations can park
  // a discrete eigenvalue near 1 for sporadic (geometry, n) pairs; callers
  // retry with a shifted node count when this collapses.
  double rcond() const;

 private:
  int n_ = 0, ncomp_ = 0;
  cplx alpha_;
  std::vector<cplx> eta_, etap_;
  std::vector<double> warc_;  // |eta'| h
  Mat IN_, M_;
  mutable std::unique_ptr<Eigen::PartialPivLU<Mat>> lu_;
  mutable double rcond_ = -1.0;
  double min_rcond_ = 2.5e-4;
};

}  // namespace gf
