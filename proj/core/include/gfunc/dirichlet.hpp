#pragma once

#include <vector>

#include "gfunc/kernel.hpp"
#include "gfunc/types.hpp"

namespace gf {

// Reduction of the Dirichlet problem to the m+1 real constants c, a_1..a_m.
struct ConstantsSolution {
  double c = 0.0;
  std::vector<double> a;
  std::vector<cplx> alphas;  // interior anchors of the log terms
  double cond = 0.0;         // condition number of the small system
  double max_nu_std = 0.0;   // worst per-component nu deviation (health)
  double raw_value = 0.0;    // last evaluate_basepoint value before clamping
};

// Builds the m log-data densities (plus one for gamma0 unless it is
// per-component constant, in which case nu_0 = -gamma0 exactly), extracts the
// piecewise constants nu_{k,j}, and solves the (m+1) x (m+1) linear system.
// alphas[j] must lie strictly inside the hole bounded by component j+1.
ConstantsSolution solve_constants(const KernelSystem& K, const Vec& gamma0,
                                  const std::vector<cplx>& alphas);

// u(z0) = c - sum_j a_j log|z0 - alpha_j|; the raw value is stored on the
// solution and, when clamp is set (the harmonic-measure case), the return
// value is clipped to [0,1]. Split pathways evaluate signed corrections and
// clamp the assembled total instead. z0 must equal the assembly's alpha.
double evaluate_basepoint(ConstantsSolution& sol, cplx z0, bool clamp = true);

}  // namespace gf
