#include "gfunc/dirichlet.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace gf {

namespace {

// Per-component constants of gamma0 when it is piecewise constant (so the
// j = 0 density solve can be skipped); nullopt otherwise.
std::optional<std::vector<double>> piecewise_constants(const KernelSystem& K,
                                                       const Vec& gamma0) {
  const int n = K.nodes_per_component();
  std::vector<double> vals;
  for (int k = 0; k < K.num_components(); ++k) {
    double v = gamma0[k * n];
    for (int i = k * n; i < (k + 1) * n; ++i)
      if (std::abs(gamma0[i] - v) > 1e-14 * (1.0 + std::abs(v))) return std::nullopt;
    vals.push_back(v);
  }
  return vals;
}

}  // namespace

ConstantsSolution solve_constants(const KernelSystem& K, const Vec& gamma0,
                                  const std::vector<cplx>& alphas) {
  const int m = static_cast<int>(alphas.size());
  if (K.num_components() != m + 1)
    throw ConfigError("anchor count must match the number of holes");
  const int N = K.total_nodes();

  ConstantsSolution sol;
  sol.alphas = alphas;

  // nu_{k,0} for the problem data.
  std::vector<double> nu0(m + 1);
  if (auto consts = piecewise_constants(K, gamma0)) {
    for (int k = 0; k <= m; ++k) nu0[k] = -(*consts)[k];  // gamma0 + nu_0 = 0
  } else {
    Vec mu0 = K.solve_density(gamma0);
    auto r = K.compute_nu(mu0, gamma0);
    nu0 = r.consts;
    sol.max_nu_std = *std::max_element(r.stddevs.begin(), r.stddevs.end());
  }

  // nu_{k,j} for the log data gamma_j = log|eta - alpha_j|.
  Mat numat = Mat::Zero(m + 1, m);
  for (int j = 0; j < m; ++j) {
    Vec gj(N);
    for (int i = 0; i < N; ++i) gj[i] = std::log(std::abs(K.eta()[i] - alphas[j]));
    Vec mu = K.solve_density(gj);
    auto r = K.compute_nu(mu, gj);
    for (int k = 0; k <= m; ++k) numat(k, j) = r.consts[k];
    sol.max_nu_std = std::max(
        sol.max_nu_std, *std::max_element(r.stddevs.begin(), r.stddevs.end()));
  }

  Mat sys(m + 1, m + 1);
  sys.leftCols(m) = numat;
  sys.col(m).setOnes();
  Vec rhs(m + 1);
  for (int k = 0; k <= m; ++k) rhs[k] = -nu0[k];

  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues()(m);
  sol.cond = smin > 0 ? svd.singularValues()(0) / smin : 1e308;
  if (sol.cond > 1e12)
    throw IllConditioned("constants system is nearly singular (touching components?)");
  Vec x = svd.solve(rhs);
  sol.a.assign(x.data(), x.data() + m);
  sol.c = x[m];
  return sol;
}

double evaluate_basepoint(ConstantsSolution& sol, cplx z0, bool clamp) {
  double u = sol.c;
  for (std::size_t j = 0; j < sol.a.size(); ++j)
    u -= sol.a[j] * std::log(std::abs(z0 - sol.alphas[j]));
  sol.raw_value = u;
  return clamp ? std::clamp(u, 0.0, 1.0) : u;
}

}  // namespace gf
