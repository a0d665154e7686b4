#include "gfunc/kernel.hpp"

#include <cmath>

namespace gf {

KernelSystem::KernelSystem(const BoundaryDiscretization& disc, double min_rcond)
    : min_rcond_(min_rcond) {
  n_ = disc.n;
  ncomp_ = static_cast<int>(disc.components.size());
  alpha_ = disc.alpha;
  if (n_ % 2 != 0) throw ConfigError("kernel discretization requires an even node count");

  const int N = n_ * ncomp_;
  eta_.reserve(N);
  etap_.reserve(N);
  std::vector<cplx> etapp;
  std::vector<double> tloc;
  etapp.reserve(N);
  tloc.reserve(N);
  for (const auto& comp : disc.components) {
    if (static_cast<int>(comp.eta.size()) != n_)
      throw ConfigError("all components must share the node count");
    eta_.insert(eta_.end(), comp.eta.begin(), comp.eta.end());
    etap_.insert(etap_.end(), comp.etap.begin(), comp.etap.end());
    etapp.insert(etapp.end(), comp.etapp.begin(), comp.etapp.end());
    tloc.insert(tloc.end(), comp.t.begin(), comp.t.end());
  }

  const double h = 2.0 * kPi / n_;
  warc_.resize(N);
  double scale = 0.0;
  for (int i = 0; i < N; ++i) {
    warc_[i] = std::abs(etap_[i]) * h;
    scale = std::max(scale, std::abs(eta_[i] - alpha_));
  }

  std::vector<cplx> A(N);
  for (int i = 0; i < N; ++i) {
    A[i] = eta_[i] - alpha_;
    if (std::abs(A[i]) < 1e-13 * scale)
      throw SingularGeometry("evaluation point lies on the boundary");
  }

  IN_.resize(N, N);
  M_.resize(N, N);

  // Same-component singular part: M(s,t) = -cot((s-t)/2)/(2pi) + M1(s,t); the
  // cotangent convolution is applied by the odd-offset trapezoid rule, which
  // is exact for trigonometric polynomials of degree < n/2.
  for (int i = 0; i < N; ++i) {
    const cplx Ai = A[i];
    const int ci = i / n_;
    for (int j = 0; j < N; ++j) {
      const bool same = (j / n_) == ci;
      double Nij, Mij;
      if (i == j) {
        cplx diag = etapp[i] / (2.0 * etap_[i]) - etap_[i] / Ai;
        Nij = (1.0 / kPi) * diag.imag() * h;
        Mij = (1.0 / kPi) * diag.real() * h;
      } else {
        cplx d = eta_[j] - eta_[i];
        if (std::abs(d) < 1e-13 * scale)
          throw SingularGeometry("coincident boundary nodes");
        cplx k = (Ai / A[j]) * etap_[j] / d;
        Nij = (1.0 / kPi) * k.imag() * h;
        double m_full = (1.0 / kPi) * k.real();
        if (same) {
          double dt = tloc[i] - tloc[j];
          double cth = 1.0 / std::tan(0.5 * dt);
          Mij = (m_full + cth / (2.0 * kPi)) * h;  // smooth remainder
          if (((i - j) % 2 + 2) % 2 == 1) Mij += -(2.0 / n_) * cth;
        } else {
          Mij = m_full * h;
        }
      }
      IN_(i, j) = (i == j ? 1.0 : 0.0) - Nij;
      M_(i, j) = Mij;
    }
  }
}

double KernelSystem::rcond() const {
  if (!lu_) lu_ = std::make_unique<Eigen::PartialPivLU<Mat>>(IN_);
  if (rcond_ < 0.0) rcond_ = lu_->rcond();
  return rcond_;
}

Vec KernelSystem::solve_density(const Vec& gamma) const {
  if (rcond() < min_rcond_)
    throw IllConditioned("discretized (I - N) is nearly singular");
  Vec rhs = -(M_ * gamma);
  Vec mu = lu_->solve(rhs);
  double resid = (IN_ * mu - rhs).lpNorm<Eigen::Infinity>();
  double ref = gamma.lpNorm<Eigen::Infinity>();
  if (!mu.allFinite() || (ref > 0.0 && resid > 1e-10 * ref))
    throw SolveFailure("density solve did not meet the residual contract");
  return mu;
}

KernelSystem::NuResult KernelSystem::compute_nu(const Vec& mu, const Vec& gamma) const {
  NuResult out;
  out.nu = 0.5 * (M_ * mu - IN_ * gamma);
  for (int k = 0; k < ncomp_; ++k) {
    out.consts.push_back(component_mean(out.nu, k));
    out.stddevs.push_back(component_std(out.nu, k));
  }
  return out;
}

double KernelSystem::component_mean(const Vec& f, int k) const {
  double s = 0.0, w = 0.0;
  for (int i = k * n_; i < (k + 1) * n_; ++i) {
    s += warc_[i] * f[i];
    w += warc_[i];
  }
  return s / w;
}

double KernelSystem::component_std(const Vec& f, int k) const {
  double m = component_mean(f, k);
  double s = 0.0, w = 0.0;
  for (int i = k * n_; i < (k + 1) * n_; ++i) {
    s += warc_[i] * (f[i] - m) * (f[i] - m);
    w += warc_[i];
  }
  return std::sqrt(s / w);
}

}  // namespace gf
