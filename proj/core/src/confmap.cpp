#include "gfunc/confmap.hpp"

#include <algorithm>
#include <sstream>
#include <cmath>

#include "gfunc/closedform.hpp"
#include "gfunc/dirichlet.hpp"
#include "gfunc/kernel.hpp"

namespace gf {

namespace {

double seg_dist(cplx w, const Slit& s) {
  double x = std::clamp(w.real(), s.a, s.b);
  return std::abs(w - cplx(x, 0.0));
}

Circle circumcircle(cplx z1, cplx z2, cplx z3) {
  // Perpendicular-bisector intersection; exact for Moebius images of circles.
  double ax = z1.real(), ay = z1.imag();
  double bx = z2.real(), by = z2.imag();
  double cx = z3.real(), cy = z3.imag();
  double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::abs(d) < 1e-300) throw DegenerateConfiguration("collinear circumcircle points");
  double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
               (cx * cx + cy * cy) * (ay - by)) /
              d;
  double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
               (cx * cx + cy * cy) * (bx - ax)) /
              d;
  Circle out;
  out.center = cplx(ux, uy);
  out.radius = std::abs(z1 - out.center);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentMap
// ---------------------------------------------------------------------------

cplx LaurentMap::block(cplx z, int k, int j) const {
  cplx t = std::pow(rho_[k] / (z - c_[k]), j);
  if (!odd_) return t;
  double sgn = (j % 2 == 0) ? -1.0 : 1.0;  // (-1)^(j+1)
  return t + sgn * std::pow(rho_[k] / (z + c_[k]), j);
}

cplx LaurentMap::map(cplx z) const {
  cplx out = z;
  const int J = static_cast<int>(a_.cols());
  for (int k = 0; k < size(); ++k)
    for (int j = 1; j <= J; ++j) out += a_(k, j - 1) * block(z, k, j);
  return out;
}

cplx LaurentMap::dmap(cplx z) const {
  cplx out = 1.0;
  const int J = static_cast<int>(a_.cols());
  for (int k = 0; k < size(); ++k)
    for (int j = 1; j <= J; ++j) {
      cplx t = -double(j) * std::pow(rho_[k] / (z - c_[k]), j) / (z - c_[k]);
      if (odd_) {
        double sgn = (j % 2 == 0) ? -1.0 : 1.0;
        t += sgn * -double(j) * std::pow(rho_[k] / (z + c_[k]), j) / (z + c_[k]);
      }
      out += a_(k, j - 1) * t;
    }
  return out;
}

cplx LaurentMap::d2map(cplx z) const {
  cplx out = 0.0;
  const int J = static_cast<int>(a_.cols());
  for (int k = 0; k < size(); ++k)
    for (int j = 1; j <= J; ++j) {
      cplx t = double(j) * double(j + 1) * std::pow(rho_[k] / (z - c_[k]), j) /
               ((z - c_[k]) * (z - c_[k]));
      if (odd_) {
        double sgn = (j % 2 == 0) ? -1.0 : 1.0;
        t += sgn * double(j) * double(j + 1) * std::pow(rho_[k] / (z + c_[k]), j) /
             ((z + c_[k]) * (z + c_[k]));
      }
      out += a_(k, j - 1) * t;
    }
  return out;
}

Eigen::VectorXd LaurentMap::residual(int Q) const {
  const int m = size();
  Eigen::VectorXd res(m * (Q + 2));
  int row = 0;
  for (int k = 0; k < m; ++k) {
    for (int q = 0; q < Q; ++q) {
      double th = kPi * (q + 0.5) / Q;
      res[row++] = map(c_[k] + rho_[k] * std::polar(1.0, th)).imag();
    }
    res[row++] = map(cplx(c_[k] + rho_[k], 0.0)).real() - targets_[k].b;
    res[row++] = map(cplx(c_[k] - rho_[k], 0.0)).real() - targets_[k].a;
  }
  return res;
}

double LaurentMap::boundary_deviation(int samples_per_circle) const {
  double dev = 0.0;
  for (int k = 0; k < size(); ++k)
    for (int q = 0; q < samples_per_circle; ++q) {
      double th = 2.0 * kPi * q / samples_per_circle;
      dev = std::max(dev, seg_dist(map(c_[k] + rho_[k] * std::polar(1.0, th)), targets_[k]));
    }
  return dev;
}

LaurentMap LaurentMap::fit(const std::vector<Slit>& slits, bool odd, int order) {
  LaurentMap lm;
  lm.targets_ = slits;
  lm.odd_ = odd;
  const int m = static_cast<int>(slits.size());
  lm.c_.resize(m);
  lm.rho_.resize(m);
  for (int k = 0; k < m; ++k) {
    lm.c_[k] = 0.5 * (slits[k].a + slits[k].b);
    lm.rho_[k] = 0.25 * (slits[k].b - slits[k].a);
  }
  if (m == 0) return lm;

  double scale = 0.0;
  for (const auto& s : slits) scale = std::max({scale, std::abs(s.a), std::abs(s.b)});
  const double restol = 1e-12 * std::max(1.0, scale);
  const double devtol = 1e-10 * std::max(1.0, scale);

  int total_iters = 0;
  for (int J = order; J <= order + 24; J += 8) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, J);
    if (lm.a_.size() > 0) a.leftCols(lm.a_.cols()) = lm.a_;
    else
      for (int k = 0; k < m; ++k) a(k, 0) = lm.rho_[k];  // Joukowski start
    lm.a_ = a;

    const int Q = 2 * J + 8;
    const int nres = m * (Q + 2);
    const int nunk = m * (J + 2);
    bool converged = false;

    for (int it = 0; it < 60; ++it, ++total_iters) {
      Eigen::VectorXd r0 = lm.residual(Q);
      if (r0.lpNorm<Eigen::Infinity>() < restol) {
        converged = true;
        break;
      }
      Eigen::MatrixXd Jac = Eigen::MatrixXd::Zero(nres, nunk);
      int row = 0;
      for (int k = 0; k < m; ++k) {
        auto fill_row = [&](cplx z, cplx dz_dc, cplx dz_drho, bool imag_part, int r) {
          cplx Fp = lm.dmap(z);
          for (int l = 0; l < m; ++l) {
            cplx dc(0, 0), dr(0, 0);
            for (int j = 1; j <= J; ++j) {
              cplx t1 = std::pow(lm.rho_[l] / (z - lm.c_[l]), j);
              dc += lm.a_(l, j - 1) * double(j) * t1 / (z - lm.c_[l]);
              dr += lm.a_(l, j - 1) * double(j) / lm.rho_[l] * t1;
              if (odd) {
                double sgn = (j % 2 == 0) ? -1.0 : 1.0;
                cplx t2 = std::pow(lm.rho_[l] / (z + lm.c_[l]), j);
                dc += lm.a_(l, j - 1) * sgn * -double(j) * t2 / (z + lm.c_[l]);
                dr += lm.a_(l, j - 1) * sgn * double(j) / lm.rho_[l] * t2;
              }
              cplx bb = lm.block(z, l, j);
              Jac(r, l * J + (j - 1)) = imag_part ? bb.imag() : bb.real();
            }
            if (l == k) {
              dc += Fp * dz_dc;
              dr += Fp * dz_drho;
            }
            Jac(r, m * J + l) = imag_part ? dc.imag() : dc.real();
            Jac(r, m * J + m + l) = imag_part ? dr.imag() : dr.real();
          }
        };
        for (int q = 0; q < Q; ++q) {
          double th = kPi * (q + 0.5) / Q;
          cplx e = std::polar(1.0, th);
          fill_row(lm.c_[k] + lm.rho_[k] * e, 1.0, e, /*imag=*/true, row);
          ++row;
        }
        fill_row(cplx(lm.c_[k] + lm.rho_[k], 0.0), 1.0, 1.0, /*imag=*/false, row);
        ++row;
        fill_row(cplx(lm.c_[k] - lm.rho_[k], 0.0), 1.0, -1.0, /*imag=*/false, row);
        ++row;
      }

      Eigen::VectorXd dx = Jac.colPivHouseholderQr().solve(-r0);
      double base = r0.lpNorm<Eigen::Infinity>();
      std::vector<double> c0 = lm.c_, rho0 = lm.rho_;
      Eigen::MatrixXd a0 = lm.a_;
      double lam = 1.0;
      for (int half = 0; half < 25; ++half, lam *= 0.5) {
        for (int l = 0; l < m; ++l) {
          for (int j = 0; j < J; ++j) lm.a_(l, j) = a0(l, j) + lam * dx[l * J + j];
          lm.c_[l] = c0[l] + lam * dx[m * J + l];
          lm.rho_[l] = rho0[l] + lam * dx[m * J + m + l];
        }
        bool ok = true;
        for (int l = 0; l < m; ++l)
          if (!(lm.rho_[l] > 0.0)) ok = false;
        if (ok && lm.residual(Q).lpNorm<Eigen::Infinity>() < base) break;
        if (half == 24) {  // give up on this step
          lm.a_ = a0;
          lm.c_ = c0;
          lm.rho_ = rho0;
        }
      }
    }

    if (converged) {
      double dev = lm.boundary_deviation();
      if (dev <= devtol) {
        lm.report_ = {total_iters, J, dev};
        return lm;
      }
    }
  }
  throw NoConvergence("slit-to-circle map did not reach the boundary tolerance");
}

cplx LaurentMap::inverse(cplx w, cplx seed) const {
  cplx z = seed;
  double best = std::abs(map(z) - w);
  for (int it = 0; it < 100; ++it) {
    cplx f = map(z) - w;
    if (std::abs(f) < 1e-13 * (1.0 + std::abs(w))) return z;
    cplx step = f / dmap(z);
    double lam = 1.0;
    for (int half = 0; half < 40; ++half, lam *= 0.5) {
      cplx zt = z - lam * step;
      double v = std::abs(map(zt) - w);
      if (v < best) {
        z = zt;
        best = v;
        break;
      }
      if (half == 39) throw InversionFailure("point inversion stalled");
    }
  }
  throw InversionFailure("point inversion did not converge");
}

// ---------------------------------------------------------------------------

std::vector<Circle> CircularEquivalent::circles() const {
  std::vector<Circle> out;
  for (int k = 0; k < map.size(); ++k)
    out.push_back({cplx(map.center(k), 0.0), map.radius(k)});
  return out;
}

CircularEquivalent slits_to_circles(const std::vector<Slit>& slits) {
  return {LaurentMap::fit(slits, /*odd=*/false)};
}

Component capture_preimage(const CircularEquivalent& eq, double r, int n) {
  const LaurentMap& F = eq.map;
  std::vector<cplx> nodes(n);
  cplx seed = cplx(r, 0.0);
  for (int j = 0; j < n; ++j) {
    cplx w = std::polar(r, 2.0 * kPi * j / n);
    seed = F.inverse(w, seed);  // continuation around the circle
    nodes[j] = seed;
  }
  Component c;
  c.t.resize(n);
  c.eta = nodes;
  c.etap.resize(n);
  c.etapp.resize(n);
  for (int j = 0; j < n; ++j) {
    double t = 2.0 * kPi * j / n;
    c.t[j] = t;
    cplx w = std::polar(r, t);
    cplx wp = cplx(0, 1) * w;
    cplx wpp = -w;
    cplx Fp = F.dmap(nodes[j]);
    c.etap[j] = wp / Fp;
    c.etapp[j] = wpp / Fp - wp * F.d2map(nodes[j]) * c.etap[j] / (Fp * Fp);
  }
  return c;
}

// ---------------------------------------------------------------------------

cplx BoundedCircularMap::halfplane_map(cplx w) const {
  return cplx(0, 1) * engine.map(cplx(0, -1) * w);
}

cplx BoundedCircularMap::disk_to_halfplane(cplx zeta) const {
  return (std::conj(p) * zeta - cplx(0, 1) * p) / (zeta - cplx(0, 1));
}

cplx BoundedCircularMap::forward(cplx zeta) const {
  return halfplane_map(disk_to_halfplane(zeta));
}

BoundedCircularMap halfplane_slits_to_bounded_circles(const std::vector<Slit>& q_intervals,
                                                      cplx zeta0) {
  for (const auto& q : q_intervals)
    if (!(0.0 < q.a && q.a < q.b))
      throw ConfigError("q-intervals must lie on the positive axis");
  BoundedCircularMap bm;
  bm.engine = LaurentMap::fit(q_intervals, /*odd=*/true);
  bm.zeta0 = zeta0;
  // H(p) = zeta0  <=>  engine(-i p) = -i zeta0 (real positive for the slit
  // geometry, so the preimage stays on the axis of symmetry).
  cplx xi = bm.engine.inverse(cplx(0, -1) * zeta0, cplx(0, -1) * zeta0);
  bm.p = cplx(0, 1) * xi;
  if (!(bm.p.imag() > 0.0)) throw NoConvergence("basepoint preimage left the half-plane");
  auto Tinv = [&](cplx w) {
    return cplx(0, 1) * (w - bm.p) / (w - std::conj(bm.p));
  };
  for (int k = 0; k < bm.engine.size(); ++k) {
    cplx ctr(0.0, bm.engine.center(k));
    double rho = bm.engine.radius(k);
    bm.gamma.push_back(circumcircle(Tinv(ctr + rho), Tinv(ctr + cplx(0, rho)),
                                    Tinv(ctr - rho)));
  }
  return bm;
}

// ---------------------------------------------------------------------------

TangencyOpening TangencyOpening::between(const Circle& first, const Circle& second) {
  TangencyOpening t;
  cplx d = second.center - first.center;
  t.dir = d / std::abs(d);
  t.touch = first.center + t.dir * first.radius;
  t.lo = -1.0 / (2.0 * first.radius);
  t.hi = 1.0 / (2.0 * second.radius);
  t.mid = 0.5 * (t.lo + t.hi);
  t.K = kPi / (2.0 * (t.hi - t.lo));
  return t;
}

cplx TangencyOpening::fwd(cplx z) const {
  return std::tanh(cplx(0, K) * (line_coord(z) - mid));
}

cplx TangencyOpening::dfwd(cplx z) const {
  cplx u = cplx(0, K) * (line_coord(z) - mid);
  cplx sech2 = 1.0 / (std::cosh(u) * std::cosh(u));
  return sech2 * cplx(0, K) * (-dir / ((z - touch) * (z - touch)));
}

cplx TangencyOpening::d2fwd(cplx z) const {
  cplx u = cplx(0, K) * (line_coord(z) - mid);
  cplx th = std::tanh(u);
  cplx sech2 = 1.0 - th * th;
  cplx w1 = -dir / ((z - touch) * (z - touch));       // d(line_coord)/dz
  cplx w2 = 2.0 * dir / ((z - touch) * (z - touch) * (z - touch));
  cplx iK(0, K);
  return iK * (-2.0 * th * sech2 * iK * w1 * w1 + sech2 * w2);
}

cplx TangencyOpening::inv(cplx sigma) const {
  cplx w = std::atanh(sigma) / cplx(0, K) + mid;
  return touch + dir / w;
}

// ---------------------------------------------------------------------------
// Polycircular ring disk map
// ---------------------------------------------------------------------------

DiskMap polycircular_to_disk(const DomainSpec& spec, double r, int nodes_per_piece,
                             double min_rcond) {
  CaptureRegime reg = classify_regime(spec, r);
  if (reg.topology != Topology::PolycircularRing)
    throw InvalidRegime("polycircular disk map needs the ring regime");
  const std::size_t ell = spec.circles.size();

  // Corners xi_{2k-1}, xi_{2k} ccw; boundary pieces alternate red_k, blue_k.
  struct RingArc {
    double phi, half;  // capture-circle angles hidden by circle k
  };
  std::vector<RingArc> arcs(ell);
  std::vector<Piece> pieces;
  std::vector<int> counts;
  for (std::size_t k = 0; k < ell; ++k) {
    const Circle& c = spec.circles[k];
    auto is = circle_intersection(c.center, c.radius, r);
    double phi = std::arg(c.center);
    arcs[k] = {phi, std::atan2(is.y, is.x)};
  }
  // Sort by angular position so the traversal is ccw even for unsorted input.
  std::vector<std::size_t> order(ell);
  for (std::size_t k = 0; k < ell; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return arcs[a].phi < arcs[b].phi; });

  for (std::size_t i = 0; i < ell; ++i) {
    std::size_t k = order[i], knext = order[(i + 1) % ell];
    const Circle& c = spec.circles[k];
    auto is = circle_intersection(c.center, c.radius, r);
    cplx rot = c.center / std::abs(c.center);
    double pa = std::arg((is.xi1 - c.center) / rot);
    double pb = std::arg((is.xi2 - c.center) / rot);
    if (pa < 0) pa += 2.0 * kPi;
    if (pb < 0) pb += 2.0 * kPi;
    double end = pb > pa ? pb - 2.0 * kPi : pb;
    pieces.push_back(arc_piece(c.center, c.radius, arcs[k].phi + pa, arcs[k].phi + end));
    counts.push_back(nodes_per_piece);
    double b0 = arcs[k].phi + arcs[k].half;
    double b1 = arcs[knext].phi - arcs[knext].half;
    if (b1 < b0) b1 += 2.0 * kPi;
    pieces.push_back(arc_piece(0.0, r, b0, b1));
    counts.push_back(nodes_per_piece);
  }

  BoundaryDiscretization disc;
  disc.n = static_cast<int>(2 * ell) * nodes_per_piece;
  disc.alpha = 0.0;
  disc.components.push_back(composite_component_counts(pieces, counts));
  KernelSystem K(disc, min_rcond);

  const int n = disc.n;
  const int npp = nodes_per_piece;
  const int L = static_cast<int>(ell);
  DiskMap dm;
  std::vector<double> red(ell), gap(ell);

  // Per-circle wedges and per-gap arc ranges, in traversal order.
  std::vector<WedgeParams> wps;
  std::vector<std::pair<double, double>> brange;
  for (int i = 0; i < L; ++i) {
    std::size_t k = order[i], knext = order[(i + 1) % ell];
    wps.push_back(wedge_params(spec.circles[k].center, spec.circles[k].radius, r));
    double b0 = arcs[k].phi + arcs[k].half;
    double b1 = arcs[knext].phi - arcs[knext].half;
    if (b1 < b0) b1 += 2.0 * kPi;
    brange.emplace_back(b0, b1);
  }
  auto arcval = [&](int i, cplx z) {
    return disk_arc_measure(z, r, brange[i].first, brange[i].second);
  };

  // Red arc measures: omega(red_i) = U_i + v with v continuous (the wedge
  // absorbs both boundary jumps of the indicator).
  for (int i = 0; i < L; ++i) {
    Vec data = Vec::Zero(n);
    for (int q = 0; q < n; ++q) {
      if (q / npp == 2 * i) continue;  // 1 - U = 0 on its own arc
      data[q] = -wedge_solution(K.eta()[q], wps[i]);
    }
    Vec mu = K.solve_density(data);
    auto nr = K.compute_nu(mu, data);
    dm.health = std::max(dm.health, nr.stddevs[0]);
    red[i] = 2.0 * kPi * (wedge_solution(0.0, wps[i]) - nr.consts[0]);
  }

  // Gap measures. The disk-arc function alone leaves corner jumps: its limit
  // along the adjoining red curve is an angle fraction, not 0. Build a
  // jump-matched splitter H = sum a_i A_i + sum u_i U_i whose boundary jumps
  // reproduce the blue_K indicator exactly; the remaining data is continuous.
  // lamA[i]: limit of A_i entering its b0 corner along red_i (red piece ends
  // there); lamB[i]: limit entering its b1 corner along red_{i+1}.
  std::vector<double> lamA(L), lamB(L);
  const double du = 1e-7;
  for (int i = 0; i < L; ++i) {
    cplx z_end = pieces[2 * i].f(1.0 - du);          // red_i just before xi_{2i}
    cplx z_next = pieces[2 * ((i + 1) % L)].f(du);   // red_{i+1} just after xi_{2i+1}
    lamA[i] = arcval(i, z_end);
    lamB[i] = arcval(i, z_next);
  }

  // Node values of all A_i, U_i on red pieces (blue pieces carry exact data).
  Mat Aval = Mat::Zero(n, L), Uval = Mat::Zero(n, L);
  for (int q = 0; q < n; ++q) {
    int piece = q / npp;
    if (piece % 2 == 1) continue;  // blue node: analytic data used instead
    for (int i = 0; i < L; ++i) {
      Aval(q, i) = arcval(i, K.eta()[q]);
      Uval(q, i) = (piece == 2 * i) ? 1.0 : wedge_solution(K.eta()[q], wps[i]);
    }
  }

  for (int Ktarget = 0; Ktarget < L; ++Ktarget) {
    // Cyclic jump-matching: at xi_{2k}:  (1 - lamA_k) a_k - u_k = delta_{kK};
    // at xi_{2k+1}: (lamB_k - 1) a_k + u_{k+1} = -delta_{kK}.
    // Jump-free combinations (constants) give the system a one-dimensional
    // null space; the extra row pins the gauge u_0 = 0.
    Mat sys = Mat::Zero(2 * L + 1, 2 * L);
    Vec rhs = Vec::Zero(2 * L + 1);
    for (int k = 0; k < L; ++k) {
      sys(2 * k, k) = 1.0 - lamA[k];
      sys(2 * k, L + k) = -1.0;
      rhs[2 * k] = (k == Ktarget) ? 1.0 : 0.0;
      sys(2 * k + 1, k) = lamB[k] - 1.0;
      sys(2 * k + 1, L + (k + 1) % L) = 1.0;
      rhs[2 * k + 1] = (k == Ktarget) ? -1.0 : 0.0;
    }
    sys(2 * L, L) = 1.0;
    Vec coef = sys.colPivHouseholderQr().solve(rhs);
    if ((sys.topRows(2 * L) * coef - rhs.head(2 * L)).lpNorm<Eigen::Infinity>() > 1e-6) {
      std::ostringstream os;
      os << "splitter jump matching failed: res="
         << (sys.topRows(2 * L) * coef - rhs.head(2 * L)).lpNorm<Eigen::Infinity>()
         << " lamA0=" << lamA[0] << " lamB0=" << lamB[0] << " maxcoef="
         << coef.lpNorm<Eigen::Infinity>();
      throw CornerOrderViolation(os.str());
    }

    Vec data = Vec::Zero(n);
    for (int q = 0; q < n; ++q) {
      int piece = q / npp;
      if (piece % 2 == 1) {  // blue_j: indicator minus H's boundary data
        int j = (piece - 1) / 2;
        data[q] = ((j == Ktarget) ? 1.0 : 0.0) - coef[j];
      } else {  // red: -(H interior trace)
        double h = 0.0;
        for (int i = 0; i < L; ++i)
          h += coef[i] * Aval(q, i) + coef[L + i] * Uval(q, i);
        data[q] = -h;
      }
    }
    Vec mu = K.solve_density(data);
    auto nr = K.compute_nu(mu, data);
    dm.health = std::max(dm.health, nr.stddevs[0]);
    double H0 = 0.0;
    for (int i = 0; i < L; ++i)
      H0 += coef[i] * arcval(i, 0.0) + coef[L + i] * wedge_solution(0.0, wps[i]);
    gap[Ktarget] = 2.0 * kPi * (H0 - nr.consts[0]);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < ell; ++i) total += red[i] + gap[i];
  dm.closure_defect = std::abs(total - 2.0 * kPi);
  double fix = 2.0 * kPi / total;
  double theta = 0.0;
  for (std::size_t i = 0; i < ell; ++i) {
    if (!(red[i] > 0.0) || !(gap[i] > 0.0))
      throw CornerOrderViolation("non-positive boundary arc measure");
    dm.zetas.push_back(std::polar(1.0, theta));
    theta += red[i] * fix;
    dm.zetas.push_back(std::polar(1.0, theta));
    theta += gap[i] * fix;
    dm.red.push_back(red[i] * fix);
    dm.gap.push_back(gap[i] * fix);
  }
  return dm;
}

}  // namespace gf
