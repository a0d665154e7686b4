#include "gfunc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace gf {

namespace {

// PCG32: per-walker streams via the increment parameter.
struct Pcg32 {
  std::uint64_t state = 0, inc = 0;

  Pcg32(std::uint64_t seed, std::uint64_t stream) {
    inc = (stream << 1u) | 1u;
    next();
    state += seed;
    next();
  }
  std::uint32_t next() {
    std::uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    std::uint32_t xs = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xs >> rot) | (xs << ((32u - rot) & 31u));
  }
  double uniform() { return next() * 0x1p-32; }
};

struct Walker {
  const DomainSpec& spec;
  double r, eps;

  // Distance to the nearest boundary feature; red = feature point within the
  // closed capture disk (it belongs to E_r).
  double nearest(cplx z, bool& red) const {
    double d = r - std::abs(z);
    red = false;
    if (spec.kind == DomainKind::Circles) {
      for (const Circle& c : spec.circles) {
        double az = std::abs(z - c.center);
        double dc = az - c.radius;
        if (dc < d) {
          d = dc;
          cplx p = c.center + c.radius * (z - c.center) / az;
          red = std::abs(p) <= r;
        }
      }
    } else {
      for (const Slit& s : spec.slits) {
        double px = std::clamp(z.real(), s.a, s.b);
        double ds = std::abs(z - cplx(px, 0.0));
        if (ds < d) {
          d = ds;
          red = px <= r;
        }
      }
    }
    return d;
  }

  int run(Pcg32& rng) const {
    cplx z = 0.0;
    for (long step = 0; step < 1000000; ++step) {
      bool red = false;
      double d = nearest(z, red);
      if (d < eps) return red ? 1 : 0;
      double th = 2.0 * kPi * rng.uniform();
      z += std::polar(d, th);
    }
    throw WalkStall("walker exceeded the step budget");
  }
};

}  // namespace

McEstimate wos_g(const DomainSpec& spec, double r, const WosOptions& opt) {
  McEstimate est;
  est.walkers = opt.walkers;
  est.epsilon = opt.epsilon_rel * r;
  est.seed = opt.seed;

  if (spec.bounded() && r >= spec.outer) {
    est.mean = 1.0;
    est.walkers = 0;
    return est;
  }
  CaptureRegime reg =
      classify_regime(spec.bounded() ? spec.without_outer() : spec, r);
  if (reg.topology == Topology::Empty) {
    est.mean = 0.0;
    est.walkers = 0;
    return est;
  }

  Walker w{spec, r, est.epsilon};
  int nthreads = opt.threads > 0 ? opt.threads
                                 : std::max(1u, std::thread::hardware_concurrency());
  std::vector<long> hits(nthreads, 0);
  std::exception_ptr failure;
  auto job = [&](int tid) {
    try {
      long h = 0;
      for (long i = tid; i < opt.walkers; i += nthreads) {
        Pcg32 rng(opt.seed, static_cast<std::uint64_t>(i));
        h += w.run(rng);
      }
      hits[tid] = h;
    } catch (...) {
      failure = std::current_exception();
    }
  };
  if (nthreads == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(job, t);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  long total = 0;
  for (long h : hits) total += h;
  est.mean = static_cast<double>(total) / opt.walkers;
  est.stderror = std::sqrt(est.mean * (1.0 - est.mean) / opt.walkers);
  return est;
}

double eccentric_annulus_g(double center, double R, double r) {
  if (!(center > 0.0 && R > 0.0 && center + R < r && center > R))
    throw DegenerateConfiguration("need a disk strictly inside the capture circle, "
                                  "basepoint outside it");
  double b = r * r + center * center - R * R;
  double disc = b * b - 4.0 * center * center * r * r;
  if (disc <= 0.0) throw DegenerateConfiguration("no real inversive point pair");
  double p = (b + std::sqrt(disc)) / (2.0 * center);
  double q = r * r / p;
  auto T = [&](cplx z) { return (z - q) / (z - p); };
  double Rout = std::abs(T(cplx(r, 0)));
  double rin = std::abs(T(cplx(center + R, 0)));
  double w0 = std::abs(T(cplx(0, 0)));
  return std::log(Rout / w0) / std::log(Rout / rin);
}

}  // namespace gf
