#include "gfunc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gf {

namespace {

double sq(double x) { return x * x; }

void validate_components_inside_outer(const DomainSpec& s) {
  if (!s.bounded()) return;
  if (s.kind == DomainKind::Circles) {
    for (const auto& c : s.circles)
      if (std::abs(c.center) + c.radius >= s.outer)
        throw ConfigError("component not strictly inside the outer circle");
  } else {
    for (const auto& sl : s.slits)
      if (sl.b >= s.outer) throw ConfigError("slit not strictly inside the outer circle");
  }
}

}  // namespace

DomainSpec DomainSpec::make_circles(cplx basepoint, std::vector<Circle> circles,
                                    double outer) {
  DomainSpec s;
  s.kind = DomainKind::Circles;
  s.basepoint_raw = basepoint;
  s.outer = outer;
  for (auto& c : circles) c.center -= basepoint;
  std::stable_sort(circles.begin(), circles.end(),
                   [](const Circle& a, const Circle& b) {
                     return std::abs(a.center) < std::abs(b.center);
                   });
  for (const auto& c : circles) {
    if (!(c.radius > 0.0)) throw ConfigError("circle radius must be positive");
    if (std::abs(c.center) <= c.radius)
      throw ConfigError("a circle contains the basepoint");
  }
  for (std::size_t i = 0; i < circles.size(); ++i)
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      double d = std::abs(circles[i].center - circles[j].center);
      if (d < circles[i].radius + circles[j].radius - 1e-13)
        throw ConfigError("circles overlap");
    }
  s.circles = std::move(circles);
  validate_components_inside_outer(s);
  return s;
}

DomainSpec DomainSpec::make_slits(cplx basepoint, std::vector<Slit> slits, double outer) {
  DomainSpec s;
  s.kind = DomainKind::Slits;
  s.basepoint_raw = basepoint;
  s.outer = outer;
  if (std::abs(basepoint) != 0.0)
    throw ConfigError("slit domains require the basepoint at the origin");
  std::sort(slits.begin(), slits.end(), [](const Slit& x, const Slit& y) { return x.a < y.a; });
  double prev = 0.0;
  for (const auto& sl : slits) {
    if (!(prev < sl.a && sl.a < sl.b))
      throw ConfigError("slits must satisfy 0 < a_1 < b_1 < a_2 < ... < b_l");
    prev = sl.b;
  }
  s.slits = std::move(slits);
  validate_components_inside_outer(s);
  return s;
}

DomainSpec DomainSpec::without_outer() const {
  DomainSpec s = *this;
  s.outer = 0.0;
  return s;
}

DomainSpec DomainSpec::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw ConfigError("scale factor must be positive");
  DomainSpec s = *this;
  for (auto& c : s.circles) {
    c.center *= lambda;
    c.radius *= lambda;
  }
  for (auto& sl : s.slits) {
    sl.a *= lambda;
    sl.b *= lambda;
  }
  s.outer *= lambda;
  return s;
}

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::Empty: return "Empty";
    case Topology::ContinuousData: return "ContinuousData";
    case Topology::OneIntersected: return "OneIntersected";
    case Topology::PolycircularRing: return "PolycircularRing";
    case Topology::FullyCovered: return "FullyCovered";
  }
  return "?";
}

std::vector<double> regime_breakpoints(const DomainSpec& spec) {
  std::vector<double> b;
  if (spec.kind == DomainKind::Circles) {
    for (const auto& c : spec.circles) {
      b.push_back(std::abs(c.center) - c.radius);
      b.push_back(std::abs(c.center) + c.radius);
    }
  } else {
    for (const auto& sl : spec.slits) {
      b.push_back(sl.a);
      b.push_back(sl.b);
    }
  }
  if (spec.bounded()) b.push_back(spec.outer);
  std::sort(b.begin(), b.end());
  return b;
}

CaptureRegime classify_regime(const DomainSpec& spec, double r) {
  if (!(r > 0.0)) throw ConfigError("capture radius must be positive");
  CaptureRegime reg;
  reg.r = r;

  if (spec.bounded() && r >= spec.outer) {
    // Concentric outer circle: covering is exact at r = R0, no tangency issue.
    reg.topology = Topology::FullyCovered;
    for (std::size_t k = 0; k < spec.num_components(); ++k) reg.enclosed.push_back(k);
    return reg;
  }

  for (double b : regime_breakpoints(spec)) {
    if (b != spec.outer && std::abs(r - b) <= kBreakpointGuard)
      throw TangencyDegenerate("capture radius within guard of breakpoint");
  }

  if (spec.kind == DomainKind::Circles) {
    for (std::size_t k = 0; k < spec.circles.size(); ++k) {
      double d = spec.delta(k), R = spec.circles[k].radius;
      if (r > d + R)
        reg.enclosed.push_back(k);
      else if (r > d - R)
        reg.intersected.push_back(k);
    }
  } else {
    for (std::size_t k = 0; k < spec.slits.size(); ++k) {
      if (r > spec.slits[k].b)
        reg.enclosed.push_back(k);
      else if (r > spec.slits[k].a)
        reg.intersected.push_back(k);
    }
  }

  if (reg.intersected.empty()) {
    reg.topology = reg.enclosed.empty() ? Topology::Empty : Topology::ContinuousData;
    return reg;
  }
  if (reg.intersected.size() == 1) {
    // The intersected component must be the (m+1)-th in delta-order.
    if (reg.intersected[0] != reg.enclosed.size())
      throw RegimeUnsupported(
          "intersected component is not the next component in distance order");
    reg.topology = Topology::OneIntersected;
    return reg;
  }

  // Ring case: every component intersected, none enclosed, hidden arcs disjoint.
  if (spec.kind == DomainKind::Circles && reg.enclosed.empty() &&
      reg.intersected.size() == spec.circles.size() && spec.circles.size() >= 2) {
    std::vector<std::pair<double, double>> hidden;  // [phi - Delta, phi + Delta]
    for (const auto& c : spec.circles) {
      auto is = circle_intersection(c.center, c.radius, r);
      double half = std::atan2(is.y, is.x);
      double phi = std::arg(c.center);
      hidden.emplace_back(phi - half, phi + half);
    }
    std::sort(hidden.begin(), hidden.end());
    bool disjoint = true;
    for (std::size_t k = 0; k + 1 < hidden.size(); ++k)
      if (hidden[k + 1].first <= hidden[k].second) disjoint = false;
    if (hidden.back().second - 2 * kPi >= hidden.front().first) disjoint = false;
    if (disjoint) {
      reg.topology = Topology::PolycircularRing;
      return reg;
    }
  }
  throw RegimeUnsupported("capture circle intersects several components");
}

CircleIntersection circle_intersection(cplx center, double R, double r) {
  double d = std::abs(center);
  if (!(std::abs(r - d) < R && R < r + d))
    throw TangencyDegenerate("circles do not intersect transversally");
  CircleIntersection out;
  out.x = (sq(r) + sq(d) - sq(R)) / (2.0 * d);
  double y2 = sq(r) - sq(out.x);
  if (y2 <= sq(kBreakpointGuard)) throw TangencyDegenerate("tangential circle intersection");
  out.y = std::sqrt(y2);
  cplx rot = center / d;
  out.xi1 = rot * cplx(out.x, -out.y);
  out.xi2 = rot * cplx(out.x, out.y);
  return out;
}

double slit_intersection(double a, double b, double r) {
  if (!(a < r && r < b)) throw TangencyDegenerate("radius not inside the slit");
  return r;
}

// ---------------------------------------------------------------------------

double grading_sigmoid(double x) {
  double a = std::pow(x, kGradingOrder), b = std::pow(1.0 - x, kGradingOrder);
  return a / (a + b);
}

double grading_sigmoid_d1(double x) {
  int p = kGradingOrder;
  double a = std::pow(x, p), b = std::pow(1.0 - x, p);
  double da = p * std::pow(x, p - 1), db = -p * std::pow(1.0 - x, p - 1);
  double s = a + b;
  return (da * b - a * db) / (s * s);
}

double grading_sigmoid_d2(double x) {
  int p = kGradingOrder;
  double a = std::pow(x, p), b = std::pow(1.0 - x, p);
  double da = p * std::pow(x, p - 1), db = -p * std::pow(1.0 - x, p - 1);
  double d2a = p * (p - 1) * std::pow(x, p - 2), d2b = p * (p - 1) * std::pow(1.0 - x, p - 2);
  double s = a + b, ds = da + db, d2s = d2a + d2b;
  double num = (d2a * s - a * d2s) * s - 2.0 * (da * s - a * ds) * ds;
  return num / (s * s * s);
}

Component circle_component(cplx center, double R, int n, bool ccw, double phase) {
  Component c;
  c.t.resize(n);
  c.eta.resize(n);
  c.etap.resize(n);
  c.etapp.resize(n);
  double sgn = ccw ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) {
    double t = 2.0 * kPi * (j + phase) / n;
    c.t[j] = t;
    cplx e = std::polar(R, sgn * t);
    c.eta[j] = center + e;
    c.etap[j] = cplx(0, sgn) * e;
    c.etapp[j] = -e;
  }
  return c;
}

Component curve_component(const std::function<cplx(double)>& f,
                          const std::function<cplx(double)>& df,
                          const std::function<cplx(double)>& d2f, int n) {
  Component c;
  c.t.resize(n);
  c.eta.resize(n);
  c.etap.resize(n);
  c.etapp.resize(n);
  for (int j = 0; j < n; ++j) {
    double t = 2.0 * kPi * j / n;
    c.t[j] = t;
    c.eta[j] = f(t);
    c.etap[j] = df(t);
    c.etapp[j] = d2f(t);
  }
  return c;
}

Piece arc_piece(cplx center, double R, double ph0, double ph1) {
  double sweep = ph1 - ph0;
  Piece p;
  p.f = [=](double u) { return center + std::polar(R, ph0 + u * sweep); };
  p.df = [=](double u) { return cplx(0, 1) * sweep * std::polar(R, ph0 + u * sweep); };
  p.d2f = [=](double u) { return -sweep * sweep * std::polar(R, ph0 + u * sweep); };
  p.weight = std::abs(sweep) * R;
  return p;
}

Component composite_component_counts(const std::vector<Piece>& pieces,
                                     const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  Component out;
  out.t.resize(n);
  out.eta.resize(n);
  out.etap.resize(n);
  out.etapp.resize(n);
  double h = 2.0 * kPi / n;
  int start = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    int cnt = counts[i];
    double T0 = start * h, T1 = (start + cnt) * h;
    out.corner_t.push_back(T0);
    for (int j = 0; j < cnt; ++j) {
      double t = (start + j + 0.5) * h;
      double x = (t - T0) / (T1 - T0);
      double u = grading_sigmoid(x);
      double du = grading_sigmoid_d1(x) / (T1 - T0);
      double d2u = grading_sigmoid_d2(x) / ((T1 - T0) * (T1 - T0));
      int k = start + j;
      out.t[k] = t;
      out.eta[k] = p.f(u);
      cplx dfu = p.df(u);
      out.etap[k] = dfu * du;
      out.etapp[k] = p.d2f(u) * du * du + dfu * d2u;
    }
    start += cnt;
  }
  return out;
}

Component composite_component(const std::vector<Piece>& pieces, int n) {
  // Allocate nodes by sampled arclength, with a floor so short pieces keep
  // enough resolution for the corner grading.
  std::vector<double> len(pieces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    double s = 0.0;
    cplx prev = pieces[i].f(0.0);
    for (int q = 1; q <= 32; ++q) {
      cplx cur = pieces[i].f(q / 32.0);
      s += std::abs(cur - prev);
      prev = cur;
    }
    len[i] = s;
    total += s;
  }
  const int floor_nodes = std::max(4, n / (8 * static_cast<int>(pieces.size())));
  if (n < floor_nodes * static_cast<int>(pieces.size()) + 4)
    throw ConfigError("too few nodes for composite component");
  std::vector<int> counts(pieces.size());
  int assigned = 0;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    counts[i] = std::max(floor_nodes, static_cast<int>(std::lround(len[i] / total * n)));
    assigned += counts[i];
  }
  counts.back() = n - assigned;
  if (counts.back() < floor_nodes) {
    // steal evenly from the larger pieces
    int deficit = floor_nodes - counts.back();
    counts.back() = floor_nodes;
    for (std::size_t i = 0; deficit > 0; i = (i + 1) % (pieces.size() - 1)) {
      if (counts[i] > floor_nodes) {
        --counts[i];
        --deficit;
      }
    }
  }
  return composite_component_counts(pieces, counts);
}

std::optional<std::pair<std::size_t, std::size_t>> tangent_circle_pair(const DomainSpec& spec) {
  if (spec.kind != DomainKind::Circles) return std::nullopt;
  for (std::size_t i = 0; i < spec.circles.size(); ++i)
    for (std::size_t j = i + 1; j < spec.circles.size(); ++j) {
      double gap = std::abs(spec.circles[i].center - spec.circles[j].center) -
                   (spec.circles[i].radius + spec.circles[j].radius);
      if (std::abs(gap) <= 1e-12) return std::make_pair(i, j);
    }
  return std::nullopt;
}

namespace {

// Composite outer curve \hat C_r for a single intersected circle: the capture
// arc outside the circle joined to the circle arc inside the capture disk at
// the two corner points.
Component intersected_outer_curve(const Circle& circ, double r, int n) {
  auto is = circle_intersection(circ.center, circ.radius, r);
  double phi = std::arg(circ.center);
  double th2 = std::atan2(is.y, is.x);  // corner half-angle on the capture circle
  // Blue: capture arc ccw from xi2 to xi1 (rotated frame angles th2 .. 2pi-th2).
  Piece blue = arc_piece(0.0, r, phi + th2, phi + 2.0 * kPi - th2);
  // Red: circle arc from xi1 through the near point, clockwise about the center.
  double pa = std::arg((is.xi1 - circ.center) / (circ.center / std::abs(circ.center)));
  double pb = std::arg((is.xi2 - circ.center) / (circ.center / std::abs(circ.center)));
  if (pa < 0) pa += 2.0 * kPi;
  if (pb < 0) pb += 2.0 * kPi;
  double end = pb > pa ? pb - 2.0 * kPi : pb;
  Piece red = arc_piece(circ.center, circ.radius, phi + pa, phi + end);
  return composite_component({blue, red}, n);
}

double min_node_gap(const BoundaryDiscretization& d) {
  double best = 1e300;
  for (std::size_t a = 0; a < d.components.size(); ++a)
    for (std::size_t b = a + 1; b < d.components.size(); ++b)
      for (const cplx& p : d.components[a].eta)
        for (const cplx& q : d.components[b].eta) best = std::min(best, std::abs(p - q));
  return best;
}

}  // namespace

BoundaryDiscretization parametrize(const CaptureRegime& regime, const DomainSpec& spec,
                                   int n) {
  if (regime.topology != Topology::ContinuousData &&
      regime.topology != Topology::OneIntersected)
    throw InvalidRegime("no boundary-integral discretization for this regime");
  if (spec.kind != DomainKind::Circles)
    throw InvalidRegime("slit domains are discretized through their circular equivalents");
  if (n % 2 != 0 || n < 8) throw ConfigError("node count must be even and >= 8");

  BoundaryDiscretization d;
  d.n = n;
  d.alpha = 0.0;

  if (regime.topology == Topology::ContinuousData)
    d.components.push_back(circle_component(0.0, regime.r, n, true));
  else
    d.components.push_back(
        intersected_outer_curve(spec.circles[regime.intersected[0]], regime.r, n));

  for (std::size_t k : regime.enclosed)
    d.components.push_back(circle_component(spec.circles[k].center, spec.circles[k].radius,
                                            n, false));

  // Tangent components produce coincident nodes on symmetric grids; shift
  // phases deterministically until the grids clear each other.
  double scale = regime.r;
  for (int attempt = 0; attempt < 8 && min_node_gap(d) < 1e-10 * scale; ++attempt) {
    for (std::size_t k = 0; k < regime.enclosed.size(); ++k) {
      double phase = 0.381966011250105 * (attempt + 1) * (k + 1);
      phase -= std::floor(phase);
      d.components[k + 1] = circle_component(spec.circles[regime.enclosed[k]].center,
                                             spec.circles[regime.enclosed[k]].radius, n,
                                             false, phase);
    }
  }
  if (min_node_gap(d) < 1e-12 * scale)
    throw SingularGeometry("coincident boundary nodes");
  return d;
}

}  // namespace gf
