#include "lorlab/geometry.hpp"

#include <algorithm>
#include <cassert>

namespace lorlab {
namespace {

constexpr double kGeomEps = 1e-12;

double cross(Vec2 a, Vec2 b) { return a.x * b.t - a.t * b.x; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.t * b.t; }

// Clamped cubic smoothstep: 0 for u<=0, 1 for u>=1.
double smoothstep01(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

// Signed distance to an axis-aligned box boundary (negative inside).
double box_sdf(const Window& b, Point p) {
  double qx = std::max(b.x0 - p.x, p.x - b.x1);
  double qt = std::max(b.t0 - p.t, p.t - b.t1);
  if (qx <= 0.0 && qt <= 0.0) return std::max(qx, qt);
  return std::sqrt(sqr(std::max(qx, 0.0)) + sqr(std::max(qt, 0.0)));
}

double dist_point_segment(Point p, Point a, Point b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 <= 0.0) return chart_dist(p, a);
  double u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return chart_dist(p, a + u * ab);
}

bool point_on_segment(Point p, Point a, Point b, double eps) {
  return dist_point_segment(p, a, b) <= eps;
}

int orient_sign(Point p, Point q, Point r, double eps) {
  double v = cross(q - p, r - p);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

// Closed segments: any contact (crossing, touch, collinear overlap) counts.
bool segments_touch(Point a, Point b, Point c, Point d) {
  double scale = std::max({1.0, chart_dist(a, b), chart_dist(c, d)});
  double eps = kGeomEps * scale;
  int o1 = orient_sign(a, b, c, eps);
  int o2 = orient_sign(a, b, d, eps);
  int o3 = orient_sign(c, d, a, eps);
  int o4 = orient_sign(c, d, b, eps);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && point_on_segment(c, a, b, eps)) return true;
  if (o2 == 0 && point_on_segment(d, a, b, eps)) return true;
  if (o3 == 0 && point_on_segment(a, c, d, eps)) return true;
  if (o4 == 0 && point_on_segment(b, c, d, eps)) return true;
  return false;
}

}  // namespace

bool ConvexPoly::contains(Point p, double eps) const {
  if (verts.size() < 3) return false;
  for (size_t i = 0; i < verts.size(); ++i) {
    Point a = verts[i];
    Point b = verts[(i + 1) % verts.size()];
    if (cross(b - a, p - a) < -eps) return false;
  }
  return true;
}

double WaistParams::s_of_t(double t) const {
  switch (profile) {
    case Profile::ArctanAbs:
      return (2.0 / M_PI) * std::fabs(std::atan(t));
    case Profile::ArctanSq: {
      double a = std::atan(t);
      return std::min(1.0, (4.0 / (M_PI * M_PI)) * a * a);
    }
  }
  return 0.0;
}

double BumpProfile::value(Point p) const {
  switch (kind) {
    case Kind::One:
      return 1.0;
    case Kind::ConeAngular: {
      if (p.t <= 0.0) return 0.0;
      double ax = std::fabs(p.x);
      if (ax == 0.0) return 1.0;
      double u = p.t / ax;
      if (u <= support_slope) return 0.0;
      if (u >= plateau_slope) return 1.0;
      return smoothstep01((u - support_slope) /
                          (plateau_slope - support_slope));
    }
    case Kind::RadialCap: {
      double r = chart_dist(p, center);
      if (r <= r_in) return 1.0;
      if (r >= r_out) return 0.0;
      return smoothstep01((r_out - r) / (r_out - r_in));
    }
  }
  return 1.0;
}

ConformalFactor ConformalFactor::constant(double value) {
  ConformalFactor f;
  f.kind = Kind::Constant;
  f.c = value;
  return f;
}

ConformalFactor ConformalFactor::rational_pole(double c, Point center) {
  ConformalFactor f;
  f.kind = Kind::RationalPole;
  f.c = c;
  f.center = center;
  return f;
}

ConformalFactor ConformalFactor::blended(BumpProfile rho,
                                         ConformalFactor inner) {
  ConformalFactor f;
  f.kind = Kind::Blended;
  f.bump = rho;
  f.parts.push_back(std::move(inner));
  return f;
}

ConformalFactor ConformalFactor::product(std::vector<ConformalFactor> parts) {
  ConformalFactor f;
  f.kind = Kind::Product;
  f.parts = std::move(parts);
  return f;
}

ConformalFactor ConformalFactor::suppressor(CompactExhaustion boxes,
                                            std::vector<double> annulus_scale,
                                            double ramp) {
  ConformalFactor f;
  f.kind = Kind::Suppressor;
  f.exhaustion = std::move(boxes);
  f.annulus_scale = std::move(annulus_scale);
  f.ramp = ramp;
  return f;
}

ConformalFactor ConformalFactor::blowup(Point spine_a, double spine_b,
                                        double tube_radius) {
  ConformalFactor f;
  f.kind = Kind::Blowup;
  f.spine_a = spine_a;
  f.spine_b = spine_b;
  f.tube_radius = tube_radius;
  return f;
}

double ConformalFactor::omega(Point p) const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::RationalPole: {
      double r2 = sqr(p.x - center.x) + sqr(p.t - center.t);
      return c / std::max(r2, 1e-300);
    }
    case Kind::Blended: {
      double rho = bump.value(p);
      if (rho <= 0.0) return 1.0;
      double w = parts.front().omega(p);
      return std::sqrt((1.0 - rho) + rho * w * w);
    }
    case Kind::Product: {
      double w = 1.0;
      for (const auto& f : parts) w *= f.omega(p);
      return w;
    }
    case Kind::Suppressor: {
      // Product of per-annulus log-ramped dampers; the innermost box and the
      // far exterior stay at weight 1.
      const auto& boxes = exhaustion.boxes;
      double logw = 0.0;
      for (size_t i = 1; i < boxes.size(); ++i) {
        double target = 1.0 / (std::ldexp(1.0, int(i) + 1) *
                               std::max(annulus_scale[i], 1e-12));
        double sd_outer = box_sdf(boxes[i], p);
        double sd_inner = box_sdf(boxes[i - 1], p);
        double r = smoothstep01(-sd_outer / ramp) *
                   smoothstep01(sd_inner / ramp);
        logw += std::log(target) * r;
      }
      return std::exp(logw);
    }
    case Kind::Blowup: {
      Point tip{spine_a.x, spine_b};
      double dseg = dist_point_segment(p, spine_a, tip);
      if (dseg >= tube_radius) return 1.0;
      double bumpv = smoothstep01(1.0 - dseg / tube_radius);
      // Gap saturates at 1e-4 far below any shipped grid scale, so values
      // stay finite while refinement still sees ~1/h^2 growth on the spine.
      double gap = std::max({spine_b - p.t, dseg, 1e-4});
      return std::exp(bumpv * 2.0 * std::log(1.0 / gap));
    }
  }
  return 1.0;
}

Metric2 base_metric_at(const SpacetimeModel& m, Point p) {
  if (m.base == BaseMetric::Minkowski) return Metric2{1.0, 0.0, -1.0};
  double s = m.waist.s_of_t(p.t);
  double srt = std::sqrt(std::max(0.0, 1.0 - s * s));
  return Metric2{s, srt, -s};
}

Metric2 metric_at(const SpacetimeModel& m, Point p) {
  Metric2 g = base_metric_at(m, p);
  double w2 = sqr(m.conformal.omega(p));
  return Metric2{g.gxx * w2, g.gxt * w2, g.gtt * w2};
}

ConeDirs cone_at(const SpacetimeModel& m, Point p) {
  if (m.base == BaseMetric::Minkowski) {
    double inv = 1.0 / std::sqrt(2.0);
    return {Vec2{-inv, inv}, Vec2{inv, inv}};
  }
  double s = m.waist.s_of_t(p.t);
  if (s <= 0.0) {
    // Degenerate waist row: future null rays are -d/dx and +d/dt.
    return {Vec2{-1.0, 0.0}, Vec2{0.0, 1.0}};
  }
  double srt = std::sqrt(std::max(0.0, 1.0 - s * s));
  // Null slopes dx/dt from s*u^2 + 2*srt*u - s = 0.
  double u_right = (1.0 - srt) / s * 1.0;
  double u_left = -(1.0 + srt) / s;
  auto unit = [](double ux, double ut) {
    double n = std::sqrt(ux * ux + ut * ut);
    return Vec2{ux / n, ut / n};
  };
  return {unit(u_left, 1.0), unit(u_right, 1.0)};
}

Point canonical_point(const SpacetimeModel& m, Point p) {
  if (!m.gluing) return p;
  double lo = m.gluing->lo, period = m.gluing->period();
  auto wrap = [&](double v) {
    double u = std::fmod(v - lo, period);
    if (u < 0.0) u += period;
    return lo + u;
  };
  if (m.gluing->axis == EdgeGluing::Axis::X) return {wrap(p.x), p.t};
  return {p.x, wrap(p.t)};
}

bool excision_blocks(const SpacetimeModel& m, Point a, Point b) {
  double scale = std::max(1.0, chart_dist(a, b));
  double eps = kGeomEps * scale;
  // Seam-shifted copies of the segment cover arcs that cross a gluing.
  double shifts[3] = {0.0, 0.0, 0.0};
  int nshift = 1;
  if (m.gluing) {
    double period = m.gluing->period();
    shifts[1] = -period;
    shifts[2] = period;
    nshift = 3;
  }
  bool shift_x = m.has_gluing(EdgeGluing::Axis::X);
  for (int k = 0; k < nshift; ++k) {
    Point sa = a, sb = b;
    if (shift_x) {
      sa.x += shifts[k];
      sb.x += shifts[k];
    } else {
      sa.t += shifts[k];
      sb.t += shifts[k];
    }
    for (const auto& q : m.excised_points)
      if (point_on_segment(q, sa, sb, eps)) return true;
    for (const auto& s : m.excised_segments)
      if (segments_touch(sa, sb, s.a, s.b)) return true;
    for (const auto& poly : m.excised_regions) {
      if (poly.contains(sa, eps) || poly.contains(sb, eps)) return true;
      size_t n = poly.verts.size();
      for (size_t i = 0; i < n; ++i)
        if (segments_touch(sa, sb, poly.verts[i], poly.verts[(i + 1) % n]))
          return true;
    }
  }
  return false;
}

namespace {

// Future-sector membership with the cone half-angle widened by `delta`.
// Returns +1 strictly inside, 0 on the boundary (within eps), -1 outside.
int widened_sector_side(const ConeDirs& cone, Vec2 v, double delta) {
  double phi_l = std::atan2(cone.left.x, cone.left.t);
  double phi_r = std::atan2(cone.right.x, cone.right.t);
  double center = 0.5 * (phi_l + phi_r);
  double half = 0.5 * (phi_r - phi_l) * (1.0 + delta);
  double phi = std::atan2(v.x, v.t);
  double d = std::remainder(phi - center, 2.0 * M_PI);
  double slack = half - std::fabs(d);
  double eps = 1e-12;
  if (slack > eps) return 1;
  if (slack < -eps) return -1;
  return 0;
}

}  // namespace

CausalClass segment_admissible(const SpacetimeModel& m, Point a, Point b,
                               double widen_delta) {
  // Window walls: the glued axis wraps, the other coordinates must stay in.
  bool glue_x = m.has_gluing(EdgeGluing::Axis::X);
  bool glue_t = m.has_gluing(EdgeGluing::Axis::T);
  auto in_walls = [&](Point p) {
    bool okx = glue_x || (p.x >= m.window.x0 && p.x <= m.window.x1);
    bool okt = glue_t || (p.t >= m.window.t0 && p.t <= m.window.t1);
    return okx && okt;
  };
  if (!in_walls(a) || !in_walls(b)) return CausalClass::Blocked;
  if (excision_blocks(m, a, b)) return CausalClass::Blocked;

  Vec2 v = b - a;
  if (v.x == 0.0 && v.t == 0.0) return CausalClass::NotCausal;

  if (m.base == BaseMetric::Minkowski) {
    if (widen_delta > 0.0) {
      if (v.t <= 0.0) return CausalClass::NotCausal;
      double bound = std::tan(M_PI / 4.0 * (1.0 + widen_delta)) * v.t;
      double eps = 1e-12 * std::max(1.0, bound);
      if (std::fabs(v.x) < bound - eps) return CausalClass::TimelikeFuture;
      if (std::fabs(v.x) <= bound + eps) return CausalClass::Null;
      return CausalClass::NotCausal;
    }
    double eps = 1e-12 * std::max(1.0, std::fabs(v.t));
    if (v.t <= 0.0) return CausalClass::NotCausal;
    if (std::fabs(v.x) < v.t - eps) return CausalClass::TimelikeFuture;
    if (std::fabs(v.x) <= v.t + eps) return CausalClass::Null;
    return CausalClass::NotCausal;
  }

  // Waist: sample the causal character along the segment. The metric only
  // depends on t, which is affine along the segment, so a modest uniform
  // sample count is exact enough for monotone profiles.
  const int kSamples = 11;
  bool all_timelike = true, all_null = true;
  for (int k = 0; k < kSamples; ++k) {
    double u = double(k) / double(kSamples - 1);
    Point p = a + u * v;
    if (widen_delta > 0.0) {
      int side = widened_sector_side(cone_at(m, p), v, widen_delta);
      if (side < 0) return CausalClass::NotCausal;
      if (side > 0)
        all_null = false;
      else
        all_timelike = false;
      continue;
    }
    Metric2 g = base_metric_at(m, p);
    double q = g.eval(v);
    double eps = 1e-9 * (sqr(v.x) + sqr(v.t));
    double s = m.waist.s_of_t(p.t);
    bool future = v.t > 0.0 || (v.t == 0.0 && v.x < 0.0 && s <= 0.0);
    if (q < -eps) {
      if (v.t <= 0.0) return CausalClass::NotCausal;
      all_null = false;
    } else if (q <= eps) {
      if (!future) return CausalClass::NotCausal;
      all_timelike = false;
    } else {
      return CausalClass::NotCausal;
    }
  }
  if (all_timelike) return CausalClass::TimelikeFuture;
  if (all_null) return CausalClass::Null;
  return CausalClass::Causal;
}

namespace {

constexpr double kGlNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

struct LengthIntegrand {
  const SpacetimeModel* m;
  Point a;
  Vec2 v;
  double operator()(double u) const {
    // Sample at the canonical chart point so segments written in unwrapped
    // coordinates (winding past a glued edge) see the periodic weight.
    Point p = canonical_point(*m, a + u * v);
    double q = base_metric_at(*m, p).eval(v);
    double core = std::sqrt(std::max(0.0, -q));
    return m->conformal.omega(p) * core;
  }
};

// Adaptive GL8: split a panel while the integrand varies by >10% across it.
double gl8_adaptive(const LengthIntegrand& f, double u0, double u1,
                    int depth) {
  double mid = 0.5 * (u0 + u1);
  double hw = 0.5 * (u1 - u0);
  double sum = 0.0, fmin = 1e300, fmax = -1e300;
  for (int k = 0; k < 8; ++k) {
    double fv = f(mid + hw * kGlNodes[k]);
    sum += kGlWeights[k] * fv;
    fmin = std::min(fmin, fv);
    fmax = std::max(fmax, fv);
  }
  bool varies = fmax > 1.1 * std::max(fmin, 1e-300) && (fmax - fmin) > 1e-14;
  if (varies && depth < 18) {
    return gl8_adaptive(f, u0, mid, depth + 1) +
           gl8_adaptive(f, mid, u1, depth + 1);
  }
  return sum * hw;
}

}  // namespace

double segment_proper_length(const SpacetimeModel& m, Point a, Point b) {
  Vec2 v = b - a;
  if (v.x == 0.0 && v.t == 0.0) return 0.0;
  if (m.base == BaseMetric::Minkowski) {
    double q = sqr(v.x) - sqr(v.t);
    if (q >= 0.0) return 0.0;  // null or spacelike
    double core = std::sqrt(-q);
    if (m.conformal.is_identity()) return core;
    if (m.conformal.kind == ConformalFactor::Kind::Constant)
      return m.conformal.c * core;
  }
  LengthIntegrand f{&m, a, v};
  return gl8_adaptive(f, 0.0, 1.0, 0);
}

double proper_length(const SpacetimeModel& m, const std::vector<Point>& path) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i)
    total += segment_proper_length(m, path[i], path[i + 1]);
  return total;
}

}  // namespace lorlab
