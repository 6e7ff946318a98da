#pragma once

// Model spacetimes on 2D charts: points, windows, excisions, edge gluings,
// base metrics (flat and waist), conformal weights, causal classification of
// straight chart segments, and weighted proper length.
//
// Chart convention: a point is (x, t) with t the time coordinate and future
// along +t. Causal signs follow g(v,v) < 0 for timelike vectors.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lorlab {

struct Vec2 {
  double x = 0.0;
  double t = 0.0;
};

struct Point {
  double x = 0.0;
  double t = 0.0;
};

inline Vec2 operator-(Point a, Point b) { return {a.x - b.x, a.t - b.t}; }
inline Point operator+(Point a, Vec2 v) { return {a.x + v.x, a.t + v.t}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.t}; }

inline double sqr(double v) { return v * v; }
inline double chart_dist(Point a, Point b) {
  return std::sqrt(sqr(a.x - b.x) + sqr(a.t - b.t));
}

// Axis-aligned open computational window; nodes on the boundary are kept.
struct Window {
  double x0 = -1.0, x1 = 1.0;
  double t0 = -1.0, t1 = 1.0;
  bool contains(Point p) const {
    return p.x >= x0 && p.x <= x1 && p.t >= t0 && p.t <= t1;
  }
  double width() const { return x1 - x0; }
  double height() const { return t1 - t0; }
};

// Closed straight segment removed from the manifold.
struct Segment {
  Point a, b;
};

// Closed convex polygon removed from the manifold (vertices in CCW order).
struct ConvexPoly {
  std::vector<Point> verts;
  bool contains(Point p, double eps = 0.0) const;
};

// Periodic identification of two opposite window edges (identity map along
// the edge). Axis T glues t = hi to t = lo; axis X likewise for x.
struct EdgeGluing {
  enum class Axis { X, T };
  Axis axis = Axis::T;
  double lo = 0.0;
  double hi = 1.0;
  double period() const { return hi - lo; }
};

enum class BaseMetric { Minkowski, Waist };

// Waist profile s(t): s(0)=0, s monotone in |t|, s -> 1 far from the waist.
// The metric in (x=angle, t) coordinates is
//   g_tt = -s(t), g_xt = sqrt(1-s^2), g_xx = s(t)   (det == -1).
struct WaistParams {
  enum class Profile { ArctanAbs, ArctanSq };
  Profile profile = Profile::ArctanAbs;
  double s_of_t(double t) const;
};

// Smooth cutoff fields used by blended conformal factors. Values are exactly
// 0 / 1 on the declared regions and smoothstep in between.
struct BumpProfile {
  enum class Kind {
    One,
    // Function of u = t/|x| (forward cone opening): 0 for t <= 0 or u <=
    // support_slope, 1 for u >= plateau_slope.
    ConeAngular,
    // Function of chart distance r to `center`: 1 for r <= r_in, 0 for
    // r >= r_out.
    RadialCap,
  };
  Kind kind = Kind::One;
  double support_slope = 1.0;
  double plateau_slope = 2.0;
  Point center{0.0, 0.0};
  double r_in = 0.0;
  double r_out = 1.0;

  double value(Point p) const;
  bool exactly_one(Point p) const { return value(p) == 1.0; }
  bool exactly_zero(Point p) const { return value(p) == 0.0; }
};

// Nested axis-aligned rectangles K_1 c K_2 c ... used by the suppressor.
struct CompactExhaustion {
  std::vector<Window> boxes;
};

// Conformal weight Omega > 0. The rescaled metric is Omega^2 * g_base and
// the proper-length integrand picks up one factor of Omega. Causal cones do
// not depend on it.
struct ConformalFactor {
  enum class Kind {
    Constant,
    // Omega = c / |p - center|^2 (chart distance squared).
    RationalPole,
    // Omega^2 = (1 - rho) + rho * inner(p)^2 with rho = bump(p).
    Blended,
    // Product of child factors.
    Product,
    // Piecewise damping on exhaustion annuli A_i = K_i \ int K_{i-1}
    // (i >= 2): target value 1/(2^i k_i) on the annulus core, 1 on K_1 and
    // outside, log-smoothstep ramps of chart width `ramp`.
    Suppressor,
    // log Omega = bump_tube(p) * 2 log(1/gap(p)) along a vertical spine
    // segment: Omega = 1/(b - t)^2 on the spine, 1 outside the tube, so the
    // weighted length of the spine diverges like 1/gap.
    Blowup,
  };

  Kind kind = Kind::Constant;
  double c = 1.0;
  Point center{0.0, 0.0};
  BumpProfile bump;
  std::vector<ConformalFactor> parts;  // Product children / Blended inner.
  CompactExhaustion exhaustion;        // Suppressor.
  std::vector<double> annulus_scale;   // Suppressor k_i (one per box).
  double ramp = 0.1;                   // Suppressor ramp width.
  Point spine_a{0.0, 0.0};             // Blowup spine from a to (a.x, b).
  double spine_b = 1.0;                // Blowup open end time b.
  double tube_radius = 0.1;            // Blowup support radius.

  double omega(Point p) const;
  bool is_identity() const { return kind == Kind::Constant && c == 1.0; }

  static ConformalFactor constant(double value);
  static ConformalFactor rational_pole(double c, Point center);
  static ConformalFactor blended(BumpProfile rho, ConformalFactor inner);
  static ConformalFactor product(std::vector<ConformalFactor> parts);
  static ConformalFactor suppressor(CompactExhaustion boxes,
                                    std::vector<double> annulus_scale,
                                    double ramp);
  static ConformalFactor blowup(Point spine_a, double spine_b,
                                double tube_radius);
};

// A model spacetime on a rectangular chart window.
struct SpacetimeModel {
  Window window;
  BaseMetric base = BaseMetric::Minkowski;
  WaistParams waist;
  ConformalFactor conformal;
  std::vector<Point> excised_points;
  std::vector<Segment> excised_segments;
  std::vector<ConvexPoly> excised_regions;
  std::optional<EdgeGluing> gluing;

  bool has_gluing(EdgeGluing::Axis axis) const {
    return gluing && gluing->axis == axis;
  }
};

// Symmetric 2x2 metric tensor at a point, indexed (x, t).
struct Metric2 {
  double gxx = 1.0, gxt = 0.0, gtt = -1.0;
  double eval(Vec2 v) const {
    return gxx * v.x * v.x + 2.0 * gxt * v.x * v.t + gtt * v.t * v.t;
  }
  double det() const { return gxx * gtt - gxt * gxt; }
};

// Base metric (no conformal weight): cones and causal character live here.
Metric2 base_metric_at(const SpacetimeModel& m, Point p);

// Full metric including the conformal weight squared.
Metric2 metric_at(const SpacetimeModel& m, Point p);

// The two future null directions at p as unit chart vectors, ordered so that
// rotating from `left` to `right` sweeps the future cone. For flat models
// these are (-1,1)/sqrt2 and (1,1)/sqrt2.
struct ConeDirs {
  Vec2 left, right;
};
ConeDirs cone_at(const SpacetimeModel& m, Point p);

// Wrap the glued coordinate into its fundamental domain [lo, hi).
// Idempotent; the identity when the model has no gluing.
Point canonical_point(const SpacetimeModel& m, Point p);

enum class CausalClass {
  TimelikeFuture,  // strictly timelike, future directed, everywhere along
  Null,            // null, future directed, everywhere along
  Causal,          // future causal, mixed timelike/null along the segment
  NotCausal,       // spacelike, past directed, or degenerate
  Blocked,         // meets an excision or leaves the window
};

// True when the straight chart segment [a,b] meets an excised point, segment
// or region (endpoint contact counts). Gluing-aware: excisions are tested
// against seam-shifted copies of the segment.
bool excision_blocks(const SpacetimeModel& m, Point a, Point b);

// Classify the straight chart segment from a to b as a future causal arc.
// `widen_delta` opens the future cone half-angle by the given fraction (the
// flat-slope bound becomes tan(pi/4 * (1 + delta))); 0 probes the true cones.
CausalClass segment_admissible(const SpacetimeModel& m, Point a, Point b,
                               double widen_delta = 0.0);

// Omega-weighted proper length of the straight chart segment [a,b] under the
// base causal character (Gauss-Legendre, recursive split while the weight
// varies by more than 10% across a panel). Null segments return 0.
double segment_proper_length(const SpacetimeModel& m, Point a, Point b);

// Proper length of a chart polyline (sum over straight segments).
double proper_length(const SpacetimeModel& m, const std::vector<Point>& path);

}  // namespace lorlab
