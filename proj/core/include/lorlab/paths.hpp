#pragma once

// Polyline utilities: region-constrained longest paths, chord-sum lengths
// over partitions, 1-Lipschitz reparametrization, and limit curves of path
// sequences (with the upper-semicontinuity length check they feed).

#include <optional>
#include <vector>

#include "lorlab/distance.hpp"
#include "lorlab/geometry.hpp"
#include "lorlab/grid.hpp"

namespace lorlab {

using PolyPath = std::vector<Point>;

// Longest proper time over causal chains from p to q that pass through at
// least one grid node inside the region (a direct p->q chord counts only
// when an endpoint lies inside). Decomposes as max over region nodes w of
// chain(p,w) + chain(w,q) from two field sweeps; on time-glued models the
// window is treated as a single slice.
DistanceResult best_path_through(const Grid& g, Point p, Point q,
                                 const ConvexPoly& region,
                                 const DistanceOptions& opt = {});

// Polyline parametrized by cumulative Euclidean chart length, so eval is
// exactly 1-Lipschitz for the Euclidean metric.
struct LipschitzPath {
  std::vector<Point> v;  // vertices
  std::vector<double> s; // cumulative Euclidean length, s[0] = 0

  double total() const { return s.empty() ? 0.0 : s.back(); }
  Point eval(double t) const;
};

LipschitzPath lipschitz_reparametrize(const PolyPath& path);

// Sum of chord proper lengths over an increasing parameter list into
// path.eval. Refining a partition never increases the value (straight
// chords maximize); the infimum over dyadic refinements recovers
// proper_length. NaN when some chord is blocked by an excision.
double partition_length(const SpacetimeModel& m, const LipschitzPath& path,
                        const std::vector<double>& params);

// Uniform dyadic partition of [0, path.total()] with 2^level + 1 points.
std::vector<double> dyadic_partition(const LipschitzPath& path, int level);

// Dyadic refinement until successive values agree within tol (or max_level).
double partition_length_limit(const SpacetimeModel& m,
                              const LipschitzPath& path, double tol,
                              int max_level = 12);

struct LimitCurveResult {
  PolyPath curve;                // limit polyline on the parameter mesh
  std::vector<int> subsequence;  // indices of the convergent subsequence
  bool converged = false;        // tail met the tolerance
  bool causal = true;            // consecutive limit chords are causal
  double max_dev = 0.0;          // worst tail point distance to the limit
};

// Limit of a path sequence inside a bounded region. Each path is
// reparametrized to unit Euclidean speed, the parameter domains are merged
// by one of three changes of parameter (identity when all domains already
// agree, a linear rescale when they stay bounded, an arctan compression
// when they grow without bound), and the paths are sampled on a dyadic
// parameter mesh. A convergent tail (whole sequence, else the even or odd
// subsequence) within tol at every mesh point yields the limit as the tail
// mean; otherwise converged = false and the curve is empty.
LimitCurveResult limit_curve_extract(const SpacetimeModel& m,
                                     const std::vector<PolyPath>& paths,
                                     const Window& region, double tol,
                                     int mesh_levels = 6);

// Upper semicontinuity of proper length along the family: the tail's
// largest proper length must not exceed the limit's by more than tol.
bool length_usc_check(const SpacetimeModel& m,
                      const std::vector<PolyPath>& paths,
                      const PolyPath& limit, double tol);

// Past-directed limit curve of the probe's approach witnesses, verified to
// sit inside I+(u) for sampled u below p while its own chronological future
// still covers I+(q). Returns the curve ordered from its future end down
// toward its open past end; nullopt when extraction or either check fails.
std::optional<PolyPath> funnel_detect(const Grid& g, Point p, Point q,
                                      const ProbeVerdict& verdict,
                                      double tol = 0.0);

}  // namespace lorlab
