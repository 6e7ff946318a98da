// Acceptance gate: thirteen end-to-end checks, one PASS/FAIL line each.
// Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "lorlab/causality.hpp"
#include "lorlab/distance.hpp"
#include "lorlab/paths.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/regress.hpp"
#include "lorlab/scenario.hpp"
#include "lorlab/surface.hpp"
#include "lorlab/waist.hpp"

using namespace lorlab;

namespace {

int g_failures = 0;

void report(int n, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", n,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename F>
void criterion(int n, F body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Grid grid_for(const SpacetimeModel& m, double h) {
  GridSpec spec;
  spec.h = h;
  return build_grid(m, spec);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double hausdorff(const std::vector<Point>& A, const std::vector<Point>& B) {
  auto dir = [](const std::vector<Point>& U, const std::vector<Point>& V) {
    double worst = 0.0;
    for (Point u : U) {
      double best = 1e30;
      for (Point v : V) best = std::min(best, chart_dist(u, v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (A.empty() || B.empty()) return 1e30;
  return std::max(dir(A, B), dir(B, A));
}

PolyPath random_timelike(std::mt19937_64& rng, int legs) {
  std::uniform_real_distribution<double> x0(-1.0, 1.0);
  std::uniform_real_distribution<double> dtu(0.2, 0.8);
  std::uniform_real_distribution<double> sl(-0.85, 0.85);
  PolyPath p{{x0(rng), -3.5}};
  for (int i = 0; i < legs; ++i) {
    double step = dtu(rng);
    Point last = p.back();
    p.push_back(last + Vec2{sl(rng) * step, step});
  }
  return p;
}

const char* flag_name(int i) {
  static const char* names[] = {"chronological", "causal",  "distinguishing",
                                "strongly",      "stably",  "outer"};
  return names[i];
}

int flag_mismatches(const LadderFlags& got, const LadderFlags& want,
                    std::string* what = nullptr) {
  const bool g[6] = {got.chronological,  got.causal,       got.distinguishing,
                     got.strongly_causal, got.stably_causal,
                     got.outer_continuous};
  const bool w[6] = {want.chronological,  want.causal,
                     want.distinguishing, want.strongly_causal,
                     want.stably_causal,  want.outer_continuous};
  int bad = 0;
  for (int i = 0; i < 6; ++i)
    if (g[i] != w[i]) {
      ++bad;
      if (what) *what += std::string(" ") + flag_name(i);
    }
  return bad;
}

}  // namespace

int main() {
  // 1. Straight-column distance past the slit at fine resolution.
  criterion(1, [] {
    auto t0 = std::chrono::steady_clock::now();
    Scenario sc = make_scenario("flat_slit");
    Grid g = grid_for(sc.model, 0.02);
    DistanceOptions opt;
    opt.want_witness = false;
    double v = grid_distance(g, {0.0, 0.0}, {0.0, 4.0}, opt).value;
    double secs = seconds_since(t0);
    bool pass = std::abs(v - 4.0) <= 0.05 && secs <= 60.0;
    report(1, pass,
           fmt("flat_slit d((0,0),(0,4)) = %.6f (want 4 +- 0.05) at h=0.02 "
               "in %.1fs",
               v, secs));
  });

  // 2. Path forced through the shadow region V caps well below 4.
  criterion(2, [] {
    auto t0 = std::chrono::steady_clock::now();
    Scenario sc = make_scenario("flat_slit");
    Grid g = grid_for(sc.model, 0.05);
    ConvexPoly V;
    V.verts = {{1.0, 1.0}, {4.5, 4.5}, {4.5, 5.2}, {1.0, 2.0}};
    DistanceResult r = best_path_through(g, {0.0, -0.05}, {0.0, 4.05}, V);
    double secs = seconds_since(t0);
    bool pass = r.reachable && r.value >= 3.0 && r.value <= 3.196 &&
                secs <= 60.0;
    report(2, pass,
           fmt("best path through V = %.6f (want [3.0, 3.196]) in %.1fs",
               r.value, secs));
  });

  // 3. The missed-in-the-limit set matches the analytic band at two
  //    resolutions.
  criterion(3, [] {
    bool pass = true;
    std::string detail = "miss set vs band {x>1, 0<t-x<1}:";
    Scenario sc = make_scenario("flat_slit");
    for (double h : {0.1, 0.05}) {
      Grid g = grid_for(sc.model, h);
      MissResult m = miss_future(g, {0.0, 0.0});
      std::vector<Point> A, B;
      for (int id = 0; id < g.num_nodes(); ++id) {
        if (m.nodes[id]) A.push_back(g.point_of(id));
        if (!g.valid[id]) continue;
        Point p = g.point_of(id);
        if (p.x > 1.0 && p.t - p.x > 0.0 && p.t - p.x < 1.0)
          B.push_back(p);
      }
      double d = hausdorff(A, B);
      pass = pass && m.nonempty && m.agree && d <= 2.0 * h + 1e-9;
      detail += fmt(" h=%g: Hausdorff %.4f (cap %g);", h, d, 2.0 * h);
    }
    report(3, pass, detail);
  });

  // 4. Continuity probe: quiet on the clear pair, a stable sqrt(3)/2 jump
  //    on the blocked pair.
  criterion(4, [] {
    Scenario sc = make_scenario("flat_slit");
    Grid g05 = grid_for(sc.model, 0.05);
    ProbeVerdict clear = continuity_probe(g05, {0.0, 0.0}, {0.0, 4.0});
    bool pass = clear.gap <= 3.0 * grid_tolerance(0.05);
    std::string detail =
        fmt("clear gap %.4f (cap %.3f);", clear.gap,
            3.0 * grid_tolerance(0.05));
    const double want = std::sqrt(3.0) / 2.0;
    for (double h : {0.0125, 0.00625}) {
      Grid g = grid_for(sc.model, h);
      ProbeVerdict v = continuity_probe(g, {0.0, 0.0}, {1.5, 2.0});
      pass = pass && v.discontinuous && std::abs(v.gap - want) <= 0.05;
      detail += fmt(" blocked gap h=%g: %.4f (want %.4f +- 0.05);", h, v.gap,
                    want);
    }
    report(4, pass, detail);
  });

  // 5. Inverse-square pole: divergence classification with strong growth;
  //    the cone-blended variant separates the cone boundary from its
  //    interior and the transition shows up as a flagged discontinuity.
  criterion(5, [] {
    const std::vector<double> quart{0.1, 0.025, 0.00625};
    Scenario pole = make_scenario("pole_plane");
    bool pass = true;
    std::string detail = "pole pairs:";
    const Point ys[3] = {{0.0, 1.0}, {0.5, 0.6}, {-0.8, 0.9}};
    for (Point y : ys) {
      DistanceEstimate e =
          estimate_distance(pole.model, {0.0, -1.0}, y, quart);
      int strong = 0;
      for (size_t i = 1; i < e.per_grid.size(); ++i)
        if (e.per_grid[i - 1] > 0.0 &&
            e.per_grid[i] >= 2.0 * e.per_grid[i - 1])
          ++strong;
      pass = pass && e.cls == DistanceClass::Infinite && strong >= 2;
      detail += fmt(" y=(%g,%g) cls=%d growth2x=%d;", y.x, y.t, int(e.cls),
                    strong);
    }
    Scenario cone = make_scenario("pole_plane_cone");
    DistanceEstimate edge = estimate_distance(cone.model, {0.0, -1.0},
                                              {0.5, 0.5}, {0.1, 0.05, 0.025});
    DistanceEstimate deep =
        estimate_distance(cone.model, {0.0, -1.0}, {0.0, 1.0}, quart);
    // The same pair nudged into the open cone diverges: the finite boundary
    // value against the divergent interior limit is the discontinuity.
    DistanceEstimate inside = estimate_distance(cone.model, {0.0, -1.0},
                                                {0.5, 0.55}, quart);
    pass = pass && edge.cls == DistanceClass::Finite &&
           std::abs(edge.value - std::sqrt(2.0)) <= 0.05 &&
           deep.cls == DistanceClass::Infinite &&
           inside.cls == DistanceClass::Infinite;
    detail += fmt(" blended: edge cls=%d value=%.4f, deep cls=%d, "
                  "inside cls=%d",
                  int(edge.cls), edge.value, int(deep.cls), int(inside.cls));
    report(5, pass, detail);
  });

  // 6. Image-chart probe: zero distance with a clearly positive limit.
  criterion(6, [] {
    Scenario sc = make_scenario("slit_image_plane");
    Grid g = grid_for(sc.model, 0.05);
    Point p = scenario_input_point(sc, {-1.0, -1.0});
    Point q = scenario_input_point(sc, {1.0, 1.0});
    ProbeVerdict v = continuity_probe(g, p, q);
    bool pass = v.d == 0.0 && v.limit_estimate > 0.9;
    report(6, pass,
           fmt("image pair d = %.6f, limit estimate = %.4f (want d = 0, "
               "limit > 0.9)",
               v.d, v.limit_estimate));
  });

  // 7. Waist: finite angle-independent proper time to the waist, continuity
  //    across it, chronological but not causal.
  criterion(7, [] {
    Scenario sc = make_scenario("waist_cylinder");
    const double h = 0.025;
    Grid g = grid_for(sc.model, h);
    DistanceOptions opt;
    opt.want_witness = false;
    double lo = 1e30, hi = -1e30;
    for (int k = 0; k < 8; ++k) {
      double theta = -M_PI + (2.0 * M_PI) * (k + 0.5) / 8.0;
      double v = grid_distance(g, {0.0, -1.0}, {theta, 0.0}, opt).value;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    WaistParams w;
    const double tmax = waist_max_proper_time(w, -1.0);
    bool pass = hi < 1e29 && (hi - lo) <= grid_tolerance(h) &&
                std::abs(hi - tmax) <= 0.15;
    std::string detail =
        fmt("tau_max over 8 angles in [%.4f, %.4f] (closed form %.4f, "
            "spread cap %.3f);",
            lo, hi, tmax, grid_tolerance(h));

    ProbeVerdict across = continuity_probe(g, {1.0, -1.0}, {1.0, 1.0});
    pass = pass && across.gap <= 3.0 * grid_tolerance(h);
    detail += fmt(" cross-waist gap %.4f (cap %.3f);", across.gap,
                  3.0 * grid_tolerance(h));

    Grid gl = grid_for(sc.model, 0.05);
    LadderOptions lopt;
    lopt.outer_probes = sc.miss_probes;
    LadderReport rep = ladder_report(gl, lopt);
    pass = pass && rep.flags.chronological && !rep.flags.causal;
    detail += fmt(" ladder: chronological %d causal %d",
                  int(rep.flags.chronological), int(rep.flags.causal));
    report(7, pass, detail);
  });

  // 8. The whole catalog reproduces its ladder verdicts at two resolutions.
  criterion(8, [] {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail = "ladder table:";
    for (const std::string& name : scenario_names()) {
      Scenario sc = make_scenario(name);
      for (double h : {0.05, 0.025}) {
        Grid g = grid_for(sc.model, h);
        LadderOptions opt;
        opt.outer_probes = sc.miss_probes;
        LadderReport rep = ladder_report(g, opt);
        std::string what;
        int bad = flag_mismatches(rep.flags, sc.expected, &what);
        if (bad) {
          pass = false;
          detail += fmt(" %s@h=%g:%s;", name.c_str(), h, what.c_str());
        }
      }
    }
    double secs = seconds_since(t0);
    pass = pass && secs <= 300.0;
    if (pass) detail += " all scenarios match at h=0.05 and h=0.025;";
    detail += fmt(" %.1fs", secs);
    report(8, pass, detail);
  });

  // 9. Surface-function discontinuity flags track probed distance
  //    continuity on the slit and wedge models.
  criterion(9, [] {
    struct Leg {
      const char* name;
      Point bx, by;   // boundary anchors
      Point pp, pq;   // probed pair
    };
    const Leg legs[] = {
        {"flat_slit", {0.0, 0.0}, {0.0, 4.0}, {0.0, 0.0}, {1.5, 2.0}},
        {"wedge_complement", {-0.5, -2.0}, {-0.5, 2.0}, {0.9, -2.0},
         {0.9, 2.0}},
    };
    bool pass = true;
    std::string detail;
    for (const Leg& leg : legs) {
      Scenario sc = make_scenario(leg.name);
      Grid gc = grid_for(sc.model, 0.1);
      Grid gf = grid_for(sc.model, 0.05);
      SurfaceField fc =
          surface_function_field(gc, boundary_construct(gc, leg.bx, leg.by));
      SurfaceField ff =
          surface_function_field(gf, boundary_construct(gf, leg.bx, leg.by));
      bool surface_flag = surface_jump_persists(fc, ff);
      ProbeVerdict v = continuity_probe(gf, leg.pp, leg.pq);
      pass = pass && surface_flag == v.discontinuous;
      detail += fmt("%s: surface %d probe %d; ", leg.name, int(surface_flag),
                    int(v.discontinuous));
    }
    report(9, pass, detail + "(statuses must match per model)");
  });

  // 10. Distance formula via boundary fields on random chronological pairs.
  criterion(10, [] {
    Scenario sc = make_scenario("minkowski_diamond");
    Grid g = grid_for(sc.model, 0.05);
    std::mt19937_64 rng(20260814ull);
    std::uniform_real_distribution<double> ux(-1.2, 1.2);
    std::uniform_real_distribution<double> ut(-1.8, -0.2);
    std::uniform_real_distribution<double> step(0.4, 1.6);
    std::uniform_real_distribution<double> slope(-0.8, 0.8);
    std::vector<double> gaps;
    while (gaps.size() < 50) {
      Point p{ux(rng), ut(rng)};
      double dt = step(rng);
      Point q = p + Vec2{slope(rng) * dt, dt};
      if (!sc.model.window.contains(q)) continue;
      gaps.push_back(std::abs(distance_formula_gap(g, p, q)));
    }
    std::nth_element(gaps.begin(), gaps.begin() + 25, gaps.end());
    double median = gaps[25];
    bool pass = median <= 2.0 * grid_tolerance(0.05);
    report(10, pass,
           fmt("median |formula gap| over 50 pairs = %.4f (cap %.3f)",
               median, 2.0 * grid_tolerance(0.05)));
  });

  // 11. Path toolkit: partition lengths, semicontinuity families, limit
  //     curve of the bulge family.
  criterion(11, [] {
    SpacetimeModel flat;
    flat.window = {-4.0, 4.0, -4.0, 4.0};
    std::mt19937_64 rng(333111u);
    bool mono = true, agree = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      PolyPath poly = random_timelike(rng, 3 + trial % 4);
      LipschitzPath lp = lipschitz_reparametrize(poly);
      double prev = partition_length(flat, lp, dyadic_partition(lp, 0));
      for (int level = 1; level <= 6; ++level) {
        double cur = partition_length(flat, lp, dyadic_partition(lp, level));
        mono = mono && cur <= prev + 1e-9;
        prev = cur;
      }
      double lim = partition_length_limit(flat, lp, 1e-4);
      double err = std::abs(lim - proper_length(flat, poly));
      worst = std::max(worst, err);
      agree = agree && err <= 1e-3;
    }

    std::vector<PolyPath> constant(10,
                                   PolyPath{{0.0, -2.0}, {0.3, -0.5}, {0.0, 1.5}});
    std::vector<PolyPath> bulge, chords;
    for (int i = 1; i <= 40; ++i)
      bulge.push_back({{0.0, 0.0}, {1.0 / i, 1.0}, {0.0, 2.0}});
    double e = 0.5;
    for (int i = 1; i <= 24; ++i) {
      chords.push_back({{0.0, -e}, {1.0, 1.0}, {1.5, 2.0}});
      e *= 0.5;
    }
    LimitCurveResult cl = limit_curve_extract(flat, constant, flat.window, 0.02);
    LimitCurveResult bl = limit_curve_extract(flat, bulge, flat.window, 0.02);
    bool usc = cl.converged && length_usc_check(flat, constant, cl.curve, 1e-9);
    usc = usc && bl.converged && length_usc_check(flat, bulge, bl.curve, 1e-2);
    PolyPath null_limit{{0.0, 0.0}, {1.0, 1.0}, {1.5, 2.0}};
    usc = usc && length_usc_check(flat, chords, null_limit, 1e-2);

    double end_err = 1e30;
    if (bl.converged && bl.curve.size() >= 2)
      end_err = std::max(chart_dist(bl.curve.front(), {0.0, 0.0}),
                         chart_dist(bl.curve.back(), {0.0, 2.0}));
    bool pass = mono && agree && usc && end_err <= 0.05;
    report(11, pass,
           fmt("partition monotone %d, worst limit error %.2e (cap 1e-3), "
               "usc families %d, bulge endpoint error %.4f (cap 0.05)",
               int(mono), worst, int(usc), end_err));
  });

  // 12. Conformal toolkit: exhaustion damping bounds the diameter and
  //     restores continuity; the spine blow-up is local.
  criterion(12, [] {
    Scenario base = make_scenario("cylinder_stacked_slits");
    Scenario sup = apply_variant(base, "suppressed");
    const std::vector<double> grids{0.1, 0.05};
    const ProbePair pairs[] = {{{0.5, 0.5}, {0.5, 1.5}},
                               {{-1.0, -1.1}, {-1.2, 0.9}},
                               {{-4.0, -3.0}, {4.0, 3.0}}};
    bool pass = true;
    double diameter = 0.0;
    for (const ProbePair& pr : pairs) {
      DistanceEstimate e = estimate_distance(sup.model, pr.p, pr.q, grids);
      pass = pass && e.cls != DistanceClass::Infinite &&
             e.cls != DistanceClass::Unresolved;
      diameter = std::max(diameter, e.value);
    }
    std::string detail =
        fmt("suppressed diameter estimate %.4f (finite classes %d);",
            diameter, int(pass));
    Grid gs = grid_for(sup.model, 0.05);
    ProbeVerdict corner = continuity_probe(gs, {-1.0, -1.0}, {-1.2, 0.9});
    ProbeVerdict column = continuity_probe(gs, {0.5, 0.5}, {0.5, 1.5});
    pass = pass && !corner.discontinuous && !column.discontinuous;
    detail += fmt(" probes: corner gap %.4f flag %d, column gap %.4f flag "
                  "%d;",
                  corner.gap, int(corner.discontinuous), column.gap,
                  int(column.discontinuous));

    Scenario mink = make_scenario("minkowski_diamond");
    Scenario blow = apply_variant(mink, "blowup");
    DistanceEstimate spine = estimate_distance(
        blow.model, {0.4, -1.8}, {0.4, 1.8}, {0.1, 0.05, 0.025});
    Grid gb = grid_for(blow.model, 0.05);
    Grid gm = grid_for(mink.model, 0.05);
    DistanceOptions opt;
    opt.want_witness = false;
    double ctrl_v = grid_distance(gb, {-1.5, -1.0}, {-1.5, 1.0}, opt).value;
    double ctrl_b = grid_distance(gm, {-1.5, -1.0}, {-1.5, 1.0}, opt).value;
    pass = pass && spine.cls == DistanceClass::Infinite &&
           std::abs(ctrl_v - ctrl_b) < grid_tolerance(0.05);
    detail += fmt(" blowup: spine cls=%d, control |delta| = %.2e (cap %g)",
                  int(spine.cls), std::abs(ctrl_v - ctrl_b),
                  grid_tolerance(0.05));
    report(12, pass, detail);
  });

  // 13. The regression sweep is deterministic byte for byte.
  criterion(13, [] {
    RegressReport a = run_regress();
    RegressReport b = run_regress();
    bool pass = a.csv() == b.csv() && !a.csv().empty();
    report(13, pass,
           fmt("two regression sweeps: %zu rows each, byte-identical CSV %d "
               "(sweep failures %d)",
               a.rows.size(), int(pass), a.failures));
  });

  std::printf("%s: %d of 13 criteria failed\n",
              g_failures ? "ACCEPTANCE FAIL" : "ACCEPTANCE PASS", g_failures);
  return g_failures;
}
