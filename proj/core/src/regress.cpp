#include "lorlab/regress.hpp"

#include <cmath>
#include <map>

#include "lorlab/causality.hpp"
#include "lorlab/csvsvg.hpp"
#include "lorlab/distance.hpp"
#include "lorlab/paths.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/scenario.hpp"
#include "lorlab/surface.hpp"
#include "lorlab/waist.hpp"

namespace lorlab {

namespace {

// Scenario and grid caches; scenarios are stored node-stable so grids can
// keep pointing at their models.
struct Ctx {
  std::map<std::string, Scenario> scen;
  std::map<std::string, Grid> grids;

  const Scenario& S(const std::string& name) {
    auto it = scen.find(name);
    if (it == scen.end()) it = scen.emplace(name, *find_scenario(name)).first;
    return it->second;
  }

  const Grid& G(const std::string& name, double h) {
    std::string key = name + "@" + csv_num(h);
    auto it = grids.find(key);
    if (it == grids.end()) {
      GridSpec spec;
      spec.h = h;
      it = grids.emplace(key, build_grid(S(name).model, spec)).first;
    }
    return it->second;
  }
};

int class_code(DistanceClass c) {
  switch (c) {
    case DistanceClass::Unreachable: return 0;
    case DistanceClass::Finite: return 1;
    case DistanceClass::Infinite: return 2;
    default: return 3;
  }
}

std::string flag_str(bool b) { return b ? "1" : "0"; }

}  // namespace

RegressReport run_regress() {
  RegressReport rep;
  Ctx ctx;

  auto push = [&](RegressRow row) {
    row.pass = row.measured >= row.lo && row.measured <= row.hi;
    if (!row.pass) ++rep.failures;
    rep.rows.push_back(std::move(row));
  };

  // Grid distance at one spacing against a frozen band. Bands sit below the
  // exact value because chain values approach it from below.
  auto dist = [&](const std::string& id, const std::string& name, double h,
                  Point p, Point q, double lo, double hi) {
    const Scenario& sc = ctx.S(name);
    Point pm = scenario_input_point(sc, p), qm = scenario_input_point(sc, q);
    DistanceOptions opt;
    opt.want_witness = false;
    DistanceResult r = grid_distance(ctx.G(name, h), pm, qm, opt);
    RegressRow row{id, name, "dist", h, r.reachable ? r.value : 0.0,
                   lo,  hi,   false, std::string("reachable=") +
                                         flag_str(r.reachable) +
                                         ";winding=" +
                                         std::to_string(r.winding_used)};
    push(std::move(row));
  };

  // Multi-grid classification code: 0 unreachable, 1 finite, 2 infinite,
  // 3 unresolved.
  auto cls = [&](const std::string& id, const std::string& name, Point p,
                 Point q, int expect) {
    const Scenario& sc = ctx.S(name);
    Point pm = scenario_input_point(sc, p), qm = scenario_input_point(sc, q);
    DistanceOptions opt;
    opt.want_witness = false;
    DistanceEstimate e = estimate_distance(sc.model, pm, qm, sc.grids, opt);
    std::string detail = "values=";
    for (size_t i = 0; i < e.per_grid.size(); ++i) {
      if (i) detail += '|';
      detail += csv_num(e.per_grid[i]);
    }
    push({id, name, "class", sc.grids.back(), double(class_code(e.cls)),
          double(expect), double(expect), false, detail});
  };

  // Continuity probe gap.
  auto probe = [&](const std::string& id, const std::string& name, double h,
                   Point p, Point q, double lo, double hi, bool expect_flag) {
    const Scenario& sc = ctx.S(name);
    Point pm = scenario_input_point(sc, p), qm = scenario_input_point(sc, q);
    ProbeOptions opt;
    opt.dist.want_witness = true;
    ProbeVerdict v = continuity_probe(ctx.G(name, h), pm, qm, opt);
    std::string detail = "d=" + csv_num(v.d) +
                         ";limit=" + csv_num(v.limit_estimate) +
                         ";flag=" + flag_str(v.discontinuous) +
                         ";sub_future=" + csv_num(v.sub_future_len);
    RegressRow row{id, name, "probe", h, v.gap, lo, hi, false, detail};
    row.pass = row.measured >= lo && row.measured <= hi &&
               v.discontinuous == expect_flag;
    if (!row.pass) ++rep.failures;
    rep.rows.push_back(std::move(row));
  };

  // Limit-miss probe: measured 1 when the eroded miss set is nonempty.
  auto miss = [&](const std::string& id, const std::string& name, double h,
                  Point x, bool future, int expect) {
    const Scenario& sc = ctx.S(name);
    Point xm = scenario_input_point(sc, x);
    MissResult r =
        future ? miss_future(ctx.G(name, h), xm) : miss_past(ctx.G(name, h), xm);
    push({id, name, "miss", h, r.nonempty ? 1.0 : 0.0, double(expect),
          double(expect), false,
          std::string("agree=") + flag_str(r.agree) + ";dir=" +
              (future ? "future" : "past") +
              ";witnesses=" + std::to_string(r.witnesses.size())});
  };

  // Ladder flags vs the catalog expectation; measured = mismatch count.
  auto ladder = [&](const std::string& id, const std::string& name,
                    double h) {
    const Scenario& sc = ctx.S(name);
    LadderOptions opt;
    opt.outer_probes = sc.miss_probes;
    LadderReport lr = ladder_report(ctx.G(name, h), opt);
    const LadderFlags& a = lr.flags;
    const LadderFlags& e = sc.expected;
    int mism = (a.chronological != e.chronological) +
               (a.causal != e.causal) +
               (a.distinguishing != e.distinguishing) +
               (a.strongly_causal != e.strongly_causal) +
               (a.stably_causal != e.stably_causal) +
               (a.outer_continuous != e.outer_continuous);
    std::string detail = "chrono=" + flag_str(a.chronological) +
                         ";causal=" + flag_str(a.causal) +
                         ";disting=" + flag_str(a.distinguishing) +
                         ";strong=" + flag_str(a.strongly_causal) +
                         ";stable=" + flag_str(a.stably_causal) +
                         ";outer=" + flag_str(a.outer_continuous);
    push({id, name, "ladder", h, double(mism), 0.0, 0.0, false, detail});
  };

  // Constructed-surface discontinuity persistence across a spacing pair.
  auto surface = [&](const std::string& id, const std::string& name,
                     Point x, Point y, double hc, double hf, int expect) {
    const Grid& gc = ctx.G(name, hc);
    const Grid& gf = ctx.G(name, hf);
    BoundaryCurve sc = boundary_construct(gc, x, y);
    BoundaryCurve sf = boundary_construct(gf, x, y);
    SurfaceField fc = surface_function_field(gc, sc);
    SurfaceField ff = surface_function_field(gf, sf);
    bool persists = surface_jump_persists(fc, ff);
    std::string detail = "achronal=" + flag_str(sc.achronal && sf.achronal) +
                         ";flag_coarse=" + flag_str(fc.any_flagged()) +
                         ";flag_fine=" + flag_str(ff.any_flagged()) +
                         ";max_jump=" + csv_num(ff.max_jump) +
                         ";cover=" + csv_num(sf.cover);
    push({id, name, "surface", hf, persists ? 1.0 : 0.0, double(expect),
          double(expect), false, detail});
  };

  // Distance-formula gap min_z |tau_z(q) - tau_z(p)| - d(p, q).
  auto formula = [&](const std::string& id, const std::string& name,
                     double h, Point p, Point q, std::vector<Point> seeds,
                     double lo, double hi) {
    double gap = distance_formula_gap(ctx.G(name, h), p, q, seeds);
    push({id, name, "formula", h, gap, lo, hi, false, ""});
  };

  // Region-constrained longest path.
  auto path = [&](const std::string& id, const std::string& name, double h,
                  Point p, Point q, const ConvexPoly& region, double lo,
                  double hi) {
    DistanceOptions opt;
    opt.want_witness = false;
    DistanceResult r = best_path_through(ctx.G(name, h), p, q, region, opt);
    push({id, name, "path", h, r.reachable ? r.value : 0.0, lo, hi, false,
          std::string("reachable=") + flag_str(r.reachable)});
  };

  // -------------------------------------------------------------------------
  // Fixture table. Ordering is frozen; ids are stable.

  // Plain diamond: exact chords and a clean probe.
  dist("mink_d_vertical", "minkowski_diamond", 0.05, {0, -1}, {0, 1}, 1.999,
       2.001);
  dist("mink_d_boosted", "minkowski_diamond", 0.05, {-0.5, -1.5}, {0.5, 0.5},
       1.7319, 1.7322);
  probe("mink_probe_vertical", "minkowski_diamond", 0.05, {0, -1}, {0, 1},
        0.0, 0.02, false);
  formula("mink_formula", "minkowski_diamond", 0.05, {0, 0}, {0.2, 1}, {},
          -0.05, 0.05);
  {
    ConvexPoly whole;
    whole.verts = {{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
    path("mink_path_whole", "minkowski_diamond", 0.05, {0, -1}, {0, 1}, whole,
         1.999, 2.001);
  }
  miss("mink_miss_origin", "minkowski_diamond", 0.05, {0, 0}, true, 0);

  // Vertical slit: d = 4 on the clear column, a gap of sqrt(3)/2 behind the
  // slit, a nonempty miss region, and the region-constrained bound.
  dist("slit_d_column", "flat_slit", 0.05, {0, 0}, {0, 4}, 3.999, 4.001);
  dist("slit_d_below", "flat_slit", 0.05, {0, -0.05}, {1.5, 2}, 1.10, 1.187);
  probe("slit_probe_clear", "flat_slit", 0.05, {0, 0}, {0, 4}, 0.0, 0.05,
        false);
  probe("slit_probe_blocked", "flat_slit", 0.05, {0, 0}, {1.5, 2}, 0.70,
        0.95, true);
  miss("slit_miss_graze", "flat_slit", 0.05, {0, 0}, true, 1);
  miss("slit_miss_top", "flat_slit", 0.05, {2, 3}, false, 1);
  miss("slit_miss_generic", "flat_slit", 0.05, {-1, 1}, true, 0);
  {
    ConvexPoly v;  // the band {x > 1, 0 < t - x < 1} clipped to the window
    v.verts = {{1.0, 1.0}, {4.5, 4.5}, {4.5, 5.2}, {1.0, 2.0}};
    path("slit_path_band", "flat_slit", 0.05, {0, -0.05}, {0, 4.05}, v, 3.0,
         3.15);
  }
  formula("slit_formula_column", "flat_slit", 0.05, {0, 0}, {0, 4},
          {{0.0, 1.0}, {0.0, 2.0}}, -0.05, 0.10);
  surface("slit_surface_jump", "flat_slit", {0, 0}, {0, 4}, 0.1, 0.05, 1);

  // Two half-infinite horizontal cuts.
  dist("dcut_d_gate", "flat_double_cut", 0.05, {0, -0.2}, {0.3, 2}, 1.20,
       1.378);
  dist("dcut_d_bent", "flat_double_cut", 0.05, {0, -0.1}, {1.3, 1.8}, 1.10,
       1.20);
  dist("dcut_d_blocked", "flat_double_cut", 0.05, {0, 0}, {0, 2}, 0.0, 0.0);
  miss("dcut_miss_fut", "flat_double_cut", 0.05, {0, 0}, true, 1);
  miss("dcut_miss_past", "flat_double_cut", 0.05, {0, 0}, false, 1);
  miss("dcut_miss_generic", "flat_double_cut", 0.05, {3, 0.5}, true, 0);

  // Time-glued double cut: the long way around the cylinder.
  dist("cyl_d_wrap", "cylinder_double_cut", 0.05, {0, -0.1}, {-2, 0.2}, 6.70,
       7.005);
  dist("cyl_d_blocked", "cylinder_double_cut", 0.05, {0, 0}, {-2, 0.2}, 0.0,
       0.0);
  cls("cyl_class_wrap", "cylinder_double_cut", {0, -0.1}, {-2, 0.2}, 1);

  // Stacked slits on the cylinder.
  dist("stack_d_column", "cylinder_stacked_slits", 0.05, {0.5, 0.5},
       {0.5, 1.5}, 0.999, 1.001);
  dist("stack_d_blocked", "cylinder_stacked_slits", 0.05, {-1, -1},
       {-1.2, 0.9}, 0.0, 0.0);
  // Gate quantization: the chain crosses one cell left of the graze, so the
  // legs behave like sqrt(c - 2h) and sit well below the ideal supremum.
  dist("stack_d_below", "cylinder_stacked_slits", 0.05, {-1, -1.1},
       {-1.2, 0.9}, 0.60, 0.8706);
  probe("stack_probe_corner", "cylinder_stacked_slits", 0.05, {-1, -1},
        {-1.2, 0.9}, 0.70, 0.95, true);

  // Waist cylinder: angle independence and the doubled crossing.
  {
    const Scenario& sc = ctx.S("waist_cylinder");
    double tmax = waist_max_proper_time(sc.model.waist, -1.0);
    dist("waist_d_up", "waist_cylinder", 0.05, {0, -1}, {1, 0}, tmax - 0.15,
         tmax + 0.01);
    dist("waist_d_up_far", "waist_cylinder", 0.05, {0, -1}, {2, 0},
         tmax - 0.15, tmax + 0.01);
    dist("waist_d_cross", "waist_cylinder", 0.05, {0, -1}, {0, 1},
         2 * tmax - 0.25, 2 * tmax + 0.01);
  }

  // Inverse-square pole: infinite through the pole, finite beside it.
  cls("pole_class_axis", "pole_plane", {0.1, -1}, {0.1, 1}, 2);
  cls("pole_class_diamond", "pole_plane", {-1, -1.5}, {1, 1.5}, 2);
  cls("pole_class_beside", "pole_plane", {1, -0.5}, {1, 0.5}, 1);

  // Pole blended into a forward cone: the boundary chord stays exactly
  // sqrt(2) (no causal path can enter the open support before the
  // endpoint), the interior pair diverges.
  cls("cone_class_deep", "pole_plane_cone", {0, -1}, {0, 1}, 2);
  dist("cone_d_boundary", "pole_plane_cone", 0.05, {0, -1}, {0.5, 0.5},
       1.4142, 1.41422);
  dist("cone_d_far", "pole_plane_cone", 0.05, {-1.5, -0.5}, {-1.5, 0.5},
       0.999, 1.001);

  // Slit image chart: the probe pair is unreachable in image coordinates,
  // the offset pair is a frozen two-leg value.
  dist("image_d_blocked", "slit_image_plane", 0.05, {-1, -1}, {1, 1}, 0.0,
       0.0);
  dist("image_d_below", "slit_image_plane", 0.05, {-1, -1.1}, {1, 1}, 3.15,
       3.287);
  probe("image_probe", "slit_image_plane", 0.05, {-1, -1}, {1, 1}, 2.4, 2.92,
        true);
  miss("image_miss_graze", "slit_image_plane", 0.05, {-1, -1}, true, 1);

  // Wedge complement: timelike boundaries keep everything continuous.
  dist("wedge_d_column", "wedge_complement", 0.05, {-0.5, -2}, {-0.5, 2},
       3.999, 4.001);
  dist("wedge_d_apex", "wedge_complement", 0.05, {0.9, -2}, {0.9, 2}, 3.45,
       3.5722);
  miss("wedge_miss_apex", "wedge_complement", 0.05, {0.5, -2}, true, 0);
  surface("wedge_surface_clean", "wedge_complement", {-0.5, -2}, {-0.5, 2},
          0.1, 0.05, 0);

  // Conformal variants: a spine blow-up diverges while a far control pair
  // is untouched; the exhaustion suppressor keeps probes continuous.
  cls("blowup_class_spine", "minkowski_diamond_blowup", {0.4, -1.8},
      {0.4, 1.8}, 2);
  dist("blowup_d_control", "minkowski_diamond_blowup", 0.05, {-1.5, -1},
       {-1.5, 1}, 1.999, 2.001);
  probe("suppressed_probe", "minkowski_diamond_suppressed", 0.05, {0, -1},
        {0, 1}, 0.0, 0.05, false);

  // Ladder verdicts across the catalog.
  for (const std::string& name : scenario_names())
    ladder("ladder_" + name, name, 0.1);

  return rep;
}

std::string RegressReport::csv() const {
  CsvWriter w;
  w.raw_line("# regression sweep over the model catalog");
  w.raw_line("# units: chart proper time; h: chart spacing");
  w.row({"id", "scenario", "kind", "h", "measured", "lo", "hi", "pass",
         "detail"});
  for (const RegressRow& r : rows)
    w.row({r.id, r.scenario, r.kind, csv_num(r.h), csv_num(r.measured),
           csv_num(r.lo), csv_num(r.hi), r.pass ? "1" : "0", r.detail});
  return w.text;
}

std::string RegressReport::human() const {
  std::string out;
  for (const RegressRow& r : rows) {
    out += r.pass ? "PASS " : "FAIL ";
    out += r.id + " (" + r.kind + " @ h=" + csv_num(r.h) +
           "): measured=" + csv_num(r.measured) + " band=[" + csv_num(r.lo) +
           ", " + csv_num(r.hi) + "]";
    if (!r.detail.empty()) out += "  " + r.detail;
    out += "\n";
  }
  out += failures == 0 ? "ALL PASS (" + std::to_string(rows.size()) +
                             " fixtures)\n"
                       : std::to_string(failures) + " FAILURES out of " +
                             std::to_string(rows.size()) + " fixtures\n";
  return out;
}

}  // namespace lorlab
