// lorlab: distances, reach sets, surface functions and causal diagnostics
// on the 2D model catalog. Every subcommand writes CSV (and optionally SVG)
// artifacts into --out; outputs are deterministic for a fixed invocation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorlab/causality.hpp"
#include "lorlab/csvsvg.hpp"
#include "lorlab/distance.hpp"
#include "lorlab/paths.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/regress.hpp"
#include "lorlab/scenario.hpp"
#include "lorlab/surface.hpp"

using namespace lorlab;

namespace {

struct RunConfig {
  std::string scenario;
  std::vector<double> grids;  // strictly decreasing when given
  int winding = 8;
  std::string out = ".";
  bool svg = true;
  long seed = 0;
};

bool parse_point(const std::string& s, Point& p) {
  char extra;
  return std::sscanf(s.c_str(), "%lf,%lf %c", &p.x, &p.t, &extra) == 2;
}

bool parse_pair(const std::string& s, Point& p, Point& q) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return false;
  return parse_point(s.substr(0, colon), p) &&
         parse_point(s.substr(colon + 1), q);
}

// Atomic-ish write: temp file in the target directory, then rename.
bool save_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return false;
    out << text;
    if (!out) return false;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  return !ec;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  std::filesystem::create_directories(rc.out);
  return (std::filesystem::path(rc.out) / name).string();
}

// Resolve the scenario or fail with exit 2.
bool load_scenario(const RunConfig& rc, Scenario& sc) {
  auto found = find_scenario(rc.scenario);
  if (!found) {
    std::fprintf(stderr, "unknown scenario: %s\n", rc.scenario.c_str());
    return false;
  }
  sc = *found;
  return true;
}

bool grids_ok(const std::vector<double>& gs) {
  for (size_t i = 0; i < gs.size(); ++i) {
    if (gs[i] <= 0.0) return false;
    if (i && gs[i] >= gs[i - 1]) return false;
  }
  return true;
}

std::vector<double> schedule(const RunConfig& rc, const Scenario& sc) {
  return rc.grids.empty() ? sc.grids : rc.grids;
}

Grid build_at(const Scenario& sc, double h) {
  GridSpec spec;
  spec.h = h;
  return build_grid(sc.model, spec);
}

std::string cfg_header(const RunConfig& rc, double h) {
  return "# scenario: " + rc.scenario + "\n# h: " + csv_num(h) +
         "\n# winding cap: " + std::to_string(rc.winding) +
         "\n# seed: " + std::to_string(rc.seed) + "\n";
}

const char* class_name(DistanceClass c) {
  switch (c) {
    case DistanceClass::Unreachable: return "Unreachable";
    case DistanceClass::Finite: return "Finite";
    case DistanceClass::Infinite: return "Infinite";
    default: return "Unresolved";
  }
}

// ---------------------------------------------------------------------------

int cmd_dist(const RunConfig& rc, const std::string& from,
             const std::string& to) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  Point p, q;
  if (!parse_point(from, p) || !parse_point(to, q)) {
    std::fprintf(stderr, "bad coordinates (want x,t)\n");
    return 2;
  }
  Point pm = scenario_input_point(sc, p), qm = scenario_input_point(sc, q);

  DistanceOptions opt;
  opt.winding_layers = rc.winding;
  std::vector<double> grids = schedule(rc, sc);
  DistanceEstimate est = estimate_distance(sc.model, pm, qm, grids, opt);

  CsvWriter w;
  w.text += cfg_header(rc, grids.back());
  w.raw_line("# units: h chart spacing; value proper time (-1 unreachable)");
  w.raw_line("# classification: " + std::string(class_name(est.cls)));
  w.row({"h", "value"});
  for (size_t i = 0; i < grids.size() && i < est.per_grid.size(); ++i)
    w.row({csv_num(grids[i]), csv_num(est.per_grid[i])});
  save_atomic(out_path(rc, "dist.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.model_markup(sc.model);
    if (!est.fine.witness.empty())
      canvas.polyline(est.fine.witness, "#c0392b", 2.0);
    canvas.marker(pm, "#2980b9");
    canvas.marker(qm, "#27ae60");
    save_atomic(out_path(rc, "witness.svg"), canvas.finish());
  }

  std::printf("d(%s -> %s) = %s  [%s]\n", from.c_str(), to.c_str(),
              csv_num(est.value).c_str(), class_name(est.cls));
  return 0;
}

int cmd_reach(const RunConfig& rc, const std::string& at, bool future) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  Point x;
  if (!parse_point(at, x)) {
    std::fprintf(stderr, "bad coordinates (want x,t)\n");
    return 2;
  }
  Point xm = scenario_input_point(sc, x);
  double h = schedule(rc, sc).back();
  Grid g = build_at(sc, h);
  FloodResult fr = flood_point(g, xm, future);

  CsvWriter w;
  w.text += cfg_header(rc, h);
  w.raw_line("# units: chart coordinates; causal/chron are set flags");
  w.row({"x", "t", "causal", "chron"});
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!fr.causal[id] && !fr.chron[id]) continue;
    Point pt = g.point_of(id);
    w.row({csv_num(pt.x), csv_num(pt.t), fr.causal[id] ? "1" : "0",
           fr.chron[id] ? "1" : "0"});
  }
  save_atomic(out_path(rc, "reach.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.fill_nodes(g, fr.causal, "#f1c40f", 0.35);
    canvas.fill_nodes(g, fr.chron, "#e67e22", 0.45);
    canvas.model_markup(sc.model);
    canvas.marker(xm, "#2980b9");
    save_atomic(out_path(rc, "reach.svg"), canvas.finish());
  }

  int nc = 0, ni = 0;
  for (int id = 0; id < g.num_nodes(); ++id) {
    nc += fr.causal[id];
    ni += fr.chron[id];
  }
  std::printf("%s reach of (%s): %d causal nodes, %d chronological\n",
              future ? "future" : "past", at.c_str(), nc, ni);
  return 0;
}

int cmd_miss(const RunConfig& rc, const std::string& at, bool future) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  Point x;
  if (!parse_point(at, x)) {
    std::fprintf(stderr, "bad coordinates (want x,t)\n");
    return 2;
  }
  Point xm = scenario_input_point(sc, x);
  double h = schedule(rc, sc).back();
  Grid g = build_at(sc, h);
  MissResult mr = future ? miss_future(g, xm) : miss_past(g, xm);

  CsvWriter w;
  w.text += cfg_header(rc, h);
  w.raw_line("# units: chart coordinates of limit-missed interior nodes");
  w.raw_line(std::string("# nonempty: ") + (mr.nonempty ? "1" : "0") +
             "  schedules agree: " + (mr.agree ? "1" : "0"));
  w.row({"x", "t"});
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!mr.nodes[id]) continue;
    Point pt = g.point_of(id);
    w.row({csv_num(pt.x), csv_num(pt.t)});
  }
  save_atomic(out_path(rc, "miss.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.fill_nodes(g, mr.nodes, "#8e44ad", 0.5);
    canvas.model_markup(sc.model);
    canvas.marker(xm, "#2980b9");
    save_atomic(out_path(rc, "miss.svg"), canvas.finish());
  }

  std::printf("miss set at (%s), %s: %s (schedules %s)\n", at.c_str(),
              future ? "future" : "past",
              mr.nonempty ? "nonempty" : "empty",
              mr.agree ? "agree" : "disagree");
  return 0;
}

int cmd_tau(const RunConfig& rc, const std::string& through,
            const std::string& target,
            const std::vector<std::string>& probes) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  Point x, y;
  if (!parse_point(through, x) || !parse_point(target, y)) {
    std::fprintf(stderr, "bad coordinates (want x,t)\n");
    return 2;
  }
  Point xm = scenario_input_point(sc, x), ym = scenario_input_point(sc, y);
  double h = schedule(rc, sc).back();
  Grid g = build_at(sc, h);
  BoundaryCurve S = boundary_construct(g, xm, ym);
  SurfaceField f = surface_function_field(g, S);

  CsvWriter w;
  w.text += cfg_header(rc, h);
  w.raw_line(
      "# units: chart coordinates; tau proper time; side +1/0/-1/-2");
  w.raw_line("# boundary: " + std::to_string(S.nodes.size()) +
             " nodes, achronal " + (S.achronal ? "1" : "0") + ", pruned " +
             std::to_string(S.pruned) + ", cover " + csv_num(S.cover));
  w.raw_line(std::string("# flagged cells present: ") +
             (f.any_flagged() ? "1" : "0") +
             "  max jump: " + csv_num(f.max_jump));
  w.row({"x", "t", "side", "tau", "jump", "flagged"});
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!g.valid[id] || f.side[id] == -2) continue;
    Point pt = g.point_of(id);
    w.row({csv_num(pt.x), csv_num(pt.t), std::to_string(int(f.side[id])),
           csv_num(f.tau[id]), csv_num(f.jump[id]),
           f.flagged[id] ? "1" : "0"});
  }
  save_atomic(out_path(rc, "tau.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.fill_nodes(g, f.flagged, "#c0392b", 0.5);
    canvas.model_markup(sc.model);
    for (const Point& s : S.pts) canvas.marker(s, "#2c3e50", 1.5);
    canvas.marker(xm, "#2980b9");
    canvas.marker(ym, "#27ae60");
    save_atomic(out_path(rc, "tau.svg"), canvas.finish());
  }

  std::printf("surface through (%s): %zu nodes, achronal %s, flagged %s\n",
              through.c_str(), S.nodes.size(), S.achronal ? "yes" : "no",
              f.any_flagged() ? "yes" : "no");
  for (const std::string& ps : probes) {
    Point pr;
    if (!parse_point(ps, pr)) {
      std::fprintf(stderr, "bad probe point: %s\n", ps.c_str());
      return 2;
    }
    double tau = distance_to_surface(g, S, scenario_input_point(sc, pr));
    std::printf("tau(%s) = %s\n", ps.c_str(), csv_num(tau).c_str());
  }
  return 0;
}

int cmd_probe(const RunConfig& rc, const std::string& pair) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  Point p, q;
  if (!parse_pair(pair, p, q)) {
    std::fprintf(stderr, "bad pair (want px,pt:qx,qt)\n");
    return 2;
  }
  Point pm = scenario_input_point(sc, p), qm = scenario_input_point(sc, q);
  double h = schedule(rc, sc).back();
  Grid g = build_at(sc, h);
  ProbeOptions opt;
  opt.dist.winding_layers = rc.winding;
  ProbeVerdict v = continuity_probe(g, pm, qm, opt);

  CsvWriter w;
  w.text += cfg_header(rc, h);
  w.raw_line("# units: offsets chart units; values proper time");
  w.raw_line("# d: " + csv_num(v.d) + "  limit: " +
             csv_num(v.limit_estimate) + "  gap: " + csv_num(v.gap) +
             "  discontinuous: " + (v.discontinuous ? "1" : "0"));
  w.row({"offset", "value", "outside_future_len", "outside_past_len"});
  size_t wi = 0;
  for (size_t i = 0; i < v.offsets.size(); ++i) {
    bool ok = v.approach[i] >= 0.0 && wi < v.sub_future.size();
    w.row({csv_num(v.offsets[i]), csv_num(v.approach[i]),
           ok ? csv_num(v.sub_future[wi]) : "nan",
           ok ? csv_num(v.sub_past[wi]) : "nan"});
    if (v.approach[i] >= 0.0) ++wi;
  }
  save_atomic(out_path(rc, "probe.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.model_markup(sc.model);
    for (size_t i = 0; i < v.witnesses.size(); ++i)
      canvas.polyline(v.witnesses[i], i + 1 == v.witnesses.size()
                                          ? "#c0392b"
                                          : "#e67e22",
                      i + 1 == v.witnesses.size() ? 2.0 : 1.0,
                      i + 1 != v.witnesses.size());
    canvas.marker(pm, "#2980b9");
    canvas.marker(qm, "#27ae60");
    save_atomic(out_path(rc, "probe.svg"), canvas.finish());
  }

  std::printf("d = %s, limit = %s, gap = %s (%s)\n", csv_num(v.d).c_str(),
              csv_num(v.limit_estimate).c_str(), csv_num(v.gap).c_str(),
              v.discontinuous ? "discontinuous" : "continuous");
  return 0;
}

int cmd_diagnose(const RunConfig& rc) {
  Scenario sc;
  if (!load_scenario(rc, sc)) return 2;
  double h = schedule(rc, sc).back();
  Grid g = build_at(sc, h);
  LadderOptions opt;
  opt.outer_probes = sc.miss_probes;
  LadderReport lr = ladder_report(g, opt);

  struct Rung {
    const char* name;
    bool holds;
  } rungs[] = {
      {"chronological", lr.flags.chronological},
      {"causal", lr.flags.causal},
      {"distinguishing", lr.flags.distinguishing},
      {"strongly_causal", lr.flags.strongly_causal},
      {"stably_causal", lr.flags.stably_causal},
      {"outer_continuous", lr.flags.outer_continuous},
  };

  CsvWriter w;
  w.text += cfg_header(rc, h);
  w.raw_line("# units: rung verdicts (1 holds on the sampled grid)");
  w.row({"rung", "holds"});
  for (const Rung& r : rungs) w.row({r.name, r.holds ? "1" : "0"});
  save_atomic(out_path(rc, "diagnose.csv"), w.text);

  if (rc.svg) {
    SvgCanvas canvas(sc.model.window);
    canvas.model_markup(sc.model);
    if (!lr.closed_chain.empty())
      canvas.polyline(lr.closed_chain, "#c0392b", 2.0);
    if (!lr.widened_cycle.empty())
      canvas.polyline(lr.widened_cycle, "#e67e22", 1.5, true);
    save_atomic(out_path(rc, "diagnose.svg"), canvas.finish());
  }

  for (const Rung& r : rungs)
    std::printf("%-18s %s\n", r.name, r.holds ? "ok" : "VIOLATED");
  return 0;
}

int cmd_regress(const RunConfig& rc) {
  RegressReport rep = run_regress();
  save_atomic(out_path(rc, "regress.csv"), rep.csv());
  save_atomic(out_path(rc, "regress.txt"), rep.human());
  std::fputs(rep.human().c_str(), stdout);
  return rep.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorlab: Lorentzian distance and causal diagnostics on 2D "
               "model spacetimes"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string from, to, at, pair, through, target, dir = "future";
  std::vector<std::string> probes;

  auto add_common = [&](CLI::App* cmd, bool with_scenario = true) {
    if (with_scenario)
      cmd->add_option("scenario", rc.scenario, "catalog scenario name")
          ->required();
    cmd->add_option("--grid", rc.grids,
                    "grid schedule, strictly decreasing (chart units)")
        ->delimiter(',');
    cmd->add_option("--winding", rc.winding, "winding layer cap");
    cmd->add_option("--out", rc.out, "output directory");
    cmd->add_flag("--svg,!--no-svg", rc.svg, "write SVG sketches");
    cmd->add_option("--seed", rc.seed,
                    "sampling seed (recorded in outputs)");
  };

  CLI::App* dist = app.add_subcommand("dist", "distance over a schedule");
  add_common(dist);
  dist->add_option("--from", from, "start point x,t")->required();
  dist->add_option("--to", to, "end point x,t")->required();

  CLI::App* reach = app.add_subcommand("reach", "causal/chronological flood");
  add_common(reach);
  reach->add_option("--at", at, "base point x,t")->required();
  reach->add_option("--dir", dir, "future|past");

  CLI::App* miss = app.add_subcommand("miss", "limit-miss set at a point");
  add_common(miss);
  miss->add_option("--at", at, "base point x,t")->required();
  miss->add_option("--dir", dir, "future|past");

  CLI::App* tau = app.add_subcommand("tau", "achronal surface and its field");
  add_common(tau);
  tau->add_option("--through", through, "point the surface passes through")
      ->required();
  tau->add_option("--target", target, "future reference point x,t")
      ->required();
  tau->add_option("--probe", probes, "evaluate tau at x,t (repeatable)");

  CLI::App* probe = app.add_subcommand("probe", "distance continuity probe");
  add_common(probe);
  probe->add_option("--pair", pair, "pair px,pt:qx,qt")->required();

  CLI::App* diag = app.add_subcommand("diagnose", "causal ladder verdicts");
  add_common(diag);

  CLI::App* regress =
      app.add_subcommand("regress", "run the frozen fixture sweep");
  regress->add_option("--out", rc.out, "output directory");
  regress->add_option("--seed", rc.seed, "recorded in outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!rc.grids.empty() && !grids_ok(rc.grids)) {
    std::fprintf(stderr, "--grid must be positive and strictly decreasing\n");
    return 2;
  }
  bool future = dir != "past";

  if (dist->parsed()) return cmd_dist(rc, from, to);
  if (reach->parsed()) return cmd_reach(rc, at, future);
  if (miss->parsed()) return cmd_miss(rc, at, future);
  if (tau->parsed()) return cmd_tau(rc, through, target, probes);
  if (probe->parsed()) return cmd_probe(rc, pair);
  if (diag->parsed()) return cmd_diagnose(rc);
  if (regress->parsed()) return cmd_regress(rc);
  return 2;
}
