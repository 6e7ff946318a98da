#include "lorlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dp_common.hpp"
#include "lorlab/reach.hpp"

namespace lorlab {

using dpdetail::ArcLengths;
using dpdetail::arc_blocked;
using dpdetail::causal_class;
using dpdetail::kNegInf;

namespace {

const Arc kDirs8[8] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                       {1, 1},  {-1, 1}, {1, -1}, {-1, -1}};

// Nodes outside the set with an 8-neighbor inside it, in (t, x) order.
std::vector<int> outside_layer(const Grid& g, const std::vector<uint8_t>& in) {
  std::vector<int> out;
  int nn = g.num_nodes();
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id] || in[id]) continue;
    for (const Arc& a : kDirs8) {
      int nb;
      if (g.target(id, a, nb) && in[nb]) {
        out.push_back(id);
        break;
      }
    }
  }
  return out;
}

// Nodes inside the set with an 8-neighbor outside it (or off the window).
std::vector<int> inside_layer(const Grid& g, const std::vector<uint8_t>& in) {
  std::vector<int> out;
  int nn = g.num_nodes();
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id] || !in[id]) continue;
    for (const Arc& a : kDirs8) {
      int nb;
      if (!g.target(id, a, nb) || !in[nb]) {
        out.push_back(id);
        break;
      }
    }
  }
  return out;
}

// Keep only the chronologically minimal nodes: one flood from the whole set
// removes every node with a chronological ancestor in the set, and minimal
// elements are pairwise unrelated. A second flood verifies.
void prune_to_antichain(const Grid& g, std::vector<int>& nodes, int& pruned,
                        bool& achronal) {
  pruned = 0;
  achronal = true;
  if (nodes.empty()) return;
  FloodResult fr = flood_nodes(g, nodes, true, false);
  std::vector<int> kept;
  kept.reserve(nodes.size());
  for (int id : nodes)
    if (!fr.chron[id]) kept.push_back(id);
  if (kept.empty()) {  // chronology-violating region; leave the set alone
    achronal = false;
    return;
  }
  pruned = int(nodes.size() - kept.size());
  nodes.swap(kept);
  FloodResult ck = flood_nodes(g, nodes, true, false);
  for (int id : nodes)
    if (ck.chron[id]) {
      achronal = false;
      break;
    }
}

BoundaryCurve finish_boundary(const Grid& g, std::vector<int> nodes,
                              bool measure_cover) {
  BoundaryCurve b;
  prune_to_antichain(g, nodes, b.pruned, b.achronal);
  b.nodes = std::move(nodes);
  b.pts.reserve(b.nodes.size());
  for (int id : b.nodes) b.pts.push_back(g.point_of(id));
  if (measure_cover && !b.nodes.empty()) {
    FloodResult fut = flood_nodes(g, b.nodes, true, false);
    FloodResult pst = flood_nodes(g, b.nodes, false, false);
    std::vector<uint8_t> on(g.num_nodes(), 0);
    for (int id : b.nodes) on[id] = 1;
    int valid = 0, covered = 0;
    for (int id = 0; id < g.num_nodes(); ++id) {
      if (!g.valid[id]) continue;
      ++valid;
      if (on[id] || fut.chron[id] || pst.chron[id]) ++covered;
    }
    b.cover = valid ? double(covered) / valid : 0.0;
  }
  return b;
}

std::vector<uint8_t> union_chron(const FloodResult& a, const FloodResult& b) {
  std::vector<uint8_t> u(a.chron.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = a.chron[i] | b.chron[i];
  return u;
}

void longest_future(const Grid& g, const ArcLengths& len,
                    const std::vector<uint8_t>& source,
                    std::vector<double>& best) {
  best.assign(g.num_nodes(), kNegInf);
  for (int id = 0; id < g.num_nodes(); ++id)
    if (source[id]) best[id] = 0.0;
  dpdetail::sweep_longest_future(g, len, best);
}

void longest_past(const Grid& g, const ArcLengths& len,
                  const std::vector<uint8_t>& source,
                  std::vector<double>& best) {
  best.assign(g.num_nodes(), kNegInf);
  for (int id = 0; id < g.num_nodes(); ++id)
    if (source[id]) best[id] = 0.0;
  dpdetail::sweep_longest_past(g, len, best);
}

}  // namespace

BoundaryCurve boundary_level_line(const Grid& g, double t0) {
  int j = int(std::lround((t0 - g.model->window.t0) / g.ht));
  j = std::clamp(j, 0, g.nt - 1);
  std::vector<int> nodes;
  for (int i = 0; i < g.nx; ++i) {
    int id = g.idx(i, j);
    if (g.valid[id]) nodes.push_back(id);
  }
  return finish_boundary(g, std::move(nodes), true);
}

BoundaryCurve boundary_construct(const Grid& g, Point x, Point y) {
  // S1: boundary of the past of the window's top edge = the top row.
  std::vector<int> top;
  for (int i = 0; i < g.nx; ++i) {
    int id = g.idx(i, g.nt - 1);
    if (g.valid[id]) top.push_back(id);
  }
  FloodResult ps1 = flood_nodes(g, top, false, false);
  FloodResult psy = flood_point(g, y, false);
  std::vector<uint8_t> u1 = union_chron(ps1, psy);
  for (int id : top) u1[id] = 0;  // the top row itself stays outside

  std::vector<int> s2 = outside_layer(g, u1);
  // The top row bounds its own past; fold it in when the layer missed it
  // (it usually is the layer).
  if (s2.empty()) s2 = top;

  FloodResult fsx = flood_point(g, x, true);
  FloodResult fs2 = flood_nodes(g, s2, true, false);
  std::vector<uint8_t> u2 = union_chron(fsx, fs2);

  return finish_boundary(g, outside_layer(g, u2), true);
}

SurfaceField surface_function_field(const Grid& g, const BoundaryCurve& S) {
  SurfaceField f;
  f.grid = &g;
  int nn = g.num_nodes();
  f.tau.assign(nn, 0.0);
  f.side.assign(nn, -2);
  f.jump.assign(nn, 0.0);
  f.flagged.assign(nn, 0);

  std::vector<uint8_t> source(nn, 0);
  for (int id : S.nodes) source[id] = 1;

  ArcLengths len;
  len.init(g);
  std::vector<double> fut, pst;
  longest_future(g, len, source, fut);
  longest_past(g, len, source, pst);

  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id]) continue;
    if (source[id]) {
      f.side[id] = 0;
      f.tau[id] = 0.0;
    } else if (fut[id] != kNegInf) {
      f.side[id] = 1;
      f.tau[id] = fut[id];
    } else if (pst[id] != kNegInf) {
      f.side[id] = -1;
      f.tau[id] = -pst[id];
    }
  }

  double h = std::max(g.hx, g.ht);
  f.jump_threshold = 8.0 * grid_tolerance(h);
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id] || f.side[id] == -2) continue;
    double mx = 0.0;
    for (const Arc& a : kDirs8) {
      int nb;
      if (!g.target(id, a, nb)) continue;
      if (!g.valid[nb] || f.side[nb] == -2) continue;
      mx = std::max(mx, std::fabs(f.tau[id] - f.tau[nb]));
    }
    f.jump[id] = mx;
    f.flagged[id] = mx > f.jump_threshold ? 1 : 0;
    f.max_jump = std::max(f.max_jump, mx);
  }
  return f;
}

double distance_to_surface(const Grid& g, const BoundaryCurve& S, Point x) {
  const SpacetimeModel& m = *g.model;
  SurfaceField f = surface_function_field(g, S);

  double chord_fut = kNegInf, chord_pst = kNegInf;
  for (const Point& s : S.pts) {
    if (causal_class(segment_admissible(m, s, x)))
      chord_fut = std::max(chord_fut,
                           std::max(0.0, segment_proper_length(m, s, x)));
    if (causal_class(segment_admissible(m, x, s)))
      chord_pst = std::max(chord_pst,
                           std::max(0.0, segment_proper_length(m, x, s)));
  }

  int i, j;
  int8_t side = -2;
  double node_tau = 0.0;
  if (g.nearest_node(x, i, j)) {
    int id = g.idx(i, j);
    if (g.valid[id]) {
      side = f.side[id];
      node_tau = f.tau[id];
    }
  }

  if (side == 0) return 0.0;
  if (side == 1 || (side == -2 && chord_fut != kNegInf))
    return std::max(chord_fut, side == 1 ? node_tau : 0.0);
  if (side == -1 || (side == -2 && chord_pst != kNegInf))
    return -std::max(chord_pst, side == -1 ? -node_tau : 0.0);
  return 0.0;
}

bool surface_jump_persists(const SurfaceField& coarse,
                           const SurfaceField& fine, Point* where) {
  const Grid& gc = *coarse.grid;
  const Grid& gf = *fine.grid;
  int rad = std::max(1, int(std::lround(gc.hx / gf.hx)));
  for (int id = 0; id < gc.num_nodes(); ++id) {
    if (!coarse.flagged[id]) continue;
    double jc = coarse.jump[id];
    Point p = gc.point_of(id);
    double jf = 0.0;
    for (int nb : gf.nodes_near(p, rad))
      jf = std::max(jf, fine.jump[nb]);
    if (jf >= 0.8 * jc && jf > fine.jump_threshold) {
      if (where) *where = p;
      return true;
    }
  }
  return false;
}

double distance_formula_gap(const Grid& g, Point p, Point q,
                            const std::vector<Point>& seeds) {
  DistanceOptions dopt;
  dopt.want_witness = false;
  double d = grid_distance(g, p, q, dopt).value;

  std::vector<Point> all{p};
  all.insert(all.end(), seeds.begin(), seeds.end());

  double best = std::numeric_limits<double>::infinity();
  for (const Point& z : all) {
    FloodResult r = flood_point(g, z, true);
    BoundaryCurve sz = finish_boundary(g, inside_layer(g, r.causal), false);
    if (sz.nodes.empty()) continue;
    SurfaceField f = surface_function_field(g, sz);

    int pi, pj, qi, qj;
    if (!g.nearest_node(p, pi, pj) || !g.nearest_node(q, qi, qj)) continue;
    int pid = g.idx(pi, pj), qid = g.idx(qi, qj);
    if (f.side[pid] == -2 || f.side[qid] == -2) continue;
    best = std::min(best, std::fabs(f.tau[qid] - f.tau[pid]));
  }
  if (!std::isfinite(best)) return 0.0;
  return best - d;
}

}  // namespace lorlab
