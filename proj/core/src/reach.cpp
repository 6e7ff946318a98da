#include "lorlab/reach.hpp"

#include <algorithm>
#include <deque>

namespace lorlab {
namespace {

// BFS state: node id plus which layer (causal-only or chron) it was reached
// in. A node enters the queue at most twice.
struct Frontier {
  std::deque<int> q;  // encoded id * 2 + chron
  FloodResult* out;
  void push(int id, bool chron) {
    auto& seen = chron ? out->chron : out->causal;
    if (seen[id]) return;
    seen[id] = 1;
    if (chron) out->causal[id] = 1;  // keep the subset property eagerly
    q.push_back(id * 2 + (chron ? 1 : 0));
  }
};

bool arc_blocked(const SpacetimeModel& m, Point a, Vec2 v) {
  if (m.excised_points.empty() && m.excised_segments.empty() &&
      m.excised_regions.empty())
    return false;
  return excision_blocks(m, a, a + v);
}

// Drain the frontier, expanding primitive stencil arcs and per-row winding
// arcs, forwards or backwards. Push-up rule: chron propagates through any
// causal arc; a strictly timelike arc promotes causal states to chron.
void run_flood(const Grid& g, Frontier& f, bool future) {
  const SpacetimeModel& m = *g.model;
  bool has_winding = !g.row_winding.empty();
  while (!f.q.empty()) {
    int enc = f.q.front();
    f.q.pop_front();
    int id = enc / 2;
    bool chron = enc & 1;

    if (future) {
      uint64_t cm = g.cmask[id];
      uint64_t tm = g.tmask[id];
      while (cm) {
        int k = __builtin_ctzll(cm);
        cm &= cm - 1;
        int to;
        if (!g.target(id, g.arcs[k], to)) continue;
        f.push(to, chron || ((tm >> k) & 1));
      }
      if (has_winding) {
        for (Arc a : g.row_winding[g.row(id)]) {
          int to;
          if (!g.target(id, a, to)) continue;
          if (!g.valid[to]) continue;
          if (arc_blocked(m, g.point_of(id), g.arc_vec(a))) continue;
          f.push(to, true);  // winding arcs are strictly timelike
        }
      }
    } else {
      // Past flood: enumerate predecessors via reversed arcs and test the
      // predecessor's own mask bit.
      for (size_t k = 0; k < g.arcs.size(); ++k) {
        Arc rev{-g.arcs[k].dx, -g.arcs[k].dt};
        int from;
        if (!g.target(id, rev, from)) continue;
        if (!((g.cmask[from] >> k) & 1)) continue;
        f.push(from, chron || ((g.tmask[from] >> k) & 1));
      }
      if (has_winding) {
        for (int dt = 1; dt <= 2; ++dt) {
          int jsrc = g.row(id) - dt;
          if (g.glue_t) {
            jsrc = ((jsrc % g.nt) + g.nt) % g.nt;
          } else if (jsrc < 0) {
            continue;
          }
          for (Arc a : g.row_winding[jsrc]) {
            if (a.dt != dt) continue;
            Arc rev{-a.dx, -a.dt};
            int from;
            if (!g.target(id, rev, from)) continue;
            if (!g.valid[from]) continue;
            if (arc_blocked(m, g.point_of(from), g.arc_vec(a))) continue;
            f.push(from, true);
          }
        }
      }
    }
  }
}

}  // namespace

Vec2 cone_bisector(const SpacetimeModel& m, Point x) {
  ConeDirs c = cone_at(m, x);
  Vec2 b{c.left.x + c.right.x, c.left.t + c.right.t};
  double n = std::sqrt(b.x * b.x + b.t * b.t);
  return {b.x / n, b.t / n};
}

FloodResult flood_nodes(const Grid& g, const std::vector<int>& seed_nodes,
                        bool future, bool seeds_chron) {
  FloodResult res;
  res.causal.assign(g.num_nodes(), 0);
  res.chron.assign(g.num_nodes(), 0);
  Frontier f;
  f.out = &res;
  for (int id : seed_nodes)
    if (g.valid[id]) f.push(id, seeds_chron);
  run_flood(g, f, future);
  return res;
}

FloodResult flood_point(const Grid& g, Point seed, bool future) {
  const SpacetimeModel& m = *g.model;
  FloodResult res;
  res.causal.assign(g.num_nodes(), 0);
  res.chron.assign(g.num_nodes(), 0);
  Frontier f;
  f.out = &res;

  auto try_seed = [&](int id) {
    if (!g.valid[id]) return;
    Point q = g.point_of(id);
    // Choose the wrap representative of q closest to the seed per glued axis.
    if (m.gluing) {
      double period = m.gluing->period();
      if (g.glue_x) {
        while (q.x - seed.x > period / 2) q.x -= period;
        while (seed.x - q.x > period / 2) q.x += period;
      } else {
        while (q.t - seed.t > period / 2) q.t -= period;
        while (seed.t - q.t > period / 2) q.t += period;
      }
    }
    CausalClass cls = future ? segment_admissible(m, seed, q)
                             : segment_admissible(m, q, seed);
    if (cls == CausalClass::TimelikeFuture) {
      f.push(id, true);
    } else if (cls == CausalClass::Null || cls == CausalClass::Causal) {
      f.push(id, false);
    }
  };

  for (int id : g.nodes_near(seed, g.spec.stencil_radius + 1)) try_seed(id);

  // Near a degenerate waist the first ring is too short: cones open up to
  // near-horizontal, so admissible straight seed arcs can span many columns.
  if (m.base == BaseMetric::Waist) {
    int ci, cj;
    if (g.nearest_node(seed, ci, cj)) {
      for (int dj = -2; dj <= 2; ++dj) {
        int j = cj + dj;
        if (g.glue_t) {
          j = ((j % g.nt) + g.nt) % g.nt;
        } else if (j < 0 || j >= g.nt) {
          continue;
        }
        for (int i = 0; i < g.nx; ++i) try_seed(g.idx(i, j));
      }
    }
  }

  run_flood(g, f, future);
  return res;
}

bool flood_contains(const Grid& g, const std::vector<uint8_t>& layer,
                    Point p) {
  int i, j;
  if (!g.nearest_node(p, i, j)) return false;
  int id = g.idx(i, j);
  if (!g.valid[id]) return false;
  return layer[id] != 0;
}

namespace {

// Limit set of one approach schedule: intersection of the chron floods of
// the approach points, minus the chron flood of x itself, eroded one cell
// as a grid proxy for taking the interior.
void miss_schedule(const Grid& g, Point x, bool future_side, double eps0,
                   int levels, std::vector<uint8_t>& out) {
  const SpacetimeModel& m = *g.model;
  Vec2 dir = cone_bisector(m, x);
  if (future_side) dir = {-dir.x, -dir.t};  // approach x from its past

  // The grid cannot resolve approach points closer than two cells: a chron
  // chain needs one strictly timelike arc, which costs a full cell of cone
  // budget, so floods seeded below 2h collapse onto the flood of x itself
  // and the intersection degenerates. The schedule therefore bottoms out at
  // 2h; refinement of the grid is what drives the limit.
  const double eps_floor = 2.0 * std::max(g.hx, g.ht);
  std::vector<uint8_t> inter;
  double eps = eps0;
  for (int i = 0; i <= levels; ++i) {
    Point xi = x + eps * dir;
    FloodResult fi = flood_point(g, xi, future_side);
    if (inter.empty()) {
      inter = fi.chron;
    } else {
      for (size_t k = 0; k < inter.size(); ++k) inter[k] &= fi.chron[k];
    }
    if (eps <= eps_floor) break;
    eps = std::max(0.5 * eps, eps_floor);
  }
  FloodResult fx = flood_point(g, x, future_side);
  out.assign(g.num_nodes(), 0);
  for (int id = 0; id < g.num_nodes(); ++id)
    out[id] = inter[id] && !fx.chron[id];
  std::vector<uint8_t> eroded(g.num_nodes(), 0);
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!out[id]) continue;
    bool keep = true;
    for (int dj = -1; dj <= 1 && keep; ++dj) {
      for (int di = -1; di <= 1 && keep; ++di) {
        int to;
        if (!g.target(id, Arc{di, dj}, to) || !out[to]) keep = false;
      }
    }
    eroded[id] = keep;
  }
  out.swap(eroded);
}

MissResult miss_impl(const Grid& g, Point x, bool future_side) {
  double h = std::max(g.hx, g.ht);
  MissResult res;
  miss_schedule(g, x, future_side, 8.0 * h, 6, res.nodes);
  std::vector<uint8_t> alt;
  miss_schedule(g, x, future_side, 6.0 * h, 6, alt);

  bool n1 = std::any_of(res.nodes.begin(), res.nodes.end(),
                        [](uint8_t v) { return v != 0; });
  bool n2 = std::any_of(alt.begin(), alt.end(),
                        [](uint8_t v) { return v != 0; });
  res.nonempty = n1;
  res.agree = (n1 == n2);
  for (int id = 0; id < g.num_nodes() && res.witnesses.size() < 4; ++id)
    if (res.nodes[id] && alt[id]) res.witnesses.push_back(g.point_of(id));
  return res;
}

}  // namespace

MissResult miss_future(const Grid& g, Point x) { return miss_impl(g, x, true); }
MissResult miss_past(const Grid& g, Point x) { return miss_impl(g, x, false); }

bool miss_nonempty(const Grid& g, Point x, bool future, int levels,
                   Point* witness) {
  double h = std::max(g.hx, g.ht);
  std::vector<uint8_t> nodes;
  miss_schedule(g, x, future, 8.0 * h, levels, nodes);
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (nodes[id]) {
      if (witness) *witness = g.point_of(id);
      return true;
    }
  }
  return false;
}

}  // namespace lorlab
