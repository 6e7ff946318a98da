#include "lorlab/causality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "lorlab/threads.hpp"

namespace lorlab {
namespace {

// ---------------------------------------------------------------------------
// Causal digraph in CSR form, at true cones (delta = 0) or widened cones.

struct Digraph {
  int nn = 0;
  std::vector<int> head;    // size nn + 1
  std::vector<int> to;
  std::vector<uint8_t> tl;  // edge is strictly timelike
};

bool arc_blocked(const SpacetimeModel& m, Point a, Vec2 v) {
  if (m.excised_points.empty() && m.excised_segments.empty() &&
      m.excised_regions.empty())
    return false;
  return excision_blocks(m, a, a + v);
}

// Long probe arcs for the widened graph of a time-glued flat model: arcs
// spanning one chart time unit with slope just outside the true light cone.
// Shorter near-null arcs cannot wrap the period, so cycles that live just
// outside the cones only appear once such arcs are available.
std::vector<Arc> widened_probe_arcs(const Grid& g, double delta) {
  std::vector<Arc> probe;
  const SpacetimeModel& m = *g.model;
  if (!(g.glue_t && m.base == BaseMetric::Minkowski)) return probe;
  double slope = std::tan(M_PI / 4.0 * (1.0 + delta));
  double margin = slope - 1.0;
  if (margin <= 0.0) return probe;
  // Span enough rows that the slope quantization (one column per dt rows)
  // resolves the widened margin; cap at one period, which is as far as the
  // excision seam-image check reaches.
  int dt = std::max(int(std::lround(1.0 / g.ht)),
                    int(std::ceil(g.hx / (g.ht * margin))));
  dt = std::min(dt, int(std::floor(m.gluing->period() / g.ht)));
  if (dt < 1) return probe;
  double bound = slope * dt * g.ht / g.hx;
  int kmin = int(std::floor(dt * g.ht / g.hx)) + 1;
  for (int k = kmin; k <= int(std::floor(bound)); ++k) {
    probe.push_back({k, dt});
    probe.push_back({-k, dt});
  }
  return probe;
}

Digraph build_digraph(const Grid& g, double delta) {
  const SpacetimeModel& m = *g.model;
  const std::vector<uint64_t>* tm = &g.tmask;
  const std::vector<uint64_t>* cm = &g.cmask;
  std::vector<uint64_t> wt, wc;
  if (delta > 0.0) {
    widened_masks(g, delta, wt, wc);
    tm = &wt;
    cm = &wc;
  }
  std::vector<Arc> probe = delta > 0.0 ? widened_probe_arcs(g, delta)
                                       : std::vector<Arc>{};
  bool has_winding = !g.row_winding.empty();

  Digraph dg;
  dg.nn = g.num_nodes();
  dg.head.assign(dg.nn + 1, 0);

  // Two passes: count, then fill.
  for (int pass = 0; pass < 2; ++pass) {
    for (int id = 0; id < dg.nn; ++id) {
      if (!g.valid[id]) continue;
      int at = dg.head[id];
      auto emit = [&](int to, bool timelike) {
        if (pass == 0) {
          ++dg.head[id + 1];
        } else {
          dg.to[at] = to;
          dg.tl[at] = timelike;
          ++at;
        }
      };
      uint64_t cmask = (*cm)[id];
      uint64_t tmask = (*tm)[id];
      while (cmask) {
        int k = __builtin_ctzll(cmask);
        cmask &= cmask - 1;
        int to;
        if (!g.target(id, g.arcs[k], to)) continue;
        emit(to, (tmask >> k) & 1);
      }
      if (has_winding) {
        for (Arc a : g.row_winding[g.row(id)]) {
          int to;
          if (!g.target(id, a, to)) continue;
          if (!g.valid[to]) continue;
          if (arc_blocked(m, g.point_of(id), g.arc_vec(a))) continue;
          emit(to, true);
        }
      }
      for (Arc a : probe) {
        int to;
        if (!g.target(id, a, to)) continue;
        if (!g.valid[to]) continue;
        CausalClass cls = grid_arc_class(g, id, a, delta);
        if (cls == CausalClass::TimelikeFuture) {
          emit(to, true);
        } else if (cls == CausalClass::Null || cls == CausalClass::Causal) {
          emit(to, false);
        }
      }
    }
    if (pass == 0) {
      for (int id = 0; id < dg.nn; ++id) dg.head[id + 1] += dg.head[id];
      dg.to.assign(dg.head[dg.nn], 0);
      dg.tl.assign(dg.head[dg.nn], 0);
      // (fill pass uses a running cursor per node, so offsets stay intact)
    }
  }
  return dg;
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan). Returns component ids.

int tarjan_scc(const Digraph& dg, std::vector<int>& comp) {
  int nn = dg.nn;
  comp.assign(nn, -1);
  std::vector<int> index(nn, -1), low(nn, 0), onstk(nn, 0);
  std::vector<int> stk;
  stk.reserve(1024);
  struct Frame {
    int v;
    int edge;
  };
  std::vector<Frame> call;
  int next_index = 0, ncomp = 0;

  for (int root = 0; root < nn; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, dg.head[root]});
    index[root] = low[root] = next_index++;
    stk.push_back(root);
    onstk[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      int v = f.v;
      if (f.edge < dg.head[v + 1]) {
        int w = dg.to[f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stk.push_back(w);
          onstk[w] = 1;
          call.push_back({w, dg.head[w]});
        } else if (onstk[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          int w;
          do {
            w = stk.back();
            stk.pop_back();
            onstk[w] = 0;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        call.pop_back();
        if (!call.empty()) {
          int parent = call.back().v;
          low[parent] = std::min(low[parent], low[v]);
        }
      }
    }
  }
  return ncomp;
}

struct CycleScan {
  bool found = false;           // some closed causal chain exists
  bool timelike = false;        // some closed chain has a timelike arc
  std::vector<int> witness;     // nodes of one offending component
};

CycleScan scan_cycles(const Digraph& dg) {
  CycleScan out;
  std::vector<int> comp;
  int ncomp = tarjan_scc(dg, comp);
  std::vector<int> size(ncomp, 0);
  for (int id = 0; id < dg.nn; ++id)
    if (comp[id] >= 0) ++size[comp[id]];

  int pick = -1;  // prefer a component with an internal timelike arc
  std::vector<uint8_t> comp_tl(ncomp, 0);
  for (int id = 0; id < dg.nn; ++id) {
    if (comp[id] < 0 || size[comp[id]] < 2) continue;
    out.found = true;
    if (pick < 0) pick = comp[id];
    for (int e = dg.head[id]; e < dg.head[id + 1]; ++e) {
      if (comp[dg.to[e]] == comp[id] && dg.tl[e]) {
        comp_tl[comp[id]] = 1;
        out.timelike = true;
      }
    }
  }
  if (out.timelike) {
    for (int c = 0; c < ncomp; ++c)
      if (comp_tl[c] && size[c] >= 2) {
        pick = c;
        break;
      }
  }
  if (pick >= 0) {
    for (int id = 0; id < dg.nn && int(out.witness.size()) < 50; ++id)
      if (comp[id] == pick) out.witness.push_back(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sample lattices over the chart window.

std::vector<Point> lattice_points(const SpacetimeModel& m, double spacing) {
  std::vector<Point> pts;
  bool gx = m.has_gluing(EdgeGluing::Axis::X);
  bool gt = m.has_gluing(EdgeGluing::Axis::T);
  const Window& w = m.window;
  for (double t = w.t0; t <= w.t1 + 1e-9; t += spacing) {
    if (gt && t >= w.t1 - 1e-9) break;
    for (double x = w.x0; x <= w.x1 + 1e-9; x += spacing) {
      if (gx && x >= w.x1 - 1e-9) break;
      pts.push_back({x, t});
    }
  }
  return pts;
}

std::vector<int> lattice_nodes(const Grid& g, double spacing) {
  std::vector<int> ids;
  for (Point p : lattice_points(*g.model, spacing)) {
    int i, j;
    if (!g.nearest_node(p, i, j)) continue;
    int id = g.idx(i, j);
    if (g.valid[id]) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------
// Strong causality: a causal chain that leaves a sample ball's excursion box
// (or wraps a glued axis) and then re-enters the ball.

// Wrap-aware Chebyshev cell distance between two nodes.
int node_cheb(const Grid& g, int a, int b) {
  int di = std::abs(g.col(a) - g.col(b));
  int dj = std::abs(g.row(a) - g.row(b));
  if (g.glue_x) di = std::min(di, g.nx - di);
  if (g.glue_t) dj = std::min(dj, g.nt - dj);
  return std::max(di, dj);
}

bool ball_returns(const Grid& g, int center, int ball_cells, int box_cells) {
  const SpacetimeModel& m = *g.model;
  int nn = g.num_nodes();
  std::vector<uint8_t> seen(size_t(nn) * 2, 0);
  std::vector<int> queue;
  queue.reserve(1024);
  auto push = [&](int id, int exited) {
    size_t key = size_t(id) * 2 + exited;
    if (seen[key]) return;
    seen[key] = 1;
    queue.push_back(int(key));
  };

  for (int id = 0; id < nn; ++id)
    if (g.valid[id] && node_cheb(g, id, center) <= ball_cells) push(id, 0);

  bool has_winding = !g.row_winding.empty();
  size_t qi = 0;
  while (qi < queue.size()) {
    int key = queue[qi++];
    int id = key / 2;
    int exited = key & 1;

    auto step = [&](int to, bool wrapped) -> bool {
      bool out = exited || wrapped || node_cheb(g, to, center) > box_cells;
      if (out && node_cheb(g, to, center) <= ball_cells) return true;
      push(to, out ? 1 : 0);
      return false;
    };

    uint64_t cm = g.cmask[id];
    while (cm) {
      int k = __builtin_ctzll(cm);
      cm &= cm - 1;
      Arc a = g.arcs[k];
      int to, wt = 0;
      if (!g.target(id, a, to, &wt)) continue;
      int ci = g.col(id) + a.dx;
      bool wrapped = wt != 0 || (g.glue_x && (ci < 0 || ci >= g.nx));
      if (step(to, wrapped)) return true;
    }
    if (has_winding) {
      for (Arc a : g.row_winding[g.row(id)]) {
        int to, wt = 0;
        if (!g.target(id, a, to, &wt)) continue;
        if (!g.valid[to]) continue;
        if (arc_blocked(m, g.point_of(id), g.arc_vec(a))) continue;
        int ci = g.col(id) + a.dx;
        bool wrapped = wt != 0 || (g.glue_x && (ci < 0 || ci >= g.nx));
        if (step(to, wrapped)) return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Distinguishing: two sampled points whose chronological far fields agree on
// both sides. The window truncates every future near the top wall, so the
// diagnostic demands agreement of both the future and the past far field;
// rows near either seed are ignored (a few cells of winding blindness).

struct FarField {
  int node = -1;
  int row = 0;
  std::vector<uint64_t> fut_rowsig, past_rowsig;  // one hash per row
};

uint64_t hash_bytes(const uint8_t* p, int n, uint64_t h) {
  for (int i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void row_signatures(const Grid& g, const std::vector<uint8_t>& layer,
                    std::vector<uint64_t>& sig) {
  sig.resize(g.nt);
  for (int j = 0; j < g.nt; ++j)
    sig[j] = hash_bytes(&layer[size_t(j) * g.nx], g.nx, 0xcbf29ce484222325ULL);
}

bool row_in_collar(const Grid& g, int j, int seed_row, int collar) {
  int dj = std::abs(j - seed_row);
  if (g.glue_t) dj = std::min(dj, g.nt - dj);
  return dj <= collar;
}

// Far fields equal outside the union collar of the two seeds?
bool far_fields_equal(const Grid& g, const FarField& a, const FarField& b,
                      int collar) {
  for (int j = 0; j < g.nt; ++j) {
    if (row_in_collar(g, j, a.row, collar) ||
        row_in_collar(g, j, b.row, collar))
      continue;
    if (a.fut_rowsig[j] != b.fut_rowsig[j]) return false;
    if (a.past_rowsig[j] != b.past_rowsig[j]) return false;
  }
  return true;
}

// Exact recheck of a signature match: compare the flood layers bytewise.
bool far_fields_equal_exact(const Grid& g, int na, int nb, int collar) {
  FloodResult fa_f = flood_nodes(g, {na}, true, false);
  FloodResult fb_f = flood_nodes(g, {nb}, true, false);
  FloodResult fa_p = flood_nodes(g, {na}, false, false);
  FloodResult fb_p = flood_nodes(g, {nb}, false, false);
  int ra = g.row(na), rb = g.row(nb);
  for (int j = 0; j < g.nt; ++j) {
    if (row_in_collar(g, j, ra, collar) || row_in_collar(g, j, rb, collar))
      continue;
    size_t off = size_t(j) * g.nx;
    for (int i = 0; i < g.nx; ++i) {
      if (fa_f.chron[off + i] != fb_f.chron[off + i]) return false;
      if (fa_p.chron[off + i] != fb_p.chron[off + i]) return false;
    }
  }
  return true;
}

}  // namespace

LadderReport ladder_report(const Grid& g, const LadderOptions& opt) {
  const SpacetimeModel& m = *g.model;
  LadderReport rep;

  // Closed chains at true cones.
  {
    Digraph dg = build_digraph(g, 0.0);
    CycleScan scan = scan_cycles(dg);
    rep.flags.causal = !scan.found;
    rep.flags.chronological = !scan.timelike;
    rep.closed_chain_timelike = scan.timelike;
    for (int id : scan.witness) rep.closed_chain.push_back(g.point_of(id));
  }

  // Stability probe: cycles under widened cones, smallest widening first.
  rep.flags.stably_causal = true;
  for (double delta : opt.widen_deltas) {
    Digraph dg = build_digraph(g, delta);
    CycleScan scan = scan_cycles(dg);
    if (scan.found) {
      rep.flags.stably_causal = false;
      rep.widened_delta = delta;
      for (int id : scan.witness) rep.widened_cycle.push_back(g.point_of(id));
      break;
    }
  }

  // Strong causality: sampled excursion-return test.
  {
    std::vector<int> centers = lattice_nodes(g, opt.sample_spacing);
    std::atomic<int> hit{-1};
    parallel_chunks(0, int(centers.size()), [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        if (hit.load(std::memory_order_relaxed) >= 0) return;
        if (ball_returns(g, centers[i], opt.ball_cells, opt.box_cells)) {
          int want = -1;
          hit.compare_exchange_strong(want, centers[i]);
          return;
        }
      }
    });
    if (hit.load() >= 0) {
      rep.flags.strongly_causal = false;
      rep.strong_violation = g.point_of(hit.load());
    }
  }

  // Distinguishing: far-field signatures of sampled seeds, both sides.
  {
    int collar = 3;
    std::vector<int> seeds = lattice_nodes(g, opt.sample_spacing);
    std::vector<FarField> fields(seeds.size());
    parallel_chunks(0, int(seeds.size()), [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        FarField& f = fields[i];
        f.node = seeds[i];
        f.row = g.row(seeds[i]);
        FloodResult fut = flood_nodes(g, {seeds[i]}, true, false);
        FloodResult past = flood_nodes(g, {seeds[i]}, false, false);
        row_signatures(g, fut.chron, f.fut_rowsig);
        row_signatures(g, past.chron, f.past_rowsig);
      }
    });
    bool found = false;
    for (size_t a = 0; a < fields.size() && !found; ++a) {
      for (size_t b = a + 1; b < fields.size() && !found; ++b) {
        if (!far_fields_equal(g, fields[a], fields[b], collar)) continue;
        if (!far_fields_equal_exact(g, fields[a].node, fields[b].node,
                                    collar))
          continue;
        rep.flags.distinguishing = false;
        rep.indistinct = {g.point_of(fields[a].node),
                          g.point_of(fields[b].node)};
        found = true;
      }
    }
  }

  // Outer continuity of the chronological sets at sampled points.
  {
    std::vector<Point> pts = lattice_points(m, opt.outer_spacing);
    pts.insert(pts.end(), opt.outer_probes.begin(), opt.outer_probes.end());
    // Drop points that are not in the spacetime.
    std::vector<Point> keep;
    for (Point p : pts) {
      if (!m.has_gluing(EdgeGluing::Axis::X) &&
          (p.x < m.window.x0 || p.x > m.window.x1))
        continue;
      if (!m.has_gluing(EdgeGluing::Axis::T) &&
          (p.t < m.window.t0 || p.t > m.window.t1))
        continue;
      if (excision_blocks(m, p, p)) continue;
      keep.push_back(p);
    }
    std::atomic<int> hit{-1};
    std::vector<Point> wit(keep.size());
    parallel_chunks(0, int(keep.size()), [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        if (hit.load(std::memory_order_relaxed) >= 0) return;
        if (miss_nonempty(g, keep[i], true, opt.miss_levels, &wit[i]) ||
            miss_nonempty(g, keep[i], false, opt.miss_levels, &wit[i])) {
          int want = -1;
          hit.compare_exchange_strong(want, i);
          return;
        }
      }
    });
    if (hit.load() >= 0) {
      rep.flags.outer_continuous = false;
      rep.outer_violation = keep[hit.load()];
    }
  }

  // The rungs are nested; a violation lower on the ladder carries upward.
  rep.flags.distinguishing = rep.flags.distinguishing && rep.flags.causal;
  rep.flags.strongly_causal =
      rep.flags.strongly_causal && rep.flags.distinguishing;
  rep.flags.stably_causal =
      rep.flags.stably_causal && rep.flags.strongly_causal;
  return rep;
}

}  // namespace lorlab
