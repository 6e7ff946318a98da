#include "lorlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dp_common.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/threads.hpp"

namespace lorlab {

using dpdetail::ArcLengths;
using dpdetail::arc_blocked;
using dpdetail::causal_class;
using dpdetail::kNegInf;

DistanceResult grid_distance(const Grid& g, Point p, Point q,
                             const DistanceOptions& opt) {
  const SpacetimeModel& m = *g.model;
  int nn = g.num_nodes();
  int nt = g.nt, nx = g.nx;
  size_t na = g.arcs.size();
  int layers = g.glue_t ? std::max(1, opt.winding_layers) : 1;
  double period = m.gluing ? m.gluing->period() : 0.0;

  std::vector<double> best(size_t(layers) * nn, kNegInf);
  std::vector<int> parent;
  if (opt.want_witness) parent.assign(best.size(), -1);

  ArcLengths len;
  len.init(g);

  DistanceResult res;
  res.layer_max.assign(layers, kNegInf);

  int seed_rels_t = g.glue_t ? 2 : 1;
  int rx_lo = g.glue_x ? -1 : 0, rx_hi = g.glue_x ? 1 : 0;

  // Point seeds: direct admissible segments from p to every node, possibly
  // written with one wrap along a glued axis.
  int seed_layers = std::min(seed_rels_t, layers);
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id]) continue;
    Point b0 = g.point_of(id);
    for (int rt = 0; rt < seed_layers; ++rt) {
      for (int rx = rx_lo; rx <= rx_hi; ++rx) {
        Point b{b0.x + rx * period, b0.t + rt * period};
        if (!causal_class(segment_admissible(m, p, b))) continue;
        double L = std::max(0.0, segment_proper_length(m, p, b));
        size_t st = size_t(rt) * nn + id;
        if (L > best[st]) {
          best[st] = L;
          if (opt.want_witness) parent[st] = -1;
        }
      }
    }
  }

  // Stencil bookkeeping for the level sweep.
  int kNullL = -1, kNullR = -1;
  for (size_t k = 0; k < na; ++k) {
    if (g.arcs[k].dt == 0) (g.arcs[k].dx < 0 ? kNullL : kNullR) = int(k);
  }
  bool has_winding = !g.row_winding.empty();

  auto wrap_col = [&](int i) -> int {
    if (g.glue_x) {
      i %= nx;
      if (i < 0) i += nx;
      return i;
    }
    return (i < 0 || i >= nx) ? -1 : i;
  };

  // Level sweep in increasing unrolled time.
  for (int L = 0; L < layers * nt; ++L) {
    int w = L / nt, j = L % nt;

    for (int i = 0; i < nx; ++i) {
      int id = g.idx(i, j);
      if (!g.valid[id]) continue;
      size_t st = size_t(w) * nn + id;
      double cur = best[st];
      int par = -2;  // -2: unchanged

      for (size_t k = 0; k < na; ++k) {
        Arc a = g.arcs[k];
        if (a.dt == 0) continue;  // same-level null ring, handled below
        int jj = j - a.dt, ww = w;
        if (jj < 0) {
          if (!g.glue_t) continue;
          jj += nt;
          --ww;
          if (ww < 0) continue;
        }
        int ii = wrap_col(i - a.dx);
        if (ii < 0) continue;
        int u = g.idx(ii, jj);
        if (!((g.cmask[u] >> k) & 1)) continue;
        double bu = best[size_t(ww) * nn + u];
        if (bu == kNegInf) continue;
        double cand = bu + len.stencil(u, int(k));
        if (cand > cur) {
          cur = cand;
          par = int(size_t(ww) * nn + u);
        }
      }

      if (has_winding) {
        for (int dt = 1; dt <= 2; ++dt) {
          int jj = j - dt;
          if (jj < 0) continue;  // waist models are not glued in t
          const auto& arcs = g.row_winding[jj];
          for (size_t widx = 0; widx < arcs.size(); ++widx) {
            Arc a = arcs[widx];
            if (a.dt != dt) continue;
            int ii = wrap_col(i - a.dx);
            if (ii < 0) continue;
            int u = g.idx(ii, jj);
            if (!g.valid[u]) continue;
            double bu = best[size_t(w) * nn + u];
            if (bu == kNegInf) continue;
            if (arc_blocked(m, g.point_of(u), g.arc_vec(a))) continue;
            double cand = bu + len.winding(u, int(widx));
            if (cand > cur) {
              cur = cand;
              par = int(size_t(w) * nn + u);
            }
          }
        }
      }

      if (par != -2) {
        best[st] = cur;
        if (opt.want_witness) parent[st] = par;
      }
    }

    // Same-level null arcs (degenerate rows): relax around the ring until
    // stable. Leftward scans cascade; a couple of passes close the wrap.
    if (kNullL >= 0 || kNullR >= 0) {
      for (int pass = 0; pass < 6; ++pass) {
        bool changed = false;
        auto relax = [&](int i, int k) {
          int u = g.idx(i, j);
          if (!g.valid[u]) return;
          if (!((g.cmask[u] >> k) & 1)) return;
          int v;
          if (!g.target(u, g.arcs[k], v)) return;
          size_t su = size_t(w) * nn + u, sv = size_t(w) * nn + v;
          if (best[su] == kNegInf) return;
          double cand = best[su] + len.stencil(u, k);
          if (cand > best[sv]) {
            best[sv] = cand;
            if (opt.want_witness) parent[sv] = int(su);
            changed = true;
          }
        };
        if (kNullL >= 0)
          for (int i = nx - 1; i >= 0; --i) relax(i, kNullL);
        if (kNullR >= 0)
          for (int i = 0; i < nx; ++i) relax(i, kNullR);
        if (!changed) break;
      }
    }

    if (j == nt - 1 || L == layers * nt - 1) {
      double mx = kNegInf;
      for (int id = 0; id < nn; ++id)
        mx = std::max(mx, best[size_t(w) * nn + id]);
      res.layer_max[w] = mx;
    }
  }

  // Sinks: direct admissible segments from nodes to q (possibly wrapped),
  // plus the direct p -> q segment.
  double bestval = kNegInf;
  int best_state = -1, best_rel = 0;
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id]) continue;
    Point a = g.point_of(id);
    for (int rt = 0; rt < seed_rels_t; ++rt) {
      for (int rx = rx_lo; rx <= rx_hi; ++rx) {
        Point qr{q.x + rx * period, q.t + rt * period};
        if (!causal_class(segment_admissible(m, a, qr))) continue;
        double L = std::max(0.0, segment_proper_length(m, a, qr));
        for (int w = 0; w < layers; ++w) {
          double bu = best[size_t(w) * nn + id];
          if (bu == kNegInf) continue;
          if (bu + L > bestval) {
            bestval = bu + L;
            best_state = int(size_t(w) * nn + id);
            best_rel = rt;
          }
        }
      }
    }
  }
  for (int rt = 0; rt < seed_rels_t; ++rt) {
    for (int rx = rx_lo; rx <= rx_hi; ++rx) {
      Point qr{q.x + rx * period, q.t + rt * period};
      if (!causal_class(segment_admissible(m, p, qr))) continue;
      double L = std::max(0.0, segment_proper_length(m, p, qr));
      if (L > bestval) {
        bestval = L;
        best_state = -1;
        best_rel = rt;
      }
    }
  }

  if (bestval == kNegInf) return res;  // unreachable

  res.reachable = true;
  res.value = std::max(0.0, bestval);
  res.winding_used = best_rel + (best_state >= 0 ? best_state / nn : 0);
  if (g.glue_t && layers >= 2) {
    double a = res.layer_max[layers - 2], b = res.layer_max[layers - 1];
    res.winding_saturated = b != kNegInf && (a == kNegInf || b > a + 1e-9);
  }
  if (opt.want_witness) {
    std::vector<Point> rev{q};
    for (int st = best_state; st >= 0; st = parent[st])
      rev.push_back(g.point_of(st % nn));
    rev.push_back(p);
    res.witness.assign(rev.rbegin(), rev.rend());
  }
  return res;
}

DistanceEstimate estimate_distance(const SpacetimeModel& m, Point p, Point q,
                                   const std::vector<double>& grids,
                                   const DistanceOptions& opt) {
  DistanceEstimate est;
  std::vector<uint8_t> sat;
  for (double h : grids) {
    GridSpec spec;
    spec.h = h;
    Grid g = build_grid(m, spec);
    DistanceResult r = grid_distance(g, p, q, opt);
    est.per_grid.push_back(r.reachable ? r.value : -1.0);
    sat.push_back(r.winding_saturated ? 1 : 0);
    if (est.per_grid.size() == grids.size()) est.fine = std::move(r);
  }
  if (!est.fine.reachable) {
    est.cls = DistanceClass::Unreachable;
    est.value = 0.0;
    return est;
  }
  est.value = est.per_grid.back();
  const auto& v = est.per_grid;
  int n = int(v.size());
  bool grow_twice = n >= 3 && v[n - 3] > 1e-9 &&
                    v[n - 2] >= kGrowthFactor * v[n - 3] &&
                    v[n - 1] >= kGrowthFactor * v[n - 2];
  bool sat_twice = n >= 2 && sat[n - 1] && sat[n - 2];
  if (grow_twice || sat_twice) {
    est.cls = DistanceClass::Infinite;
  } else if (n >= 2 && v[n - 2] >= 0.0 &&
             std::fabs(v[n - 1] - v[n - 2]) <=
                 std::max(kConvergeRel * std::fabs(v[n - 1]), 1e-9)) {
    est.cls = DistanceClass::Finite;
  } else {
    est.cls = DistanceClass::Unresolved;
  }
  return est;
}

ProbeVerdict continuity_probe(const Grid& g, Point p, Point q,
                              const ProbeOptions& opt) {
  ProbeVerdict out;
  double h = std::max(g.hx, g.ht);
  double tol = opt.tol > 0.0 ? opt.tol : grid_tolerance(h);

  std::vector<double> eps = opt.offsets;
  if (eps.empty()) eps = {8.0 * h, 4.0 * h, 2.0 * h, h};
  std::sort(eps.begin(), eps.end(), std::greater<double>());

  DistanceResult base = grid_distance(g, p, q, opt.dist);
  out.d = base.reachable ? base.value : 0.0;

  FloodResult fut = flood_point(g, p, true);
  FloodResult pst = flood_point(g, q, false);
  const SpacetimeModel& m = *g.model;
  auto clipped_lengths = [&](const std::vector<Point>& w, double& sf,
                             double& sp) {
    sf = sp = 0.0;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      Point a = w[i], b = w[i + 1];
      Point mid{0.5 * (a.x + b.x), 0.5 * (a.t + b.t)};
      double len = std::max(0.0, segment_proper_length(m, a, b));
      if (!flood_contains(g, fut.chron, mid)) sf += len;
      if (!flood_contains(g, pst.chron, mid)) sp += len;
    }
  };

  double vlast = -1.0, vprev = -1.0;
  for (double e : eps) {
    Point pe{p.x, p.t - e}, qe{q.x, q.t + e};
    DistanceResult r = grid_distance(g, pe, qe, opt.dist);
    out.offsets.push_back(e);
    out.approach.push_back(r.reachable ? r.value : -1.0);
    if (r.reachable) {
      vprev = vlast;
      vlast = r.value;
      if (!r.witness.empty()) {
        clipped_lengths(r.witness, out.sub_future_len, out.sub_past_len);
        out.sub_future.push_back(out.sub_future_len);
        out.sub_past.push_back(out.sub_past_len);
        out.witnesses.push_back(r.witness);
      }
      out.witness = std::move(r.witness);
    }
  }

  if (vlast >= 0.0) {
    if (vprev >= 0.0) {
      const double r2 = std::sqrt(2.0);
      out.limit_estimate = std::max(0.0, (r2 * vlast - vprev) / (r2 - 1.0));
    } else {
      out.limit_estimate = vlast;
    }
  }
  out.gap_raw = out.limit_estimate - out.d;
  out.gap = std::max(0.0, out.gap_raw);
  out.discontinuous = out.gap > opt.flag_factor * tol;
  return out;
}

}  // namespace lorlab
