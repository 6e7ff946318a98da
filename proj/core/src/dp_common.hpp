#pragma once

// Internal helpers shared by the longest-path solvers (distance, surface
// fields, region-constrained paths). Not installed.

#include <cstdint>
#include <limits>
#include <vector>

#include "lorlab/geometry.hpp"
#include "lorlab/grid.hpp"
#include "lorlab/threads.hpp"

namespace lorlab {
namespace dpdetail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool arc_blocked(const SpacetimeModel& m, Point a, Vec2 v) {
  if (m.excised_points.empty() && m.excised_segments.empty() &&
      m.excised_regions.empty())
    return false;
  return excision_blocks(m, a, a + v);
}

inline bool causal_class(CausalClass c) {
  return c == CausalClass::TimelikeFuture || c == CausalClass::Null ||
         c == CausalClass::Causal;
}

// ---------------------------------------------------------------------------
// Arc lengths, shared as widely as the metric allows: one value per arc when
// the metric is homogeneous, per (row, arc) when it depends on t only, per
// (node, arc) otherwise. Winding-arc lengths follow the same split.

struct ArcLengths {
  enum class Mode { PerArc, PerRow, Dense };
  Mode mode = Mode::PerArc;
  const Grid* g = nullptr;

  std::vector<double> per_arc;
  std::vector<double> per_row;                   // [row * na + k]
  std::vector<std::vector<double>> winding_row;  // aligned with row_winding
  std::vector<double> dense;                     // [node * na + k]

  void init(const Grid& gr) {
    g = &gr;
    const SpacetimeModel& m = *gr.model;
    size_t na = gr.arcs.size();
    bool const_omega = m.conformal.kind == ConformalFactor::Kind::Constant;

    if (m.base == BaseMetric::Minkowski && const_omega) {
      mode = Mode::PerArc;
      per_arc.resize(na);
      for (size_t k = 0; k < na; ++k) {
        Vec2 v = gr.arc_vec(gr.arcs[k]);
        double q = v.x * v.x - v.t * v.t;
        per_arc[k] = q >= 0.0 ? 0.0 : m.conformal.c * std::sqrt(-q);
      }
      return;
    }

    if (m.base == BaseMetric::Waist && const_omega) {
      mode = Mode::PerRow;
      per_row.assign(size_t(gr.nt) * na, 0.0);
      winding_row.resize(gr.row_winding.size());
      parallel_chunks(0, gr.nt, [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
          Point a = gr.point(0, j);
          for (size_t k = 0; k < na; ++k) {
            Point b = a + gr.arc_vec(gr.arcs[k]);
            per_row[size_t(j) * na + k] =
                std::max(0.0, segment_proper_length(m, a, b));
          }
          if (j < int(gr.row_winding.size())) {
            auto& ws = winding_row[j];
            ws.resize(gr.row_winding[j].size());
            for (size_t k = 0; k < ws.size(); ++k) {
              Point b = a + gr.arc_vec(gr.row_winding[j][k]);
              ws[k] = std::max(0.0, segment_proper_length(m, a, b));
            }
          }
        }
      });
      return;
    }

    mode = Mode::Dense;
    int nn = gr.num_nodes();
    dense.assign(size_t(nn) * na, 0.0);
    parallel_chunks(0, nn, [&](int lo, int hi) {
      for (int id = lo; id < hi; ++id) {
        uint64_t cm = gr.cmask[id];
        Point a = gr.point_of(id);
        while (cm) {
          int k = __builtin_ctzll(cm);
          cm &= cm - 1;
          Point b = a + gr.arc_vec(gr.arcs[k]);
          dense[size_t(id) * na + k] =
              std::max(0.0, segment_proper_length(m, a, b));
        }
      }
    });
  }

  double stencil(int id, int k) const {
    switch (mode) {
      case Mode::PerArc:
        return per_arc[k];
      case Mode::PerRow:
        return per_row[size_t(g->row(id)) * g->arcs.size() + k];
      default:
        return dense[size_t(id) * g->arcs.size() + k];
    }
  }

  double winding(int id, int widx) const {
    int j = g->row(id);
    if (mode == Mode::PerRow) return winding_row[j][widx];
    Point a = g->point_of(id);
    Point b = a + g->arc_vec(g->row_winding[j][widx]);
    return std::max(0.0, segment_proper_length(*g->model, a, b));
  }
};

// ---------------------------------------------------------------------------
// Single-layer longest-chain field sweeps over pre-seeded value arrays
// (kNegInf marks unseeded nodes; sweeps only ever raise values). Winding
// arcs around a glued x-axis are pulled in directly; seams of a glued
// t-axis are not crossed, so fields on such models describe one window.

inline int sweep_wrap_col(const Grid& g, int i) {
  if (g.glue_x) {
    i %= g.nx;
    if (i < 0) i += g.nx;
    return i;
  }
  return (i < 0 || i >= g.nx) ? -1 : i;
}

// best[v] = longest chain from any seed up to v.
inline void sweep_longest_future(const Grid& g, const ArcLengths& len,
                                 std::vector<double>& best) {
  const SpacetimeModel& m = *g.model;
  int nx = g.nx, nt = g.nt;
  size_t na = g.arcs.size();

  int kNullL = -1, kNullR = -1;
  for (size_t k = 0; k < na; ++k)
    if (g.arcs[k].dt == 0) (g.arcs[k].dx < 0 ? kNullL : kNullR) = int(k);
  bool has_winding = !g.row_winding.empty();

  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nx; ++i) {
      int id = g.idx(i, j);
      if (!g.valid[id]) continue;
      double cur = best[id];
      for (size_t k = 0; k < na; ++k) {
        Arc a = g.arcs[k];
        if (a.dt == 0) continue;
        int jj = j - a.dt;
        if (jj < 0) continue;
        int ii = sweep_wrap_col(g, i - a.dx);
        if (ii < 0) continue;
        int u = g.idx(ii, jj);
        if (!((g.cmask[u] >> k) & 1)) continue;
        if (best[u] == kNegInf) continue;
        cur = std::max(cur, best[u] + len.stencil(u, int(k)));
      }
      if (has_winding) {
        for (int dt = 1; dt <= 2; ++dt) {
          int jj = j - dt;
          if (jj < 0 || jj >= int(g.row_winding.size())) continue;
          const auto& arcs = g.row_winding[jj];
          for (size_t widx = 0; widx < arcs.size(); ++widx) {
            Arc a = arcs[widx];
            if (a.dt != dt) continue;
            int ii = sweep_wrap_col(g, i - a.dx);
            if (ii < 0) continue;
            int u = g.idx(ii, jj);
            if (!g.valid[u] || best[u] == kNegInf) continue;
            if (arc_blocked(m, g.point_of(u), g.arc_vec(a))) continue;
            cur = std::max(cur, best[u] + len.winding(u, int(widx)));
          }
        }
      }
      best[id] = cur;
    }

    if (kNullL >= 0 || kNullR >= 0) {
      for (int pass = 0; pass < 6; ++pass) {
        bool changed = false;
        auto relax = [&](int i, int k) {
          int u = g.idx(i, j);
          if (!g.valid[u] || best[u] == kNegInf) return;
          if (!((g.cmask[u] >> k) & 1)) return;
          int v;
          if (!g.target(u, g.arcs[k], v)) return;
          double cand = best[u] + len.stencil(u, k);
          if (cand > best[v]) {
            best[v] = cand;
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
  }
}

// best[u] = longest chain from u down to any seed.
inline void sweep_longest_past(const Grid& g, const ArcLengths& len,
                               std::vector<double>& best) {
  const SpacetimeModel& m = *g.model;
  int nx = g.nx, nt = g.nt;
  size_t na = g.arcs.size();

  int kNullL = -1, kNullR = -1;
  for (size_t k = 0; k < na; ++k)
    if (g.arcs[k].dt == 0) (g.arcs[k].dx < 0 ? kNullL : kNullR) = int(k);
  bool has_winding = !g.row_winding.empty();

  for (int j = nt - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      int u = g.idx(i, j);
      if (!g.valid[u]) continue;
      double cur = best[u];
      for (size_t k = 0; k < na; ++k) {
        Arc a = g.arcs[k];
        if (a.dt == 0) continue;
        if (!((g.cmask[u] >> k) & 1)) continue;
        int jj = j + a.dt;
        if (jj >= nt) continue;
        int ii = sweep_wrap_col(g, i + a.dx);
        if (ii < 0) continue;
        int v = g.idx(ii, jj);
        if (!g.valid[v] || best[v] == kNegInf) continue;
        cur = std::max(cur, len.stencil(u, int(k)) + best[v]);
      }
      if (has_winding && j < int(g.row_winding.size())) {
        const auto& arcs = g.row_winding[j];
        for (size_t widx = 0; widx < arcs.size(); ++widx) {
          Arc a = arcs[widx];
          int jj = j + a.dt;
          if (jj >= nt) continue;
          int ii = sweep_wrap_col(g, i + a.dx);
          if (ii < 0) continue;
          int v = g.idx(ii, jj);
          if (!g.valid[v] || best[v] == kNegInf) continue;
          if (arc_blocked(m, g.point_of(u), g.arc_vec(a))) continue;
          cur = std::max(cur, len.winding(u, int(widx)) + best[v]);
        }
      }
      best[u] = cur;
    }

    if (kNullL >= 0 || kNullR >= 0) {
      for (int pass = 0; pass < 6; ++pass) {
        bool changed = false;
        auto relax = [&](int i, int k) {
          int u = g.idx(i, j);
          if (!g.valid[u]) return;
          if (!((g.cmask[u] >> k) & 1)) return;
          int v;
          if (!g.target(u, g.arcs[k], v)) return;
          if (best[v] == kNegInf) return;
          double cand = len.stencil(u, k) + best[v];
          if (cand > best[u]) {
            best[u] = cand;
            changed = true;
          }
        };
        // Dependence runs target-to-source here, so the cascade scan
        // directions flip relative to the future sweep.
        if (kNullL >= 0)
          for (int i = 0; i < nx; ++i) relax(i, kNullL);
        if (kNullR >= 0)
          for (int i = nx - 1; i >= 0; --i) relax(i, kNullR);
        if (!changed) break;
      }
    }
  }
}

}  // namespace dpdetail
}  // namespace lorlab
