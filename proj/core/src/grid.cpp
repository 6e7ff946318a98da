#include "lorlab/grid.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace lorlab {
namespace {

double dist_point_segment(Point p, Point a, Point b) {
  Vec2 ab = b - a;
  double len2 = ab.x * ab.x + ab.t * ab.t;
  if (len2 <= 0.0) return chart_dist(p, a);
  double u = ((p.x - a.x) * ab.x + (p.t - a.t) * ab.t) / len2;
  u = std::clamp(u, 0.0, 1.0);
  return chart_dist(p, a + u * ab);
}

}  // namespace

std::vector<Arc> primitive_stencil(int radius) {
  std::vector<Arc> arcs;
  for (int dt = 0; dt <= radius; ++dt) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx == 0 && dt == 0) continue;
      if (std::gcd(std::abs(dx), dt) != 1) continue;
      arcs.push_back({dx, dt});
    }
  }
  return arcs;
}

bool Grid::target(int id, Arc a, int& out, int* wrapped_t) const {
  int i = col(id) + a.dx;
  int j = row(id) + a.dt;
  if (glue_x) {
    i %= nx;
    if (i < 0) i += nx;
  } else if (i < 0 || i >= nx) {
    return false;
  }
  int w = 0;
  if (glue_t) {
    while (j < 0) {
      j += nt;
      --w;
    }
    while (j >= nt) {
      j -= nt;
      ++w;
    }
  } else if (j < 0 || j >= nt) {
    return false;
  }
  out = idx(i, j);
  if (wrapped_t) *wrapped_t = w;
  return true;
}

bool Grid::nearest_node(Point p, int& i, int& j) const {
  double fi = (p.x - model->window.x0) / hx;
  double fj = (p.t - model->window.t0) / ht;
  long li = std::lround(fi), lj = std::lround(fj);
  if (glue_x) {
    li %= nx;
    if (li < 0) li += nx;
  } else if (li < 0 || li >= nx) {
    return false;
  }
  if (glue_t) {
    lj %= nt;
    if (lj < 0) lj += nt;
  } else if (lj < 0 || lj >= nt) {
    return false;
  }
  i = int(li);
  j = int(lj);
  return true;
}

std::vector<int> Grid::nodes_near(Point p, int rad) const {
  std::vector<int> out;
  double fi = (p.x - model->window.x0) / hx;
  double fj = (p.t - model->window.t0) / ht;
  int ci = int(std::lround(fi)), cj = int(std::lround(fj));
  for (int j = cj - rad; j <= cj + rad; ++j) {
    int jj = j;
    if (glue_t) {
      jj %= nt;
      if (jj < 0) jj += nt;
    } else if (jj < 0 || jj >= nt) {
      continue;
    }
    for (int i = ci - rad; i <= ci + rad; ++i) {
      int ii = i;
      if (glue_x) {
        ii %= nx;
        if (ii < 0) ii += nx;
      } else if (ii < 0 || ii >= nx) {
        continue;
      }
      out.push_back(idx(ii, jj));
    }
  }
  return out;
}

CausalClass grid_arc_class(const Grid& g, int id, Arc a, double widen_delta) {
  Point pa = g.point_of(id);
  Point pb = pa + g.arc_vec(a);
  return segment_admissible(*g.model, pa, pb, widen_delta);
}

void widened_masks(const Grid& g, double delta, std::vector<uint64_t>& tmask,
                   std::vector<uint64_t>& cmask) {
  const SpacetimeModel& m = *g.model;
  int nn = g.num_nodes();
  size_t na = g.arcs.size();
  tmask.assign(nn, 0);
  cmask.assign(nn, 0);

  // Shared causal classification, ignoring excisions: per row for the waist
  // (the metric depends only on t), one row's worth for flat models.
  SpacetimeModel bare = m;
  bare.excised_points.clear();
  bare.excised_segments.clear();
  bare.excised_regions.clear();
  bare.window = Window{-1e30, 1e30, -1e30, 1e30};
  int class_rows = (m.base == BaseMetric::Waist) ? g.nt : 1;
  std::vector<uint8_t> row_class(size_t(class_rows) * na);
  for (int j = 0; j < class_rows; ++j) {
    Point a = g.point(0, j);
    for (size_t k = 0; k < na; ++k) {
      // Classify in unwrapped coordinates; walls are handled per node.
      Point b = a + g.arc_vec(g.arcs[k]);
      row_class[size_t(j) * na + k] =
          uint8_t(segment_admissible(bare, a, b, delta));
    }
  }

  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id]) continue;
    int j = g.row(id);
    const uint8_t* rc = &row_class[size_t(class_rows == 1 ? 0 : j) * na];
    uint64_t tm = 0, cm = 0;
    for (size_t k = 0; k < na; ++k) {
      int to;
      if (!g.target(id, g.arcs[k], to)) continue;
      if (!g.valid[to]) continue;
      CausalClass cls;
      if (g.near_exc[id]) {
        Point pa = g.point_of(id);
        cls = segment_admissible(m, pa, pa + g.arc_vec(g.arcs[k]), delta);
      } else {
        cls = CausalClass(rc[k]);
      }
      if (cls == CausalClass::TimelikeFuture) {
        tm |= uint64_t(1) << k;
        cm |= uint64_t(1) << k;
      } else if (cls == CausalClass::Null || cls == CausalClass::Causal) {
        cm |= uint64_t(1) << k;
      }
    }
    tmask[id] = tm;
    cmask[id] = cm;
  }
}

Grid build_grid(const SpacetimeModel& m, const GridSpec& spec) {
  Grid g;
  g.model = &m;
  g.spec = spec;
  g.glue_x = m.has_gluing(EdgeGluing::Axis::X);
  g.glue_t = m.has_gluing(EdgeGluing::Axis::T);

  auto axis_layout = [&](double lo, double hi, bool glued, int& n, double& hh) {
    double extent = hi - lo;
    if (glued) {
      n = std::max(1, int(std::lround(extent / spec.h)));
      hh = extent / n;  // n nodes, index wraps
    } else {
      int cells = std::max(1, int(std::lround(extent / spec.h)));
      n = cells + 1;
      hh = extent / cells;
    }
  };
  axis_layout(m.window.x0, m.window.x1, g.glue_x, g.nx, g.hx);
  axis_layout(m.window.t0, m.window.t1, g.glue_t, g.nt, g.ht);

  g.arcs = primitive_stencil(spec.stencil_radius);
  assert(g.arcs.size() <= 64);
  int nn = g.num_nodes();
  g.valid.assign(nn, 1);
  g.tmask.assign(nn, 0);
  g.cmask.assign(nn, 0);

  // Node invalidation: nearest node of each excised point, nodes on excised
  // segments, nodes inside excised regions.
  for (const auto& p : m.excised_points) {
    int i, j;
    if (g.nearest_node(p, i, j)) g.valid[g.idx(i, j)] = 0;
  }
  double node_eps = 1e-9 * std::max(g.hx, g.ht);
  if (!m.excised_segments.empty() || !m.excised_regions.empty()) {
    for (int id = 0; id < nn; ++id) {
      Point p = g.point_of(id);
      for (const auto& s : m.excised_segments)
        if (dist_point_segment(p, s.a, s.b) <= node_eps) g.valid[id] = 0;
      for (const auto& poly : m.excised_regions)
        if (poly.contains(p, node_eps)) g.valid[id] = 0;
    }
  }

  // Nodes whose outgoing stencil arcs might meet an excision; everything
  // else takes the shared per-row classification.
  std::vector<uint8_t> near_exc(nn, 0);
  {
    double reach = (spec.stencil_radius + 1) * std::max(g.hx, g.ht) + 1e-9;
    double shift[3] = {0.0, 0.0, 0.0};
    int nshift = 1;
    if (m.gluing) {
      shift[1] = -m.gluing->period();
      shift[2] = m.gluing->period();
      nshift = 3;
    }
    auto mark_box = [&](double x0, double x1, double t0, double t1) {
      for (int k = 0; k < nshift; ++k) {
        double bx0 = x0 - reach, bx1 = x1 + reach;
        double bt0 = t0 - reach, bt1 = t1 + reach;
        if (g.glue_x) {
          bx0 += shift[k];
          bx1 += shift[k];
        } else {
          bt0 += shift[k];
          bt1 += shift[k];
        }
        int i0 = int(std::floor((bx0 - m.window.x0) / g.hx));
        int i1 = int(std::ceil((bx1 - m.window.x0) / g.hx));
        int j0 = int(std::floor((bt0 - m.window.t0) / g.ht));
        int j1 = int(std::ceil((bt1 - m.window.t0) / g.ht));
        for (int j = j0; j <= j1; ++j) {
          int jj = j;
          if (g.glue_t) {
            jj = ((jj % g.nt) + g.nt) % g.nt;
          } else if (jj < 0 || jj >= g.nt) {
            continue;
          }
          for (int i = i0; i <= i1; ++i) {
            int ii = i;
            if (g.glue_x) {
              ii = ((ii % g.nx) + g.nx) % g.nx;
            } else if (ii < 0 || ii >= g.nx) {
              continue;
            }
            near_exc[g.idx(ii, jj)] = 1;
          }
        }
      }
    };
    for (const auto& p : m.excised_points) mark_box(p.x, p.x, p.t, p.t);
    for (const auto& s : m.excised_segments)
      mark_box(std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x),
               std::min(s.a.t, s.b.t), std::max(s.a.t, s.b.t));
    for (const auto& poly : m.excised_regions) {
      double x0 = 1e300, x1 = -1e300, t0 = 1e300, t1 = -1e300;
      for (auto v : poly.verts) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        t0 = std::min(t0, v.t);
        t1 = std::max(t1, v.t);
      }
      mark_box(x0, x1, t0, t1);
    }
  }

  g.near_exc = std::move(near_exc);
  widened_masks(g, 0.0, g.tmask, g.cmask);

  // Long leftward winding arcs for waist rows: (-k, dt) for dt in {1, 2},
  // k past the stencil radius up to one full period or the cone bound.
  if (m.base == BaseMetric::Waist && g.glue_x) {
    g.row_winding.assign(g.nt, {});
    for (int j = 0; j < g.nt; ++j) {
      double t = m.window.t0 + j * g.ht;
      for (int dt = 1; dt <= 2; ++dt) {
        double tmax = std::max(std::fabs(t), std::fabs(t + dt * g.ht));
        double s = m.waist.s_of_t(tmax);
        double slope_cap =
            (s <= 0.0) ? 1e9 : (1.0 + std::sqrt(1.0 - s * s)) / s;
        int kmax = int(std::floor(slope_cap * dt * g.ht / g.hx));
        kmax = std::min(kmax, g.nx);
        for (int k = spec.stencil_radius + 1; k <= kmax; ++k)
          g.row_winding[j].push_back({-k, dt});
      }
    }
  }

  return g;
}

}  // namespace lorlab
