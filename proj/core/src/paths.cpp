#include "lorlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dp_common.hpp"
#include "lorlab/reach.hpp"

namespace lorlab {

using dpdetail::ArcLengths;
using dpdetail::causal_class;
using dpdetail::kNegInf;

DistanceResult best_path_through(const Grid& g, Point p, Point q,
                                 const ConvexPoly& region,
                                 const DistanceOptions& opt) {
  const SpacetimeModel& m = *g.model;
  int nn = g.num_nodes();
  double period = m.gluing ? m.gluing->period() : 0.0;
  int rx_lo = g.glue_x ? -1 : 0, rx_hi = g.glue_x ? 1 : 0;
  const double eps = 1e-9;

  ArcLengths len;
  len.init(g);

  // Chain length from p up to each node and from each node up to q.
  std::vector<double> F(nn, kNegInf), P(nn, kNegInf);
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id]) continue;
    Point b0 = g.point_of(id);
    for (int rx = rx_lo; rx <= rx_hi; ++rx) {
      Point b{b0.x + rx * period, b0.t};
      if (causal_class(segment_admissible(m, p, b)))
        F[id] = std::max(F[id],
                         std::max(0.0, segment_proper_length(m, p, b)));
      if (causal_class(segment_admissible(m, b, q)))
        P[id] = std::max(P[id],
                         std::max(0.0, segment_proper_length(m, b, q)));
    }
  }
  dpdetail::sweep_longest_future(g, len, F);
  dpdetail::sweep_longest_past(g, len, P);

  DistanceResult res;
  double best = kNegInf;
  int best_w = -1;
  for (int id = 0; id < nn; ++id) {
    if (!g.valid[id] || F[id] == kNegInf || P[id] == kNegInf) continue;
    if (!region.contains(g.point_of(id), eps)) continue;
    double v = F[id] + P[id];
    if (v > best) {
      best = v;
      best_w = id;
    }
  }
  if (region.contains(p, eps) || region.contains(q, eps)) {
    for (int rx = rx_lo; rx <= rx_hi; ++rx) {
      Point qq{q.x + rx * period, q.t};
      if (!causal_class(segment_admissible(m, p, qq))) continue;
      double v = std::max(0.0, segment_proper_length(m, p, qq));
      if (v > best) {
        best = v;
        best_w = -1;
      }
    }
  }
  if (best == kNegInf) return res;

  res.reachable = true;
  res.value = best;
  if (opt.want_witness) {
    if (best_w >= 0) {
      Point w = g.point_of(best_w);
      DistanceOptions o2 = opt;
      o2.want_witness = true;
      DistanceResult a = grid_distance(g, p, w, o2);
      DistanceResult b = grid_distance(g, w, q, o2);
      if (a.reachable && b.reachable) {
        // Stitching the two best legs can only improve on the field value.
        res.value = std::max(res.value, a.value + b.value);
        res.witness = a.witness;
        if (!b.witness.empty())
          res.witness.insert(res.witness.end(), b.witness.begin() + 1,
                             b.witness.end());
      } else {
        res.witness = {p, w, q};
      }
    } else {
      res.witness = {p, q};
    }
  }
  return res;
}

Point LipschitzPath::eval(double t) const {
  if (v.empty()) return Point{};
  if (t <= 0.0) return v.front();
  if (t >= total()) return v.back();
  size_t k = size_t(std::upper_bound(s.begin(), s.end(), t) - s.begin());
  k = std::min(k, v.size() - 1);
  double seg = s[k] - s[k - 1];
  double a = seg > 0.0 ? (t - s[k - 1]) / seg : 0.0;
  return Point{v[k - 1].x + a * (v[k].x - v[k - 1].x),
               v[k - 1].t + a * (v[k].t - v[k - 1].t)};
}

LipschitzPath lipschitz_reparametrize(const PolyPath& path) {
  LipschitzPath lp;
  for (const Point& pt : path) {
    if (!lp.v.empty()) {
      Point prev = lp.v.back();
      double d = std::hypot(pt.x - prev.x, pt.t - prev.t);
      if (d <= 1e-15) continue;
      lp.s.push_back(lp.s.back() + d);
    } else {
      lp.s.push_back(0.0);
    }
    lp.v.push_back(pt);
  }
  return lp;
}

double partition_length(const SpacetimeModel& m, const LipschitzPath& path,
                        const std::vector<double>& params) {
  double sum = 0.0;
  for (size_t i = 0; i + 1 < params.size(); ++i) {
    Point a = path.eval(params[i]);
    Point b = path.eval(params[i + 1]);
    if (excision_blocks(m, a, b))
      return std::numeric_limits<double>::quiet_NaN();
    sum += std::max(0.0, segment_proper_length(m, a, b));
  }
  return sum;
}

std::vector<double> dyadic_partition(const LipschitzPath& path, int level) {
  int n = 1 << level;
  double total = path.total();
  std::vector<double> params(n + 1);
  for (int i = 0; i <= n; ++i) params[i] = total * double(i) / double(n);
  return params;
}

double partition_length_limit(const SpacetimeModel& m,
                              const LipschitzPath& path, double tol,
                              int max_level) {
  double prev = std::numeric_limits<double>::quiet_NaN();
  double last = prev;
  for (int lvl = 0; lvl <= max_level; ++lvl) {
    double cur = partition_length(m, path, dyadic_partition(path, lvl));
    if (std::isnan(cur)) continue;  // a blocked chord resolves when split
    if (!std::isnan(prev) && std::fabs(cur - prev) <= tol) return cur;
    prev = cur;
    last = cur;
  }
  return last;
}

namespace {

bool inside_window(const Window& w, Point p, double slack) {
  return p.x >= w.x0 - slack && p.x <= w.x1 + slack && p.t >= w.t0 - slack &&
         p.t <= w.t1 + slack;
}

}  // namespace

LimitCurveResult limit_curve_extract(const SpacetimeModel& m,
                                     const std::vector<PolyPath>& paths,
                                     const Window& region, double tol,
                                     int mesh_levels) {
  LimitCurveResult out;
  size_t n = paths.size();
  if (n < 3) return out;

  std::vector<LipschitzPath> lp(n);
  std::vector<double> dom(n);
  for (size_t i = 0; i < n; ++i) {
    lp[i] = lipschitz_reparametrize(paths[i]);
    dom[i] = lp[i].total();
  }

  // Merge the parameter domains: identity when they already agree, an
  // arctan compression when they keep growing, a linear rescale otherwise.
  double dmin = *std::min_element(dom.begin(), dom.end());
  double dmax = *std::max_element(dom.begin(), dom.end());
  double dlast = dom.back();
  enum class Merge { Identity, Linear, Arctan } merge = Merge::Linear;
  if (dmax - dmin <= 1e-12 * std::max(1.0, dmax)) {
    merge = Merge::Identity;
  } else {
    size_t up = 0;
    for (size_t i = 0; i + 1 < n; ++i)
      if (dom[i + 1] >= dom[i]) ++up;
    if (up == n - 1 && dlast > 4.0 * dom.front()) merge = Merge::Arctan;
  }
  double span = merge == Merge::Identity ? dmax : dlast;
  if (span <= 0.0) return out;

  int nm = (1 << mesh_levels) + 1;
  std::vector<double> mesh(nm);
  for (int j = 0; j < nm; ++j) mesh[j] = span * double(j) / double(nm - 1);

  // Sample every path on the common mesh through its change of parameter.
  std::vector<std::vector<Point>> sample(n, std::vector<Point>(nm));
  std::vector<uint8_t> in_region(n, 1);
  double slack = tol + 1e-9;
  for (size_t i = 0; i < n; ++i) {
    for (int j = 0; j < nm; ++j) {
      double t = mesh[j];
      if (merge == Merge::Linear)
        t = t * dom[i] / span;
      else if (merge == Merge::Arctan)
        t = (2.0 * dom[i] / M_PI) * std::atan(M_PI * t / (2.0 * dom[i]));
      sample[i][j] = lp[i].eval(t);
      if (!inside_window(region, sample[i][j], slack)) in_region[i] = 0;
    }
  }

  std::vector<int> candidates;
  for (size_t i = 0; i < n; ++i)
    if (in_region[i]) candidates.push_back(int(i));
  if (candidates.size() < 3) return out;

  // Tail selection: the smallest tail (of the whole sequence, else its even
  // or odd half) whose samples stay within tol at every mesh point.
  auto try_indices = [&](const std::vector<int>& idx) -> bool {
    for (size_t start = 0; start + 3 <= idx.size(); ++start) {
      double worst = 0.0;
      for (int j = 0; j < nm && worst <= tol; ++j) {
        double xlo = 1e300, xhi = -1e300, tlo = 1e300, thi = -1e300;
        for (size_t k = start; k < idx.size(); ++k) {
          const Point& pt = sample[idx[k]][j];
          xlo = std::min(xlo, pt.x);
          xhi = std::max(xhi, pt.x);
          tlo = std::min(tlo, pt.t);
          thi = std::max(thi, pt.t);
        }
        worst = std::max(worst, std::hypot(xhi - xlo, thi - tlo));
      }
      if (worst > tol) continue;
      out.converged = true;
      out.max_dev = worst;
      out.subsequence.assign(idx.begin() + start, idx.end());
      out.curve.clear();
      for (int j = 0; j < nm; ++j) {
        double sx = 0.0, st = 0.0;
        for (size_t k = start; k < idx.size(); ++k) {
          sx += sample[idx[k]][j].x;
          st += sample[idx[k]][j].t;
        }
        double cnt = double(idx.size() - start);
        Point v{sx / cnt, st / cnt};
        if (out.curve.empty() || std::hypot(v.x - out.curve.back().x,
                                            v.t - out.curve.back().t) > 1e-9)
          out.curve.push_back(v);
      }
      return true;
    }
    return false;
  };

  std::vector<int> evens, odds;
  for (size_t k = 0; k < candidates.size(); ++k)
    (k % 2 == 0 ? evens : odds).push_back(candidates[k]);
  if (!try_indices(candidates) && !try_indices(evens) && !try_indices(odds))
    return out;  // no convergent subsequence at this tolerance

  out.causal = true;
  for (size_t i = 0; i + 1 < out.curve.size(); ++i) {
    CausalClass cf = segment_admissible(m, out.curve[i], out.curve[i + 1]);
    CausalClass cb = segment_admissible(m, out.curve[i + 1], out.curve[i]);
    if (!causal_class(cf) && !causal_class(cb)) {
      out.causal = false;
      break;
    }
  }
  return out;
}

bool length_usc_check(const SpacetimeModel& m,
                      const std::vector<PolyPath>& paths,
                      const PolyPath& limit, double tol) {
  if (paths.empty()) return true;
  size_t tail = std::max<size_t>(3, paths.size() / 3);
  tail = std::min(tail, paths.size());
  double lim_sup = 0.0;
  for (size_t i = paths.size() - tail; i < paths.size(); ++i)
    lim_sup = std::max(lim_sup, proper_length(m, paths[i]));
  return lim_sup <= proper_length(m, limit) + tol;
}

std::optional<PolyPath> funnel_detect(const Grid& g, Point p, Point q,
                                      const ProbeVerdict& verdict,
                                      double tol) {
  if (!verdict.discontinuous || verdict.witnesses.size() < 3)
    return std::nullopt;
  double h = std::max(g.hx, g.ht);
  if (tol <= 0.0) tol = grid_tolerance(h);

  // Witnesses run upward from below p; the funnel curve is their
  // past-directed limit, so reverse them to put the future end first.
  std::vector<PolyPath> rev;
  rev.reserve(verdict.witnesses.size());
  for (const auto& w : verdict.witnesses) rev.emplace_back(w.rbegin(), w.rend());

  double ext_tol = std::max(8.0 * h, 2.0 * tol);
  LimitCurveResult lim =
      limit_curve_extract(*g.model, rev, g.model->window, ext_tol);
  if (!lim.converged || lim.curve.size() < 2) return std::nullopt;

  // The curve must stay above every sampled u chronologically below p.
  const Window& win = g.model->window;
  for (int k = 1; k <= 3; ++k) {
    Point u{p.x, p.t - 4.0 * k * h};
    if (u.t <= win.t0) break;
    FloodResult fu = flood_point(g, u, true);
    for (const Point& v : lim.curve)
      if (!flood_contains(g, fu.chron, v)) return std::nullopt;
  }

  // And its chronological future must cover that of q (one-cell fuzz at
  // the cone tip aside).
  std::vector<int> lam_nodes;
  int ci, cj;
  for (const Point& v : lim.curve)
    if (g.nearest_node(v, ci, cj) && g.valid[g.idx(ci, cj)])
      lam_nodes.push_back(g.idx(ci, cj));
  if (lam_nodes.empty()) return std::nullopt;
  FloodResult fl = flood_nodes(g, lam_nodes, true, false);
  FloodResult fq = flood_point(g, q, true);
  int qi = -1, qj = -1;
  g.nearest_node(q, qi, qj);
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!fq.chron[id] || fl.chron[id]) continue;
    bool near_tip = qi >= 0 && std::abs(g.col(id) - qi) <= 2 &&
                    std::abs(g.row(id) - qj) <= 2;
    if (!near_tip) return std::nullopt;
  }
  return lim.curve;
}

}  // namespace lorlab
