#include "lorlab/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "lorlab/conformal.hpp"
#include "lorlab/phimap.hpp"

namespace lorlab {
namespace {

const std::vector<double> kDefaultGrids{0.1, 0.05, 0.025};

Scenario minkowski_diamond() {
  Scenario sc;
  sc.name = "minkowski_diamond";
  sc.summary = "Flat rectangle, no excisions; every ladder rung holds.";
  sc.model.window = {-2.0, 2.0, -2.0, 2.0};
  sc.expected = {true, true, true, true, true, true};
  sc.upper = UpperRung::GloballyHyperbolic;
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, 0.0}, {0.5, -0.5}};
  sc.pairs = {{{0.0, -1.0}, {0.0, 1.0}},       // d = 2
              {{-0.5, -1.5}, {0.5, 0.5}}};     // d = sqrt(3)
  return sc;
}

Scenario flat_slit() {
  Scenario sc;
  sc.name = "flat_slit";
  sc.summary =
      "Flat plane minus the vertical segment {1} x [1,2]; the forward cone "
      "of the origin grazes the slit bottom, so a limit-miss region opens "
      "behind it.";
  sc.model.window = {-3.0, 4.5, -1.2, 5.2};
  sc.model.excised_segments = {{{1.0, 1.0}, {1.0, 2.0}}};
  sc.expected = {true, true, true, true, true, false};
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, 0.0},   // graze: miss region {x>1, 0<t-x<1}
                    {2.0, 3.0},   // past graze at the slit top
                    {-1.0, 1.0}}; // generic: empty
  sc.pairs = {{{0.0, 0.0}, {0.0, 4.0}},      // d = 4, straight line clears slit
              {{0.0, 0.0}, {1.5, 2.0}},      // unreachable: d = 0
              {{0.0, -0.05}, {1.5, 2.0}}};   // sup = sqrt(.1025)+sqrt(.75)
  return sc;
}

void add_double_cut(SpacetimeModel& m) {
  m.window = {-6.0, 6.0, -4.0, 4.0};
  m.excised_segments = {{{-6.0, 1.0}, {1.0, 1.0}},
                        {{-1.0, -1.0}, {6.0, -1.0}}};
}

Scenario flat_double_cut() {
  Scenario sc;
  sc.name = "flat_double_cut";
  sc.summary =
      "Flat strip minus two half-infinite horizontal slits; the origin's "
      "cone is exactly covered by each slit with a graze at its endpoint.";
  add_double_cut(sc.model);
  sc.expected = {true, true, true, true, true, false};
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, 0.0},    // graze both ways: nonempty miss sets
                    {3.0, 0.5}};   // generic: empty
  sc.pairs = {{{0.0, -0.2}, {0.3, 2.0}},    // sup = sqrt(.44)+sqrt(.51) via gate
              {{0.0, 0.0}, {0.0, 2.0}},     // unreachable: d = 0
              {{0.0, 0.0}, {1.3, 1.8}},     // unreachable: d = 0
              {{0.0, -0.1}, {1.3, 1.8}}};   // sup = sqrt(.21)+sqrt(.55)
  return sc;
}

Scenario cylinder_double_cut() {
  Scenario sc;
  sc.name = "cylinder_double_cut";
  sc.summary =
      "Time-periodic strip (period 8) with two staggered half-infinite "
      "slits; chronology survives but strong causality fails along the "
      "graze diagonal, and widened cones close a cycle.";
  add_double_cut(sc.model);
  sc.model.gluing = EdgeGluing{EdgeGluing::Axis::T, -4.0, 4.0};
  sc.expected = {true, true, true, false, false, false};
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, 0.0}, {3.0, 0.5}};
  sc.pairs = {{{0.0, 0.0}, {-2.0, 0.2}},     // unreachable: d = 0
              {{0.0, -0.1}, {-2.0, 0.2}}};   // sup via wrap ~ 7.0035
  return sc;
}

Scenario cylinder_stacked_slits() {
  Scenario sc;
  sc.name = "cylinder_stacked_slits";
  sc.summary =
      "Time-periodic strip (period 8) with three alternating slits; the "
      "marginal wrap is exactly null and grazes the slit endpoints, so the "
      "model is strongly causal but fails under any cone widening.";
  sc.model.window = {-5.0, 5.0, -4.0, 4.0};
  sc.model.gluing = EdgeGluing{EdgeGluing::Axis::T, -4.0, 4.0};
  sc.model.excised_segments = {{{-2.0, 0.0}, {5.0, 0.0}},
                               {{-5.0, 2.0}, {0.0, 2.0}},
                               {{-5.0, -2.0}, {0.0, -2.0}}};
  sc.expected = {true, true, true, true, false, false};
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{-1.0, -1.0},  // graze at the t=0 slit's left endpoint
                    {3.0, 0.5}};   // generic: empty
  sc.pairs = {{{0.5, 0.5}, {0.5, 1.5}},        // d = 1, free column
              {{-1.0, -1.0}, {-1.2, 0.9}},     // unreachable: d = 0
              {{-1.0, -1.1}, {-1.2, 0.9}}};    // sup = sqrt(.21)+sqrt(.17)
  return sc;
}

Scenario waist_cylinder() {
  Scenario sc;
  sc.name = "waist_cylinder";
  sc.summary =
      "Spatial circle with a degenerate null waist row at t = 0: cones tip "
      "over near the waist, the row itself is a closed null curve, and all "
      "points of the waist share their chronological past and future.";
  sc.model.window = {-M_PI, M_PI, -2.0, 2.0};
  sc.model.base = BaseMetric::Waist;
  sc.model.gluing = EdgeGluing{EdgeGluing::Axis::X, -M_PI, M_PI};
  sc.expected = {true, false, false, false, false, true};
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{1.0, -0.5}, {1.0, 0.5}};
  sc.pairs = {{{0.0, -1.0}, {1.0, 0.0}},   // d = waist_max_proper_time(-1)
              {{0.0, -1.0}, {2.0, 0.0}},   // same value: angle-independent
              {{0.0, -1.0}, {0.0, 1.0}}};  // d = 2 * waist_max_proper_time(-1)
  return sc;
}

Scenario waist_cylinder_punctured() {
  Scenario sc = waist_cylinder();
  sc.name = "waist_cylinder_punctured";
  sc.summary =
      "Waist cylinder with one waist point removed: the closed null row is "
      "broken (no closed causal curve remains) but the shared past/future "
      "of waist points still defeats distinguishing.";
  sc.model.excised_points = {{0.0, 0.0}};
  sc.expected = {true, true, false, false, false, true};
  return sc;
}

Scenario pole_plane() {
  Scenario sc;
  sc.name = "pole_plane";
  sc.summary =
      "Flat plane minus a point carrying an inverse-square conformal "
      "weight: lengths blow up near the puncture, so distances across it "
      "are infinite while the causal order stays trivial.";
  sc.model.window = {-2.0, 2.0, -2.0, 2.0};
  sc.model.excised_points = {{0.0, 0.0}};
  sc.model.conformal = ConformalFactor::rational_pole(1.0, {0.0, 0.0});
  sc.expected = {true, true, true, true, true, true};
  sc.upper = UpperRung::CausallyContinuous;
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, -0.5}, {1.0, 0.0}};
  sc.pairs = {{{0.1, -1.0}, {0.1, 1.0}},     // infinite: hugs the pole
              {{-1.0, -1.5}, {1.0, 1.5}},    // infinite: pole inside diamond
              {{1.0, -0.5}, {1.0, 0.5}}};    // finite: pole outside diamond
  return sc;
}

Scenario pole_plane_cone() {
  Scenario sc;
  sc.name = "pole_plane_cone";
  sc.summary =
      "Inverse-square pole blended on only inside a forward cone above the "
      "puncture: distances into the cone diverge, distances elsewhere stay "
      "finite, and the transition pair is discontinuous.";
  sc.model.window = {-2.0, 2.0, -2.0, 2.0};
  sc.model.excised_points = {{0.0, 0.0}};
  BumpProfile rho;
  rho.kind = BumpProfile::Kind::ConeAngular;
  rho.support_slope = 1.0;
  rho.plateau_slope = 2.0;
  sc.model.conformal = ConformalFactor::blended(
      rho, ConformalFactor::rational_pole(1.0, {0.0, 0.0}));
  sc.expected = {true, true, true, true, true, true};
  sc.upper = UpperRung::CausallyContinuous;
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.0, -0.5}};
  sc.pairs = {{{0.0, -1.0}, {0.0, 1.0}},          // infinite: deep in the cone
              {{0.0, -1.0}, {0.5, 0.5}},          // finite boundary probe
              {{-1.5, -0.5}, {-1.5, 0.5}}};       // d = 1: weight is 1 there
  return sc;
}

Scenario slit_image_plane() {
  Scenario sc;
  sc.name = "slit_image_plane";
  sc.summary =
      "Flat plane minus the vertical slit {0} x [-1,1], probed through an "
      "image chart that squeezes the slit toward the origin; probe points "
      "are given in image coordinates.";
  sc.model.window = {-4.0, 4.0, -4.0, 4.0};
  sc.model.excised_segments = {{{0.0, -1.0}, {0.0, 1.0}}};
  sc.image_coords = true;
  sc.expected = {true, true, true, true, true, false};
  sc.grids = kDefaultGrids;
  // Image coordinates; (-1,-1) maps to the model graze point (-1,-2).
  sc.miss_probes = {{-1.0, -1.0}, {2.0, 0.5}};
  sc.pairs = {{{-1.0, -1.0}, {1.0, 1.0}},     // unreachable: d = 0
              {{-1.0, -1.1}, {1.0, 1.0}}};    // sup = sqrt(.21)+sqrt(8)
  return sc;
}

Scenario wedge_complement() {
  Scenario sc;
  sc.name = "wedge_complement";
  sc.summary =
      "Flat window minus a left half-plane strip and a right timelike "
      "wedge; boundaries are timelike or full-height, so no graze occurs "
      "and every rung holds.";
  sc.model.window = {-1.4, 3.0, -3.0, 3.0};
  ConvexPoly rect;
  rect.verts = {{-1.4, -3.0}, {-1.0, -3.0}, {-1.0, 3.0}, {-1.4, 3.0}};
  ConvexPoly wedge;
  wedge.verts = {{0.0, 0.0}, {1.5, -3.0}, {3.0, -3.0}, {3.0, 3.0}, {1.5, 3.0}};
  sc.model.excised_regions = {rect, wedge};
  sc.expected = {true, true, true, true, true, true};
  sc.upper = UpperRung::CausallySimple;
  sc.grids = kDefaultGrids;
  sc.miss_probes = {{0.5, -2.0}, {-0.5, 0.0}};
  sc.pairs = {{{-0.5, -2.0}, {-0.5, 2.0}},   // d = 4, straight column
              {{0.9, -2.0}, {0.9, 2.0}}};    // sup = 2 sqrt(3.19) around apex
  return sc;
}

const std::vector<std::string> kNames = {
    "minkowski_diamond",    "flat_slit",
    "flat_double_cut",      "cylinder_double_cut",
    "cylinder_stacked_slits", "waist_cylinder",
    "waist_cylinder_punctured", "pole_plane",
    "pole_plane_cone",      "slit_image_plane",
    "wedge_complement",
};

const std::vector<std::string> kVariants = {"vslit", "pole", "blowup",
                                            "suppressed"};

}  // namespace

const std::vector<std::string>& scenario_names() { return kNames; }

bool has_scenario(const std::string& name) {
  for (const auto& n : kNames)
    if (n == name) return true;
  return false;
}

Scenario make_scenario(const std::string& name) {
  if (name == "minkowski_diamond") return minkowski_diamond();
  if (name == "flat_slit") return flat_slit();
  if (name == "flat_double_cut") return flat_double_cut();
  if (name == "cylinder_double_cut") return cylinder_double_cut();
  if (name == "cylinder_stacked_slits") return cylinder_stacked_slits();
  if (name == "waist_cylinder") return waist_cylinder();
  if (name == "waist_cylinder_punctured") return waist_cylinder_punctured();
  if (name == "pole_plane") return pole_plane();
  if (name == "pole_plane_cone") return pole_plane_cone();
  if (name == "slit_image_plane") return slit_image_plane();
  if (name == "wedge_complement") return wedge_complement();
  throw std::invalid_argument("unknown scenario: " + name);
}

const std::vector<std::string>& variant_kinds() { return kVariants; }

Scenario apply_variant(const Scenario& base, const std::string& kind) {
  Scenario sc = base;
  sc.name = base.name + "_" + kind;
  const Window& w = base.model.window;
  double W = w.width(), H = w.height();
  auto snap = [](double v) { return std::round(v * 10.0) / 10.0; };

  if (kind == "vslit") {
    // Extra vertical slit in the lower-left part of the window: both of its
    // endpoints graze forward/backward cones, so limit-miss sets appear.
    double xc = snap(w.x0 + 0.2 * W);
    double ta = snap(w.t0 + H / 6.0), tb = snap(w.t0 + H / 3.0);
    sc.model.excised_segments.push_back({{xc, ta}, {xc, tb}});
    sc.summary = base.summary + " Variant: extra vertical slit.";
    sc.expected.outer_continuous = false;
  } else if (kind == "pole") {
    // Inverse-square weight blended on inside a small disk at a generic
    // interior point: distances near it diverge, far pairs are unaffected.
    Point pc{snap(w.x0 + 0.3 * W), snap(w.t0 + 0.55 * H)};
    sc.model.excised_points.push_back(pc);
    BumpProfile cap;
    cap.kind = BumpProfile::Kind::RadialCap;
    cap.center = pc;
    cap.r_in = 0.15;
    cap.r_out = 0.3;
    ConformalFactor pole = ConformalFactor::blended(
        cap, ConformalFactor::rational_pole(1.0, pc));
    sc.model.conformal = base.model.conformal.is_identity()
                             ? pole
                             : ConformalFactor::product(
                                   {base.model.conformal, pole});
    sc.summary = base.summary + " Variant: localized inverse-square pole.";
  } else if (kind == "blowup") {
    // Diverging weight along a short vertical spine in the interior. The
    // weight is singular at the spine top, so that point leaves the manifold.
    Point sa{snap(w.x0 + 0.6 * W), snap(w.t0 + 0.35 * H)};
    double sb = snap(w.t0 + 0.65 * H);
    sc.model.excised_points.push_back({sa.x, sb});
    ConformalFactor bu = ConformalFactor::blowup(sa, sb, 0.3);
    sc.model.conformal = base.model.conformal.is_identity()
                             ? bu
                             : ConformalFactor::product(
                                   {base.model.conformal, bu});
    sc.summary = base.summary + " Variant: spine blow-up weight.";
  } else if (kind == "suppressed") {
    // Exhaustion damping: beyond the innermost box every annulus is scaled
    // down hard enough that the total timelike diameter is finite.
    CompactExhaustion ex;
    auto shrink = [&](double f) {
      double cx = 0.5 * (w.x0 + w.x1), ct = 0.5 * (w.t0 + w.t1);
      return Window{cx - 0.5 * f * W, cx + 0.5 * f * W, ct - 0.5 * f * H,
                    ct + 0.5 * f * H};
    };
    ex.boxes = {shrink(0.25), shrink(0.5), shrink(0.75), shrink(1.0)};
    ConformalFactor sup = make_suppressor(base.model, ex, 0.05 * H);
    sc.model.conformal = base.model.conformal.is_identity()
                             ? sup
                             : ConformalFactor::product(
                                   {base.model.conformal, sup});
    sc.summary = base.summary + " Variant: exhaustion-damped weight.";
  } else {
    throw std::invalid_argument("unknown variant: " + kind);
  }
  return sc;
}

std::optional<Scenario> find_scenario(const std::string& name) {
  if (has_scenario(name)) return make_scenario(name);
  for (const auto& base : kNames) {
    for (const auto& v : kVariants) {
      if (name == base + "_" + v)
        return apply_variant(make_scenario(base), v);
    }
  }
  return std::nullopt;
}

Point scenario_input_point(const Scenario& sc, Point p) {
  if (!sc.image_coords) return p;
  return SlitImageMap{}.to_model(p);
}

}  // namespace lorlab
