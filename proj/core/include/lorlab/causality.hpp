#pragma once

// Causal-ladder diagnostics on a grid: closed causal/timelike chains,
// bi-distinguishing, strong causality, stability under cone widening, and
// outer continuity of the chronological sets.
//
// All verdicts are grid-sampled diagnostics: a reported violation comes with
// a concrete witness; a clean pass means none of the probes found one.

#include "lorlab/grid.hpp"
#include "lorlab/reach.hpp"
#include "lorlab/scenario.hpp"

namespace lorlab {

struct LadderOptions {
  // Cone-widening fractions probed for stability, in increasing order.
  std::vector<double> widen_deltas{0.02, 0.05};
  // Lattice spacing (chart units) of the sample points used by the
  // distinguishing and strong-causality probes.
  double sample_spacing = 0.5;
  // Lattice spacing of the outer-continuity samples; curated probe points
  // are checked in addition.
  double outer_spacing = 1.0;
  std::vector<Point> outer_probes;
  // Approach-sequence depth for the outer-continuity limit test (the
  // dedicated miss functions use a deeper schedule).
  int miss_levels = 4;
  // Ball radius (cells) and excursion box (cells) for the strong-causality
  // return test.
  int ball_cells = 4;
  int box_cells = 12;
};

struct LadderReport {
  LadderFlags flags;

  // Witness data; meaningful only when the matching flag is false.
  std::vector<Point> closed_chain;      // nodes on a closed causal chain
  bool closed_chain_timelike = false;   // chain contains a timelike arc
  std::pair<Point, Point> indistinct{{0, 0}, {0, 0}};
  Point strong_violation{0, 0};         // ball center with a returning chain
  double widened_delta = 0.0;           // smallest delta with a cycle
  std::vector<Point> widened_cycle;
  Point outer_violation{0, 0};          // sample with a nonempty miss set
};

LadderReport ladder_report(const Grid& g, const LadderOptions& opt = {});

}  // namespace lorlab
