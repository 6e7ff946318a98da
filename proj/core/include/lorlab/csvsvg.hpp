#pragma once

// Report writers: CSV tables with a fixed numeric format so repeated runs
// are byte-identical, and SVG sketches of a model window with reach fills,
// boundary curves and witness chains.

#include <string>
#include <vector>

#include "lorlab/geometry.hpp"
#include "lorlab/grid.hpp"

namespace lorlab {

std::string csv_num(double v);  // %.12g, with nan/inf spelled out

struct CsvWriter {
  std::string text;

  void raw_line(const std::string& line) { text += line + "\n"; }
  void row(const std::vector<std::string>& cells);
  bool save(const std::string& path) const;
};

// Chart-coordinate canvas (t axis pointing up). Drawing order is the call
// order; put fills before strokes.
struct SvgCanvas {
  explicit SvgCanvas(const Window& w, int width_px = 640);

  // Half-transparent squares of side `cell` on the marked nodes.
  void fill_nodes(const Grid& g, const std::vector<uint8_t>& mark,
                  const std::string& color, double opacity);
  // Excisions drawn solid; glued edges drawn with hatch ticks.
  void model_markup(const SpacetimeModel& m);
  void polyline(const std::vector<Point>& pts, const std::string& color,
                double width, bool dashed = false);
  void marker(Point p, const std::string& color, double radius = 4.0);
  void label(Point p, const std::string& txt);

  std::string finish() const;  // closes the document
  bool save(const std::string& path) const;

  Window win;
  double scale = 1.0;
  int wpx = 0, hpx = 0;
  std::string body;
};

}  // namespace lorlab
