#include "lorlab/csvsvg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace lorlab {

std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  raw_line(line);
}

bool CsvWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return bool(out);
}

// ---------------------------------------------------------------------------

SvgCanvas::SvgCanvas(const Window& w, int width_px) : win(w) {
  double dx = std::max(1e-9, w.x1 - w.x0);
  double dt = std::max(1e-9, w.t1 - w.t0);
  scale = width_px / dx;
  wpx = width_px;
  hpx = int(std::lround(dt * scale));
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

// Chart -> pixel: x right, t up.
static void to_px(const SvgCanvas& c, Point p, double& px, double& py) {
  px = (p.x - c.win.x0) * c.scale;
  py = (c.win.t1 - p.t) * c.scale;
}

void SvgCanvas::fill_nodes(const Grid& g, const std::vector<uint8_t>& mark,
                           const std::string& color, double opacity) {
  double cw = g.hx * scale, ch = g.ht * scale;
  body += "<g fill=\"" + color + "\" opacity=\"" + fmt(opacity) + "\">\n";
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!mark[id] || !g.valid[id]) continue;
    double px, py;
    to_px(*this, g.point_of(id), px, py);
    body += "<rect x=\"" + fmt(px - cw / 2) + "\" y=\"" + fmt(py - ch / 2) +
            "\" width=\"" + fmt(cw) + "\" height=\"" + fmt(ch) + "\"/>\n";
  }
  body += "</g>\n";
}

void SvgCanvas::model_markup(const SpacetimeModel& m) {
  for (const ConvexPoly& poly : m.excised_regions) {
    body += "<polygon fill=\"#333\" points=\"";
    for (const Point& v : poly.verts) {
      double px, py;
      to_px(*this, v, px, py);
      body += fmt(px) + "," + fmt(py) + " ";
    }
    body += "\"/>\n";
  }
  for (const Segment& s : m.excised_segments) {
    double ax, ay, bx, by;
    to_px(*this, s.a, ax, ay);
    to_px(*this, s.b, bx, by);
    body += "<line x1=\"" + fmt(ax) + "\" y1=\"" + fmt(ay) + "\" x2=\"" +
            fmt(bx) + "\" y2=\"" + fmt(by) +
            "\" stroke=\"#333\" stroke-width=\"3\"/>\n";
  }
  for (const Point& p : m.excised_points) marker(p, "#333", 3.0);

  if (m.gluing) {
    // Hatch ticks along the identified edges.
    bool x_axis = m.gluing->axis == EdgeGluing::Axis::X;
    body += "<g stroke=\"#888\" stroke-width=\"1\">\n";
    int n = 24;
    for (int i = 0; i <= n; ++i) {
      double f = double(i) / n;
      Point a, b;
      if (x_axis) {
        a = {m.gluing->lo, win.t0 + f * (win.t1 - win.t0)};
        b = {m.gluing->hi, a.t};
      } else {
        a = {win.x0 + f * (win.x1 - win.x0), m.gluing->lo};
        b = {a.x, m.gluing->hi};
      }
      for (Point e : {a, b}) {
        double px, py;
        to_px(*this, e, px, py);
        body += "<line x1=\"" + fmt(px - 4) + "\" y1=\"" + fmt(py - 4) +
                "\" x2=\"" + fmt(px + 4) + "\" y2=\"" + fmt(py + 4) +
                "\"/>\n";
      }
    }
    body += "</g>\n";
  }
}

void SvgCanvas::polyline(const std::vector<Point>& pts,
                         const std::string& color, double width,
                         bool dashed) {
  if (pts.size() < 2) return;
  body += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
          fmt(width) + "\"";
  if (dashed) body += " stroke-dasharray=\"6,4\"";
  body += " points=\"";
  for (const Point& p : pts) {
    double px, py;
    to_px(*this, p, px, py);
    body += fmt(px) + "," + fmt(py) + " ";
  }
  body += "\"/>\n";
}

void SvgCanvas::marker(Point p, const std::string& color, double radius) {
  double px, py;
  to_px(*this, p, px, py);
  body += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) + "\" r=\"" +
          fmt(radius) + "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::label(Point p, const std::string& txt) {
  double px, py;
  to_px(*this, p, px, py);
  body += "<text x=\"" + fmt(px + 6) + "\" y=\"" + fmt(py - 6) +
          "\" font-size=\"12\" font-family=\"monospace\">" + txt +
          "</text>\n";
}

std::string SvgCanvas::finish() const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(wpx) + "\" height=\"" +
                    std::to_string(hpx) + "\" viewBox=\"0 0 " +
                    std::to_string(wpx) + " " + std::to_string(hpx) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(wpx) +
         "\" height=\"" + std::to_string(hpx) +
         "\" fill=\"white\" stroke=\"#222\"/>\n";
  out += body;
  out += "</svg>\n";
  return out;
}

bool SvgCanvas::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << finish();
  return bool(out);
}

}  // namespace lorlab
