#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "linkfold/cli.hpp"
#include "linkfold/error.hpp"

namespace linkfold::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  // Trim trailing zeros so the output stays compact but fixed-format.
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

}  // namespace

std::vector<std::string> render_svg(const std::vector<std::vector<Point>>& frames, bool closed,
                                    const SvgStyle& style) {
  if (frames.empty()) throw Error(ErrorCode::invalid_input, "render_svg needs at least one frame");
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto& frame : frames) {
    for (const Point& p : frame) {
      // SVG's y axis points down; flip so the picture keeps its orientation.
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, -p.y);
      ymax = std::max(ymax, -p.y);
    }
  }
  if (!(xmin <= xmax)) throw Error(ErrorCode::invalid_input, "render_svg needs at least one vertex");
  const double extent = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double margin = 0.05 * extent;
  const double vx = xmin - margin, vy = ymin - margin;
  const double vw = std::max(xmax - xmin, 1e-9) + 2 * margin;
  const double vh = std::max(ymax - ymin, 1e-9) + 2 * margin;
  const double scale = style.size / std::max(vw, vh);
  const double stroke = style.edge_width * std::max(vw, vh);
  const double radius = style.vertex_radius * std::max(vw, vh);

  std::vector<std::string> out;
  out.reserve(frames.size());
  for (const auto& frame : frames) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(vw * scale) + "\" height=\"" +
         num(vh * scale) + "\" viewBox=\"" + num(vx) + " " + num(vy) + " " + num(vw) + " " + num(vh) + "\">\n";
    s += "  <rect x=\"" + num(vx) + "\" y=\"" + num(vy) + "\" width=\"" + num(vw) + "\" height=\"" + num(vh) +
         "\" fill=\"white\"/>\n";
    s += std::string("  <") + (closed ? "polygon" : "polyline") + " points=\"";
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (i) s += ' ';
      s += num(frame[i].x) + "," + num(-frame[i].y);
    }
    s += "\" fill=\"none\" stroke=\"" + style.edge_color + "\" stroke-width=\"" + num(stroke) +
         "\" stroke-linejoin=\"round\"/>\n";
    for (const Point& p : frame) {
      s += "  <circle cx=\"" + num(p.x) + "\" cy=\"" + num(-p.y) + "\" r=\"" + num(radius) + "\" fill=\"" +
           style.vertex_color + "\"/>\n";
    }
    s += "</svg>\n";
    out.push_back(std::move(s));
  }
  return out;
}

void write_svg_files(const std::filesystem::path& dir, const std::vector<std::string>& documents) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::io_error, "cannot create output directory " + dir.string());
  }
  for (std::size_t k = 0; k < documents.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", k);
    const std::filesystem::path path = dir / name;
    std::ofstream f(path, std::ios::binary);
    f << documents[k];
    f.close();
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  }
}

}  // namespace linkfold::cli
