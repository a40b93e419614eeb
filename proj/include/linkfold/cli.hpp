#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "linkfold/chart.hpp"

namespace linkfold::cli {

using chart::ChartState;
using chart::LinkageKind;
using geom::Point;

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { linkage, config };

std::string_view to_string(Mode m);

// ---------------------------------------------------------------------------
// Documents

struct InputChart {
  std::vector<double> lengths;  // "rho" for arms, "lengths" for cycles
  std::vector<double> theta;
};

struct InputDocument {
  bool cycle = false;  // kind "cycle", otherwise "arm"
  std::optional<std::vector<Point>> vertices;
  std::optional<InputChart> chart;
  std::optional<std::int64_t> seed;
};

/// Parses and shape-checks an input document. Malformed JSON and schema
/// violations throw invalid_input with a "line L, column C" or "field 'x'"
/// diagnostic.
InputDocument parse_input(const std::string& text);

/// The chart state for `mode`. Throws infeasible_lengths ("infeasible lengths")
/// for cycle charts violating (c1), otherwise invalid_input with
/// "not self-avoiding" or the validator's reason.
ChartState to_state(const InputDocument& doc, Mode mode);

struct OutputFrame {
  double t = 0.0;
  std::vector<Point> vertices;
  double f = 0.0;
};

struct OutputDocument {
  bool cycle = false;
  Mode mode = Mode::linkage;
  std::vector<OutputFrame> frames;
  std::string termination;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::optional<double> circumradius;
};

/// Stable key order, shortest round-trip doubles, trailing newline.
std::string serialize(const OutputDocument& doc);

/// The input document describing one output frame.
InputDocument frame_as_input(const OutputDocument& doc, std::size_t k);

// ---------------------------------------------------------------------------
// SVG

struct SvgStyle {
  double size = 512.0;  // pixel width of the larger viewBox side
  std::string edge_color = "#1f3b73";
  std::string vertex_color = "#c2352b";
  double edge_width = 0.006;  // fraction of the viewBox extent
  double vertex_radius = 0.012;
};

/// One SVG 1.1 document per frame, sharing a viewBox that covers all frames
/// with a 5% margin. Throws invalid_input for an empty frame list.
std::vector<std::string> render_svg(const std::vector<std::vector<Point>>& frames, bool closed,
                                    const SvgStyle& style = {});

/// Writes frame_0000.svg, frame_0001.svg, ... into `dir` (created if needed).
/// Throws io_error when the directory or a file cannot be written.
void write_svg_files(const std::filesystem::path& dir, const std::vector<std::string>& documents);

// ---------------------------------------------------------------------------
// Application

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 validation error, 2 non-convergence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linkfold::cli
