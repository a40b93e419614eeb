#include <algorithm>
#include <cmath>

#include "linkfold/cli.hpp"
#include "linkfold/error.hpp"

namespace linkfold::cli {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::invalid_input, "field '" + field + "': " + what);
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) field_error(field, "expected a finite number");
  return x;
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Point> points(const json& j) {
  if (!j.is_array()) field_error("vertices", "expected an array of [x, y] pairs");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string field = "vertices[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) field_error(field, "expected an [x, y] pair");
    out.push_back({number(j[i][0], field + "[0]"), number(j[i][1], field + "[1]")});
  }
  return out;
}

LinkageKind kind_for(bool cycle, Mode mode) {
  if (cycle) return mode == Mode::linkage ? LinkageKind::cycle_linkage : LinkageKind::cycle_config;
  return mode == Mode::linkage ? LinkageKind::arm_linkage : LinkageKind::arm_config;
}

json point_array(const std::vector<Point>& v) {
  json out = json::array();
  for (const Point& p : v) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::linkage ? "linkage" : "config"; }

InputDocument parse_input(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, "malformed JSON at " + line_column(text, e.byte));
  }
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, "document must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "vertices" && key != "chart" && key != "seed") field_error(key, "unknown field");
  }

  InputDocument doc;
  if (!j.contains("kind")) field_error("kind", "missing");
  const json& kind = j["kind"];
  if (kind != "arm" && kind != "cycle") field_error("kind", "expected \"arm\" or \"cycle\"");
  doc.cycle = kind == "cycle";
  const std::size_t min_vertices = doc.cycle ? 3 : 2;

  if (j.contains("vertices") == j.contains("chart")) {
    throw Error(ErrorCode::invalid_input, "exactly one of 'vertices' and 'chart' must be present");
  }
  if (j.contains("vertices")) {
    doc.vertices = points(j["vertices"]);
    if (doc.vertices->size() < min_vertices) {
      field_error("vertices", "need at least " + std::to_string(min_vertices) + " vertices");
    }
  } else {
    const json& c = j["chart"];
    if (!c.is_object()) field_error("chart", "expected an object");
    const char* len_key = doc.cycle ? "lengths" : "rho";
    for (const auto& [key, value] : c.items()) {
      if (key != len_key && key != "theta") field_error("chart." + key, "unknown field");
    }
    if (!c.contains(len_key)) field_error(std::string("chart.") + len_key, "missing");
    if (!c.contains("theta")) field_error("chart.theta", "missing");
    InputChart ch{numbers(c[len_key], std::string("chart.") + len_key), numbers(c["theta"], "chart.theta")};
    const std::size_t extra = doc.cycle ? 2 : 1;
    if (ch.lengths.size() != ch.theta.size() + extra) {
      field_error(std::string("chart.") + len_key,
                  "expected " + std::to_string(ch.theta.size() + extra) + " entries for " +
                      std::to_string(ch.theta.size()) + " angles");
    }
    if (ch.theta.size() + 2 < min_vertices) field_error("chart.theta", "too few angles");
    doc.chart = std::move(ch);
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) field_error("seed", "expected an integer");
    doc.seed = j["seed"].get<std::int64_t>();
  }
  return doc;
}

ChartState to_state(const InputDocument& doc, Mode mode) {
  const LinkageKind kind = kind_for(doc.cycle, mode);
  ChartState s;
  if (doc.vertices) {
    const std::vector<Point>& v = *doc.vertices;
    if (!geom::is_simple(v, doc.cycle)) throw Error(ErrorCode::invalid_input, "not self-avoiding");
    s = chart::from_vertices(kind, v);
  } else if (doc.cycle) {
    if (!geom::satisfies_c1(doc.chart->lengths)) throw Error(ErrorCode::infeasible_lengths, "infeasible lengths");
    s = chart::make_state(chart::CycleChart{doc.chart->lengths, doc.chart->theta});
    const chart::ValidityReport r = chart::validate(s);
    if (!r.valid()) throw Error(ErrorCode::invalid_input, r.reason);
    if (kind == LinkageKind::cycle_config) s = chart::from_vertices(kind, chart::embed(s));
  } else {
    for (double rho : doc.chart->lengths) {
      if (!(rho > 0.0)) throw Error(ErrorCode::invalid_input, "non-positive edge length");
    }
    s = chart::make_state(kind, chart::ArmChart{doc.chart->lengths, doc.chart->theta});
  }
  const chart::ValidityReport r = chart::validate(s);
  if (!r.valid()) {
    throw Error(r.lengths_feasible ? ErrorCode::invalid_input : ErrorCode::infeasible_lengths, r.reason);
  }
  return s;
}

std::string serialize(const OutputDocument& doc) {
  nlohmann::ordered_json j;
  j["kind"] = doc.cycle ? "cycle" : "arm";
  j["mode"] = std::string(to_string(doc.mode));
  j["termination"] = doc.termination;
  if (doc.circumradius) j["circumradius"] = *doc.circumradius;
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (const OutputFrame& f : doc.frames) {
    nlohmann::ordered_json fr;
    fr["t"] = f.t;
    fr["vertices"] = point_array(f.vertices);
    fr["f"] = f.f;
    frames.push_back(std::move(fr));
  }
  j["frames"] = std::move(frames);
  j["metadata"] = doc.metadata;
  return j.dump(2) + "\n";
}

InputDocument frame_as_input(const OutputDocument& doc, std::size_t k) {
  if (k >= doc.frames.size()) throw Error(ErrorCode::invalid_input, "frame index out of range");
  InputDocument in;
  in.cycle = doc.cycle;
  in.vertices = doc.frames[k].vertices;
  return in;
}

}  // namespace linkfold::cli
