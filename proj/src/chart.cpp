#include "linkfold/chart.hpp"

#include <cmath>
#include <numbers>

#include "linkfold/error.hpp"

namespace linkfold::chart {

std::string_view to_string(LinkageKind kind) {
  switch (kind) {
    case LinkageKind::arm_linkage: return "arm_linkage";
    case LinkageKind::arm_config: return "arm_config";
    case LinkageKind::cycle_linkage: return "cycle_linkage";
    case LinkageKind::cycle_config: return "cycle_config";
  }
  return "unknown";
}

LinkageKind parse_kind(std::string_view name) {
  if (name == "arm_linkage") return LinkageKind::arm_linkage;
  if (name == "arm_config") return LinkageKind::arm_config;
  if (name == "cycle_linkage") return LinkageKind::cycle_linkage;
  if (name == "cycle_config") return LinkageKind::cycle_config;
  throw Error(ErrorCode::invalid_input, "unknown linkage kind '" + std::string(name) + "'");
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

ChartState make_state(LinkageKind kind, const ArmChart& chart) {
  if (kind == LinkageKind::cycle_linkage) {
    throw Error(ErrorCode::invalid_input, "cycle linkages are built from a CycleChart");
  }
  ChartState s{kind, chart.rho, chart.theta};
  for (double& t : s.theta) t = wrap_angle(t);
  return s;
}

ChartState make_state(const CycleChart& chart) {
  ChartState s{LinkageKind::cycle_linkage, chart.lengths, chart.theta};
  for (double& t : s.theta) t = wrap_angle(t);
  return s;
}

ArmChart arm_chart(const ChartState& s) {
  const std::size_t edges = static_cast<std::size_t>(s.vertex_count() - 1);
  return {std::vector<double>(s.lengths.begin(), s.lengths.begin() + edges), s.theta};
}

namespace {

double edge_angle(const std::vector<double>& theta, std::size_t e) {
  return e == 0 ? 0.0 : theta[e - 1];
}

void check_shape(const ChartState& s) {
  const std::size_t expected =
      s.theta.size() + (s.kind == LinkageKind::cycle_linkage ? 2 : 1);
  if (s.lengths.size() != expected) {
    throw Error(ErrorCode::invalid_input, "chart lengths/theta size mismatch");
  }
}

}  // namespace

std::vector<Point> arm_embed(const ArmChart& chart) {
  if (chart.rho.size() != chart.theta.size() + 1) {
    throw Error(ErrorCode::invalid_input, "arm chart needs |rho| = |theta| + 1");
  }
  std::vector<Point> v(chart.rho.size() + 1);
  v[0] = {0.0, 0.0};
  for (std::size_t e = 0; e < chart.rho.size(); ++e) {
    const double a = edge_angle(chart.theta, e);
    v[e + 1] = v[e] + chart.rho[e] * Point{std::cos(a), std::sin(a)};
  }
  return v;
}

ArmChart arm_extract(std::span<const Point> v) {
  if (v.size() < 2) throw Error(ErrorCode::invalid_input, "arm needs at least 2 vertices");
  ArmChart c;
  c.rho.resize(v.size() - 1);
  c.theta.resize(v.size() >= 2 ? v.size() - 2 : 0);
  double base = 0.0;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    const Point d = v[e + 1] - v[e];
    const double len = geom::norm(d);
    if (!(len > 0.0)) throw Error(ErrorCode::invalid_input, "repeated consecutive vertices");
    c.rho[e] = len;
    const double a = std::atan2(d.y, d.x);
    if (e == 0) {
      base = a;
    } else {
      c.theta[e - 1] = wrap_angle(a - base);
    }
  }
  return c;
}

std::vector<Point> embed(const ChartState& s) {
  check_shape(s);
  return arm_embed(arm_chart(s));
}

ChartState from_vertices(LinkageKind kind, std::span<const Point> vertices) {
  if (is_cycle(kind) && vertices.size() < 3) {
    throw Error(ErrorCode::invalid_input, "cycle needs at least 3 vertices");
  }
  ArmChart c = arm_extract(vertices);
  if (kind != LinkageKind::cycle_linkage) return make_state(kind, c);
  const double closing = geom::distance(vertices.back(), vertices.front());
  if (!(closing > 0.0)) throw Error(ErrorCode::invalid_input, "closing side has zero length");
  c.rho.push_back(closing);
  return make_state(CycleChart{c.rho, c.theta});
}

std::vector<double> cycle_side_lengths(const ChartState& s) {
  const std::vector<Point> v = embed(s);
  std::vector<double> l(s.lengths.begin(), s.lengths.begin() + (v.size() - 1));
  l.push_back(geom::distance(v.back(), v.front()));
  return l;
}

ConstraintValue cycle_constraint(std::span<const double> theta, std::span<const double> lengths) {
  if (lengths.size() < 3 || lengths.size() != theta.size() + 2) {
    throw Error(ErrorCode::invalid_input, "cycle_constraint: need m >= 3 lengths and m-2 angles");
  }
  double X = lengths[0];
  double Y = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    X += lengths[j + 1] * std::cos(theta[j]);
    Y += lengths[j + 1] * std::sin(theta[j]);
  }
  const double r = std::hypot(X, Y);
  if (r == 0.0) {
    throw Error(ErrorCode::singular_constraint, "closing vertex coincides with the first vertex");
  }
  ConstraintValue out;
  out.u = r - lengths.back();
  out.grad.resize(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double lj = lengths[j + 1];
    out.grad[j] = (-X * lj * std::sin(theta[j]) + Y * lj * std::cos(theta[j])) / r;
  }
  return out;
}

std::optional<ChartState> restore_closure(ChartState s, double tol, int max_iter) {
  if (s.kind != LinkageKind::cycle_linkage) {
    throw Error(ErrorCode::invalid_input, "restore_closure needs a cycle linkage");
  }
  const double lm = s.lengths.back();
  for (int it = 0;; ++it) {
    const ConstraintValue c = cycle_constraint(s.theta, s.lengths);
    if (std::abs(c.u) <= 1e-3 * tol * lm) return s;
    if (it == max_iter) {
      if (std::abs(c.u) <= tol * lm) return s;
      return std::nullopt;
    }
    double gg = 0.0;
    for (double g : c.grad) gg += g * g;
    if (!(gg > 0.0)) return std::nullopt;
    for (std::size_t j = 0; j < s.theta.size(); ++j) {
      s.theta[j] = wrap_angle(s.theta[j] - c.u * c.grad[j] / gg);
    }
  }
}

std::vector<double> free_coordinates(const ChartState& s) {
  if (!has_free_lengths(s.kind)) return s.theta;
  std::vector<double> x(s.lengths);
  x.insert(x.end(), s.theta.begin(), s.theta.end());
  return x;
}

ChartState with_free_coordinates(const ChartState& s, std::span<const double> x) {
  ChartState out = s;
  std::size_t offset = 0;
  if (has_free_lengths(s.kind)) {
    if (x.size() != s.lengths.size() + s.theta.size()) {
      throw Error(ErrorCode::invalid_input, "free coordinate size mismatch");
    }
    for (std::size_t i = 0; i < s.lengths.size(); ++i) {
      if (!(x[i] > 0.0)) throw Error(ErrorCode::invalid_input, "non-positive edge length");
      out.lengths[i] = x[i];
    }
    offset = s.lengths.size();
  } else if (x.size() != s.theta.size()) {
    throw Error(ErrorCode::invalid_input, "free coordinate size mismatch");
  }
  for (std::size_t j = 0; j < s.theta.size(); ++j) out.theta[j] = wrap_angle(x[offset + j]);
  return out;
}

std::vector<double> pull_back(const ChartState& s, std::span<const Point> g) {
  const std::size_t m = static_cast<std::size_t>(s.vertex_count());
  if (g.size() != m) throw Error(ErrorCode::invalid_input, "pull_back: vertex gradient size");
  const std::size_t edges = m - 1;
  const bool lengths_free = has_free_lengths(s.kind);
  std::vector<double> out(lengths_free ? edges + s.theta.size() : s.theta.size(), 0.0);
  const std::size_t theta_offset = lengths_free ? edges : 0;

  // Moving edge e rigidly translates every vertex after it.
  Point suffix{};
  for (std::size_t e = edges; e-- > 0;) {
    suffix = suffix + g[e + 1];
    const double a = edge_angle(s.theta, e);
    const double c = std::cos(a);
    const double sn = std::sin(a);
    if (lengths_free) out[e] = c * suffix.x + sn * suffix.y;
    if (e >= 1) out[theta_offset + e - 1] = s.lengths[e] * (-sn * suffix.x + c * suffix.y);
  }
  return out;
}

std::vector<double> chart_difference(const ChartState& a, const ChartState& b) {
  if (a.kind != b.kind || a.lengths.size() != b.lengths.size() || a.theta.size() != b.theta.size()) {
    throw Error(ErrorCode::invalid_input, "chart states differ in kind or dimension");
  }
  std::vector<double> d;
  d.reserve(a.lengths.size() + a.theta.size());
  if (has_free_lengths(a.kind)) {
    for (std::size_t i = 0; i < a.lengths.size(); ++i) d.push_back(b.lengths[i] - a.lengths[i]);
  }
  for (std::size_t j = 0; j < a.theta.size(); ++j) d.push_back(wrap_angle(b.theta[j] - a.theta[j]));
  return d;
}

double chart_distance(const ChartState& a, const ChartState& b) {
  double sum = 0.0;
  for (double x : chart_difference(a, b)) sum += x * x;
  return std::sqrt(sum);
}

ValidityReport validate(const ChartState& s, double constraint_tol) {
  ValidityReport r;
  const std::size_t expected =
      s.theta.size() + (s.kind == LinkageKind::cycle_linkage ? 2 : 1);
  if (s.lengths.size() != expected || (is_cycle(s.kind) && s.vertex_count() < 3)) {
    r.reason = "chart dimensions are inconsistent";
    return r;
  }
  for (double l : s.lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      r.lengths_feasible = false;
      r.reason = "non-positive edge length";
      return r;
    }
  }
  for (double t : s.theta) {
    if (!std::isfinite(t)) {
      r.reason = "non-finite angle";
      return r;
    }
  }

  const std::vector<Point> v = embed(s);
  r.simple = geom::is_simple(v, is_cycle(s.kind));
  if (!r.simple) r.reason = "not self-avoiding";

  if (is_cycle(s.kind)) {
    if (s.kind == LinkageKind::cycle_linkage) {
      const double closing = geom::distance(v.back(), v.front());
      r.constraint_residual = closing - s.lengths.back();
      r.on_constraint = std::abs(r.constraint_residual) <= constraint_tol * s.lengths.back();
      r.lengths_feasible = geom::satisfies_c1(s.lengths);
      if (!r.on_constraint && r.reason.empty()) r.reason = "closure constraint violated";
    } else {
      r.lengths_feasible = geom::satisfies_c1(cycle_side_lengths(s));
    }
    if (!r.lengths_feasible && r.reason.empty()) r.reason = "infeasible lengths";
    if (r.simple) {
      r.positively_oriented = geom::signed_area(v) > 0.0;
      if (!r.positively_oriented) r.reason = "negative orientation";
    }
  }
  return r;
}

}  // namespace linkfold::chart
