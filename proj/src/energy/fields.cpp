#include <algorithm>
#include <cmath>

#include "linkfold/energy.hpp"
#include "linkfold/error.hpp"

namespace linkfold::energy {

using chart::LinkageKind;

ChartState project_straight(const ChartState& s) {
  if (chart::is_cycle(s.kind)) throw Error(ErrorCode::invalid_input, "project_straight needs an arm state");
  ChartState out = s;
  std::fill(out.theta.begin(), out.theta.end(), 0.0);
  return out;
}

ChartState project_cocircular(const ChartState& s) {
  if (!chart::is_cycle(s.kind)) {
    throw Error(ErrorCode::invalid_input, "project_cocircular needs a cycle state");
  }
  const std::vector<Point> v = chart::embed(s);
  if (!geom::is_simple(v, true)) throw Error(ErrorCode::invalid_input, "not self-avoiding");
  std::vector<double> l = s.kind == LinkageKind::cycle_linkage ? s.lengths : geom::side_lengths(v);
  const geom::CocircularSolution sol = geom::cocircular_polygon(l);
  chart::ArmChart c = chart::arm_extract(sol.vertices);
  if (s.kind == LinkageKind::cycle_linkage) return chart::make_state(chart::CycleChart{l, c.theta});
  // Keep the input lengths bit-for-bit; only the angles come from the solver.
  c.rho.assign(s.lengths.begin(), s.lengths.end());
  return chart::make_state(s.kind, c);
}

std::pair<double, double> bump_eta(BumpParams p, double x) {
  if (!(p.a < p.b)) throw Error(ErrorCode::invalid_params, "bump_eta needs a < b");
  if (x <= p.a) return {1.0, 0.0};
  if (x >= p.b) return {0.0, 0.0};
  const double d = x - p.b;
  const double e = std::exp((x - p.a) / d);
  return {e, e * (p.a - p.b) / (d * d)};
}

FieldValue ScalarField::evaluate(const ChartState& s) const {
  if (s.kind != kind_) {
    throw Error(ErrorCode::invalid_input, "field '" + name_ + "' evaluated on a " +
                                              std::string(chart::to_string(s.kind)) + " state");
  }
  return eval_(s);
}

namespace {

void axpy(std::vector<Point>& y, double a, const std::vector<Point>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + a * x[i];
}

// 1/A + w Phi on the closed polygon, as a vertex field.
VertexField cycle_core(const std::vector<Point>& v) {
  const VertexField area = polygon_area(v);
  if (!(area.value > 0.0)) throw Error(ErrorCode::invalid_input, "polygon is not positively oriented");
  VertexField out;
  out.value = 1.0 / area.value;
  out.gradient.assign(v.size(), Point{});
  axpy(out.gradient, -1.0 / (area.value * area.value), area.gradient);

  const VertexField w = nonconvexity_weight(v);
  if (w.value > 0.0) {
    const auto edges = chain_edges(static_cast<int>(v.size()), true);
    const VertexField phi = strain_energy(v, edges);
    out.value += w.value * phi.value;
    axpy(out.gradient, w.value, phi.gradient);
    axpy(out.gradient, phi.value, w.gradient);
  }
  return out;
}

FieldValue eval_arm_linkage(const ChartState& s) { return strain_energy(s); }

FieldValue eval_arm_config(const ChartState& s) {
  FieldValue out = strain_energy(s);
  const FieldValue straight = strain_energy(project_straight(s));
  const FieldValue h = h_straight(s.lengths);
  out.value += h.value - straight.value;
  // Phi o straight does not depend on theta.
  for (std::size_t i = 0; i < s.lengths.size(); ++i) {
    out.gradient[i] += h.gradient[i] - straight.gradient[i];
  }
  return out;
}

FieldValue eval_cycle_linkage(const ChartState& s) {
  const std::vector<Point> v = chart::embed(s);
  const VertexField core = cycle_core(v);
  return {core.value, chart::pull_back(s, core.gradient)};
}

FieldValue eval_cycle_config(const ChartState& s) {
  const std::vector<Point> v = chart::embed(s);
  const std::vector<double> l = geom::side_lengths(v);
  VertexField core = cycle_core(v);

  const geom::CocircularArea at = geom::cocircular_area(l);
  const FieldValue h = h_cocircular(l);
  core.value += h.value - 1.0 / at.area;

  const std::size_t m = v.size();
  const double inv_at2 = 1.0 / (at.area * at.area);
  for (std::size_t i = 0; i < m; ++i) {
    const double c = inv_at2 * at.gradient[i] + h.gradient[i];
    const Point u = (1.0 / l[i]) * (v[(i + 1) % m] - v[i]);
    core.gradient[(i + 1) % m] = core.gradient[(i + 1) % m] + c * u;
    core.gradient[i] = core.gradient[i] - c * u;
  }
  return {core.value, chart::pull_back(s, core.gradient)};
}

}  // namespace

ScalarField lr_function(LinkageKind kind) {
  switch (kind) {
    case LinkageKind::arm_linkage: return {kind, "Phi", eval_arm_linkage};
    case LinkageKind::arm_config: return {kind, "Phi - Phi o straight + h o straight", eval_arm_config};
    case LinkageKind::cycle_linkage: return {kind, "1/A + w Phi", eval_cycle_linkage};
    case LinkageKind::cycle_config:
      return {kind, "1/A - 1/(A o cocircular) + w Phi + h o cocircular", eval_cycle_config};
  }
  throw Error(ErrorCode::invalid_input, "unknown linkage kind");
}

}  // namespace linkfold::energy
