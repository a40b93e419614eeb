#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkfold/geom.hpp"

namespace linkfold::chart {

using geom::Point;

/// The four moduli spaces: open/closed chains with fixed (linkage) or free
/// (configuration) edge lengths.
enum class LinkageKind { arm_linkage, arm_config, cycle_linkage, cycle_config };

std::string_view to_string(LinkageKind kind);
LinkageKind parse_kind(std::string_view name);
inline bool is_cycle(LinkageKind k) {
  return k == LinkageKind::cycle_linkage || k == LinkageKind::cycle_config;
}
inline bool has_free_lengths(LinkageKind k) {
  return k == LinkageKind::arm_config || k == LinkageKind::cycle_config;
}

/// Edge lengths rho_1..rho_{m-1} and edge directions theta_2..theta_{m-1}
/// relative to the first edge. Angles are kept wrapped to (-pi, pi].
struct ArmChart {
  std::vector<double> rho;
  std::vector<double> theta;
};

/// Fixed side lengths l_1..l_m of a closed chain plus the directions
/// theta_2..theta_{m-1}; the closing side is implied by u(theta) = 0.
struct CycleChart {
  std::vector<double> lengths;
  std::vector<double> theta;
};

/// A point of one of the moduli spaces in chart coordinates.
///
/// `lengths` holds rho_1..rho_{m-1} for arm kinds and for cycle
/// configurations (whose closing side is derived), and l_1..l_m for cycle
/// linkages. The free coordinates used by flows are theta for the linkage
/// kinds and (rho, theta) for the configuration kinds.
struct ChartState {
  LinkageKind kind = LinkageKind::arm_linkage;
  std::vector<double> lengths;
  std::vector<double> theta;

  int vertex_count() const { return static_cast<int>(theta.size()) + 2; }
};

ChartState make_state(LinkageKind kind, const ArmChart& chart);
ChartState make_state(const CycleChart& chart);
ArmChart arm_chart(const ChartState& s);

double wrap_angle(double a);

/// v1 = (0,0), v2 = (rho_1, 0), v_{k+1} = v_k + rho_k (cos theta_k, sin theta_k).
std::vector<Point> arm_embed(const ArmChart& chart);

/// Inverse of arm_embed modulo orientation-preserving isometries.
ArmChart arm_extract(std::span<const Point> vertices);

/// Vertex positions of a chart state (open chain; closing side implicit).
std::vector<Point> embed(const ChartState& s);

/// Chart state of the given kind from vertex positions. For cycle kinds the
/// vertices describe the closed polygon (the closing side is not repeated).
ChartState from_vertices(LinkageKind kind, std::span<const Point> vertices);

/// All side lengths of the closed polygon of a cycle state.
std::vector<double> cycle_side_lengths(const ChartState& s);

/// Closure residual u(theta) = |v_m - v_1| - l_m and its theta-gradient.
struct ConstraintValue {
  double u = 0.0;
  std::vector<double> grad;
};
ConstraintValue cycle_constraint(std::span<const double> theta, std::span<const double> lengths);

/// Newton steps theta -= u grad u / |grad u|^2 (at most `max_iter`) on a cycle
/// linkage. Returns nullopt unless |u| <= tol * l_m afterwards.
std::optional<ChartState> restore_closure(ChartState s, double tol, int max_iter = 5);

// Free coordinates ----------------------------------------------------------

std::vector<double> free_coordinates(const ChartState& s);

/// Replace the free coordinates; theta is re-wrapped. Non-positive lengths are
/// rejected with invalid_input.
ChartState with_free_coordinates(const ChartState& s, std::span<const double> x);

/// Chain rule through the embedding: given dF/dv_j for every vertex, returns
/// dF/dx over the state's free coordinates.
std::vector<double> pull_back(const ChartState& s, std::span<const Point> vertex_gradient);

/// Distance between two states of the same kind and shape: Euclidean in the
/// free coordinates with theta differences taken on the circle.
double chart_distance(const ChartState& a, const ChartState& b);

/// Componentwise difference b - a of the free coordinates, shortest arc for
/// angles (ties at exactly pi go in the positive direction).
std::vector<double> chart_difference(const ChartState& a, const ChartState& b);

// Validation ----------------------------------------------------------------

struct ValidityReport {
  bool simple = false;
  bool positively_oriented = true;
  bool lengths_feasible = true;
  bool on_constraint = true;
  double constraint_residual = 0.0;
  std::string reason;

  bool valid() const { return simple && positively_oriented && lengths_feasible && on_constraint; }
};

/// Relative closure tolerance (units of l_m) for on-manifold cycle linkages.
inline constexpr double kConstraintTol = 1e-9;

ValidityReport validate(const ChartState& s, double constraint_tol = kConstraintTol);

}  // namespace linkfold::chart
