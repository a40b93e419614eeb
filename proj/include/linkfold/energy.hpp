#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "linkfold/chart.hpp"
#include "linkfold/geom.hpp"

namespace linkfold::energy {

using chart::ChartState;
using chart::LinkageKind;
using geom::Point;

/// A scalar together with its gradient in some coordinate system.
struct FieldValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// A scalar of vertex positions together with dF/dv for every vertex.
struct VertexField {
  double value = 0.0;
  std::vector<Point> gradient;
};

using Edge = std::pair<int, int>;

/// Edges of the open chain (closed = false) or polygon on m vertices.
std::vector<Edge> chain_edges(int m, bool closed);

/// Inverse-square self-avoidance barrier summed over (edge, off-edge vertex)
/// pairs. Throws near_contact when a denominator drops to 1e-14 or below.
VertexField strain_energy(std::span<const Point> vertices, std::span<const Edge> edges);

/// Enclosed (shoelace) area with its vertex gradient.
VertexField polygon_area(std::span<const Point> vertices);

/// Nonconvexity weight w = (1/m) sum_i w_i, where w_i = exp(1/(pi - alpha_i))
/// at reflex vertices and 0 elsewhere.
VertexField nonconvexity_weight(std::span<const Point> vertices);

// Chart-level versions: gradients are over the state's free coordinates.
FieldValue strain_energy(const ChartState& s);
FieldValue area_theta(const ChartState& s);
FieldValue nonconvexity_w(const ChartState& s);

/// Triangulated polygon area in diagonal-length coordinates.
struct AreaLambda {
  double area = 0.0;
  std::vector<double> gradient;  // dA/dlambda_i
  Eigen::MatrixXd hessian;       // d2A/dlambda_i dlambda_j
};

/// `side_lengths[i]` is the side joining vertex i and i+1 (mod m);
/// `diagonal_lengths[d]` belongs to `t.diagonals[d]`.
AreaLambda area_lambda(std::span<const double> side_lengths,
                       std::span<const double> diagonal_lengths,
                       const geom::Triangulation& t);

/// lambda (cot beta + cot gamma) / 2 written in the product form.
double diagonal_area_derivative(double lambda, double beta, double gamma);

/// sum log^2 rho_i; unique critical point at all rho_i = 1.
FieldValue h_straight(std::span<const double> rho);

/// log^2 L - sum log sin(2 pi l_i / L); unique critical point at l_i = 1/m.
FieldValue h_cocircular(std::span<const double> lengths);

/// Straight configuration with the same lengths (all theta = 0).
ChartState project_straight(const ChartState& s);

/// Cocircular polygon with the same side lengths, in the same kind.
ChartState project_cocircular(const ChartState& s);

struct BumpParams {
  double a = 0.0;
  double b = 1.0;
};

/// Smooth cutoff: 1 on (-inf, a], exp((x-a)/(x-b)) on (a, b), 0 on [b, inf).
/// Returns (value, derivative). Throws invalid_params unless a < b.
std::pair<double, double> bump_eta(BumpParams params, double x);

/// A chart-coordinate scalar field with analytic gradient.
class ScalarField {
 public:
  using Evaluator = std::function<FieldValue(const ChartState&)>;

  ScalarField(LinkageKind kind, std::string name, Evaluator eval)
      : kind_(kind), name_(std::move(name)), eval_(std::move(eval)) {}

  LinkageKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  FieldValue evaluate(const ChartState& s) const;
  double value(const ChartState& s) const { return evaluate(s).value; }
  std::vector<double> gradient(const ChartState& s) const { return evaluate(s).gradient; }

 private:
  LinkageKind kind_;
  std::string name_;
  Evaluator eval_;
};

/// The Lyapunov-Reeb function for each moduli space:
///   arm_linkage    f = Phi
///   arm_config     f = Phi - Phi o straight + h_straight o straight
///   cycle_linkage  f = 1/A + w Phi
///   cycle_config   f = 1/A - 1/(A o cocircular) + w Phi + h_cocircular o cocircular
ScalarField lr_function(LinkageKind kind);

}  // namespace linkfold::energy
