#pragma once

#include <vector>

#include "linkfold/chart.hpp"
#include "linkfold/energy.hpp"

namespace linkfold::flow {

using chart::ChartState;
using chart::LinkageKind;
using energy::BumpParams;
using energy::ScalarField;

struct FlowOptions {
  double step = 1e-2;  // initial (and maximal) time step
  double grad_tol = 1e-6;
  double t_max = 1e4;
  double constraint_tol = chart::kConstraintTol;
  int frame_stride = 1;
};

enum class Termination { converged, t_max_reached, guard_tripped };

std::string_view to_string(Termination t);

struct Trajectory {
  LinkageKind kind = LinkageKind::arm_linkage;
  std::vector<double> times;
  std::vector<ChartState> frames;
  std::vector<double> f_values;
  Termination termination = Termination::converged;
  int accepted_steps = 0;
  int rejected_steps = 0;
  double final_grad_norm = 0.0;  // max-norm of the (projected) gradient
  double max_constraint_residual = 0.0;  // |u| over accepted states, cycle linkages only
};

/// RK4 integration of dx/dt = -grad f over the free coordinates. Trial steps
/// that leave the moduli space or raise f are halved; below a 1e-12 step the
/// run ends with Termination::guard_tripped. Throws invalid_input for an
/// invalid start and for cycle linkages (use projected_flow).
Trajectory gradient_flow(const ScalarField& field, const ChartState& start, const FlowOptions& opts);

/// The same integrator with the gradient projected onto the tangent space of
/// u = 0 and a Newton correction along grad u after every step.
Trajectory projected_flow(const ScalarField& field, const ChartState& start, const FlowOptions& opts);

/// Flow of -eta_{a,b}(f) grad f (projected for cycle linkages) for signed time
/// s; negative s integrates the reversed field. Throws stalled on step
/// underflow.
ChartState bump_flow(const ScalarField& field, BumpParams params, const ChartState& start, double s,
                     const FlowOptions& opts);

struct ExpansiveReport {
  bool non_decreasing = false;  // no pairwise distance shrank
  bool strictly_increased = false;
  double min_change = 0.0;
  double max_change = 0.0;

  bool expansive() const { return non_decreasing && strictly_increased; }
};

/// Compares all pairwise vertex distances of two states; changes within
/// `tol` count as unchanged.
ExpansiveReport expansive_monitor(const ChartState& a, const ChartState& b, double tol = 1e-12);

}  // namespace linkfold::flow
