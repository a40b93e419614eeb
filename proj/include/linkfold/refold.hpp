#pragma once

#include <optional>
#include <vector>

#include "linkfold/chart.hpp"
#include "linkfold/energy.hpp"
#include "linkfold/flow.hpp"

namespace linkfold::refold {

using chart::ChartState;
using chart::LinkageKind;

struct RefoldOptions {
  double delta = 0.25;
  int samples = 64;
  int max_iter = 400;
  flow::FlowOptions flow_opts;
};

struct Motion {
  LinkageKind kind = LinkageKind::arm_linkage;
  std::vector<ChartState> frames;  // p0 -> p1
  std::vector<bool> valid;         // validate() per frame; false where the pull-back failed
  int n0 = 0;
  energy::BumpParams params;
  std::vector<ChartState> geodesic;  // the connecting curve before pull-back

  bool all_valid() const;
};

/// Sampled curve from x0 to y0 with `samples` points, or nullopt when some
/// sample leaves the moduli space. Flat kinds use the straight segment in the
/// chart (angles along the shorter arc); cycle linkages follow the projected
/// descent of |theta - theta(y0)|^2 on the constraint set. Throws invalid_input
/// for mismatched kinds, dimensions or fixed lengths.
std::optional<std::vector<ChartState>> chart_geodesic(const ChartState& x0, const ChartState& y0,
                                                      int samples);

/// Connect p0 to p1: flow both by psi_delta until a chart geodesic joins the
/// images (n0 increments), then pull every interior sample back through n0
/// reversed bump flows. The first and last frames are p0 and p1 themselves.
/// Throws no_connection_found when max_iter increments do not suffice.
Motion refold(const ChartState& p0, const ChartState& p1, const RefoldOptions& opts);

/// Resample a polyline in chart space to `samples` points equally spaced in
/// chart distance.
std::vector<ChartState> resample(const std::vector<ChartState>& path, int samples);

}  // namespace linkfold::refold
