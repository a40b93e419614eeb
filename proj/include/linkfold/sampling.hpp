#pragma once

#include <array>
#include <random>
#include <utility>
#include <vector>

#include "linkfold/chart.hpp"

namespace linkfold::sampling {

using chart::ChartState;
using geom::Point;
using Rng = std::mt19937_64;

/// Side lengths of a random non-degenerate triangle (each angle >= ~5 deg).
std::array<double, 3> random_triangle(Rng& rng);

/// m positive lengths satisfying (c1) with some margin.
std::vector<double> random_c1_lengths(Rng& rng, int m);

/// Star-shaped simple polygon around the origin, counterclockwise, with a
/// minimum vertex/edge clearance relative to its size.
std::vector<Point> random_simple_polygon(Rng& rng, int m);

/// Strictly convex polygon: sorted random angles on a random ellipse,
/// counterclockwise.
std::vector<Point> random_convex_polygon(Rng& rng, int m);

/// Random points untangled by 2-opt moves: a simple polygon that is usually
/// far from star-shaped. Counterclockwise, clearance at least `clearance`.
std::vector<Point> random_untangled_polygon(Rng& rng, int m, double clearance = 0.1);

/// Self-avoiding open chain on m vertices with edge lengths in [0.5, 1.5].
std::vector<Point> random_arm(Rng& rng, int m);

/// Random valid state of the given kind on m vertices.
ChartState random_state(Rng& rng, chart::LinkageKind kind, int m);

/// Random walk of `steps` tangent moves of length `step` on the constraint
/// set of a cycle linkage; moves that break validity or clearance are skipped.
ChartState random_walk(Rng& rng, const ChartState& start, int steps, double step);

/// Two valid cycle linkages with identical length vectors, the second reached
/// from the first by a random walk on the constraint set.
std::pair<ChartState, ChartState> random_same_length_pair(Rng& rng, int m, int walk_steps = 200,
                                                          double step = 0.05);

/// Smallest non-incident vertex-to-edge distance divided by the shortest edge.
double relative_clearance(const std::vector<Point>& v, bool closed);

}  // namespace linkfold::sampling
