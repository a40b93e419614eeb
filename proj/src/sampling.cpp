#include "linkfold/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "linkfold/error.hpp"

namespace linkfold::sampling {

namespace {

constexpr double kClearance = 0.05;
constexpr int kMaxAttempts = 100000;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = geom::dot(d, d);
  double t = len2 > 0.0 ? geom::dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return geom::distance(p, a + t * d);
}

[[noreturn]] void give_up(const char* what) {
  throw Error(ErrorCode::convergence_failure, std::string("sampling: ") + what);
}

}  // namespace

double relative_clearance(const std::vector<Point>& v, bool closed) {
  const int n = static_cast<int>(v.size());
  const int edges = closed ? n : n - 1;
  double shortest = std::numeric_limits<double>::infinity();
  double nearest = std::numeric_limits<double>::infinity();
  for (int e = 0; e < edges; ++e) {
    const int i = e;
    const int j = (e + 1) % n;
    shortest = std::min(shortest, geom::distance(v[i], v[j]));
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      nearest = std::min(nearest, point_segment_distance(v[k], v[i], v[j]));
    }
  }
  return nearest / shortest;
}

std::array<double, 3> random_triangle(Rng& rng) {
  constexpr double kMinAngle = 0.1;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double a = uniform(rng, kMinAngle, std::numbers::pi);
    const double b = uniform(rng, kMinAngle, std::numbers::pi);
    const double c = std::numbers::pi - a - b;
    if (c < kMinAngle) continue;
    const double scale = uniform(rng, 0.5, 2.0);
    return {scale * std::sin(a), scale * std::sin(b), scale * std::sin(c)};
  }
  give_up("triangle");
}

std::vector<double> random_c1_lengths(Rng& rng, int m) {
  if (m < 3) throw Error(ErrorCode::invalid_params, "need m >= 3");
  std::vector<double> l(static_cast<std::size_t>(m));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (double& x : l) x = uniform(rng, 0.2, 1.0);
    const double total = std::accumulate(l.begin(), l.end(), 0.0);
    const double longest = *std::max_element(l.begin(), l.end());
    if (longest < 0.95 * (total - longest)) return l;
  }
  give_up("c1 lengths");
}

std::vector<Point> random_simple_polygon(Rng& rng, int m) {
  if (m < 3) throw Error(ErrorCode::invalid_params, "need m >= 3");
  const double min_gap = 0.3 * 2.0 * std::numbers::pi / m;
  std::vector<double> ang(static_cast<std::size_t>(m));
  std::vector<Point> v(static_cast<std::size_t>(m));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (double& a : ang) a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    std::sort(ang.begin(), ang.end());
    bool spaced = ang.front() + 2.0 * std::numbers::pi - ang.back() >= min_gap;
    for (int i = 1; i < m && spaced; ++i) spaced = ang[i] - ang[i - 1] >= min_gap;
    if (!spaced) continue;
    for (int i = 0; i < m; ++i) {
      const double r = uniform(rng, 0.3, 1.0);
      v[i] = {r * std::cos(ang[i]), r * std::sin(ang[i])};
    }
    if (geom::is_simple(v, true) && geom::signed_area(v) > 0.0 && relative_clearance(v, true) >= kClearance) {
      return v;
    }
  }
  give_up("simple polygon");
}

std::vector<Point> random_convex_polygon(Rng& rng, int m) {
  if (m < 3) throw Error(ErrorCode::invalid_params, "need m >= 3");
  const double min_gap = 0.3 * 2.0 * std::numbers::pi / m;
  std::vector<double> ang(static_cast<std::size_t>(m));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (double& a : ang) a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    std::sort(ang.begin(), ang.end());
    bool spaced = ang.front() + 2.0 * std::numbers::pi - ang.back() >= min_gap;
    for (int i = 1; i < m && spaced; ++i) spaced = ang[i] - ang[i - 1] >= min_gap;
    if (!spaced) continue;
    const double rx = uniform(rng, 0.5, 1.5);
    const double ry = uniform(rng, 0.5, 1.5);
    std::vector<Point> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) v[i] = {rx * std::cos(ang[i]), ry * std::sin(ang[i])};
    return v;
  }
  give_up("convex polygon");
}

std::vector<Point> random_untangled_polygon(Rng& rng, int m, double clearance) {
  if (m < 3) throw Error(ErrorCode::invalid_params, "need m >= 3");
  auto crosses = [](Point a, Point b, Point c, Point d) {
    return geom::cross(b - a, c - a) * geom::cross(b - a, d - a) < 0.0 &&
           geom::cross(d - c, a - c) * geom::cross(d - c, b - c) < 0.0;
  };
  std::vector<Point> v(static_cast<std::size_t>(m));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (Point& p : v) p = {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    // Each reversal strictly shortens the tour, so this terminates.
    bool changed = true;
    for (int pass = 0; changed && pass < 1000; ++pass) {
      changed = false;
      for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
          if (i == 0 && j == m - 1) continue;
          if (crosses(v[i], v[i + 1], v[j], v[(j + 1) % m])) {
            std::reverse(v.begin() + i + 1, v.begin() + j + 1);
            changed = true;
          }
        }
      }
    }
    if (!geom::is_simple(v, true)) continue;
    if (geom::signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
    if (relative_clearance(v, true) >= clearance) return v;
  }
  give_up("untangled polygon");
}

std::vector<Point> random_arm(Rng& rng, int m) {
  if (m < 2) throw Error(ErrorCode::invalid_params, "need m >= 2");
  std::vector<Point> v(static_cast<std::size_t>(m));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    double heading = uniform(rng, -std::numbers::pi, std::numbers::pi);
    v[0] = {0.0, 0.0};
    for (int i = 1; i < m; ++i) {
      if (i > 1) heading += uniform(rng, -2.2, 2.2);
      const double len = uniform(rng, 0.5, 1.5);
      v[i] = v[i - 1] + len * Point{std::cos(heading), std::sin(heading)};
    }
    if (m < 3) return v;
    if (geom::is_simple(v, false) && relative_clearance(v, false) >= kClearance) return v;
  }
  give_up("arm");
}

ChartState random_state(Rng& rng, chart::LinkageKind kind, int m) {
  if (!chart::is_cycle(kind)) return chart::make_state(kind, chart::arm_extract(random_arm(rng, m)));
  ChartState s = chart::from_vertices(kind, random_simple_polygon(rng, m));
  if (kind == chart::LinkageKind::cycle_linkage) {
    // Close exactly in the chart's own arithmetic.
    const std::vector<Point> e = chart::embed(s);
    s.lengths.back() = geom::distance(e.back(), e.front());
  }
  return s;
}

ChartState random_walk(Rng& rng, const ChartState& start, int steps, double step) {
  if (start.kind != chart::LinkageKind::cycle_linkage) {
    throw Error(ErrorCode::invalid_input, "random_walk needs a cycle linkage");
  }
  ChartState p = start;
  std::normal_distribution<double> normal;
  for (int k = 0; k < steps; ++k) {
    const chart::ConstraintValue c = chart::cycle_constraint(p.theta, p.lengths);
    std::vector<double> r(p.theta.size());
    for (double& x : r) x = normal(rng);
    double gg = 0.0;
    double rg = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      gg += c.grad[i] * c.grad[i];
      rg += r[i] * c.grad[i];
    }
    double nr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= rg / gg * c.grad[i];
      nr += r[i] * r[i];
    }
    nr = std::sqrt(nr);
    if (!(nr > 0.0)) continue;
    ChartState q = p;
    for (std::size_t i = 0; i < r.size(); ++i) q.theta[i] = chart::wrap_angle(q.theta[i] + step * r[i] / nr);
    std::optional<ChartState> fixed = chart::restore_closure(q, 1e-3 * chart::kConstraintTol, 20);
    if (!fixed || !chart::validate(*fixed).valid()) continue;
    if (relative_clearance(chart::embed(*fixed), true) < kClearance) continue;
    p = std::move(*fixed);
  }
  return p;
}

std::pair<ChartState, ChartState> random_same_length_pair(Rng& rng, int m, int walk_steps, double step) {
  ChartState p0 = random_state(rng, chart::LinkageKind::cycle_linkage, m);
  ChartState p1 = random_walk(rng, p0, walk_steps, step);
  return {std::move(p0), std::move(p1)};
}

}  // namespace linkfold::sampling
