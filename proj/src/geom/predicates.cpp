#include <algorithm>
#include <cmath>
#include <numbers>

#include "linkfold/error.hpp"
#include "linkfold/geom.hpp"

namespace linkfold::geom {

namespace {

constexpr double kOrientEps = 1e-12;

double bbox_scale(std::span<const Point> v) {
  double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
  for (const Point& p : v) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return std::max(xmax - xmin, ymax - ymin);
}

// q is known to be collinear with segment ab (within the dead band); check it
// lies inside the segment's extent.
bool within_extent(Point a, Point b, Point q, double tol) {
  return q.x >= std::min(a.x, b.x) - tol && q.x <= std::max(a.x, b.x) + tol &&
         q.y >= std::min(a.y, b.y) - tol && q.y <= std::max(a.y, b.y) + tol;
}

bool segments_meet(Point p1, Point p2, Point q1, Point q2, double scale) {
  const int o1 = orientation(p1, p2, q1, scale);
  const int o2 = orientation(p1, p2, q2, scale);
  const int o3 = orientation(q1, q2, p1, scale);
  const int o4 = orientation(q1, q2, p2, scale);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  const double tol = kOrientEps * scale;
  if (o1 == 0 && within_extent(p1, p2, q1, tol)) return true;
  if (o2 == 0 && within_extent(p1, p2, q2, tol)) return true;
  if (o3 == 0 && within_extent(q1, q2, p1, tol)) return true;
  if (o4 == 0 && within_extent(q1, q2, p2, tol)) return true;
  return false;
}

}  // namespace

double signed_area(std::span<const Point> vertices) {
  if (vertices.size() < 3) {
    throw Error(ErrorCode::invalid_input, "signed_area needs at least 3 vertices");
  }
  const std::size_t n = vertices.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(vertices[i], vertices[(i + 1) % n]);
  }
  return 0.5 * twice;
}

int orientation(Point a, Point b, Point c, double scale) {
  const double s2 = scale * scale;
  const double v = cross(b - a, c - a) / (s2 > 0.0 ? s2 : 1.0);
  if (v > kOrientEps) return 1;
  if (v < -kOrientEps) return -1;
  return 0;
}

bool is_simple(std::span<const Point> v, bool closed) {
  const std::size_t n = v.size();
  if (n < 2 || (closed && n < 3)) return false;
  for (const Point& p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  }
  const double scale = bbox_scale(v);
  if (!(scale > 0.0)) return false;

  const std::size_t nseg = closed ? n : n - 1;
  auto seg = [&](std::size_t s) {
    return std::pair<std::size_t, std::size_t>{s, (s + 1) % n};
  };
  for (std::size_t s = 0; s < nseg; ++s) {
    auto [a, b] = seg(s);
    if (distance(v[a], v[b]) <= kOrientEps * scale) return false;
  }

  for (std::size_t s = 0; s < nseg; ++s) {
    for (std::size_t t = s + 1; t < nseg; ++t) {
      auto [a, b] = seg(s);
      auto [c, d] = seg(t);
      std::size_t shared = n;
      if (b == c) {
        shared = b;
      } else if (d == a) {
        shared = a;
      }
      if (shared != n) {
        // Adjacent: they may only touch at the shared vertex, so the two far
        // endpoints must not fold back onto the common line.
        const std::size_t far1 = (shared == b) ? a : b;
        const std::size_t far2 = (shared == c) ? d : c;
        const Point u = v[far1] - v[shared];
        const Point w = v[far2] - v[shared];
        if (orientation(v[shared], v[far1], v[far2], scale) == 0 && dot(u, w) > 0.0) {
          return false;
        }
        // A closed triangle's third side is adjacent to both others; nothing
        // more to test for it.
        continue;
      }
      if (segments_meet(v[a], v[b], v[c], v[d], scale)) return false;
    }
  }
  return true;
}

std::vector<double> turning_angles(std::span<const Point> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i] - v[(i + n - 1) % n];
    const Point b = v[(i + 1) % n] - v[i];
    out[i] = std::atan2(cross(a, b), dot(a, b));
  }
  return out;
}

std::vector<double> interior_angles(std::span<const Point> v) {
  if (v.size() < 3 || !is_simple(v, true)) {
    throw Error(ErrorCode::invalid_input, "interior_angles: polygon is not simple");
  }
  if (signed_area(v) <= 0.0) {
    throw Error(ErrorCode::invalid_input, "interior_angles: polygon is negatively oriented");
  }
  std::vector<double> alpha = turning_angles(v);
  for (double& a : alpha) a = std::numbers::pi - a;
  return alpha;
}

std::vector<double> side_lengths(std::span<const Point> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = distance(v[i], v[(i + 1) % n]);
  return out;
}

}  // namespace linkfold::geom
