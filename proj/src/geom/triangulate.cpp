#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "linkfold/error.hpp"
#include "linkfold/geom.hpp"

namespace linkfold::geom {

namespace {

constexpr double kLawsonSlack = 1e-9;

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

double angle_at(Point apex, Point a, Point b) {
  const Point u = a - apex;
  const Point w = b - apex;
  return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

bool contains_edge(const std::array<int, 3>& t, int a, int b) {
  const bool ha = t[0] == a || t[1] == a || t[2] == a;
  const bool hb = t[0] == b || t[1] == b || t[2] == b;
  return ha && hb;
}

int third_vertex(const std::array<int, 3>& t, int a, int b) {
  for (int v : t) {
    if (v != a && v != b) return v;
  }
  return -1;
}

std::array<int, 3> ccw(std::array<int, 3> t, std::span<const Point> v) {
  if (cross(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]) < 0.0) std::swap(t[1], t[2]);
  return t;
}

// Indices of the two triangles sharing the edge (a, b).
std::pair<int, int> adjacent_triangles(const Triangulation& t, int a, int b) {
  int first = -1;
  int second = -1;
  for (int k = 0; k < static_cast<int>(t.triangles.size()); ++k) {
    if (contains_edge(t.triangles[k], a, b)) {
      if (first < 0) {
        first = k;
      } else {
        second = k;
      }
    }
  }
  return {first, second};
}

Triangulation ear_clip(std::span<const Point> v) {
  const int n = static_cast<int>(v.size());
  double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
  for (const Point& p : v) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double scale = std::max(xmax - xmin, ymax - ymin);
  const int sign = signed_area(v) > 0.0 ? 1 : -1;

  Triangulation out;
  out.n_vertices = n;
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;

  while (ring.size() > 3) {
    const int r = static_cast<int>(ring.size());
    int best = -1;
    for (int k = 0; k < r; ++k) {
      const int p = ring[(k + r - 1) % r];
      const int c = ring[k];
      const int q = ring[(k + 1) % r];
      if (orientation(v[p], v[c], v[q], scale) != sign) continue;
      bool blocked = false;
      for (int other : ring) {
        if (other == p || other == c || other == q) continue;
        const int o1 = orientation(v[p], v[c], v[other], scale) * sign;
        const int o2 = orientation(v[c], v[q], v[other], scale) * sign;
        const int o3 = orientation(v[q], v[p], v[other], scale) * sign;
        if (o1 >= 0 && o2 >= 0 && o3 >= 0) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      // Deterministic choice: leftmost, then lowest ear tip.
      if (best < 0) {
        best = k;
      } else {
        const Point cur = v[ring[best]];
        const Point cand = v[c];
        if (cand.x < cur.x || (cand.x == cur.x && cand.y < cur.y)) best = k;
      }
    }
    if (best < 0) {
      throw Error(ErrorCode::invalid_input, "triangulate: no ear found (degenerate polygon)");
    }
    const int p = ring[(best + r - 1) % r];
    const int c = ring[best];
    const int q = ring[(best + 1) % r];
    out.triangles.push_back(ccw({p, c, q}, v));
    out.diagonals.push_back(ordered(p, q));
    ring.erase(ring.begin() + best);
  }
  out.triangles.push_back(ccw({ring[0], ring[1], ring[2]}, v));
  return out;
}

void lawson_flip(Triangulation& t, std::span<const Point> v) {
  const long budget = 10L * t.n_vertices * t.n_vertices;
  long flips = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& diag : t.diagonals) {
      const auto [a, b] = diag;
      const auto [k1, k2] = adjacent_triangles(t, a, b);
      const int c = third_vertex(t.triangles[k1], a, b);
      const int d = third_vertex(t.triangles[k2], a, b);
      const double beta = angle_at(v[c], v[a], v[b]);
      const double gamma = angle_at(v[d], v[a], v[b]);
      if (beta + gamma <= std::numbers::pi + kLawsonSlack) continue;
      if (++flips > budget) {
        throw Error(ErrorCode::convergence_failure, "triangulate: Lawson flip budget exhausted");
      }
      t.triangles[k1] = ccw({c, d, a}, v);
      t.triangles[k2] = ccw({d, c, b}, v);
      diag = ordered(c, d);
      changed = true;
    }
  }
}

}  // namespace

Triangulation triangulate(std::span<const Point> vertices, bool lawson) {
  if (vertices.size() < 3 || !is_simple(vertices, true)) {
    throw Error(ErrorCode::invalid_input, "triangulate: polygon is not simple");
  }
  Triangulation t = ear_clip(vertices);
  if (lawson) lawson_flip(t, vertices);
  return t;
}

Triangulation fan_triangulation(int n, int apex) {
  if (n < 3 || apex < 0 || apex >= n) {
    throw Error(ErrorCode::invalid_input, "fan_triangulation: bad arguments");
  }
  Triangulation t;
  t.n_vertices = n;
  for (int k = 1; k <= n - 2; ++k) {
    const int j = (apex + k) % n;
    const int j1 = (apex + k + 1) % n;
    t.triangles.push_back({apex, j, j1});
    if (k >= 2) t.diagonals.push_back(ordered(apex, j));
  }
  return t;
}

std::vector<std::pair<double, double>> opposite_angles(const Triangulation& t,
                                                       std::span<const Point> v) {
  std::vector<std::pair<double, double>> out;
  out.reserve(t.diagonals.size());
  for (const auto& [a, b] : t.diagonals) {
    const auto [k1, k2] = adjacent_triangles(t, a, b);
    if (k1 < 0 || k2 < 0) {
      throw Error(ErrorCode::invalid_input, "opposite_angles: diagonal without two triangles");
    }
    const int c = third_vertex(t.triangles[k1], a, b);
    const int d = third_vertex(t.triangles[k2], a, b);
    out.emplace_back(angle_at(v[c], v[a], v[b]), angle_at(v[d], v[a], v[b]));
  }
  return out;
}

bool is_valid_triangulation(const Triangulation& t) {
  const int n = t.n_vertices;
  if (n < 3) return false;
  if (static_cast<int>(t.triangles.size()) != n - 2) return false;
  if (static_cast<int>(t.diagonals.size()) != n - 3) return false;

  std::map<std::pair<int, int>, int> uses;
  for (const auto& tri : t.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (a < 0 || a >= n || a == b) return false;
      ++uses[ordered(a, b)];
    }
  }
  auto is_side = [n](std::pair<int, int> e) {
    return e.second - e.first == 1 || (e.first == 0 && e.second == n - 1);
  };
  for (int i = 0; i < n; ++i) {
    auto it = uses.find(ordered(i, (i + 1) % n));
    if (it == uses.end() || it->second != 1) return false;
  }
  std::map<std::pair<int, int>, int> diag_seen;
  for (const auto& d : t.diagonals) {
    const auto e = ordered(d.first, d.second);
    if (is_side(e) || ++diag_seen[e] > 1) return false;
    auto it = uses.find(e);
    if (it == uses.end() || it->second != 2) return false;
  }
  for (const auto& [e, count] : uses) {
    if (!is_side(e) && diag_seen.find(e) == diag_seen.end()) return false;
  }
  return true;
}

}  // namespace linkfold::geom
