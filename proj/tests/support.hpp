#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "linkfold/chart.hpp"
#include "linkfold/sampling.hpp"

namespace testing {

using linkfold::geom::Point;

inline double heron(double a, double b, double c) {
  const double s = 0.5 * (a + b + c);
  return std::sqrt(s * (s - a) * (s - b) * (s - c));
}

// Central difference quotient D(h) improved by one Richardson step.
inline double richardson(const std::function<double(double)>& d, double h) {
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return richardson([&](double s) { return (f(x + s) - f(x - s)) / (2 * s); }, h);
}

// Gradient of g over x by central differences with a relative step.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& g,
                                       const std::vector<double>& x, double rel = 1e-6) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel * std::max(1.0, std::abs(x[i]));
    std::vector<double> p = x, q = x;
    p[i] += h;
    q[i] -= h;
    out[i] = (g(p) - g(q)) / (2 * h);
  }
  return out;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Exact segment intersection on integer-valued coordinates.
inline int orient(Point a, Point b, Point c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_meet(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  return o4 == 0 && on_segment(c, d, b);
}

// Brute-force simplicity oracle for integer-coordinate chains.
inline bool brute_simple(const std::vector<Point>& v, bool closed) {
  const std::size_t n = v.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t e = 0; e < edges; ++e) {
    if (v[e] == v[(e + 1) % n]) return false;
  }
  for (std::size_t e = 0; e < edges; ++e) {
    for (std::size_t f = e + 1; f < edges; ++f) {
      const Point a = v[e], b = v[(e + 1) % n], c = v[f], d = v[(f + 1) % n];
      const bool adjacent = f == e + 1 || (closed && e == 0 && f == edges - 1);
      if (!adjacent) {
        if (segments_meet(a, b, c, d)) return false;
        continue;
      }
      // Adjacent edges share one endpoint; they overlap iff they fold back.
      const Point shared = f == e + 1 ? b : a;
      const Point p = f == e + 1 ? a : b;
      const Point q = f == e + 1 ? d : c;
      if (orient(shared, p, q) == 0 &&
          (q.x - shared.x) * (p.x - shared.x) + (q.y - shared.y) * (p.y - shared.y) > 0) {
        return false;
      }
    }
  }
  return true;
}

inline bool frame_simple(const linkfold::chart::ChartState& s) {
  return linkfold::geom::is_simple(linkfold::chart::embed(s), linkfold::chart::is_cycle(s.kind));
}

}  // namespace testing
