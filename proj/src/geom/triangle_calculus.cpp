#include <algorithm>
#include <array>
#include <cmath>

#include "linkfold/error.hpp"
#include "linkfold/geom.hpp"

namespace linkfold::geom {

namespace {

// Sides closer than this (relative to the perimeter) to violating the triangle
// inequality are treated as degenerate.
constexpr double kDegenerateSlack = 1e-12;

void require_triangle(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || !std::isfinite(a + b + c)) {
    throw Error(ErrorCode::degenerate_triangle, "side lengths must be positive and finite");
  }
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  if (s[0] + s[1] - s[2] <= kDegenerateSlack * (a + b + c)) {
    throw Error(ErrorCode::degenerate_triangle, "triangle inequality violated");
  }
}

}  // namespace

double triangle_area(double li, double lj, double lk) {
  require_triangle(li, lj, lk);
  // Kahan's ordering keeps Heron's formula accurate for needle triangles.
  std::array<double, 3> s{li, lj, lk};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double a = s[0], b = s[1], c = s[2];
  return 0.25 * std::sqrt((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)));
}

double opposite_angle(double li, double lj, double lk) {
  require_triangle(li, lj, lk);
  const double s = 0.5 * (li + lj + lk);
  return 2.0 * std::atan2(std::sqrt((s - lj) * (s - lk)), std::sqrt(s * (s - li)));
}

TriangleAreaPartials triangle_area_partials(double li, double lj, double lk) {
  const double alpha_i = opposite_angle(li, lj, lk);
  const double alpha_k = opposite_angle(lk, li, lj);
  const double sin_i = std::sin(alpha_i);
  const double cot_i = std::cos(alpha_i) / sin_i;
  const double ratio = li / sin_i;
  const double upsilon = ratio * ratio * ratio / (2.0 * li * lj * lk);
  return {
      .dA_dli = 0.5 * li * cot_i,
      .d2A_dli2 = 0.5 * cot_i - upsilon,
      .d2A_dlidlj = upsilon * std::cos(alpha_k),
  };
}

}  // namespace linkfold::geom
