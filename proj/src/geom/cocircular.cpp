#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "linkfold/error.hpp"
#include "linkfold/geom.hpp"

namespace linkfold::geom {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kAngleSumTol = 1e-10;

}  // namespace

bool satisfies_c1(std::span<const double> lengths) {
  if (lengths.size() < 3) return false;
  const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) return false;
    if (!(l < total - l)) return false;
  }
  return true;
}

// The solve runs on phi, half the central angle subtended by the longest side,
// rather than on the radius. With k_i = l_i / l_max every other side subtends
// 2 asin(k_i sin phi), R = l_max / (2 sin phi), and both the center-inside
// (phi <= pi/2) and center-outside (phi > pi/2) regimes are covered by
//   F(phi) = 2 phi + sum_{i != max} 2 asin(k_i sin phi) - 2 pi,
// which is smooth on (0, pi) even where dR/dphi vanishes. F(0+) = -2pi, F < 0
// left of its single interior root and F > 0 right of it under (c1).
CocircularSolution cocircular_polygon(std::span<const double> lengths) {
  if (!satisfies_c1(lengths)) {
    throw Error(ErrorCode::infeasible_lengths,
                "every length must be positive and shorter than the sum of the others");
  }
  const std::size_t n = lengths.size();
  const std::size_t imax =
      static_cast<std::size_t>(std::max_element(lengths.begin(), lengths.end()) - lengths.begin());
  const double lmax = lengths[imax];

  auto residual = [&](double phi) {
    const double s = std::sin(phi);
    double sum = 2.0 * phi - 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == imax) continue;
      sum += 2.0 * std::asin(std::min(1.0, lengths[i] / lmax * s));
    }
    return sum;
  };

  double lo = 0.0;
  double hi = std::numbers::pi;
  int iter = 0;
  for (; iter < kMaxBisection; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double phi = (std::abs(residual(lo)) < std::abs(residual(hi)) || hi >= std::numbers::pi)
                         ? lo
                         : hi;
  if (iter == kMaxBisection || !(std::abs(residual(phi)) < kAngleSumTol)) {
    throw Error(ErrorCode::convergence_failure, "cocircular_polygon: bisection did not converge");
  }

  CocircularSolution sol;
  sol.radius = lmax / (2.0 * std::sin(phi));
  sol.center_inside = phi <= 0.5 * std::numbers::pi;
  sol.central_angles.resize(n);
  const double s = std::sin(phi);
  for (std::size_t i = 0; i < n; ++i) {
    sol.central_angles[i] =
        (i == imax) ? 2.0 * phi : 2.0 * std::asin(std::min(1.0, lengths[i] / lmax * s));
  }

  // Side 1 along the positive x axis from the origin; interior on its left.
  const double R = sol.radius;
  const double c1 = sol.central_angles[0];
  sol.center = {0.5 * lengths[0], R * std::cos(0.5 * c1)};
  double psi = -0.5 * std::numbers::pi - 0.5 * c1;
  sol.vertices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.vertices[i] = sol.center + R * Point{std::cos(psi), std::sin(psi)};
    psi += sol.central_angles[i];
  }
  sol.vertices[0] = {0.0, 0.0};
  return sol;
}

CocircularArea cocircular_area(std::span<const double> lengths) {
  const CocircularSolution sol = cocircular_polygon(lengths);
  const double R = sol.radius;
  CocircularArea out;
  out.gradient.resize(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double c = sol.central_angles[i];
    out.area += 0.5 * R * R * std::sin(c);
    // Envelope identity: the area is stationary in the diagonal lengths at
    // the cocircular point, so only the explicit side dependence remains,
    // the signed apothem of side i.
    out.gradient[i] = R * std::cos(0.5 * c);
  }
  return out;
}

double circumcircle_residual(std::span<const Point> v) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::invalid_input, "circumcircle_residual needs 3 vertices");
  Point centroid{};
  for (const Point& p : v) centroid = centroid + p;
  centroid = (1.0 / static_cast<double>(n)) * centroid;
  double scale = 0.0;
  for (const Point& p : v) scale = std::max(scale, distance(p, centroid));
  if (!(scale > 0.0)) throw Error(ErrorCode::invalid_input, "circumcircle_residual: degenerate");

  // Algebraic (Kasa) fit of x^2 + y^2 + D x + E y + F = 0 in normalized
  // coordinates.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point q = (1.0 / scale) * (v[i] - centroid);
    a(i, 0) = q.x;
    a(i, 1) = q.y;
    a(i, 2) = 1.0;
    b(i) = -(q.x * q.x + q.y * q.y);
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Point c{-0.5 * sol(0), -0.5 * sol(1)};
  const double r2 = c.x * c.x + c.y * c.y - sol(2);
  if (!(r2 > 0.0)) return std::numeric_limits<double>::infinity();
  const double r = std::sqrt(r2);
  double worst = 0.0;
  for (const Point& p : v) {
    const Point q = (1.0 / scale) * (p - centroid);
    worst = std::max(worst, std::abs(distance(q, c) - r) / r);
  }
  return worst;
}

}  // namespace linkfold::geom
