#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace linkfold::geom {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Shoelace area; positive iff the vertex order is counterclockwise.
/// Throws invalid_input for fewer than three vertices.
double signed_area(std::span<const Point> vertices);

/// Orientation of (a, b, c) with a 1e-12 dead band on coordinates normalized
/// by `scale`. Returns +1 (left turn), -1 (right turn) or 0.
int orientation(Point a, Point b, Point c, double scale = 1.0);

/// True iff the polyline (or polygon when `closed`) is an embedding: no two
/// non-adjacent segments meet, adjacent segments share only their common
/// endpoint, and no edge has zero length.
bool is_simple(std::span<const Point> vertices, bool closed);

/// Interior angles of a simple, positively oriented polygon, each in (0, 2pi).
std::vector<double> interior_angles(std::span<const Point> vertices);

/// Signed exterior (turning) angles in (-pi, pi]; interior angle = pi - turn.
/// No validation is performed.
std::vector<double> turning_angles(std::span<const Point> vertices);

/// Side lengths of the closed polygon, side i joining vertex i and i+1 (mod n).
std::vector<double> side_lengths(std::span<const Point> vertices);

// ---------------------------------------------------------------------------
// Triangulation

struct Triangulation {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> diagonals;  // (i, j) with i < j
  std::vector<std::array<int, 3>> triangles;   // counterclockwise vertex triples
};

/// Ear-clipping triangulation of a simple polygon without added vertices.
/// With `lawson`, diagonals are then flipped until every diagonal has opposite
/// angles summing to at most pi + 1e-9 (flip budget 10 m^2).
Triangulation triangulate(std::span<const Point> vertices, bool lawson);

/// Fan triangulation from `apex` of a convex n-gon: diagonals (apex, j) for
/// every non-neighbour j, triangles ordered around the fan.
Triangulation fan_triangulation(int n, int apex);

/// The two angles opposite to each diagonal, in diagonal order.
std::vector<std::pair<double, double>> opposite_angles(const Triangulation& t,
                                                       std::span<const Point> vertices);

/// Structural check: triangle/diagonal counts and edge incidences.
bool is_valid_triangulation(const Triangulation& t);

// ---------------------------------------------------------------------------
// Triangle area calculus

struct TriangleAreaPartials {
  double dA_dli = 0.0;
  double d2A_dli2 = 0.0;
  double d2A_dlidlj = 0.0;
};

/// Derivatives of the area of the triangle with sides (li, lj, lk) with respect
/// to li (first and second) and the mixed li/lj derivative.
TriangleAreaPartials triangle_area_partials(double li, double lj, double lk);

/// Area of the triangle with the given sides; throws degenerate_triangle.
double triangle_area(double li, double lj, double lk);

/// Angle opposite to side `li` in the triangle (li, lj, lk).
double opposite_angle(double li, double lj, double lk);

// ---------------------------------------------------------------------------
// Cocircular polygons

struct CocircularSolution {
  double radius = 0.0;
  Point center;
  std::vector<double> central_angles;
  std::vector<Point> vertices;
  bool center_inside = true;
};

/// True iff every length is positive and strictly less than the sum of the
/// others.
bool satisfies_c1(std::span<const double> lengths);

/// The unique convex polygon inscribed in a circle with the given side
/// lengths, counterclockwise, with v1 = (0,0) and v2 = (l1, 0).
CocircularSolution cocircular_polygon(std::span<const double> lengths);

/// Area of the cocircular polygon and its gradient with respect to the side
/// lengths (signed apothems: dA/dl_i = +-sqrt(R^2 - l_i^2/4)).
struct CocircularArea {
  double area = 0.0;
  std::vector<double> gradient;
};
CocircularArea cocircular_area(std::span<const double> lengths);

/// Least-squares circle fit; returns max_i | |v_i - c| - R | / R.
double circumcircle_residual(std::span<const Point> vertices);

}  // namespace linkfold::geom
