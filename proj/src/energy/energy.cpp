#include <cmath>
#include <map>
#include <numbers>

#include "linkfold/energy.hpp"
#include "linkfold/error.hpp"

namespace linkfold::energy {

namespace {

constexpr double kNearContact = 1e-14;
constexpr double kExponentFloor = -700.0;

Point perp_over_norm2(Point a) {
  const double n2 = geom::dot(a, a);
  return {-a.y / n2, a.x / n2};
}

}  // namespace

std::vector<Edge> chain_edges(int m, bool closed) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
  if (closed && m >= 3) e.emplace_back(m - 1, 0);
  return e;
}

VertexField strain_energy(std::span<const Point> p, std::span<const Edge> edges) {
  VertexField out;
  out.gradient.assign(p.size(), Point{});
  const int n = static_cast<int>(p.size());
  for (const auto& [i, j] : edges) {
    const Point eij = p[i] - p[j];
    const double dij = geom::norm(eij);
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const Point eik = p[i] - p[k];
      const Point ejk = p[j] - p[k];
      const double dik = geom::norm(eik);
      const double djk = geom::norm(ejk);
      const double D = dik + djk - dij;
      if (!(D > kNearContact)) {
        throw Error(ErrorCode::near_contact, "vertex touches a non-incident edge");
      }
      const double inv = 1.0 / D;
      out.value += inv * inv;
      const double dT = -2.0 * inv * inv * inv;
      const Point ui = (1.0 / dik) * eik;
      const Point uj = (1.0 / djk) * ejk;
      const Point uij = (1.0 / dij) * eij;
      out.gradient[i] = out.gradient[i] + dT * (ui - uij);
      out.gradient[j] = out.gradient[j] + dT * (uj + uij);
      out.gradient[k] = out.gradient[k] - dT * (ui + uj);
    }
  }
  return out;
}

VertexField polygon_area(std::span<const Point> v) {
  VertexField out;
  out.value = geom::signed_area(v);
  const std::size_t n = v.size();
  out.gradient.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = v[(i + n - 1) % n];
    const Point next = v[(i + 1) % n];
    out.gradient[i] = {0.5 * (next.y - prev.y), 0.5 * (prev.x - next.x)};
  }
  return out;
}

VertexField nonconvexity_weight(std::span<const Point> v) {
  const std::size_t n = v.size();
  VertexField out;
  out.gradient.assign(n, Point{});
  const double inv_m = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + n - 1) % n;
    const std::size_t in = (i + 1) % n;
    const Point a = v[i] - v[ip];
    const Point b = v[in] - v[i];
    const double turn = std::atan2(geom::cross(a, b), geom::dot(a, b));
    if (!(turn < 0.0)) continue;  // interior angle <= pi
    const double exponent = 1.0 / turn;
    if (exponent < kExponentFloor) continue;
    const double wi = std::exp(exponent);
    out.value += inv_m * wi;
    const double dw_dturn = -inv_m * wi / (turn * turn);
    const Point dta = -1.0 * perp_over_norm2(a);
    const Point dtb = perp_over_norm2(b);
    out.gradient[ip] = out.gradient[ip] - dw_dturn * dta;
    out.gradient[i] = out.gradient[i] + dw_dturn * (dta - dtb);
    out.gradient[in] = out.gradient[in] + dw_dturn * dtb;
  }
  return out;
}

FieldValue strain_energy(const ChartState& s) {
  const std::vector<Point> v = chart::embed(s);
  const auto edges = chain_edges(s.vertex_count(), chart::is_cycle(s.kind));
  const VertexField phi = strain_energy(v, edges);
  return {phi.value, chart::pull_back(s, phi.gradient)};
}

FieldValue area_theta(const ChartState& s) {
  if (!chart::is_cycle(s.kind)) {
    throw Error(ErrorCode::invalid_input, "area is defined for cycle states only");
  }
  const std::vector<Point> v = chart::embed(s);
  if (!geom::is_simple(v, true)) throw Error(ErrorCode::invalid_input, "polygon is not simple");
  const VertexField a = polygon_area(v);
  return {a.value, chart::pull_back(s, a.gradient)};
}

FieldValue nonconvexity_w(const ChartState& s) {
  if (!chart::is_cycle(s.kind)) {
    throw Error(ErrorCode::invalid_input, "w is defined for cycle states only");
  }
  const std::vector<Point> v = chart::embed(s);
  const VertexField w = nonconvexity_weight(v);
  return {w.value, chart::pull_back(s, w.gradient)};
}

double diagonal_area_derivative(double lambda, double beta, double gamma) {
  return lambda * std::sin(beta + gamma) / (2.0 * std::sin(beta) * std::sin(gamma));
}

AreaLambda area_lambda(std::span<const double> sides, std::span<const double> diagonals,
                       const geom::Triangulation& t) {
  const int m = t.n_vertices;
  if (static_cast<int>(sides.size()) != m || diagonals.size() != t.diagonals.size()) {
    throw Error(ErrorCode::invalid_input, "area_lambda: length vectors do not match triangulation");
  }
  // Edge key -> (diagonal index or -1, length).
  std::map<std::pair<int, int>, std::pair<int, double>> edge;
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    edge[{std::min(i, j), std::max(i, j)}] = {-1, sides[i]};
  }
  for (std::size_t d = 0; d < t.diagonals.size(); ++d) {
    const auto [a, b] = t.diagonals[d];
    edge[{std::min(a, b), std::max(a, b)}] = {static_cast<int>(d), diagonals[d]};
  }

  const int nd = static_cast<int>(diagonals.size());
  AreaLambda out;
  out.gradient.assign(nd, 0.0);
  out.hessian = Eigen::MatrixXd::Zero(nd, nd);
  for (const auto& tri : t.triangles) {
    std::array<int, 3> idx{};
    std::array<double, 3> len{};
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      auto it = edge.find({std::min(a, b), std::max(a, b)});
      if (it == edge.end()) throw Error(ErrorCode::invalid_input, "triangle edge not in triangulation");
      idx[k] = it->second.first;
      len[k] = it->second.second;
    }
    out.area += geom::triangle_area(len[0], len[1], len[2]);
    for (int k = 0; k < 3; ++k) {
      if (idx[k] < 0) continue;
      const int k1 = (k + 1) % 3;
      const int k2 = (k + 2) % 3;
      const auto pk = geom::triangle_area_partials(len[k], len[k1], len[k2]);
      out.gradient[idx[k]] += pk.dA_dli;
      out.hessian(idx[k], idx[k]) += pk.d2A_dli2;
      if (idx[k1] >= 0) {
        out.hessian(idx[k], idx[k1]) += pk.d2A_dlidlj;
        out.hessian(idx[k1], idx[k]) += pk.d2A_dlidlj;
      }
    }
  }
  return out;
}

FieldValue h_straight(std::span<const double> rho) {
  FieldValue out;
  out.gradient.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) throw Error(ErrorCode::invalid_input, "h_straight needs positive lengths");
    const double lg = std::log(rho[i]);
    out.value += lg * lg;
    out.gradient[i] = 2.0 * lg / rho[i];
  }
  return out;
}

FieldValue h_cocircular(std::span<const double> l) {
  if (!geom::satisfies_c1(l)) {
    throw Error(ErrorCode::infeasible_lengths, "h_cocircular: lengths violate (c1)");
  }
  double L = 0.0;
  for (double x : l) L += x;
  const double logL = std::log(L);
  const double k = 2.0 * std::numbers::pi / L;

  FieldValue out;
  out.value = logL * logL;
  double weighted_cot = 0.0;
  std::vector<double> cot(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double s = k * l[i];
    out.value -= std::log(std::sin(s));
    cot[i] = std::cos(s) / std::sin(s);
    weighted_cot += l[i] * cot[i];
  }
  out.gradient.resize(l.size());
  for (std::size_t j = 0; j < l.size(); ++j) {
    out.gradient[j] = 2.0 * logL / L - k * cot[j] + (k / L) * weighted_cot;
  }
  return out;
}

}  // namespace linkfold::energy
