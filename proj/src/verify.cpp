#include "linkfold/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "linkfold/energy.hpp"
#include "linkfold/error.hpp"
#include "linkfold/flow.hpp"
#include "linkfold/sampling.hpp"

namespace linkfold::verify {

namespace {

using chart::ChartState;
using chart::LinkageKind;
using geom::Point;
using sampling::Rng;

std::string fmt(const char* label, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.3g", label, x);
  return buf;
}

// One Richardson step on a second-order difference quotient D(h).
double richardson(const std::function<double(double)>& d, double h) { return (4.0 * d(0.5 * h) - d(h)) / 3.0; }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Tracks the worst ratio err / tol seen over all cases of one check.
class Worst {
 public:
  void observe(double err, double tol) { worst_ = std::max(worst_, err / tol); }
  void fail(std::string why) {
    if (failure_.empty()) failure_ = std::move(why);
  }
  CheckResult result(std::string name, int cases) const {
    CheckResult r{std::move(name), failure_.empty() && worst_ <= 1.0, cases, failure_};
    if (r.detail.empty()) r.detail = fmt("worst err/tol", worst_);
    return r;
  }

 private:
  double worst_ = 0.0;
  std::string failure_;
};

CheckResult triangle_calculus(Rng& rng) {
  constexpr int kCases = 200;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const auto [a, b, d] = sampling::random_triangle(rng);
    // Step scaled by the distance from degeneracy keeps thin triangles accurate.
    const double semi = 0.5 * (a + b + d);
    const double h = 1e-2 * std::min({semi - a, semi - b, semi - d});
    auto area = [](double x, double y, double z) { return geom::triangle_area(x, y, z); };
    const geom::TriangleAreaPartials p = geom::triangle_area_partials(a, b, d);
    const double d1 = richardson([&](double s) { return (area(a + s, b, d) - area(a - s, b, d)) / (2 * s); }, h);
    const double d2 = richardson(
        [&](double s) { return (area(a + s, b, d) - 2 * area(a, b, d) + area(a - s, b, d)) / (s * s); }, h);
    const double dm = richardson(
        [&](double s) {
          return (area(a + s, b + s, d) - area(a + s, b - s, d) - area(a - s, b + s, d) + area(a - s, b - s, d)) /
                 (4 * s * s);
        },
        h);
    w.observe(std::abs(p.dA_dli - d1), 1e-6 * std::max(1.0, std::abs(d1)));
    w.observe(std::abs(p.d2A_dli2 - d2), 1e-6 * std::max(1.0, std::abs(d2)));
    w.observe(std::abs(p.d2A_dlidlj - dm), 1e-6 * std::max(1.0, std::abs(dm)));
  }
  return w.result("triangle area calculus vs finite differences", kCases);
}

struct Fan {
  std::vector<double> sides;
  std::vector<double> diagonals;
  geom::Triangulation t;
};

Fan make_fan(const std::vector<Point>& v) {
  Fan f;
  const int m = static_cast<int>(v.size());
  f.sides = geom::side_lengths(v);
  f.t = geom::fan_triangulation(m, 0);
  for (const auto& [i, j] : f.t.diagonals) f.diagonals.push_back(geom::distance(v[i], v[j]));
  return f;
}

// Smallest distance from degeneracy over the fan's triangles.
double fan_slack(const Fan& f) {
  const std::size_t m = f.sides.size();
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const double a = k == 0 ? f.sides[0] : f.diagonals[k - 1];
    const double b = f.sides[k + 1];
    const double c = k + 3 == m ? f.sides[m - 1] : f.diagonals[k];
    const double semi = 0.5 * (a + b + c);
    out = std::min({out, semi - a, semi - b, semi - c});
  }
  return out;
}

CheckResult area_lambda_calculus(Rng& rng) {
  constexpr int kCases = 50;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const std::vector<Point> v = sampling::random_convex_polygon(rng, uniform_int(rng, 4, 8));
    const Fan f = make_fan(v);
    const energy::AreaLambda al = energy::area_lambda(f.sides, f.diagonals, f.t);
    const double h = 1e-2 * fan_slack(f);
    const std::size_t n = f.diagonals.size();
    auto area = [&](std::size_t i, double si, std::size_t j, double sj) {
      std::vector<double> lam = f.diagonals;
      lam[i] += si;
      lam[j] += sj;
      return energy::area_lambda(f.sides, lam, f.t).area;
    };
    double gscale = 1.0;
    for (double g : al.gradient) gscale = std::max(gscale, std::abs(g));
    const double hscale = std::max(1.0, al.hessian.cwiseAbs().maxCoeff());
    const std::vector<std::pair<double, double>> opp = geom::opposite_angles(f.t, v);
    for (std::size_t i = 0; i < n; ++i) {
      const double fd = richardson([&](double s) { return (area(i, s, i, 0) - area(i, -s, i, 0)) / (2 * s); }, h);
      w.observe(std::abs(al.gradient[i] - fd), 1e-6 * gscale);
      const double direct = energy::diagonal_area_derivative(f.diagonals[i], opp[i].first, opp[i].second);
      w.observe(std::abs(al.gradient[i] - direct), 1e-6 * gscale);
      for (std::size_t j = 0; j < n; ++j) {
        const double fd2 = richardson(
            [&](double s) {
              return (area(i, s, j, s) - area(i, s, j, -s) - area(i, -s, j, s) + area(i, -s, j, -s)) / (4 * s * s);
            },
            h);
        w.observe(std::abs(al.hessian(i, j) - fd2), 1e-6 * hscale);
      }
    }
  }
  return w.result("diagonal-length area gradient and Hessian", kCases);
}

CheckResult cocircular_hessian(Rng& rng) {
  constexpr int kCases = 20;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const std::vector<double> l = sampling::random_c1_lengths(rng, uniform_int(rng, 4, 8));
    const Fan f = make_fan(geom::cocircular_polygon(l).vertices);
    const Eigen::MatrixXd hess = energy::area_lambda(f.sides, f.diagonals, f.t).hessian;
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues().maxCoeff();
    const double bound = -1e-9 * hess.norm();
    if (!(top < bound)) w.fail(fmt("eigenvalue", top));
  }
  return w.result("area Hessian negative definite at cocircular polygons", kCases);
}

CheckResult cocircular_solver(Rng& rng) {
  constexpr int kCases = 200;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const std::vector<double> l = sampling::random_c1_lengths(rng, uniform_int(rng, 3, 8));
    const geom::CocircularSolution s = geom::cocircular_polygon(l);
    double angle_sum = 0.0;
    for (double a : s.central_angles) angle_sum += a;
    w.observe(std::abs(angle_sum - 2.0 * std::numbers::pi), 1e-10);
    for (const Point& p : s.vertices) w.observe(std::abs(geom::distance(p, s.center) - s.radius), 1e-9 * s.radius);
    if (!geom::is_simple(s.vertices, true) || !(geom::signed_area(s.vertices) > 0.0)) w.fail("solution not simple");
  }
  return w.result("cocircular solver residuals", kCases);
}

CheckResult max_area(Rng& rng) {
  constexpr int kCases = 200;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const std::vector<Point> v = sampling::random_simple_polygon(rng, uniform_int(rng, 3, 8));
    const double a = geom::signed_area(v);
    const double at = geom::cocircular_area(geom::side_lengths(v)).area;
    w.observe(std::max(0.0, a - at), 1e-12);
  }
  return w.result("cocircular polygon maximizes area", kCases);
}

CheckResult lr_gradients(Rng& rng) {
  constexpr int kPerKind = 10;
  Worst w;
  for (LinkageKind kind : {LinkageKind::arm_linkage, LinkageKind::arm_config, LinkageKind::cycle_linkage,
                           LinkageKind::cycle_config}) {
    const energy::ScalarField f = energy::lr_function(kind);
    for (int c = 0; c < kPerKind; ++c) {
      const ChartState s = sampling::random_state(rng, kind, uniform_int(rng, 3, 7));
      const std::vector<double> g = f.gradient(s);
      const std::vector<double> x = chart::free_coordinates(s);
      double scale = 1.0;
      for (double gi : g) scale = std::max(scale, std::abs(gi));
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        std::vector<double> p = x, q = x;
        p[i] += h;
        q[i] -= h;
        const double fd = (f.value(chart::with_free_coordinates(s, p)) - f.value(chart::with_free_coordinates(s, q))) / (2 * h);
        w.observe(std::abs(g[i] - fd), 1e-5 * scale);
      }
    }
  }
  return w.result("Lyapunov-Reeb gradients vs finite differences", 4 * kPerKind);
}

CheckResult constraint_gradient(Rng& rng) {
  constexpr int kCases = 50;
  Worst w;
  for (int c = 0; c < kCases; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, uniform_int(rng, 3, 8));
    const chart::ConstraintValue cv = chart::cycle_constraint(s.theta, s.lengths);
    for (std::size_t i = 0; i < s.theta.size(); ++i) {
      constexpr double h = 1e-6;
      std::vector<double> p = s.theta, q = s.theta;
      p[i] += h;
      q[i] -= h;
      const double fd = (chart::cycle_constraint(p, s.lengths).u - chart::cycle_constraint(q, s.lengths).u) / (2 * h);
      w.observe(std::abs(cv.grad[i] - fd), 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
  return w.result("closure constraint gradient", kCases);
}

double theta_inf(const ChartState& s) {
  double out = 0.0;
  for (double t : s.theta) out = std::max(out, std::abs(t));
  return out;
}

CheckResult straighten(Rng& rng) {
  constexpr int kCases = 10;
  Worst w;
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  for (int c = 0; c < kCases; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, uniform_int(rng, 3, 8));
    const flow::Trajectory t = flow::gradient_flow(f, s, {});
    if (t.termination != flow::Termination::converged) w.fail(std::string("termination ") + std::string(flow::to_string(t.termination)));
    w.observe(theta_inf(t.frames.back()), 1e-3);
  }
  return w.result("straightening arm linkages", kCases);
}

CheckResult convexify(Rng& rng) {
  constexpr int kCases = 5;
  Worst w;
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_linkage);
  for (int c = 0; c < kCases; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, uniform_int(rng, 4, 8));
    const flow::Trajectory t = flow::projected_flow(f, s, {});
    if (t.termination != flow::Termination::converged) w.fail(std::string("termination ") + std::string(flow::to_string(t.termination)));
    w.observe(geom::circumcircle_residual(chart::embed(t.frames.back())), 1e-4);
    w.observe(t.max_constraint_residual, 1e-8 * s.lengths.back());
  }
  return w.result("convexifying cycle linkages", kCases);
}

CheckResult cycle_config(Rng& rng) {
  constexpr int kCases = 3;
  Worst w;
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_config);
  for (int c = 0; c < kCases; ++c) {
    const int m = uniform_int(rng, 3, 6);
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_config, m);
    const flow::Trajectory t = flow::gradient_flow(f, s, {});
    const std::vector<Point> v = chart::embed(t.frames.back());
    w.observe(geom::circumcircle_residual(v), 1e-3);
    const std::vector<double> l = geom::side_lengths(v);
    double total = 0.0;
    for (double x : l) total += x;
    w.observe(std::abs(total - 1.0), 1e-3);
    for (double x : l) w.observe(std::abs(x / total - 1.0 / m), 1e-3);
  }
  return w.result("cycle configuration flow reaches the regular polygon", kCases);
}

CheckResult bump_round_trip(Rng& rng) {
  constexpr int kCases = 5;
  Worst w;
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  for (int c = 0; c < kCases; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, uniform_int(rng, 3, 6));
    const double f0 = f.value(s);
    const energy::BumpParams p{f0 - 0.5 * std::abs(f0), f0 + std::abs(f0)};
    const ChartState fwd = flow::bump_flow(f, p, s, 0.5, {});
    const ChartState back = flow::bump_flow(f, p, fwd, -0.5, {});
    w.observe(chart::chart_distance(s, back), 1e-5);
    const ChartState fixed = flow::bump_flow(f, {f0 - 2.0, f0}, s, 0.5, {});
    if (chart::chart_distance(s, fixed) != 0.0) w.fail("state above b moved");
  }
  return w.result("bump flow round trip and fixed points", kCases);
}

}  // namespace

int Report::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; }));
}

int Report::failed() const { return static_cast<int>(checks.size()) - passed(); }

Report run_property_suite(std::uint64_t seed) {
  using Check = std::function<CheckResult(Rng&)>;
  const std::vector<std::pair<const char*, Check>> checks = {
      {"triangle area calculus vs finite differences", triangle_calculus},
      {"diagonal-length area gradient and Hessian", area_lambda_calculus},
      {"area Hessian negative definite at cocircular polygons", cocircular_hessian},
      {"cocircular solver residuals", cocircular_solver},
      {"cocircular polygon maximizes area", max_area},
      {"Lyapunov-Reeb gradients vs finite differences", lr_gradients},
      {"closure constraint gradient", constraint_gradient},
      {"straightening arm linkages", straighten},
      {"convexifying cycle linkages", convexify},
      {"cycle configuration flow reaches the regular polygon", cycle_config},
      {"bump flow round trip and fixed points", bump_round_trip},
  };
  Report report;
  // Each check gets its own stream so results do not depend on check order.
  for (std::size_t k = 0; k < checks.size(); ++k) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    try {
      report.checks.push_back(checks[k].second(rng));
    } catch (const Error& e) {
      report.checks.push_back({checks[k].first, false, 0, e.what()});
    }
  }
  return report;
}

}  // namespace linkfold::verify
