#include <numbers>

#include "doctest.h"
#include "linkfold/chart.hpp"
#include "linkfold/error.hpp"
#include "support.hpp"

using namespace linkfold;
using namespace linkfold::chart;
using std::numbers::pi;

namespace {

void check_points(const std::vector<Point>& got, const std::vector<Point>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(got[i].x - want[i].x) <= tol);
    CHECK(std::abs(got[i].y - want[i].y) <= tol);
  }
}

ChartState unit_square() { return make_state(CycleChart{{1, 1, 1, 1}, {pi / 2, pi}}); }

}  // namespace

TEST_CASE("arm_embed examples") {
  check_points(arm_embed({{1, 1}, {0}}), {{0, 0}, {1, 0}, {2, 0}}, 0.0);
  check_points(arm_embed({{1, 1}, {pi / 2}}), {{0, 0}, {1, 0}, {1, 1}}, 1e-15);
  CHECK_THROWS_AS(arm_embed({{1, 1}, {0, 0}}), Error);
}

TEST_CASE("arm_extract examples") {
  const ArmChart a = arm_extract(std::vector<Point>{{5, 5}, {6, 5}, {6, 6}});
  CHECK(a.rho == std::vector<double>{1, 1});
  CHECK(a.theta[0] == doctest::Approx(pi / 2).epsilon(1e-15));
  const ArmChart b = arm_extract(std::vector<Point>{{0, 0}, {2, 0}, {2, -1}});
  CHECK(b.rho == std::vector<double>{2, 1});
  CHECK(b.theta[0] == doctest::Approx(-pi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(arm_extract(std::vector<Point>{{0, 0}, {0, 0}, {1, 0}}), Error);
}

TEST_CASE("arm_extract quotients out rotations and translations") {
  sampling::Rng rng(21);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int c = 0; c < 200; ++c) {
    const std::vector<Point> v = sampling::random_arm(rng, 3 + c % 6);
    const double r = u(rng);
    std::vector<Point> moved;
    for (const Point& p : v) moved.push_back({std::cos(r) * p.x - std::sin(r) * p.y + 3, std::sin(r) * p.x + std::cos(r) * p.y - 1});
    const ArmChart a = arm_extract(v), b = arm_extract(moved);
    CHECK(testing::max_abs_diff(a.rho, b.rho) < 1e-12);
    for (std::size_t i = 0; i < a.theta.size(); ++i) CHECK(std::abs(wrap_angle(a.theta[i] - b.theta[i])) < 1e-12);
  }
}

TEST_CASE("arm_embed and arm_extract round trip") {
  sampling::Rng rng(22);
  for (int c = 0; c < 300; ++c) {
    const ArmChart a = arm_extract(sampling::random_arm(rng, 2 + c % 8));
    const ArmChart b = arm_extract(arm_embed(a));
    CHECK(testing::max_abs_diff(a.rho, b.rho) < 1e-12);
    CHECK(testing::max_abs_diff(a.theta, b.theta) < 1e-12);
    const std::vector<Point> v = arm_embed(a);
    check_points(arm_embed(arm_extract(v)), v, 1e-12);
  }
}

TEST_CASE("wrap_angle keeps angles in (-pi, pi]") {
  CHECK(wrap_angle(pi) == pi);
  CHECK(wrap_angle(-pi) == pi);
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  sampling::Rng rng(23);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int c = 0; c < 1000; ++c) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -pi);
    CHECK(w <= pi);
    CHECK(std::abs(std::remainder(a - w, 2 * pi)) < 1e-12);
  }
}

TEST_CASE("cycle_constraint examples") {
  const std::vector<double> tri{1, 1, 1};
  CHECK(std::abs(cycle_constraint(std::vector<double>{2 * pi / 3}, tri).u) < 1e-15);
  const std::vector<double> sq{1, 1, 1, 1};
  CHECK(std::abs(cycle_constraint(std::vector<double>{pi / 2, pi}, sq).u) < 1e-15);
  CHECK_THROWS_AS(cycle_constraint(std::vector<double>{}, tri), Error);
}

TEST_CASE("cycle_constraint gradient matches finite differences") {
  sampling::Rng rng(24);
  for (int c = 0; c < 300; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 3 + c % 7);
    const ConstraintValue cv = cycle_constraint(s.theta, s.lengths);
    const std::vector<double> fd = testing::fd_gradient(
        [&](const std::vector<double>& t) { return cycle_constraint(t, s.lengths).u; }, s.theta, 1e-5);
    CHECK(testing::max_abs_diff(cv.grad, fd) < 1e-8);
    double norm = 0.0;
    for (double g : cv.grad) norm += g * g;
    CHECK(std::sqrt(norm) > 1e-10);
  }
}

TEST_CASE("cycle_constraint is invariant under 2pi wrapping") {
  sampling::Rng rng(25);
  for (int c = 0; c < 100; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 4 + c % 5);
    std::vector<double> t = s.theta;
    t[c % t.size()] += 2 * pi * (c % 2 ? 1 : -3);
    CHECK(std::abs(cycle_constraint(t, s.lengths).u - cycle_constraint(s.theta, s.lengths).u) < 1e-12);
  }
}

TEST_CASE("validate examples") {
  CHECK(validate(unit_square()).valid());
  const ChartState cw = make_state(CycleChart{{1, 1, 1, 1}, {-pi / 2, pi}});
  const ValidityReport r = validate(cw);
  CHECK_FALSE(r.valid());
  CHECK_FALSE(r.positively_oriented);
  CHECK(r.reason == "negative orientation");
  const ChartState bow = from_vertices(LinkageKind::cycle_linkage, std::vector<Point>{{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  const ValidityReport rb = validate(bow);
  CHECK_FALSE(rb.simple);
  CHECK(rb.reason == "not self-avoiding");
  ChartState off = unit_square();
  off.lengths.back() = 1.1;
  CHECK_FALSE(validate(off).on_constraint);
  const ChartState infeasible = make_state(CycleChart{{1, 1, 3}, {0.5}});
  CHECK_FALSE(validate(infeasible).valid());
}

TEST_CASE("validated cycle states are simple and positively oriented") {
  sampling::Rng rng(26);
  std::uniform_real_distribution<double> u(-pi, pi);
  int accepted = 0;
  for (int c = 0; c < 2000; ++c) {
    const int m = 4 + c % 4;
    std::vector<double> theta(static_cast<std::size_t>(m - 2));
    for (double& t : theta) t = u(rng);
    ChartState s = make_state(LinkageKind::arm_config, ArmChart{std::vector<double>(static_cast<std::size_t>(m - 1), 1.0), theta});
    s = from_vertices(LinkageKind::cycle_config, embed(s));
    if (!validate(s).valid()) continue;
    ++accepted;
    const std::vector<Point> v = embed(s);
    CHECK(geom::is_simple(v, true));
    CHECK(geom::signed_area(v) > 0.0);
  }
  CHECK(accepted > 50);
}

TEST_CASE("from_vertices and embed agree for every kind") {
  sampling::Rng rng(27);
  for (LinkageKind k : {LinkageKind::arm_linkage, LinkageKind::arm_config, LinkageKind::cycle_linkage, LinkageKind::cycle_config}) {
    for (int c = 0; c < 50; ++c) {
      const ChartState s = sampling::random_state(rng, k, 3 + c % 6);
      CHECK(validate(s).valid());
      const ChartState t = from_vertices(k, embed(s));
      CHECK(chart_distance(s, t) < 1e-12);
    }
  }
}

TEST_CASE("restore_closure returns to the constraint set") {
  sampling::Rng rng(28);
  std::normal_distribution<double> n(0, 1e-3);
  for (int c = 0; c < 100; ++c) {
    ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 4 + c % 5);
    for (double& t : s.theta) t += n(rng);
    const std::optional<ChartState> r = restore_closure(s, kConstraintTol);
    REQUIRE(r.has_value());
    CHECK(std::abs(cycle_constraint(r->theta, r->lengths).u) <= kConstraintTol * r->lengths.back());
  }
}

TEST_CASE("pull_back is the chain rule through the embedding") {
  sampling::Rng rng(29);
  for (LinkageKind k : {LinkageKind::arm_linkage, LinkageKind::arm_config, LinkageKind::cycle_linkage, LinkageKind::cycle_config}) {
    for (int c = 0; c < 30; ++c) {
      const ChartState s = sampling::random_state(rng, k, 3 + c % 6);
      // F(v) = sum_j <c_j, v_j> + |v_j|^2 with random c_j.
      std::vector<Point> coef(static_cast<std::size_t>(s.vertex_count()));
      std::uniform_real_distribution<double> u(-1, 1);
      for (Point& p : coef) p = {u(rng), u(rng)};
      auto F = [&](const std::vector<Point>& v) {
        double out = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) out += geom::dot(coef[j], v[j]) + geom::dot(v[j], v[j]);
        return out;
      };
      const std::vector<Point> v = embed(s);
      std::vector<Point> g(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) g[j] = coef[j] + 2.0 * v[j];
      const std::vector<double> analytic = pull_back(s, g);
      const std::vector<double> fd = testing::fd_gradient(
          [&](const std::vector<double>& x) { return F(embed(with_free_coordinates(s, x))); }, free_coordinates(s));
      CHECK(testing::max_abs_diff(analytic, fd) < 1e-6 * std::max(1.0, testing::max_abs(fd)));
    }
  }
}

TEST_CASE("chart_difference takes the shorter arc with ties toward +pi") {
  const ChartState a = make_state(LinkageKind::arm_linkage, ArmChart{{1, 1, 1}, {0.1, 3.0}});
  const ChartState b = make_state(LinkageKind::arm_linkage, ArmChart{{1, 1, 1}, {-0.1, -3.0}});
  const std::vector<double> d = chart_difference(a, b);
  CHECK(d[0] == doctest::Approx(-0.2));
  CHECK(d[1] == doctest::Approx(2 * pi - 6.0));
  const ChartState z = make_state(LinkageKind::arm_linkage, ArmChart{{1, 1}, {0.0}});
  const ChartState h = make_state(LinkageKind::arm_linkage, ArmChart{{1, 1}, {pi}});
  CHECK(chart_difference(z, h)[0] == doctest::Approx(pi));
  CHECK(chart_distance(a, b) == doctest::Approx(std::hypot(0.2, 2 * pi - 6.0)));
}

TEST_CASE("parse_kind round trips") {
  for (LinkageKind k : {LinkageKind::arm_linkage, LinkageKind::arm_config, LinkageKind::cycle_linkage, LinkageKind::cycle_config}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_kind("torus"), Error);
}
