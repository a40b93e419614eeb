#include <numbers>

#include "doctest.h"
#include "linkfold/error.hpp"
#include "linkfold/flow.hpp"
#include "support.hpp"

using namespace linkfold;
using namespace linkfold::flow;
using chart::ArmChart;
using chart::CycleChart;
using geom::Point;
using std::numbers::pi;

namespace {

void check_trajectory_invariants(const Trajectory& t) {
  REQUIRE(!t.frames.empty());
  CHECK(t.frames.size() == t.times.size());
  CHECK(t.frames.size() == t.f_values.size());
  for (std::size_t k = 0; k < t.frames.size(); ++k) {
    CHECK(chart::validate(t.frames[k]).valid());
    if (k == 0) continue;
    CHECK(t.times[k] > t.times[k - 1]);
    CHECK(t.f_values[k] <= t.f_values[k - 1] + 1e-9 * std::max(1.0, std::abs(t.f_values[k - 1])));
  }
}

double theta_inf(const ChartState& s) { return testing::max_abs(s.theta); }

ChartState scaled(const ChartState& s, double factor) {
  std::vector<Point> v = chart::embed(s);
  for (Point& p : v) p = factor * p;
  return chart::from_vertices(s.kind, v);
}

}  // namespace

TEST_CASE("straight arm is already converged") {
  const ChartState s = chart::make_state(LinkageKind::arm_linkage, ArmChart{{1, 2, 1}, {0, 0}});
  const Trajectory t = gradient_flow(energy::lr_function(LinkageKind::arm_linkage), s, {});
  CHECK(t.termination == Termination::converged);
  CHECK(t.frames.size() == 1);
  CHECK(t.accepted_steps == 0);
}

TEST_CASE("arm linkages straighten") {
  sampling::Rng rng(51);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  for (int c = 0; c < 10; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 6);
    const Trajectory t = gradient_flow(f, s, {});
    CHECK(t.termination == Termination::converged);
    CHECK(theta_inf(t.frames.back()) < 1e-3);
    check_trajectory_invariants(t);
    // Lengths never move in a linkage flow.
    CHECK(t.frames.back().lengths == s.lengths);
    for (std::size_t k = 1; k < t.f_values.size(); ++k) CHECK(t.f_values[k] < t.f_values[k - 1]);
  }
}

TEST_CASE("arm configurations flow to the unit straight arm") {
  sampling::Rng rng(52);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_config);
  for (int c = 0; c < 5; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_config, 3 + c);
    const Trajectory t = gradient_flow(f, s, {});
    CHECK(t.termination == Termination::converged);
    check_trajectory_invariants(t);
    CHECK(theta_inf(t.frames.back()) < 1e-3);
    for (double rho : t.frames.back().lengths) CHECK(std::abs(rho - 1.0) < 1e-3);
  }
}

TEST_CASE("cycle linkages convexify on the constraint set") {
  sampling::Rng rng(53);
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_linkage);
  for (int c = 0; c < 10; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 4 + c % 5);
    const Trajectory t = projected_flow(f, s, {});
    CHECK(t.termination == Termination::converged);
    check_trajectory_invariants(t);
    CHECK(geom::circumcircle_residual(chart::embed(t.frames.back())) < 1e-4);
    CHECK(t.max_constraint_residual < 1e-8 * s.lengths.back());
    for (const ChartState& fr : t.frames) {
      CHECK(std::abs(chart::cycle_constraint(fr.theta, fr.lengths).u) <= chart::kConstraintTol * s.lengths.back());
    }
  }
}

TEST_CASE("cycle configurations flow to the regular polygon of perimeter one") {
  sampling::Rng rng(54);
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_config);
  for (int c = 0; c < 4; ++c) {
    const int m = 3 + c;
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_config, m);
    const Trajectory t = gradient_flow(f, s, {});
    CHECK(t.termination == Termination::converged);
    check_trajectory_invariants(t);
    const std::vector<Point> v = chart::embed(t.frames.back());
    CHECK(geom::circumcircle_residual(v) < 1e-3);
    const std::vector<double> l = geom::side_lengths(v);
    double total = 0.0;
    for (double x : l) total += x;
    CHECK(std::abs(total - 1.0) < 1e-3);
    for (double x : l) CHECK(std::abs(x / total - 1.0 / m) < 1e-3);
  }
}

TEST_CASE("flow argument checks") {
  const energy::ScalarField fc = energy::lr_function(LinkageKind::cycle_linkage);
  const ChartState sq = chart::make_state(CycleChart{{1, 1, 1, 1}, {pi / 2, pi}});
  CHECK_THROWS_AS(gradient_flow(fc, sq, {}), Error);
  const energy::ScalarField fa = energy::lr_function(LinkageKind::arm_linkage);
  const ChartState arm = chart::make_state(LinkageKind::arm_linkage, ArmChart{{1, 1}, {0.5}});
  CHECK_THROWS_AS(projected_flow(fa, arm, {}), Error);
  FlowOptions bad;
  bad.step = 0.0;
  CHECK_THROWS_AS(gradient_flow(fa, arm, bad), Error);
  bad = {};
  bad.frame_stride = 0;
  CHECK_THROWS_AS(gradient_flow(fa, arm, bad), Error);
  const ChartState folded = chart::make_state(LinkageKind::arm_linkage, ArmChart{{1, 1}, {pi}});
  CHECK_THROWS_AS(gradient_flow(fa, folded, {}), Error);
  ChartState off = sq;
  off.lengths.back() = 1.1;
  CHECK_THROWS_AS(projected_flow(fc, off, {}), Error);
}

TEST_CASE("t_max bounds the flow time") {
  sampling::Rng rng(55);
  const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 7);
  FlowOptions o;
  o.t_max = 0.37;
  const Trajectory t = gradient_flow(energy::lr_function(LinkageKind::arm_linkage), s, o);
  CHECK(t.termination == Termination::t_max_reached);
  CHECK(t.times.back() == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("frame stride keeps ceil(n / stride) frames ending at the last one") {
  sampling::Rng rng(56);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 5);
  FlowOptions o;
  o.t_max = 1.0;
  const Trajectory full = gradient_flow(f, s, o);
  for (int stride : {1, 2, 3, 7, 1000}) {
    o.frame_stride = stride;
    const Trajectory t = gradient_flow(f, s, o);
    const std::size_t n = full.frames.size();
    CHECK(t.frames.size() == (n + stride - 1) / stride);
    CHECK(t.times.back() == full.times.back());
    CHECK(chart::chart_distance(t.frames.back(), full.frames.back()) == 0.0);
  }
}

TEST_CASE("bump flow fixes states above b") {
  sampling::Rng rng(57);
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_linkage);
  for (int c = 0; c < 10; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 5);
    const double f0 = f.value(s);
    for (double sign : {1.0, -1.0}) {
      const ChartState x = bump_flow(f, {f0 - 2, f0}, s, sign * 3.0, {});
      CHECK(chart::chart_distance(x, s) == 0.0);
    }
  }
}

TEST_CASE("bump flow below a coincides with the gradient flow") {
  sampling::Rng rng(58);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  for (int c = 0; c < 5; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 5);
    const double f0 = f.value(s);
    FlowOptions o;
    o.step = 2.5e-4;
    o.t_max = 1.0;
    o.grad_tol = 1e-14;
    const Trajectory t = gradient_flow(f, s, o);
    REQUIRE(t.times.back() == doctest::Approx(1.0));
    const ChartState x = bump_flow(f, {f0 + 1, f0 + 2}, s, 1.0, o);
    CHECK(chart::chart_distance(x, t.frames.back()) < 1e-8);
  }
}

TEST_CASE("bump flow round trips") {
  sampling::Rng rng(59);
  for (LinkageKind k : {LinkageKind::arm_linkage, LinkageKind::cycle_linkage, LinkageKind::cycle_config}) {
    const energy::ScalarField f = energy::lr_function(k);
    for (int c = 0; c < 4; ++c) {
      const ChartState s = sampling::random_state(rng, k, 4 + c);
      const double f0 = f.value(s);
      // Stiff length-proportion modes make long backward cycle_config runs
      // amplify rounding error exponentially, so only a short span is checked.
      const std::vector<double> spans = k == LinkageKind::cycle_config ? std::vector<double>{0.1}
                                                                       : std::vector<double>{0.1, 0.5, 1.0};
      for (double span : spans) {
        const energy::BumpParams p{f0 - 0.5 * std::abs(f0), f0 + std::abs(f0)};
        const ChartState fwd = bump_flow(f, p, s, span, {});
        CHECK(f.value(fwd) <= f0);
        const ChartState back = bump_flow(f, p, fwd, -span, {});
        INFO(chart::to_string(k) << " span " << span);
        CHECK(chart::chart_distance(back, s) < 1e-5);
      }
    }
  }
}

TEST_CASE("bump flow crosses f = a from near-contact arms") {
  sampling::Rng rng(60);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  int found = 0;
  for (int c = 0; c < 400 && found < 2; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 6);
    const double f0 = f.value(s);
    if (f0 < 1e3) continue;
    ++found;
    const energy::BumpParams p{f0 - 0.5 * f0, 2.0 * f0};
    // Longer spans contract stiff modes past what doubles can undo.
    const ChartState fwd = bump_flow(f, p, s, 0.1, {});
    CHECK(f.value(fwd) < p.a);
    const ChartState back = bump_flow(f, p, fwd, -0.1, {});
    INFO("f0 " << f0);
    CHECK(chart::chart_distance(back, s) < 1e-5);
  }
  CHECK(found > 0);
}

TEST_CASE("bump flow starting on f = a makes progress") {
  sampling::Rng rng(61);
  const energy::ScalarField f = energy::lr_function(LinkageKind::arm_linkage);
  const ChartState s = sampling::random_state(rng, LinkageKind::arm_linkage, 5);
  const double f0 = f.value(s);
  for (double span : {0.2, -0.2}) {
    const ChartState x = bump_flow(f, {f0, f0 + 1.0}, s, span, {});
    CHECK(chart::chart_distance(x, s) > 0.0);
    CHECK(chart::chart_distance(bump_flow(f, {f0, f0 + 1.0}, x, -span, {}), s) < 1e-5);
  }
}

TEST_CASE("expansive_monitor examples") {
  sampling::Rng rng(60);
  const ChartState s = sampling::random_state(rng, LinkageKind::cycle_config, 6);
  CHECK(expansive_monitor(s, scaled(s, 1.1)).expansive());
  CHECK_FALSE(expansive_monitor(s, scaled(s, 0.9)).expansive());
  // Charts quotient out rotations, so a rigidly moved copy has the same chart.
  std::vector<Point> v = chart::embed(s);
  for (Point& p : v) p = {std::cos(1.0) * p.x - std::sin(1.0) * p.y, std::sin(1.0) * p.x + std::cos(1.0) * p.y};
  const ExpansiveReport rigid = expansive_monitor(s, chart::from_vertices(s.kind, v));
  CHECK(rigid.non_decreasing);
  CHECK_FALSE(rigid.strictly_increased);
  CHECK_FALSE(rigid.expansive());
  const ChartState arm = chart::make_state(LinkageKind::arm_linkage, ArmChart{{1, 1}, {0.5}});
  CHECK_THROWS_AS(expansive_monitor(s, arm), Error);
}

TEST_CASE("convexifying steps are not necessarily expansive") {
  const std::vector<Point> dart{{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}};
  const ChartState s = chart::from_vertices(LinkageKind::cycle_linkage, dart);
  FlowOptions o;
  o.t_max = 0.5;
  const Trajectory t = projected_flow(energy::lr_function(LinkageKind::cycle_linkage), s, o);
  int expansive = 0, mixed = 0;
  for (std::size_t k = 1; k < t.frames.size(); ++k) {
    const ExpansiveReport r = expansive_monitor(t.frames[k - 1], t.frames[k]);
    (r.expansive() ? expansive : mixed) += 1;
  }
  CHECK(expansive + mixed == static_cast<int>(t.frames.size()) - 1);
}

TEST_CASE("area and weight are monotone across certified expansive steps") {
  sampling::Rng rng(61);
  const energy::ScalarField f = energy::lr_function(LinkageKind::cycle_linkage);
  int certified = 0;
  for (int c = 0; c < 10; ++c) {
    const ChartState s = sampling::random_state(rng, LinkageKind::cycle_linkage, 4 + c % 4);
    const Trajectory t = projected_flow(f, s, {});
    for (std::size_t k = 1; k < t.frames.size(); ++k) {
      if (!expansive_monitor(t.frames[k - 1], t.frames[k]).expansive()) continue;
      ++certified;
      CHECK(energy::area_theta(t.frames[k]).value >= energy::area_theta(t.frames[k - 1]).value - 1e-9);
      CHECK(energy::nonconvexity_w(t.frames[k]).value <= energy::nonconvexity_w(t.frames[k - 1]).value + 1e-9);
    }
  }
  MESSAGE("certified expansive steps: " << certified);
}

TEST_CASE("termination names") {
  CHECK(to_string(Termination::converged) == "converged");
  CHECK(to_string(Termination::t_max_reached) == "t_max_reached");
  CHECK(to_string(Termination::guard_tripped) == "guard_tripped");
}
