#include "linkfold/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "linkfold/error.hpp"

namespace linkfold::flow {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::t_max_reached: return "t_max_reached";
    case Termination::guard_tripped: return "guard_tripped";
  }
  return "unknown";
}

namespace {

constexpr double kMinStep = 1e-12;
constexpr int kGrowAfter = 10;
constexpr int kNewtonIters = 5;
constexpr double kMonotoneSlack = 1e-9;
constexpr double kRoundoff = 1e-12;
constexpr double kRateAgreement = 0.5;
constexpr double kBumpAbsTol = 1e-14;
constexpr double kBumpRelTol = 1e-11;
constexpr int kKinkBisections = 60;
constexpr double kKinkSliver = 1e-12;

struct Eval {
  double f = 0.0;
  std::vector<double> velocity;
  double grad_norm = 0.0;  // max-norm of the (projected) gradient
  double rate = 0.0;       // df/dt along the velocity
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_options(const FlowOptions& o) {
  if (!(o.step > 0.0) || !(o.grad_tol > 0.0) || !(o.t_max > 0.0) || !(o.constraint_tol > 0.0) ||
      o.frame_stride < 1) {
    throw Error(ErrorCode::invalid_params, "flow options must be positive");
  }
}

// Velocity -scale(f) * P grad f, where P projects out grad u for cycle linkages.
class Field {
 public:
  Field(const ScalarField& f, bool constrained, std::function<double(double)> scale)
      : f_(f), constrained_(constrained), scale_(std::move(scale)) {}

  Eval operator()(const ChartState& s) const {
    energy::FieldValue fv = f_.evaluate(s);
    if (constrained_) {
      const chart::ConstraintValue c = chart::cycle_constraint(s.theta, s.lengths);
      double gg = 0.0;
      double fg = 0.0;
      for (std::size_t i = 0; i < c.grad.size(); ++i) {
        gg += c.grad[i] * c.grad[i];
        fg += fv.gradient[i] * c.grad[i];
      }
      if (!(std::sqrt(gg) > 1e-10)) throw Error(ErrorCode::singular_constraint, "grad u vanishes");
      for (std::size_t i = 0; i < c.grad.size(); ++i) fv.gradient[i] -= fg / gg * c.grad[i];
    }
    Eval e;
    e.f = fv.value;
    e.grad_norm = max_abs(fv.gradient);
    const double k = scale_ ? scale_(fv.value) : 1.0;
    e.velocity.resize(fv.gradient.size());
    double g2 = 0.0;
    for (std::size_t i = 0; i < fv.gradient.size(); ++i) {
      e.velocity[i] = -k * fv.gradient[i];
      g2 += fv.gradient[i] * fv.gradient[i];
    }
    e.rate = -k * g2;
    return e;
  }

  bool constrained() const { return constrained_; }

 private:
  const ScalarField& f_;
  bool constrained_;
  std::function<double(double)> scale_;
};

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& v) {
  std::vector<double> y(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * v[i];
  return y;
}

// One RK4 trial of length h. Any failure inside (evaluation errors, lengths
// leaving the positive orthant, invalid end state) rejects the trial.
std::optional<ChartState> rk4_trial(const Field& field, const ChartState& s, const Eval& e0, double h,
                                    double constraint_tol) {
  try {
    const std::vector<double> x = chart::free_coordinates(s);
    const auto k1 = e0.velocity;
    const auto k2 = field(chart::with_free_coordinates(s, axpy(x, 0.5 * h, k1))).velocity;
    const auto k3 = field(chart::with_free_coordinates(s, axpy(x, 0.5 * h, k2))).velocity;
    const auto k4 = field(chart::with_free_coordinates(s, axpy(x, h, k3))).velocity;
    std::vector<double> y(x);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    std::optional<ChartState> next = chart::with_free_coordinates(s, y);
    if (field.constrained()) next = chart::restore_closure(*next, constraint_tol, kNewtonIters);
    if (!next || !chart::validate(*next, constraint_tol).valid()) return std::nullopt;
    return next;
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Accepted {
  ChartState state;
  Eval eval;
};

// Trial step with the end-state evaluation and the monotonicity guard. `sign`
// is +1 when f may only decrease, -1 when it may only increase.
std::optional<Accepted> guarded_step(const Field& field, const ChartState& s, const Eval& e0, double h,
                                     double constraint_tol, double sign) {
  std::optional<ChartState> next = rk4_trial(field, s, e0, h, constraint_tol);
  if (!next) return std::nullopt;
  Eval e1;
  try {
    e1 = field(*next);
  } catch (const Error&) {
    return std::nullopt;
  }
  const double df = e1.f - e0.f;
  const double scale = std::max(1.0, std::abs(e0.f));
  if (sign * df > kMonotoneSlack * scale) return std::nullopt;
  // The change in f must match the trapezoidal estimate of its rate. This
  // rejects steps near the stability edge of a stiff direction, where f
  // barely moves while the state oscillates.
  const double predicted = 0.5 * h * (e0.rate + e1.rate);
  if (std::abs(df - predicted) > kRateAgreement * std::abs(predicted) + kRoundoff * scale) {
    return std::nullopt;
  }
  return Accepted{std::move(*next), std::move(e1)};
}

// Step doubling: one step of h against two of h/2. The bump flow is run in
// both time directions and must compose to the identity, so its steps are
// held to a local error bound on top of the guards.
std::optional<Accepted> controlled_step(const Field& field, const ChartState& s, const Eval& e0, double h,
                                        double constraint_tol, double sign) {
  const std::optional<ChartState> coarse = rk4_trial(field, s, e0, h, constraint_tol);
  if (!coarse) return std::nullopt;
  const std::optional<Accepted> half = guarded_step(field, s, e0, 0.5 * h, constraint_tol, sign);
  if (!half) return std::nullopt;
  std::optional<Accepted> fine = guarded_step(field, half->state, half->eval, 0.5 * h, constraint_tol, sign);
  if (!fine) return std::nullopt;
  const double moved = max_abs(chart::chart_difference(s, fine->state));
  const double err = max_abs(chart::chart_difference(*coarse, fine->state));
  if (err > kBumpAbsTol + kBumpRelTol * moved) return std::nullopt;
  return fine;
}

// eta is only continuous at f = a, so a step across that level loses its
// order. Returns the shortest trial length (to bisection precision) that ends
// on the far side, so the step lands just past the kink.
std::optional<double> kink_crossing(const Field& field, const ChartState& s, const Eval& e0, double h, double a,
                                    double constraint_tol) {
  const auto side = [a](double f) { return f > a; };
  const auto crossed = [&](double t) {
    const std::optional<ChartState> y = rk4_trial(field, s, e0, t, constraint_tol);
    if (!y) return false;
    try {
      return side(field(*y).f) != side(e0.f);
    } catch (const Error&) {
      return false;
    }
  };
  if (!crossed(h)) return std::nullopt;
  double lo = 0.0;
  double hi = h;
  for (int i = 0; i < kKinkBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    (crossed(mid) ? hi : lo) = mid;
  }
  // A crossing within the first sliver of the step means the state already sits on the level.
  if (hi < kKinkSliver * h) return std::nullopt;
  return hi;
}

double residual(const ChartState& s) {
  if (s.kind != LinkageKind::cycle_linkage) return 0.0;
  return std::abs(chart::cycle_constraint(s.theta, s.lengths).u);
}

// Keeps indices n-1, n-1-stride, ... so the final state always survives and
// exactly ceil(n / stride) frames remain.
void apply_stride(Trajectory& t, int stride) {
  if (stride <= 1) return;
  const std::size_t n = t.frames.size();
  std::vector<std::size_t> keep;
  for (std::size_t i = n; i-- > 0;) {
    if ((n - 1 - i) % static_cast<std::size_t>(stride) == 0) keep.push_back(i);
  }
  std::reverse(keep.begin(), keep.end());
  std::vector<double> times;
  std::vector<ChartState> frames;
  std::vector<double> f;
  for (std::size_t i : keep) {
    times.push_back(t.times[i]);
    frames.push_back(std::move(t.frames[i]));
    f.push_back(t.f_values[i]);
  }
  t.times = std::move(times);
  t.frames = std::move(frames);
  t.f_values = std::move(f);
}

Trajectory integrate(const Field& field, const ChartState& start, const FlowOptions& opts) {
  check_options(opts);
  const chart::ValidityReport rep = chart::validate(start, opts.constraint_tol);
  if (!rep.valid()) throw Error(ErrorCode::invalid_input, "invalid start state: " + rep.reason);

  Trajectory traj;
  traj.kind = start.kind;
  ChartState s = start;
  Eval e = field(s);
  traj.times.push_back(0.0);
  traj.frames.push_back(s);
  traj.f_values.push_back(e.f);
  traj.max_constraint_residual = residual(s);

  double t = 0.0;
  double h = opts.step;
  int clean = 0;
  traj.termination = Termination::t_max_reached;
  while (true) {
    if (e.grad_norm < opts.grad_tol) {
      traj.termination = Termination::converged;
      break;
    }
    if (t >= opts.t_max) break;
    const double dt = std::min(h, opts.t_max - t);
    std::optional<Accepted> next = guarded_step(field, s, e, dt, opts.constraint_tol, 1.0);
    if (!next) {
      ++traj.rejected_steps;
      clean = 0;
      h = 0.5 * dt;
      if (h < kMinStep) {
        traj.termination = Termination::guard_tripped;
        break;
      }
      continue;
    }
    ++traj.accepted_steps;
    t += dt;
    s = std::move(next->state);
    e = std::move(next->eval);
    traj.times.push_back(t);
    traj.frames.push_back(s);
    traj.f_values.push_back(e.f);
    traj.max_constraint_residual = std::max(traj.max_constraint_residual, residual(s));
    if (++clean >= kGrowAfter) {
      h = std::min(2.0 * h, opts.step);
      clean = 0;
    }
  }
  traj.final_grad_norm = e.grad_norm;
  apply_stride(traj, opts.frame_stride);
  return traj;
}

}  // namespace

Trajectory gradient_flow(const ScalarField& field, const ChartState& start, const FlowOptions& opts) {
  if (start.kind == LinkageKind::cycle_linkage) {
    throw Error(ErrorCode::invalid_input, "cycle linkages need projected_flow");
  }
  return integrate(Field(field, false, nullptr), start, opts);
}

Trajectory projected_flow(const ScalarField& field, const ChartState& start, const FlowOptions& opts) {
  if (start.kind != LinkageKind::cycle_linkage) {
    throw Error(ErrorCode::invalid_input, "projected_flow needs a cycle linkage");
  }
  return integrate(Field(field, true, nullptr), start, opts);
}

ChartState bump_flow(const ScalarField& field, BumpParams params, const ChartState& start, double s,
                     const FlowOptions& opts) {
  check_options(opts);
  energy::bump_eta(params, 0.0);  // validates a < b
  const chart::ValidityReport rep = chart::validate(start, opts.constraint_tol);
  if (!rep.valid()) throw Error(ErrorCode::invalid_input, "invalid start state: " + rep.reason);

  const double sign = s < 0.0 ? -1.0 : 1.0;
  const Field vf(field, start.kind == LinkageKind::cycle_linkage,
                 [params, sign](double f) { return sign * energy::bump_eta(params, f).first; });

  ChartState x = start;
  Eval e = vf(x);
  double remaining = std::abs(s);
  double h = opts.step;
  int clean = 0;
  while (remaining > 0.0) {
    if (max_abs(e.velocity) == 0.0) break;  // outside the support of eta
    double dt = std::min(h, remaining);
    if (const auto cross = kink_crossing(vf, x, e, dt, params.a, opts.constraint_tol)) dt = *cross;
    std::optional<Accepted> next = controlled_step(vf, x, e, dt, opts.constraint_tol, sign);
    if (!next) {
      clean = 0;
      h = 0.5 * dt;
      if (h < kMinStep) throw Error(ErrorCode::stalled, "bump flow step underflow");
      continue;
    }
    remaining = dt >= remaining ? 0.0 : remaining - dt;
    x = std::move(next->state);
    e = std::move(next->eval);
    if (++clean >= kGrowAfter) {
      h = std::min(2.0 * h, opts.step);
      clean = 0;
    }
  }
  return x;
}

ExpansiveReport expansive_monitor(const ChartState& a, const ChartState& b, double tol) {
  if (a.kind != b.kind || a.vertex_count() != b.vertex_count()) {
    throw Error(ErrorCode::invalid_input, "expansive_monitor: states differ in kind or size");
  }
  const std::vector<geom::Point> va = chart::embed(a);
  const std::vector<geom::Point> vb = chart::embed(b);
  ExpansiveReport r;
  bool first = true;
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = i + 1; j < va.size(); ++j) {
      const double d = geom::distance(vb[i], vb[j]) - geom::distance(va[i], va[j]);
      r.min_change = first ? d : std::min(r.min_change, d);
      r.max_change = first ? d : std::max(r.max_change, d);
      first = false;
    }
  }
  r.non_decreasing = r.min_change >= -tol;
  r.strictly_increased = r.max_change > tol;
  return r;
}

}  // namespace linkfold::flow
