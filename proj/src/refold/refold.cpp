#include "linkfold/refold.hpp"

#include <algorithm>
#include <cmath>

#include "linkfold/error.hpp"

namespace linkfold::refold {

namespace {

constexpr double kLengthMatchTol = 1e-10;
constexpr double kArrivalTol = 1e-8;

void check_compatible(const ChartState& a, const ChartState& b) {
  if (a.kind != b.kind || a.lengths.size() != b.lengths.size() || a.theta.size() != b.theta.size()) {
    throw Error(ErrorCode::invalid_input, "states differ in kind or dimension");
  }
  if (chart::has_free_lengths(a.kind)) return;
  for (std::size_t i = 0; i < a.lengths.size(); ++i) {
    if (std::abs(a.lengths[i] - b.lengths[i]) > kLengthMatchTol) {
      throw Error(ErrorCode::invalid_input, "linkage length vectors differ");
    }
  }
}

ChartState lerp(const ChartState& a, const std::vector<double>& diff, double t) {
  std::vector<double> x = chart::free_coordinates(a);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * diff[i];
  return chart::with_free_coordinates(a, x);
}

bool valid(const ChartState& s) { return chart::validate(s).valid(); }

// Projected descent of H = |theta - theta(y0)|^2 on the constraint set.
std::optional<std::vector<ChartState>> constrained_geodesic(const ChartState& x0, const ChartState& y0,
                                                            int samples) {
  const std::vector<double> target = y0.theta;
  const energy::ScalarField h(LinkageKind::cycle_linkage, "H", [target](const ChartState& s) {
    energy::FieldValue out;
    out.gradient.resize(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double d = chart::wrap_angle(s.theta[i] - target[i]);
      out.value += d * d;
      out.gradient[i] = 2.0 * d;
    }
    return out;
  });
  flow::FlowOptions fo;
  fo.step = 0.05;
  fo.grad_tol = 1e-10;
  fo.t_max = 100.0;
  const flow::Trajectory t = flow::projected_flow(h, x0, fo);
  if (t.termination == flow::Termination::guard_tripped) return std::nullopt;
  if (chart::chart_distance(t.frames.back(), y0) > kArrivalTol) return std::nullopt;

  std::vector<ChartState> path = t.frames;
  path.back() = y0;
  std::vector<ChartState> out = resample(path, samples);
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    std::optional<ChartState> s = chart::restore_closure(out[k], chart::kConstraintTol);
    if (!s || !valid(*s)) return std::nullopt;
    out[k] = std::move(*s);
  }
  return out;
}

}  // namespace

bool Motion::all_valid() const {
  return std::all_of(valid.begin(), valid.end(), [](bool v) { return v; });
}

std::vector<ChartState> resample(const std::vector<ChartState>& path, int samples) {
  if (path.empty() || samples < 2) throw Error(ErrorCode::invalid_params, "resample needs samples >= 2");
  std::vector<double> cum(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    cum[i] = cum[i - 1] + chart::chart_distance(path[i - 1], path[i]);
  }
  const double total = cum.back();
  std::vector<ChartState> out;
  out.reserve(static_cast<std::size_t>(samples));
  out.push_back(path.front());
  std::size_t seg = 1;
  for (int k = 1; k + 1 < samples; ++k) {
    const double target = total * k / (samples - 1);
    while (seg + 1 < path.size() && cum[seg] < target) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double t = len > 0.0 ? std::clamp((target - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(lerp(path[seg - 1], chart::chart_difference(path[seg - 1], path[seg]), t));
  }
  out.push_back(path.back());
  return out;
}

std::optional<std::vector<ChartState>> chart_geodesic(const ChartState& x0, const ChartState& y0,
                                                      int samples) {
  check_compatible(x0, y0);
  if (samples < 2) throw Error(ErrorCode::invalid_params, "chart_geodesic needs samples >= 2");
  if (!valid(x0) || !valid(y0)) return std::nullopt;
  if (chart::chart_distance(x0, y0) == 0.0) {
    return std::vector<ChartState>(static_cast<std::size_t>(samples), x0);
  }
  if (x0.kind == LinkageKind::cycle_linkage) return constrained_geodesic(x0, y0, samples);

  const std::vector<double> diff = chart::chart_difference(x0, y0);
  std::vector<ChartState> out;
  out.reserve(static_cast<std::size_t>(samples));
  out.push_back(x0);
  for (int k = 1; k + 1 < samples; ++k) {
    ChartState s = lerp(x0, diff, static_cast<double>(k) / (samples - 1));
    if (!valid(s)) return std::nullopt;
    out.push_back(std::move(s));
  }
  out.push_back(y0);
  return out;
}

Motion refold(const ChartState& p0, const ChartState& p1, const RefoldOptions& opts) {
  check_compatible(p0, p1);
  if (!(opts.delta > 0.0) || opts.samples < 2 || opts.max_iter < 1) {
    throw Error(ErrorCode::invalid_params, "refold needs delta > 0, samples >= 2, max_iter >= 1");
  }
  for (const ChartState* p : {&p0, &p1}) {
    const chart::ValidityReport r = chart::validate(*p);
    if (!r.valid()) throw Error(ErrorCode::invalid_input, "invalid endpoint: " + r.reason);
  }

  const energy::ScalarField f = energy::lr_function(p0.kind);
  Motion m;
  m.kind = p0.kind;
  m.params.a = 1.0 + std::max(f.value(p0), f.value(p1));
  m.params.b = m.params.a + 1.0;

  ChartState x = p0;
  ChartState y = p1;
  std::optional<std::vector<ChartState>> geo;
  for (int n = 0;; ++n) {
    geo = chart_geodesic(x, y, opts.samples);
    if (geo) {
      m.n0 = n;
      break;
    }
    if (n == opts.max_iter) {
      throw Error(ErrorCode::no_connection_found,
                  "no connecting geodesic after " + std::to_string(n) + " flow increments");
    }
    x = flow::bump_flow(f, m.params, x, opts.delta, opts.flow_opts);
    y = flow::bump_flow(f, m.params, y, opts.delta, opts.flow_opts);
  }
  m.geodesic = *geo;

  m.frames.resize(m.geodesic.size());
  m.valid.assign(m.geodesic.size(), false);
  m.frames.front() = p0;
  m.frames.back() = p1;
  std::vector<bool> pulled(m.geodesic.size(), true);
  for (std::size_t k = 1; k + 1 < m.geodesic.size(); ++k) {
    ChartState s = m.geodesic[k];
    try {
      for (int i = 0; i < m.n0; ++i) s = flow::bump_flow(f, m.params, s, -opts.delta, opts.flow_opts);
    } catch (const Error&) {
      pulled[k] = false;
    }
    m.frames[k] = std::move(s);
  }
  for (std::size_t k = 0; k < m.frames.size(); ++k) m.valid[k] = pulled[k] && valid(m.frames[k]);
  return m;
}

}  // namespace linkfold::refold
