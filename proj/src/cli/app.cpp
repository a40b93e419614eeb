#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "linkfold/cli.hpp"
#include "linkfold/energy.hpp"
#include "linkfold/error.hpp"
#include "linkfold/flow.hpp"
#include "linkfold/refold.hpp"
#include "linkfold/verify.hpp"

namespace linkfold::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

struct Flags {
  std::string mode = "linkage";
  flow::FlowOptions flow;
  refold::RefoldOptions refold;
  std::string svg_dir;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;
  std::string projection;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto logger = std::make_shared<spdlog::logger>("linkfold", std::make_shared<spdlog::sinks::ostream_sink_mt>(err));
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("LINKFOLD_LOG");
  const std::string level = env ? env : "off";
  if (level == "debug") {
    logger->set_level(spdlog::level::debug);
  } else if (level == "info") {
    logger->set_level(spdlog::level::info);
  } else {
    logger->set_level(spdlog::level::off);
  }
  return logger;
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot read " + path);
  buf << f.rdbuf();
  return buf.str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::convergence_failure:
    case ErrorCode::stalled:
    case ErrorCode::no_connection_found:
      return kExitNoConvergence;
    default:
      return kExitInvalid;
  }
}

double safe_value(const energy::ScalarField& f, const ChartState& s) {
  try {
    return f.value(s);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

ojson flow_options_json(const flow::FlowOptions& o) {
  ojson j;
  j["step"] = o.step;
  j["grad_tol"] = o.grad_tol;
  j["t_max"] = o.t_max;
  j["frame_stride"] = o.frame_stride;
  return j;
}

ojson base_metadata(const std::string& command, const Flags& flags, const InputDocument& doc) {
  ojson m;
  m["version"] = kVersion;
  m["command"] = command;
  m["tolerances"] = {{"constraint_tol", flags.flow.constraint_tol}, {"grad_tol", flags.flow.grad_tol}};
  if (doc.seed) m["seed"] = *doc.seed;
  return m;
}

void emit(const OutputDocument& doc, const Flags& flags, std::ostream& out, spdlog::logger& log) {
  out << serialize(doc);
  if (flags.svg_dir.empty()) return;
  std::vector<std::vector<Point>> frames;
  for (const OutputFrame& f : doc.frames) frames.push_back(f.vertices);
  const std::vector<std::string> svgs = render_svg(frames, doc.cycle);
  write_svg_files(flags.svg_dir, svgs);
  log.info("wrote {} SVG files to {}", svgs.size(), flags.svg_dir);
}

int run_flow(const std::string& command, const Flags& flags, std::ostream& out, spdlog::logger& log) {
  const Mode mode = flags.mode == "config" ? Mode::config : Mode::linkage;
  const InputDocument doc = parse_input(read_input(flags.inputs.at(0)));
  if (command == "straighten" && doc.cycle) throw Error(ErrorCode::invalid_input, "straighten needs an arm");
  if (command == "convexify" && !doc.cycle) throw Error(ErrorCode::invalid_input, "convexify needs a cycle");
  const ChartState start = to_state(doc, mode);
  const energy::ScalarField f = energy::lr_function(start.kind);
  log.info("{}: {} with {} vertices, f = {}", command, chart::to_string(start.kind), start.vertex_count(), f.value(start));

  const flow::Trajectory t = start.kind == LinkageKind::cycle_linkage ? flow::projected_flow(f, start, flags.flow)
                                                                       : flow::gradient_flow(f, start, flags.flow);
  log.info("{} after {} accepted and {} rejected steps, |grad f| = {}", flow::to_string(t.termination),
           t.accepted_steps, t.rejected_steps, t.final_grad_norm);

  OutputDocument o;
  o.cycle = doc.cycle;
  o.mode = mode;
  o.termination = std::string(flow::to_string(t.termination));
  for (std::size_t k = 0; k < t.frames.size(); ++k) o.frames.push_back({t.times[k], chart::embed(t.frames[k]), t.f_values[k]});
  o.metadata = base_metadata(command, flags, doc);
  o.metadata["options"] = flow_options_json(flags.flow);
  o.metadata["accepted_steps"] = t.accepted_steps;
  o.metadata["rejected_steps"] = t.rejected_steps;
  o.metadata["final_grad_norm"] = t.final_grad_norm;
  if (start.kind == LinkageKind::cycle_linkage) o.metadata["max_constraint_residual"] = t.max_constraint_residual;
  emit(o, flags, out, log);
  return t.termination == flow::Termination::converged ? kExitOk : kExitNoConvergence;
}

int run_project(const Flags& flags, std::ostream& out, spdlog::logger& log) {
  const Mode mode = flags.mode == "config" ? Mode::config : Mode::linkage;
  const InputDocument doc = parse_input(read_input(flags.inputs.at(0)));
  const ChartState s = to_state(doc, mode);
  const bool cocircular = flags.projection == "cocircular";
  if (cocircular != doc.cycle) {
    throw Error(ErrorCode::invalid_input, cocircular ? "cocircular projection needs a cycle" : "straight projection needs an arm");
  }
  const ChartState p = cocircular ? energy::project_cocircular(s) : energy::project_straight(s);
  OutputDocument o;
  o.cycle = doc.cycle;
  o.mode = mode;
  o.termination = "converged";
  o.frames.push_back({0.0, chart::embed(p), energy::lr_function(p.kind).value(p)});
  if (cocircular) o.circumradius = geom::cocircular_polygon(chart::cycle_side_lengths(p)).radius;
  o.metadata = base_metadata("project " + flags.projection, flags, doc);
  log.info("projected {} vertices", p.vertex_count());
  emit(o, flags, out, log);
  return kExitOk;
}

int run_refold(const Flags& flags, std::ostream& out, spdlog::logger& log) {
  const Mode mode = flags.mode == "config" ? Mode::config : Mode::linkage;
  const InputDocument d0 = parse_input(read_input(flags.inputs.at(0)));
  const InputDocument d1 = parse_input(read_input(flags.inputs.at(1)));
  if (d0.cycle != d1.cycle) throw Error(ErrorCode::invalid_input, "refold inputs differ in kind");
  const ChartState p0 = to_state(d0, mode);
  const ChartState p1 = to_state(d1, mode);
  refold::RefoldOptions ro = flags.refold;
  ro.flow_opts = flags.flow;
  ro.flow_opts.frame_stride = 1;
  const refold::Motion m = refold::refold(p0, p1, ro);
  const int valid = static_cast<int>(std::count(m.valid.begin(), m.valid.end(), true));
  log.info("refold: n0 = {}, {} of {} frames valid", m.n0, valid, m.frames.size());

  const energy::ScalarField f = energy::lr_function(p0.kind);
  OutputDocument o;
  o.cycle = d0.cycle;
  o.mode = mode;
  o.termination = m.all_valid() ? "converged" : "guard_tripped";
  const std::size_t n = m.frames.size();
  const auto stride = static_cast<std::size_t>(flags.flow.frame_stride);
  for (std::size_t k = 0; k < n; ++k) {
    // Subsample from the end so the target state is always kept.
    if ((n - 1 - k) % stride != 0) continue;
    const double t = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
    o.frames.push_back({t, chart::embed(m.frames[k]), safe_value(f, m.frames[k])});
  }
  o.metadata = base_metadata("refold", flags, d0);
  o.metadata["options"] = {{"delta", ro.delta}, {"samples", ro.samples}, {"max_iter", ro.max_iter},
                           {"flow", flow_options_json(flags.flow)}};
  o.metadata["n0"] = m.n0;
  o.metadata["bump"] = {{"a", m.params.a}, {"b", m.params.b}};
  o.metadata["valid_frames"] = valid;
  emit(o, flags, out, log);
  return m.all_valid() ? kExitOk : kExitNoConvergence;
}

int run_verify(const Flags& flags, std::ostream& out, spdlog::logger& log) {
  const verify::Report r = verify::run_property_suite(flags.seed);
  ojson j;
  j["command"] = "verify";
  j["version"] = kVersion;
  j["seed"] = flags.seed;
  j["passed"] = r.passed();
  j["failed"] = r.failed();
  ojson checks = ojson::array();
  for (const verify::CheckResult& c : r.checks) {
    log.info("{} {} ({} cases, {})", c.passed ? "PASS" : "FAIL", c.name, c.cases, c.detail);
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  out << j.dump(2) << "\n";
  return r.failed() == 0 ? kExitOk : kExitNoConvergence;
}

void add_flow_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--mode", flags.mode, "linkage (fixed lengths) or config (free lengths)")
      ->check(CLI::IsMember({"linkage", "config"}));
  cmd->add_option("--step", flags.flow.step, "initial RK4 step")->check(CLI::PositiveNumber);
  cmd->add_option("--grad-tol", flags.flow.grad_tol, "convergence threshold on the gradient max-norm")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--t-max", flags.flow.t_max, "flow time budget")->check(CLI::PositiveNumber);
  cmd->add_option("--frames", flags.flow.frame_stride, "keep every N-th frame")->check(CLI::PositiveNumber);
  cmd->add_option("--svg", flags.svg_dir, "write one SVG per stored frame into DIR");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags flags;
  CLI::App app{"Unfold planar linkages along gradient flows", "linkfold"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CLI::App* straighten = app.add_subcommand("straighten", "straighten an arm");
  straighten->add_option("input", flags.inputs, "input document (- for stdin)")->required()->expected(1);
  add_flow_flags(straighten, flags);

  CLI::App* convexify = app.add_subcommand("convexify", "convexify a cycle");
  convexify->add_option("input", flags.inputs, "input document (- for stdin)")->required()->expected(1);
  add_flow_flags(convexify, flags);

  CLI::App* refold_cmd = app.add_subcommand("refold", "connect two states of the same moduli space");
  refold_cmd->add_option("inputs", flags.inputs, "the two input documents")->required()->expected(2);
  add_flow_flags(refold_cmd, flags);
  refold_cmd->add_option("--delta", flags.refold.delta, "bump flow increment")->check(CLI::PositiveNumber);
  refold_cmd->add_option("--samples", flags.refold.samples, "points on the connecting curve")
      ->check(CLI::Range(2, 100000));

  CLI::App* project = app.add_subcommand("project", "straight or cocircular state with the same lengths");
  project->add_option("target", flags.projection, "straight or cocircular")
      ->required()
      ->check(CLI::IsMember({"straight", "cocircular"}));
  project->add_option("input", flags.inputs, "input document (- for stdin)")->required()->expected(1);
  project->add_option("--mode", flags.mode, "linkage or config")->check(CLI::IsMember({"linkage", "config"}));
  project->add_option("--svg", flags.svg_dir, "write the projected state as SVG into DIR");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the property suite");
  verify_cmd->add_option("--seed", flags.seed, "random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const std::shared_ptr<spdlog::logger> log = make_logger(err);
  try {
    if (straighten->parsed()) return run_flow("straighten", flags, out, *log);
    if (convexify->parsed()) return run_flow("convexify", flags, out, *log);
    if (refold_cmd->parsed()) return run_refold(flags, out, *log);
    if (project->parsed()) return run_project(flags, out, *log);
    return run_verify(flags, out, *log);
  } catch (const Error& e) {
    err << "linkfold: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace linkfold::cli
