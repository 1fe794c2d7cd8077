#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <variant>

#include "hawc/diagnostics.hpp"
#include "hawc/point_io.hpp"
#include "hawc/target_spec.hpp"
#include "ledger.hpp"
#include "svg.hpp"

namespace hawc::cli {

using nlohmann::json;

namespace {

std::string optimizer_name(const OptimizerKind& k) {
  return std::holds_alternative<PlainSgd>(k) ? "sgd" : "adam";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "sgd") return PlainSgd{};
  if (name == "adam") return AdaptiveMoment{};
  throw InvalidArgument("unknown optimizer '" + name + "' (expected adam or sgd)");
}

std::string schedule_name(StepSchedule s) { return s == StepSchedule::Constant ? "constant" : "linear"; }

StepSchedule schedule_from_name(const std::string& name) {
  if (name == "constant") return StepSchedule::Constant;
  if (name == "linear") return StepSchedule::LinearDecay;
  throw InvalidArgument("unknown schedule '" + name + "' (expected linear or constant)");
}

std::string init_name(Initialization i) { return i == Initialization::Origin ? "origin" : "target"; }

Initialization init_from_name(const std::string& name) {
  if (name == "target") return Initialization::FromTarget;
  if (name == "origin") return Initialization::Origin;
  throw InvalidArgument("unknown init '" + name + "' (expected target or origin)");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PointSet read_nonempty_points(const std::string& path) {
  PointSet pts = read_points_file(path);
  if (pts.empty()) throw IoError("point file '" + path + "' contains no points");
  return pts;
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
  const auto& c = m.config;
  json j = {
      {"tool", "hawc"},
      {"version", HAWC_VERSION},
      {"rng", SeededRng::kAlgorithm},
      {"command", m.command},
      {"target", m.target},
      {"k", c.k},
      {"batch", c.batch_size},
      {"iters", c.iterations},
      {"step", c.step_size},
      {"schedule", schedule_name(c.schedule)},
      {"optimizer", optimizer_name(c.optimizer)},
      {"init", init_name(c.init)},
      {"kernel_a", c.kernel_a},
      {"seed", c.seed},
      {"history", m.history ? json(*m.history) : json(nullptr)},
      {"out", m.out},
      {"count", m.count},
  };
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("manifest '" + source + "': " + e.what());
  }
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.target = j.at("target").get<std::string>();
    m.config.k = j.at("k").get<std::size_t>();
    m.config.batch_size = j.at("batch").get<std::size_t>();
    m.config.iterations = j.at("iters").get<std::size_t>();
    m.config.step_size = j.at("step").get<double>();
    m.config.schedule = schedule_from_name(j.value("schedule", "linear"));
    m.config.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
    m.config.init = init_from_name(j.value("init", "target"));
    m.config.kernel_a = j.at("kernel_a").get<double>();
    m.config.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("history").is_null()) m.history = j.at("history").get<std::string>();
    m.out = j.at("out").get<std::string>();
    m.count = j.value("count", std::size_t{1});
    return m;
  } catch (const json::exception& e) {
    throw IoError("manifest '" + source + "': " + e.what());
  }
}

int cmd_compress(const RunManifest& run, std::ostream& out) {
  const TargetDistribution target = parse_target_spec(run.target);
  const HistoryLedger history = run.history ? read_ledger(*run.history) : HistoryLedger{};
  const CompressionResult result = compress(target, history, run.config);

  std::ostringstream csv;
  write_points_csv(csv, result.points);
  write_text_file(run.out, csv.str());

  std::ostringstream trace;
  trace << "iteration,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
    trace << i << ',' << format_double(result.loss_trace[i]) << '\n';
  }
  write_text_file(loss_trace_path_for(run.out), trace.str());
  write_text_file(manifest_path_for(run.out), manifest_to_json(run));

  out << "wrote " << result.points.size() << " points to " << run.out
      << " (final loss " << format_double(result.final_loss) << ")\n";
  return kExitOk;
}

int cmd_sample_next(const RunManifest& run, std::ostream& out) {
  if (!run.history) throw InvalidArgument("sample-next: --history is required");
  if (run.count < 1) throw InvalidArgument("sample-next: --count must be >= 1");
  const TargetDistribution target = parse_target_spec(run.target);
  const std::string& path = *run.history;

  // Validate the ledger before touching anything.
  HistoryLedger ledger = read_ledger_if_exists(path).value_or(HistoryLedger{});
  if (!ledger.empty() && ledger.dim() != target.dim()) {
    throw InvalidArgument("sample-next: ledger dimension " + std::to_string(ledger.dim()) +
                          " does not match target dimension " + std::to_string(target.dim()));
  }
  if (ledger.points().dim() == 0) ledger = HistoryLedger(PointSet(target.dim()));

  HawcConfig config = run.config;
  config.k = 1;
  for (std::size_t i = 0; i < run.count; ++i) {
    const std::size_t index = HistoryLedger::emission_index(ledger.size());
    config.seed = SeededRng::derive_seed(run.config.seed, index);
    const auto point = sample_next(target, ledger, config);
    ledger.append(point);
    write_ledger_atomic(path, ledger);
    out << index;
    for (double v : point) out << ',' << format_double(v);
    out << '\n';
  }
  write_text_file(manifest_path_for(path), manifest_to_json(run));
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out) {
  const TargetDistribution target = parse_target_spec(opts.target);
  const PointSet points = read_nonempty_points(opts.points);
  if (points.dim() != target.dim()) {
    throw InvalidArgument("evaluate: points have dimension " + std::to_string(points.dim()) +
                          ", target has " + std::to_string(target.dim()));
  }
  const Kernel kernel(opts.kernel_a);
  SeededRng rng(opts.seed);
  json j;
  j["energy_distance_sq"] = mc_energy_distance_sq(points, target, opts.samples, kernel, rng);
  j["min_pairwise_distance"] = points.size() >= 2 ? json(min_pairwise_distance(points)) : json(nullptr);
  if (const auto* g = target.as_grid()) {
    j["allocation_counts"] = allocation_counts(points, grid_centers(*g));
  } else {
    j["allocation_counts"] = nullptr;
  }
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_plot(const PlotOptions& opts, std::ostream& out) {
  const PointSet points = read_nonempty_points(opts.points);
  PointSet centers;
  if (opts.centers) centers = read_points_file(*opts.centers);
  if (opts.centers_target) {
    const auto target = parse_target_spec(*opts.centers_target);
    const auto* g = target.as_grid();
    if (!g) throw InvalidArgument("plot: --centers-target must be a grid spec");
    centers.append(grid_centers(*g));
  }
  write_text_file(opts.out, render_scatter_svg(points, centers, {.index_labels = opts.labels}));
  out << "wrote " << opts.out << '\n';
  return kExitOk;
}

namespace {

void add_solver_flags(CLI::App* sub, RunManifest& run, std::string& optimizer, std::string& schedule,
                      std::string& init) {
  sub->add_option("--target", run.target, "Target spec: gaussian:dim=N | grid:rows=R,cols=C,spacing=S,sigma=SIG | csv:PATH");
  sub->add_option("--seed", run.config.seed, "Random seed")->capture_default_str();
  sub->add_option("--batch", run.config.batch_size, "Target samples per iteration")->capture_default_str();
  sub->add_option("--iters", run.config.iterations, "Optimizer iterations")->capture_default_str();
  sub->add_option("--step", run.config.step_size, "Initial step size")->capture_default_str();
  sub->add_option("--kernel-a", run.config.kernel_a, "Kernel smoothing parameter a")->capture_default_str();
  sub->add_option("--optimizer", optimizer, "adam | sgd")->capture_default_str();
  sub->add_option("--schedule", schedule, "Step schedule: linear | constant")->capture_default_str();
  sub->add_option("--init", init, "Initial points: target | origin")->capture_default_str();
}

void finish_solver_flags(RunManifest& run, const std::string& optimizer, const std::string& schedule,
                         const std::string& init) {
  run.config.optimizer = optimizer_from_name(optimizer);
  run.config.schedule = schedule_from_name(schedule);
  run.config.init = init_from_name(init);
}

/// Fills `run` from --manifest when given; an explicit --out still wins.
void apply_manifest(RunManifest& run, const std::string& manifest, const std::string& command,
                    CLI::Option* out_opt) {
  if (manifest.empty()) return;
  RunManifest loaded = manifest_from_json(read_text_file(manifest), manifest);
  if (loaded.command != command) {
    throw InvalidArgument("manifest '" + manifest + "' is for '" + loaded.command + "', not '" +
                          command + "'");
  }
  if (out_opt != nullptr && out_opt->count() > 0) loaded.out = run.out;
  run = std::move(loaded);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hawc: history-aware compression of probability measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HAWC_VERSION);

  RunManifest compress_run;
  compress_run.command = "compress";
  std::string c_opt = "adam", c_sched = "linear", c_init = "target", c_manifest, c_history;
  auto* compress_cmd = app.add_subcommand("compress", "Compress a target into K points");
  add_solver_flags(compress_cmd, compress_run, c_opt, c_sched, c_init);
  compress_cmd->add_option("--k", compress_run.config.k, "Number of points")->capture_default_str();
  compress_cmd->add_option("--history", c_history, "History ledger to subtract from the target");
  auto* c_out = compress_cmd->add_option("--out", compress_run.out, "Output point CSV");
  compress_cmd->add_option("--manifest", c_manifest, "Re-run from a manifest");

  RunManifest next_run;
  next_run.command = "sample-next";
  std::string n_opt = "adam", n_sched = "linear", n_init = "target", n_manifest, n_history;
  auto* next_cmd = app.add_subcommand("sample-next", "Append incremental samples to a history ledger");
  add_solver_flags(next_cmd, next_run, n_opt, n_sched, n_init);
  next_cmd->add_option("--history", n_history, "History ledger (created if absent)");
  next_cmd->add_option("--count", next_run.count, "Number of points to emit")->capture_default_str();
  next_cmd->add_option("--manifest", n_manifest, "Re-run from a manifest");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a point file against a target");
  eval_cmd->add_option("--points", eval.points, "Point CSV")->required();
  eval_cmd->add_option("--target", eval.target, "Target spec")->required();
  eval_cmd->add_option("--samples", eval.samples, "Monte-Carlo target samples")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Random seed")->capture_default_str();
  eval_cmd->add_option("--kernel-a", eval.kernel_a, "Kernel smoothing parameter a")->capture_default_str();

  PlotOptions plot;
  std::string p_centers, p_centers_target;
  auto* plot_cmd = app.add_subcommand("plot", "Write an SVG scatter plot");
  plot_cmd->add_option("--points", plot.points, "Point CSV or ledger (blue)")->required();
  plot_cmd->add_option("--centers", p_centers, "Point CSV of centers (red)");
  plot_cmd->add_option("--centers-target", p_centers_target, "Grid spec whose centers are drawn in red");
  plot_cmd->add_flag("--labels", plot.labels, "Label points by their 1-based index");
  plot_cmd->add_option("--out", plot.out, "Output SVG")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compress_cmd->parsed()) {
      finish_solver_flags(compress_run, c_opt, c_sched, c_init);
      if (!c_history.empty()) compress_run.history = c_history;
      apply_manifest(compress_run, c_manifest, "compress", c_out);
      if (compress_run.target.empty()) throw InvalidArgument("compress: --target is required");
      if (compress_run.out.empty()) throw InvalidArgument("compress: --out is required");
      return cmd_compress(compress_run, out);
    }
    if (next_cmd->parsed()) {
      finish_solver_flags(next_run, n_opt, n_sched, n_init);
      next_run.config.k = 1;
      if (!n_history.empty()) next_run.history = n_history;
      apply_manifest(next_run, n_manifest, "sample-next", nullptr);
      if (next_run.target.empty()) throw InvalidArgument("sample-next: --target is required");
      next_run.out = next_run.history.value_or("");
      return cmd_sample_next(next_run, out);
    }
    if (eval_cmd->parsed()) return cmd_evaluate(eval, out);
    if (plot_cmd->parsed()) {
      if (!p_centers.empty()) plot.centers = p_centers;
      if (!p_centers_target.empty()) plot.centers_target = p_centers_target;
      return cmd_plot(plot, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace hawc::cli
