#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hawc/hawc.hpp"

namespace hawc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,    ///< bad argument or target spec
  kExitIo = 3,       ///< missing, unreadable or unwritable file
  kExitNumeric = 4,  ///< non-finite loss
};

/// Everything needed to reproduce a compress or sample-next run; serialized
/// as the run manifest.
struct RunManifest {
  std::string command;  ///< "compress" or "sample-next"
  std::string target;
  HawcConfig config;
  std::optional<std::string> history;
  std::string out;
  std::size_t count = 1;  ///< sample-next only
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text, const std::string& source);

/// Path of the manifest written next to `output`.
inline std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }
inline std::string loss_trace_path_for(const std::string& output) { return output + ".loss.csv"; }

int cmd_compress(const RunManifest& run, std::ostream& out);
int cmd_sample_next(const RunManifest& run, std::ostream& out);

struct EvaluateOptions {
  std::string points;
  std::string target;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  double kernel_a = Kernel::kDefaultA;
};
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out);

struct PlotOptions {
  std::string points;
  std::optional<std::string> centers;         ///< point file
  std::optional<std::string> centers_target;  ///< grid spec whose centers are drawn
  bool labels = false;
  std::string out;
};
int cmd_plot(const PlotOptions& opts, std::ostream& out);

/// Parses `args` (without the program name), dispatches, and maps errors to
/// exit codes. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hawc::cli
