#pragma once

// History-aware compression: place K free points X so that, together with
// K_p fixed historical points Y, they approximate a target distribution in
// kernel distance. With K_p = 0 this is plain measure compression; repeated
// K = 1 solves that feed each result back into Y give an incremental sampler
// whose outputs avoid earlier ones.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hawc/distributions.hpp"
#include "hawc/errors.hpp"
#include "hawc/kernel.hpp"
#include "hawc/optimizer.hpp"
#include "hawc/point_set.hpp"
#include "hawc/rng.hpp"
#include "hawc/signed_measure.hpp"

namespace hawc {

/// Step size as a function of the iteration index.
enum class StepSchedule {
  Constant,     ///< step_size at every iteration.
  LinearDecay,  ///< step_size * (1 - it / iterations): damps batch noise at the end.
};

enum class Initialization {
  FromTarget,  ///< K i.i.d. draws from the target.
  Origin,      ///< All free points at the origin; only meaningful for K = 1.
};

struct HawcConfig {
  std::size_t k = 1;
  std::size_t batch_size = 256;
  std::size_t iterations = 1000;
  double step_size = 0.05;
  OptimizerKind optimizer = AdaptiveMoment{};
  double kernel_a = Kernel::kDefaultA;
  std::uint64_t seed = 0;
  StepSchedule schedule = StepSchedule::LinearDecay;
  Initialization init = Initialization::FromTarget;

  [[nodiscard]] double step_size_at(std::size_t it) const noexcept {
    if (schedule == StepSchedule::Constant) return step_size;
    return step_size * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
  }

  void validate() const {
    if (k < 1) throw InvalidArgument("HawcConfig: k must be >= 1");
    if (batch_size < 1) throw InvalidArgument("HawcConfig: batch size must be >= 1");
    if (iterations < 1) throw InvalidArgument("HawcConfig: iterations must be >= 1");
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
      throw InvalidArgument("HawcConfig: step size must be finite and > 0");
    }
    (void)Kernel(kernel_a);
  }
};

/// Previously emitted points, in emission order. Entry i has emission
/// index i + 1.
class HistoryLedger {
 public:
  HistoryLedger() = default;
  explicit HistoryLedger(PointSet points) : points_(std::move(points)) {}

  [[nodiscard]] const PointSet& points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.dim(); }

  [[nodiscard]] static std::size_t emission_index(std::size_t position) noexcept { return position + 1; }

  /// Appends and returns the new point's emission index.
  std::size_t append(std::span<const double> point) {
    points_.push_back(point);
    return points_.size();
  }

 private:
  PointSet points_;
};

struct CompressionResult {
  PointSet points;
  double final_loss = 0.0;
  std::vector<double> loss_trace;
};

/// Difference measure delta_X - eta with
///   +1/K on each x_k, -(K_p + K)/(K B) on each batch point, +1/K on each y_j.
/// Atom order: X, then batch, then history, so X occupies indices [0, K).
/// Total mass is K/K - (K_p + K)/K + K_p/K = 0 by construction.
inline SignedPointMeasure hawc_measure(const PointSet& x, const HistoryLedger& history,
                                       const PointSet& batch) {
  if (x.empty()) throw InvalidArgument("hawc: no free points");
  if (batch.empty()) throw InvalidArgument("hawc: empty batch");
  require_same_dim(x, batch, "hawc (free points vs batch)");
  require_same_dim(x, history.points(), "hawc (free points vs history)");

  const double k = static_cast<double>(x.size());
  const double kp = static_cast<double>(history.size());
  const double b = static_cast<double>(batch.size());

  PointSet atoms = x;
  atoms.append(batch);
  atoms.append(history.points());
  std::vector<double> weights;
  weights.reserve(atoms.size());
  weights.insert(weights.end(), x.size(), 1.0 / k);
  weights.insert(weights.end(), batch.size(), -(kp + k) / (k * b));
  weights.insert(weights.end(), history.size(), 1.0 / k);
  return {std::move(atoms), std::move(weights)};
}

inline double hawc_loss(const PointSet& x, const HistoryLedger& history, const PointSet& batch,
                        const Kernel& kernel) {
  return distance_squared(hawc_measure(x, history, batch), kernel);
}

struct LossAndGradient {
  double loss = 0.0;
  PointSet gradient;  ///< one row per free point
};

/// Loss and its gradient with respect to X only; batch and history are constants.
inline LossAndGradient hawc_loss_and_gradient(const PointSet& x, const HistoryLedger& history,
                                              const PointSet& batch, const Kernel& kernel) {
  const auto q = hawc_measure(x, history, batch);
  std::vector<std::size_t> free(x.size());
  std::iota(free.begin(), free.end(), std::size_t{0});
  return {distance_squared(q, kernel), distance_squared_gradient(q, free, kernel)};
}

/// Stochastic minimization of the distance between the uniform measure on
/// K free points and the history-adjusted target. One rng stream seeded from
/// config.seed drives the initialization and then one fresh batch of B target
/// draws per iteration. Bit-for-bit deterministic for a fixed config.
inline CompressionResult compress(const TargetDistribution& target, const HistoryLedger& history,
                                  const HawcConfig& config) {
  config.validate();
  if (!history.empty() && history.dim() != target.dim()) {
    throw InvalidArgument("compress: history dimension " + std::to_string(history.dim()) +
                          " does not match target dimension " + std::to_string(target.dim()));
  }
  const Kernel kernel(config.kernel_a);
  SeededRng rng(config.seed);

  PointSet x = config.init == Initialization::FromTarget
                   ? target.sample(config.k, rng)
                   : PointSet(target.dim(), std::vector<double>(config.k * target.dim(), 0.0));

  Optimizer opt(config.optimizer, config.step_size, x.coords().size());
  CompressionResult result;
  result.loss_trace.reserve(config.iterations);
  PointSet batch;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    batch = target.sample(config.batch_size, rng);
    auto lg = hawc_loss_and_gradient(x, history, batch, kernel);
    if (!std::isfinite(lg.loss)) {
      throw NumericError("compress: non-finite loss at iteration " + std::to_string(it));
    }
    for (double g : lg.gradient.coords()) {
      if (!std::isfinite(g)) {
        throw NumericError("compress: non-finite gradient at iteration " + std::to_string(it));
      }
    }
    result.loss_trace.push_back(lg.loss);
    opt.set_step_size(config.step_size_at(it));
    opt.step(x.coords(), lg.gradient.coords());
  }
  result.final_loss = hawc_loss(x, history, batch, kernel);
  if (!std::isfinite(result.final_loss)) throw NumericError("compress: non-finite final loss");
  result.points = std::move(x);
  return result;
}

/// One step of the incremental sampler: the K = 1 solution against the
/// current history. The ledger is not modified; the caller appends.
inline std::vector<double> sample_next(const TargetDistribution& target,
                                       const HistoryLedger& history, const HawcConfig& config) {
  if (config.k != 1) throw InvalidArgument("sample_next: config.k must be 1");
  return compress(target, history, config).points.row(0);
}

}  // namespace hawc
