#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace hawc {

struct PlainSgd {};

struct AdaptiveMoment {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

using OptimizerKind = std::variant<PlainSgd, AdaptiveMoment>;

/// First-order update rule with its per-parameter state.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double step_size, std::size_t n_params)
      : kind_(kind), step_size_(step_size) {
    if (std::holds_alternative<AdaptiveMoment>(kind_)) {
      m_.assign(n_params, 0.0);
      v_.assign(n_params, 0.0);
    }
  }

  void set_step_size(double step_size) noexcept { step_size_ = step_size; }

  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    if (std::holds_alternative<PlainSgd>(kind_)) {
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= step_size_ * grad[i];
      return;
    }
    const auto& am = std::get<AdaptiveMoment>(kind_);
    const double c1 = 1.0 - std::pow(am.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(am.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = am.beta1 * m_[i] + (1.0 - am.beta1) * grad[i];
      v_[i] = am.beta2 * v_[i] + (1.0 - am.beta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      params[i] -= step_size_ * m_hat / (std::sqrt(v_hat) + am.epsilon);
    }
  }

  [[nodiscard]] std::size_t steps_taken() const noexcept { return t_; }

 private:
  OptimizerKind kind_;
  double step_size_;
  std::vector<double> m_, v_;
  std::size_t t_ = 0;
};

}  // namespace hawc
