#pragma once

#include <cstddef>

#include "toba/gcn.hpp"

namespace toba {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update of params.w1/params.w2; increments
/// params.step before computing the corrections.
void adam_step(ModelParams& params, const Gradients& grads, double lr,
               const AdamConfig& cfg = {});

/// Multiplies the learning rate by `factor` once the monitored loss has gone
/// `patience` consecutive epochs without a strict improvement on the best
/// value seen. The counter restarts after an improvement or a reduction.
class PlateauScheduler {
 public:
  PlateauScheduler(double initial_lr, std::size_t patience, double factor);

  /// Records one epoch's validation loss and returns the learning rate to use
  /// from now on.
  double step(double loss);

  [[nodiscard]] double lr() const { return lr_; }
  [[nodiscard]] std::size_t reductions() const { return reductions_; }
  [[nodiscard]] std::size_t bad_epochs() const { return bad_epochs_; }

 private:
  double lr_;
  std::size_t patience_;
  double factor_;
  double best_;
  std::size_t bad_epochs_ = 0;
  std::size_t reductions_ = 0;
};

}  // namespace toba
