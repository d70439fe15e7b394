#include "toba/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace toba {

namespace {

void adam_update(Matrix& w, AdamMoments& moments, const Matrix& g, double lr, double bc1,
                 double bc2, const AdamConfig& cfg) {
  auto wv = w.values();
  auto mv = moments.first.values();
  auto vv = moments.second.values();
  const auto gv = g.values();
  for (std::size_t k = 0; k < wv.size(); ++k) {
    mv[k] = cfg.beta1 * mv[k] + (1.0 - cfg.beta1) * gv[k];
    vv[k] = cfg.beta2 * vv[k] + (1.0 - cfg.beta2) * gv[k] * gv[k];
    const double m_hat = mv[k] / bc1;
    const double v_hat = vv[k] / bc2;
    wv[k] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

}  // namespace

void adam_step(ModelParams& params, const Gradients& grads, double lr, const AdamConfig& cfg) {
  if (grads.w1.rows() != params.w1.rows() || grads.w1.cols() != params.w1.cols() ||
      grads.w2.rows() != params.w2.rows() || grads.w2.cols() != params.w2.cols()) {
    throw std::invalid_argument("adam_step: gradient shapes do not match parameters");
  }
  ++params.step;
  const auto t = static_cast<double>(params.step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  adam_update(params.w1, params.adam_w1, grads.w1, lr, bc1, bc2, cfg);
  adam_update(params.w2, params.adam_w2, grads.w2, lr, bc1, bc2, cfg);
}

PlateauScheduler::PlateauScheduler(double initial_lr, std::size_t patience, double factor)
    : lr_(initial_lr),
      patience_(patience),
      factor_(factor),
      best_(std::numeric_limits<double>::infinity()) {
  if (!(initial_lr > 0.0)) throw std::invalid_argument("PlateauScheduler: lr must be positive");
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument("PlateauScheduler: factor must lie in (0, 1)");
  }
}

double PlateauScheduler::step(double loss) {
  if (loss < best_) {
    best_ = loss;
    bad_epochs_ = 0;
    return lr_;
  }
  ++bad_epochs_;
  if (bad_epochs_ >= patience_) {
    lr_ *= factor_;
    ++reductions_;
    bad_epochs_ = 0;
  }
  return lr_;
}

}  // namespace toba
