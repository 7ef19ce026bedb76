#include "drs2text/nn/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "drs2text/nn/tape.hpp"

namespace drs2text::nn {

void sgd_update(ParamStore& params, const OptimizerState& state) {
  if (state.learning_rate <= 0.0) {
    throw NnError(NnErrorKind::ConfigInvalid, "learning rate must be positive");
  }
  for (const auto& [name, p] : params.all()) {
    if (!p.trainable) continue;
    if (!p.tensor.grad.allFinite()) {
      throw NnError(NnErrorKind::NonFiniteGradient,
                    "non-finite gradient in '" + name + "'");
    }
  }
  const double norm = params.grad_norm();
  const double scale =
      norm > state.clip_norm && norm > 0.0 ? state.clip_norm / norm : 1.0;
  for (auto& [name, p] : params.all()) {
    if (!p.trainable) continue;
    p.tensor.value -= state.learning_rate * scale * p.tensor.grad;
  }
}

void decay_learning_rate(OptimizerState& state) {
  state.learning_rate *= state.decay_factor;
}

double grad_check(const std::function<Expr(Tape&)>& build_loss,
                  ParamStore& params, double eps) {
  params.zero_grads();
  {
    Tape tape;
    Expr loss = build_loss(tape);
    tape.backward(loss);
  }

  std::map<std::string, Mat> analytic;
  for (const auto& [name, p] : params.all()) {
    if (p.trainable) analytic[name] = p.tensor.grad;
  }

  auto eval = [&]() {
    Tape tape;
    return build_loss(tape).value()(0, 0);
  };

  double worst = 0.0;
  for (auto& [name, p] : params.all()) {
    if (!p.trainable) continue;
    Mat& v = p.tensor.value;
    const Mat& a = analytic[name];
    for (long c = 0; c < v.cols(); ++c) {
      for (long r = 0; r < v.rows(); ++r) {
        const double saved = v(r, c);
        v(r, c) = saved + eps;
        const double up = eval();
        v(r, c) = saved - eps;
        const double down = eval();
        v(r, c) = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double denom = std::max(std::abs(a(r, c)), std::abs(numeric));
        if (denom < 1e-8) continue;
        worst = std::max(worst, std::abs(a(r, c) - numeric) / denom);
      }
    }
  }
  return worst;
}

}  // namespace drs2text::nn
