#pragma once

#include <functional>

#include "drs2text/nn/tape.hpp"

namespace drs2text::nn {

struct OptimizerState {
  double learning_rate = 1.0;
  double decay_factor = 0.8;
  double clip_norm = 5.0;
};

// Plain SGD with global-norm gradient clipping. Throws NonFiniteGradient when
// any gradient entry is not finite; parameters are left untouched in that case.
void sgd_update(ParamStore& params, const OptimizerState& state);

// Applied at the end of an epoch whose dev perplexity failed to improve.
void decay_learning_rate(OptimizerState& state);

// Max relative error between analytic gradients and central finite
// differences of `build_loss` over every trainable coordinate. Coordinates
// where both gradients are below 1e-8 in magnitude are skipped as noise.
double grad_check(const std::function<Expr(Tape&)>& build_loss,
                  ParamStore& params, double eps = 1e-5);

}  // namespace drs2text::nn
