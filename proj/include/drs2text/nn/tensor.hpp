#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>

#include "drs2text/rng.hpp"

namespace drs2text::nn {

using Mat = Eigen::MatrixXd;

enum class NnErrorKind {
  ShapeMismatch,
  NonFiniteGradient,
  NonFiniteLoss,
  ConfigInvalid,
  UnknownParameter,
};

class NnError : public std::runtime_error {
 public:
  NnError(NnErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  NnErrorKind kind() const { return kind_; }
 private:
  NnErrorKind kind_;
};

// Dense value with a same-shape gradient buffer.
struct Tensor {
  Mat value;
  Mat grad;

  Tensor() = default;
  explicit Tensor(Mat v) : value(std::move(v)) {
    grad = Mat::Zero(value.rows(), value.cols());
  }

  long rows() const { return value.rows(); }
  long cols() const { return value.cols(); }
  void zero_grad() { grad.setZero(); }
};

struct Parameter {
  std::string name;
  Tensor tensor;
  bool trainable = true;
};

enum class Init { Zeros, Glorot };

// Named parameters with deterministic (name-ordered) iteration.
class ParamStore {
 public:
  Parameter& add(const std::string& name, long rows, long cols, Init init, Rng& rng) {
    if (params_.count(name)) {
      throw NnError(NnErrorKind::ConfigInvalid, "duplicate parameter '" + name + "'");
    }
    Mat v = Mat::Zero(rows, cols);
    if (init == Init::Glorot) {
      const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (long c = 0; c < cols; ++c) {
        for (long r = 0; r < rows; ++r) v(r, c) = rng.uniform(-limit, limit);
      }
    }
    Parameter& p = params_[name];
    p.name = name;
    p.tensor = Tensor(std::move(v));
    return p;
  }

  Parameter& get(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) {
      throw NnError(NnErrorKind::UnknownParameter, "no parameter '" + name + "'");
    }
    return it->second;
  }

  bool contains(const std::string& name) const { return params_.count(name) > 0; }

  void zero_grads() {
    for (auto& [_, p] : params_) p.tensor.zero_grad();
  }

  double grad_norm() const {
    double sq = 0.0;
    for (const auto& [_, p] : params_) {
      if (p.trainable) sq += p.tensor.grad.squaredNorm();
    }
    return std::sqrt(sq);
  }

  std::map<std::string, Parameter>& all() { return params_; }
  const std::map<std::string, Parameter>& all() const { return params_; }

 private:
  std::map<std::string, Parameter> params_;
};

}  // namespace drs2text::nn
