#pragma once

#include <functional>
#include <vector>

#include "drs2text/nn/tensor.hpp"

namespace drs2text::nn {

class Tape;

// Handle to a value recorded on a tape.
struct Expr {
  Tape* tape = nullptr;
  int id = -1;

  const Mat& value() const;
  bool valid() const { return tape != nullptr && id >= 0; }
};

// Reverse-mode tape: forward calls record values and backward closures in
// topological (creation) order; backward replays them in reverse.
class Tape {
 public:
  Expr constant(Mat value);
  Expr leaf(Parameter& p);

  // Seeds d(root)/d(root) = 1 and accumulates into every leaf parameter's
  // gradient buffer. `root` must be 1x1.
  void backward(const Expr& root);

  // Op plumbing.
  Expr make(Mat value, bool needs_grad, std::function<void(Tape&)> bw);
  const Mat& val(int id) const { return nodes_[id].value; }
  bool wants(int id) const { return nodes_[id].needs_grad; }
  bool grad_ready(int id) const { return nodes_[id].grad.size() > 0; }
  Mat& grad(int id);  // allocates zeros on first touch

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool needs_grad = false;
    std::function<void(Tape&)> bw;
  };
  std::vector<Node> nodes_;
  std::vector<std::pair<int, Parameter*>> param_leaves_;
};

// ---- expression-building free functions ----

Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr neg(Expr a);
Expr cmul(Expr a, Expr b);                  // coefficient-wise product
Expr matmul(Expr a, Expr b);
Expr add_colvec(Expr m, Expr v);            // broadcast (r x 1) over columns
Expr scale(Expr s, Expr m);                 // s is 1x1
Expr scalar_mul(double c, Expr a);
Expr one_minus(Expr a);                     // 1 - a, elementwise
Expr sigmoid(Expr a);
Expr tanh(Expr a);
Expr relu(Expr a);
Expr leaky_relu(Expr a, double slope = 0.2);
Expr softmax_cols(Expr a);                  // softmax per column
Expr ln(Expr a);                            // elementwise natural log
Expr sum_all(Expr a);                       // 1x1
Expr mean_cols(Expr a);                     // (d x n) -> (d x 1)
Expr vcat(Expr a, Expr b);                  // stack rows
Expr hcat(const std::vector<Expr>& parts);  // stack columns
Expr transpose(Expr a);
Expr pick(Expr a, long r, long c);          // 1x1 view of one entry
Expr gather_cols(Expr a, std::vector<int> ids);
Expr dropout(Expr a, double rate, Rng& rng, bool train);

inline Expr operator+(Expr a, Expr b) { return add(a, b); }
inline Expr operator-(Expr a, Expr b) { return sub(a, b); }
inline Expr operator*(Expr a, Expr b) { return matmul(a, b); }

}  // namespace drs2text::nn
