#include "drs2text/nn/tape.hpp"

#include <cmath>
#include <utility>

namespace drs2text::nn {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw NnError(NnErrorKind::ShapeMismatch, what);
}

bool needs(Expr a) { return a.tape->wants(a.id); }

// Accumulates `delta` into a parent's gradient only when that parent wants one.
void acc(Tape& t, Expr parent, const Mat& delta) {
  if (t.wants(parent.id)) t.grad(parent.id) += delta;
}

}  // namespace

const Mat& Expr::value() const { return tape->val(id); }

Expr Tape::constant(Mat value) {
  nodes_.push_back({std::move(value), {}, false, {}});
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Expr Tape::leaf(Parameter& p) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({p.tensor.value, {}, p.trainable, {}});
  if (p.trainable) param_leaves_.emplace_back(id, &p);
  return {this, id};
}

Expr Tape::make(Mat value, bool needs_grad, std::function<void(Tape&)> bw) {
  nodes_.push_back({std::move(value), {}, needs_grad,
                    needs_grad ? std::move(bw) : std::function<void(Tape&)>{}});
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Mat& Tape::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(const Expr& root) {
  check(root.tape == this && root.id >= 0, "backward: foreign expression");
  check(nodes_[root.id].value.size() == 1, "backward: root must be scalar");
  grad(root.id)(0, 0) += 1.0;
  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.size() == 0 || !n.bw) continue;
    n.bw(*this);
  }
  for (auto& [id, p] : param_leaves_) {
    if (nodes_[id].grad.size() > 0) p->tensor.grad += nodes_[id].grad;
  }
}

Expr add(Expr a, Expr b) {
  check(a.value().rows() == b.value().rows() &&
        a.value().cols() == b.value().cols(), "add: shape mismatch");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value() + b.value(), needs(a) || needs(b), [=](Tape& tp) {
    const Mat g = tp.grad(oid);
    acc(tp, a, g);
    acc(tp, b, g);
  });
}

Expr sub(Expr a, Expr b) {
  check(a.value().rows() == b.value().rows() &&
        a.value().cols() == b.value().cols(), "sub: shape mismatch");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value() - b.value(), needs(a) || needs(b), [=](Tape& tp) {
    const Mat g = tp.grad(oid);
    acc(tp, a, g);
    if (tp.wants(b.id)) tp.grad(b.id) -= g;
  });
}

Expr neg(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(-a.value(), needs(a), [=](Tape& tp) {
    if (tp.wants(a.id)) tp.grad(a.id) -= tp.grad(oid);
  });
}

Expr cmul(Expr a, Expr b) {
  check(a.value().rows() == b.value().rows() &&
        a.value().cols() == b.value().cols(), "cmul: shape mismatch");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().cwiseProduct(b.value()), needs(a) || needs(b),
                [=](Tape& tp) {
    const Mat& g = tp.grad(oid);
    acc(tp, a, g.cwiseProduct(tp.val(b.id)));
    acc(tp, b, g.cwiseProduct(tp.val(a.id)));
  });
}

Expr matmul(Expr a, Expr b) {
  check(a.value().cols() == b.value().rows(), "matmul: inner dim mismatch");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value() * b.value(), needs(a) || needs(b), [=](Tape& tp) {
    const Mat& g = tp.grad(oid);
    acc(tp, a, g * tp.val(b.id).transpose());
    acc(tp, b, tp.val(a.id).transpose() * g);
  });
}

Expr add_colvec(Expr m, Expr v) {
  check(v.value().cols() == 1 && v.value().rows() == m.value().rows(),
        "add_colvec: vector shape mismatch");
  Tape& t = *m.tape;
  const int oid = static_cast<int>(t.size());
  Mat out = m.value();
  out.colwise() += Eigen::VectorXd(v.value().col(0));
  return t.make(std::move(out), needs(m) || needs(v), [=](Tape& tp) {
    const Mat& g = tp.grad(oid);
    acc(tp, m, g);
    acc(tp, v, g.rowwise().sum());
  });
}

Expr scale(Expr s, Expr m) {
  check(s.value().size() == 1, "scale: scalar must be 1x1");
  Tape& t = *m.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(s.value()(0, 0) * m.value(), needs(s) || needs(m), [=](Tape& tp) {
    const Mat& g = tp.grad(oid);
    if (tp.wants(s.id)) {
      tp.grad(s.id)(0, 0) += g.cwiseProduct(tp.val(m.id)).sum();
    }
    acc(tp, m, tp.val(s.id)(0, 0) * g);
  });
}

Expr scalar_mul(double c, Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(c * a.value(), needs(a), [=](Tape& tp) {
    acc(tp, a, c * tp.grad(oid));
  });
}

Expr one_minus(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make((1.0 - a.value().array()).matrix(), needs(a), [=](Tape& tp) {
    if (tp.wants(a.id)) tp.grad(a.id) -= tp.grad(oid);
  });
}

Expr sigmoid(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  Mat y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return t.make(std::move(y), needs(a), [=](Tape& tp) {
    const Mat& yv = tp.val(oid);
    acc(tp, a, tp.grad(oid).cwiseProduct(
                   (yv.array() * (1.0 - yv.array())).matrix()));
  });
}

Expr tanh(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().array().tanh().matrix(), needs(a), [=](Tape& tp) {
    const Mat& yv = tp.val(oid);
    acc(tp, a, tp.grad(oid).cwiseProduct((1.0 - yv.array().square()).matrix()));
  });
}

Expr relu(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().cwiseMax(0.0), needs(a), [=](Tape& tp) {
    const Mat mask = (tp.val(a.id).array() > 0.0).cast<double>().matrix();
    acc(tp, a, tp.grad(oid).cwiseProduct(mask));
  });
}

Expr leaky_relu(Expr a, double slope) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  Mat y = a.value().array().max(slope * a.value().array()).matrix();
  return t.make(std::move(y), needs(a), [=](Tape& tp) {
    const Mat mask = tp.val(a.id).unaryExpr(
        [slope](double x) { return x > 0.0 ? 1.0 : slope; });
    acc(tp, a, tp.grad(oid).cwiseProduct(mask));
  });
}

Expr softmax_cols(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  Mat y = a.value();
  for (long c = 0; c < y.cols(); ++c) {
    Eigen::ArrayXd col = y.col(c).array() - y.col(c).maxCoeff();
    col = col.exp();
    y.col(c) = (col / col.sum()).matrix();
  }
  return t.make(std::move(y), needs(a), [=](Tape& tp) {
    const Mat& yv = tp.val(oid);
    const Mat& g = tp.grad(oid);
    if (!tp.wants(a.id)) return;
    Mat& ga = tp.grad(a.id);
    for (long c = 0; c < yv.cols(); ++c) {
      const double dot = yv.col(c).dot(g.col(c));
      ga.col(c) += yv.col(c).cwiseProduct(g.col(c) - Mat::Constant(yv.rows(), 1, dot));
    }
  });
}

Expr ln(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().array().log().matrix(), needs(a), [=](Tape& tp) {
    acc(tp, a, tp.grad(oid).cwiseQuotient(tp.val(a.id)));
  });
}

Expr sum_all(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(Mat::Constant(1, 1, a.value().sum()), needs(a), [=](Tape& tp) {
    if (tp.wants(a.id)) {
      tp.grad(a.id).array() += tp.grad(oid)(0, 0);
    }
  });
}

Expr mean_cols(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  const long n = a.value().cols();
  return t.make(a.value().rowwise().mean(), needs(a), [=](Tape& tp) {
    acc(tp, a, tp.grad(oid).replicate(1, n) / static_cast<double>(n));
  });
}

Expr vcat(Expr a, Expr b) {
  check(a.value().cols() == b.value().cols(), "vcat: column mismatch");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  const long ra = a.value().rows(), rb = b.value().rows();
  Mat out(ra + rb, a.value().cols());
  out.topRows(ra) = a.value();
  out.bottomRows(rb) = b.value();
  return t.make(std::move(out), needs(a) || needs(b), [=](Tape& tp) {
    const Mat& g = tp.grad(oid);
    acc(tp, a, g.topRows(ra));
    acc(tp, b, g.bottomRows(rb));
  });
}

Expr hcat(const std::vector<Expr>& parts) {
  check(!parts.empty(), "hcat: empty");
  Tape& t = *parts.front().tape;
  long cols = 0;
  bool any = false;
  for (const Expr& p : parts) {
    check(p.value().rows() == parts.front().value().rows(), "hcat: row mismatch");
    cols += p.value().cols();
    any = any || needs(p);
  }
  Mat out(parts.front().value().rows(), cols);
  std::vector<long> offsets(parts.size());
  long off = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    offsets[i] = off;
    out.middleCols(off, parts[i].value().cols()) = parts[i].value();
    off += parts[i].value().cols();
  }
  const int oid = static_cast<int>(t.size());
  auto ps = parts;
  return t.make(std::move(out), any, [ps, offsets, oid](Tape& tp) {
    const Mat& g = tp.grad(oid);
    for (size_t i = 0; i < ps.size(); ++i) {
      acc(tp, ps[i], g.middleCols(offsets[i], tp.val(ps[i].id).cols()));
    }
  });
}

Expr transpose(Expr a) {
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().transpose(), needs(a), [=](Tape& tp) {
    acc(tp, a, tp.grad(oid).transpose());
  });
}

Expr pick(Expr a, long r, long c) {
  check(r >= 0 && r < a.value().rows() && c >= 0 && c < a.value().cols(),
        "pick: index out of range");
  Tape& t = *a.tape;
  const int oid = static_cast<int>(t.size());
  return t.make(Mat::Constant(1, 1, a.value()(r, c)), needs(a), [=](Tape& tp) {
    if (tp.wants(a.id)) tp.grad(a.id)(r, c) += tp.grad(oid)(0, 0);
  });
}

Expr gather_cols(Expr a, std::vector<int> ids) {
  Tape& t = *a.tape;
  Mat out(a.value().rows(), static_cast<long>(ids.size()));
  for (size_t k = 0; k < ids.size(); ++k) {
    check(ids[k] >= 0 && ids[k] < a.value().cols(), "gather_cols: id out of range");
    out.col(static_cast<long>(k)) = a.value().col(ids[k]);
  }
  const int oid = static_cast<int>(t.size());
  return t.make(std::move(out), needs(a), [a, ids, oid](Tape& tp) {
    if (!tp.wants(a.id)) return;
    const Mat& g = tp.grad(oid);
    Mat& ga = tp.grad(a.id);
    for (size_t k = 0; k < ids.size(); ++k) {
      ga.col(ids[k]) += g.col(static_cast<long>(k));
    }
  });
}

Expr dropout(Expr a, double rate, Rng& rng, bool train) {
  if (!train || rate <= 0.0) return a;  // identity at evaluation time
  Tape& t = *a.tape;
  const double keep = 1.0 - rate;
  Mat mask(a.value().rows(), a.value().cols());
  for (long c = 0; c < mask.cols(); ++c) {
    for (long r = 0; r < mask.rows(); ++r) {
      mask(r, c) = rng.uniform() < rate ? 0.0 : 1.0 / keep;
    }
  }
  const int oid = static_cast<int>(t.size());
  return t.make(a.value().cwiseProduct(mask), needs(a), [a, mask, oid](Tape& tp) {
    acc(tp, a, tp.grad(oid).cwiseProduct(mask));
  });
}

}  // namespace drs2text::nn
