#include <cmath>

#include "doctest.h"
#include "drs2text/nn/cells.hpp"
#include "drs2text/nn/optimizer.hpp"

using namespace drs2text;
using nn::Expr;
using nn::Mat;
using nn::Tape;
using nn::hcat;

namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void set_value(nn::ParamStore& ps, const std::string& name, double v) {
  ps.get(name).tensor.value.setConstant(v);
}

}  // namespace

TEST_CASE("update gate forced open carries the state through") {
  Rng rng(1);
  nn::ParamStore ps;
  nn::GruParams::create(ps, "gru", 3, 3, rng);
  set_value(ps, "gru.bz", 50.0);  // z ~ 1

  Tape t;
  auto p = nn::GruParams::bind(t, ps, "gru");
  Mat h0 = Mat::Random(3, 1);
  Expr h = t.constant(h0);
  Expr x = t.constant(Mat::Random(3, 1));
  Expr h1 = gru_step(p, x, h);
  CHECK((h1.value() - h0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gru with zero parameters halves the state") {
  Rng rng(1);
  nn::ParamStore ps;
  nn::GruParams::create(ps, "gru", 1, 1, rng);
  for (auto& [name, p] : ps.all()) p.tensor.value.setZero();

  Tape t;
  auto p = nn::GruParams::bind(t, ps, "gru");
  Expr h = t.constant(Mat::Constant(1, 1, 0.8));
  Expr x = t.constant(Mat::Constant(1, 1, 0.3));
  Expr h1 = gru_step(p, x, h);
  // z = r = 0.5, candidate = tanh(0) = 0, h' = 0.5 * 0.8
  CHECK(h1.value()(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("gru scalar step matches a hand computation") {
  nn::ParamStore ps;
  Rng rng(1);
  nn::GruParams::create(ps, "gru", 1, 1, rng);
  const double wz = 0.3, uz = -0.2, bz = 0.1;
  const double wr = 0.5, ur = 0.4, br = -0.3;
  const double wh = -0.6, uh = 0.7, bh = 0.2;
  set_value(ps, "gru.Wz", wz); set_value(ps, "gru.Uz", uz); set_value(ps, "gru.bz", bz);
  set_value(ps, "gru.Wr", wr); set_value(ps, "gru.Ur", ur); set_value(ps, "gru.br", br);
  set_value(ps, "gru.Wh", wh); set_value(ps, "gru.Uh", uh); set_value(ps, "gru.bh", bh);
  const double x = 0.9, h = -0.4;

  // independent scalar arithmetic
  const double z = sig(wz * x + uz * h + bz);
  const double r = sig(wr * x + ur * h + br);
  const double cand = std::tanh(wh * x + uh * (r * h) + bh);
  const double expected = z * h + (1.0 - z) * cand;

  Tape t;
  auto p = nn::GruParams::bind(t, ps, "gru");
  Expr out = gru_step(p, t.constant(Mat::Constant(1, 1, x)),
                      t.constant(Mat::Constant(1, 1, h)));
  CHECK(out.value()(0, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("gru gradients match central differences") {
  Rng rng(7);
  nn::ParamStore ps;
  nn::GruParams::create(ps, "gru", 4, 4, rng);
  Mat x = Mat::Random(4, 2), h = Mat::Random(4, 2);
  auto loss = [&](Tape& t) {
    auto p = nn::GruParams::bind(t, ps, "gru");
    return sum_all(tanh(gru_step(p, t.constant(x), t.constant(h))));
  };
  CHECK(nn::grad_check(loss, ps) < 1e-4);
}

TEST_CASE("lstm conserves the cell when forget=1 and input=0") {
  Rng rng(2);
  nn::ParamStore ps;
  nn::LstmParams::create(ps, "lstm", 2, 3, rng);
  set_value(ps, "lstm.bf", 50.0);
  set_value(ps, "lstm.bi", -50.0);

  Tape t;
  auto p = nn::LstmParams::bind(t, ps, "lstm");
  Mat c0 = Mat::Random(3, 1);
  auto [h1, c1] = lstm_step(p, t.constant(Mat::Random(2, 1)),
                            t.constant(Mat::Random(3, 1)), t.constant(c0));
  CHECK((c1.value() - c0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lstm scalar step matches a hand computation") {
  nn::ParamStore ps;
  Rng rng(3);
  nn::LstmParams::create(ps, "lstm", 1, 1, rng);
  const double wf = 0.2, uf = -0.1, bf = 0.05, wi = 0.4, ui = 0.3, bi = -0.2;
  const double wo = -0.5, uo = 0.6, bo = 0.1, wg = 0.7, ug = -0.8, bg = 0.0;
  set_value(ps, "lstm.Wf", wf); set_value(ps, "lstm.Uf", uf); set_value(ps, "lstm.bf", bf);
  set_value(ps, "lstm.Wi", wi); set_value(ps, "lstm.Ui", ui); set_value(ps, "lstm.bi", bi);
  set_value(ps, "lstm.Wo", wo); set_value(ps, "lstm.Uo", uo); set_value(ps, "lstm.bo", bo);
  set_value(ps, "lstm.Wg", wg); set_value(ps, "lstm.Ug", ug); set_value(ps, "lstm.bg", bg);
  const double x = -0.7, h = 0.25, c = 0.5;

  const double f = sig(wf * x + uf * h + bf);
  const double i = sig(wi * x + ui * h + bi);
  const double o = sig(wo * x + uo * h + bo);
  const double g = std::tanh(wg * x + ug * h + bg);
  const double ec = f * c + i * g;
  const double eh = o * std::tanh(ec);

  Tape t;
  auto p = nn::LstmParams::bind(t, ps, "lstm");
  auto [h1, c1] = lstm_step(p, t.constant(Mat::Constant(1, 1, x)),
                            t.constant(Mat::Constant(1, 1, h)),
                            t.constant(Mat::Constant(1, 1, c)));
  CHECK(c1.value()(0, 0) == doctest::Approx(ec).epsilon(1e-14));
  CHECK(h1.value()(0, 0) == doctest::Approx(eh).epsilon(1e-14));
}

TEST_CASE("lstm gradients match central differences") {
  Rng rng(8);
  nn::ParamStore ps;
  nn::LstmParams::create(ps, "lstm", 4, 4, rng);
  Mat x = Mat::Random(4, 1), h = Mat::Random(4, 1), c = Mat::Random(4, 1);
  auto loss = [&](Tape& t) {
    auto p = nn::LstmParams::bind(t, ps, "lstm");
    auto [h1, c1] = lstm_step(p, t.constant(x), t.constant(h), t.constant(c));
    return sum_all(cmul(h1, c1));
  };
  CHECK(nn::grad_check(loss, ps) < 1e-4);
}

TEST_CASE("sgd applies plain updates and the decay schedule") {
  Rng rng(4);
  nn::ParamStore ps;
  ps.add("p", 1, 1, nn::Init::Zeros, rng);
  ps.get("p").tensor.value(0, 0) = 1.0;
  ps.get("p").tensor.grad(0, 0) = 0.5;
  nn::OptimizerState opt;
  nn::sgd_update(ps, opt);
  CHECK(ps.get("p").tensor.value(0, 0) == doctest::Approx(0.5));

  ps.get("p").tensor.grad.setZero();
  nn::sgd_update(ps, opt);
  CHECK(ps.get("p").tensor.value(0, 0) == doctest::Approx(0.5));

  nn::decay_learning_rate(opt);
  nn::decay_learning_rate(opt);
  CHECK(opt.learning_rate == doctest::Approx(0.64));

  ps.get("p").tensor.grad(0, 0) = std::nan("");
  CHECK_THROWS_AS(nn::sgd_update(ps, opt), nn::NnError);
}

TEST_CASE("gradient clipping caps the global norm") {
  Rng rng(5);
  nn::ParamStore ps;
  ps.add("a", 2, 2, nn::Init::Zeros, rng);
  ps.get("a").tensor.grad.setConstant(100.0);
  nn::OptimizerState opt;
  opt.learning_rate = 1.0;
  const Mat before = ps.get("a").tensor.value;
  nn::sgd_update(ps, opt);
  const double step = (ps.get("a").tensor.value - before).norm();
  CHECK(step == doctest::Approx(opt.clip_norm).epsilon(1e-12));
}

TEST_CASE("grad_check on a linear function is exact to roundoff") {
  Rng rng(6);
  nn::ParamStore ps;
  ps.add("w", 3, 3, nn::Init::Glorot, rng);
  Mat x = Mat::Random(3, 1);
  auto loss = [&](Tape& t) {
    return sum_all(t.leaf(ps.get("w")) * t.constant(x));
  };
  CHECK(nn::grad_check(loss, ps) < 1e-9);
}

TEST_CASE("softmax columns sum to one") {
  Tape t;
  Mat x = 10.0 * Mat::Random(7, 5);
  Expr y = softmax_cols(t.constant(x));
  for (long c = 0; c < 5; ++c) {
    CHECK(std::abs(y.value().col(c).sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("dropout zeroes about half at rate 0.5 and is identity at eval") {
  Rng rng(9);
  Tape t;
  Expr x = t.constant(Mat::Ones(100, 100));
  Expr dropped = dropout(x, 0.5, rng, true);
  const double zeros =
      (dropped.value().array() == 0.0).count() / 10000.0;
  CHECK(zeros > 0.45);
  CHECK(zeros < 0.55);
  // surviving entries are rescaled by 1/keep
  CHECK(dropped.value().maxCoeff() == doctest::Approx(2.0));

  Expr same = dropout(x, 0.5, rng, false);
  CHECK(same.id == x.id);
}

TEST_CASE("composite expression gradients check out") {
  Rng rng(10);
  nn::ParamStore ps;
  ps.add("W", 4, 3, nn::Init::Glorot, rng);
  ps.add("b", 4, 1, nn::Init::Glorot, rng);
  ps.add("v", 4, 1, nn::Init::Glorot, rng);
  Mat x = Mat::Random(3, 5);
  auto loss = [&](Tape& t) {
    Expr W = t.leaf(ps.get("W"));
    Expr b = t.leaf(ps.get("b"));
    Expr v = t.leaf(ps.get("v"));
    Expr h = add_colvec(W * t.constant(x), b);
    Expr a = softmax_cols(transpose(transpose(v) * tanh(h)));
    Expr mix = scale(pick(a, 0, 0), sigmoid(h)) + relu(h);
    Expr picked = neg(ln(pick(softmax_cols(mean_cols(mix)), 1, 0)));
    return picked + sum_all(cmul(leaky_relu(h), one_minus(sigmoid(h))));
  };
  CHECK(nn::grad_check(loss, ps) < 1e-4);
}

TEST_CASE("gather and concat gradients check out") {
  Rng rng(11);
  nn::ParamStore ps;
  ps.add("E", 3, 6, nn::Init::Glorot, rng);
  auto loss = [&](Tape& t) {
    Expr E = t.leaf(ps.get("E"));
    Expr g = gather_cols(E, {0, 2, 2, 5});
    Expr stacked = vcat(g, cmul(g, g));
    Expr wide = hcat({stacked, scalar_mul(0.5, stacked)});
    return sum_all(tanh(wide));
  };
  CHECK(nn::grad_check(loss, ps) < 1e-4);
}
