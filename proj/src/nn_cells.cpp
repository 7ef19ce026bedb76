#include "drs2text/nn/cells.hpp"

namespace drs2text::nn {

void GruParams::create(ParamStore& ps, const std::string& prefix, long in,
                       long hidden, Rng& rng) {
  ps.add(prefix + ".Wz", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Uz", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bz", hidden, 1, Init::Zeros, rng);
  ps.add(prefix + ".Wr", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Ur", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".br", hidden, 1, Init::Zeros, rng);
  ps.add(prefix + ".Wh", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Uh", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bh", hidden, 1, Init::Zeros, rng);
}

GruParams GruParams::bind(Tape& t, ParamStore& ps, const std::string& prefix) {
  GruParams p;
  p.Wz = t.leaf(ps.get(prefix + ".Wz"));
  p.Uz = t.leaf(ps.get(prefix + ".Uz"));
  p.bz = t.leaf(ps.get(prefix + ".bz"));
  p.Wr = t.leaf(ps.get(prefix + ".Wr"));
  p.Ur = t.leaf(ps.get(prefix + ".Ur"));
  p.br = t.leaf(ps.get(prefix + ".br"));
  p.Wh = t.leaf(ps.get(prefix + ".Wh"));
  p.Uh = t.leaf(ps.get(prefix + ".Uh"));
  p.bh = t.leaf(ps.get(prefix + ".bh"));
  return p;
}

Expr gru_step(const GruParams& p, Expr x, Expr h) {
  Expr z = sigmoid(add_colvec(p.Wz * x + p.Uz * h, p.bz));
  Expr r = sigmoid(add_colvec(p.Wr * x + p.Ur * h, p.br));
  Expr cand = tanh(add_colvec(p.Wh * x + p.Uh * cmul(r, h), p.bh));
  return cmul(z, h) + cmul(one_minus(z), cand);
}

void LstmParams::create(ParamStore& ps, const std::string& prefix, long in,
                        long hidden, Rng& rng) {
  ps.add(prefix + ".Wf", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Uf", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bf", hidden, 1, Init::Zeros, rng);
  ps.add(prefix + ".Wi", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Ui", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bi", hidden, 1, Init::Zeros, rng);
  ps.add(prefix + ".Wo", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Uo", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bo", hidden, 1, Init::Zeros, rng);
  ps.add(prefix + ".Wg", hidden, in, Init::Glorot, rng);
  ps.add(prefix + ".Ug", hidden, hidden, Init::Glorot, rng);
  ps.add(prefix + ".bg", hidden, 1, Init::Zeros, rng);
}

LstmParams LstmParams::bind(Tape& t, ParamStore& ps, const std::string& prefix) {
  LstmParams p;
  p.Wf = t.leaf(ps.get(prefix + ".Wf"));
  p.Uf = t.leaf(ps.get(prefix + ".Uf"));
  p.bf = t.leaf(ps.get(prefix + ".bf"));
  p.Wi = t.leaf(ps.get(prefix + ".Wi"));
  p.Ui = t.leaf(ps.get(prefix + ".Ui"));
  p.bi = t.leaf(ps.get(prefix + ".bi"));
  p.Wo = t.leaf(ps.get(prefix + ".Wo"));
  p.Uo = t.leaf(ps.get(prefix + ".Uo"));
  p.bo = t.leaf(ps.get(prefix + ".bo"));
  p.Wg = t.leaf(ps.get(prefix + ".Wg"));
  p.Ug = t.leaf(ps.get(prefix + ".Ug"));
  p.bg = t.leaf(ps.get(prefix + ".bg"));
  return p;
}

std::pair<Expr, Expr> lstm_step(const LstmParams& p, Expr x, Expr h, Expr c) {
  Expr f = sigmoid(add_colvec(p.Wf * x + p.Uf * h, p.bf));
  Expr i = sigmoid(add_colvec(p.Wi * x + p.Ui * h, p.bi));
  Expr o = sigmoid(add_colvec(p.Wo * x + p.Uo * h, p.bo));
  Expr g = tanh(add_colvec(p.Wg * x + p.Ug * h, p.bg));
  Expr c_next = cmul(f, c) + cmul(i, g);
  Expr h_next = cmul(o, tanh(c_next));
  return {h_next, c_next};
}

}  // namespace drs2text::nn
