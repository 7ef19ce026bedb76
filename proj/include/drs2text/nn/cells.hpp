#pragma once

#include <string>
#include <utility>

#include "drs2text/nn/tape.hpp"

namespace drs2text::nn {

// Gated recurrent unit. Update-gate convention: z -> 1 carries the previous
// state through unchanged.
struct GruParams {
  Expr Wz, Uz, bz, Wr, Ur, br, Wh, Uh, bh;

  static void create(ParamStore& ps, const std::string& prefix, long in,
                     long hidden, Rng& rng);
  static GruParams bind(Tape& t, ParamStore& ps, const std::string& prefix);
};

// x: (in x n), h: (hidden x n) -> (hidden x n). Columns are independent.
Expr gru_step(const GruParams& p, Expr x, Expr h);

struct LstmParams {
  Expr Wf, Uf, bf, Wi, Ui, bi, Wo, Uo, bo, Wg, Ug, bg;

  static void create(ParamStore& ps, const std::string& prefix, long in,
                     long hidden, Rng& rng);
  static LstmParams bind(Tape& t, ParamStore& ps, const std::string& prefix);
};

// Returns (h', c'). Forget gate 1 with input gate 0 conserves the cell state.
std::pair<Expr, Expr> lstm_step(const LstmParams& p, Expr x, Expr h, Expr c);

}  // namespace drs2text::nn
