#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "drs2text/encoders.hpp"
#include "drs2text/tfa.hpp"
#include "drs2text/text.hpp"

namespace drs2text {

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocabulary();

  // Built from the training split only; tokens ordered by frequency then
  // lexicographically for determinism.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          int min_freq = 1);
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  int id(const std::string& token) const;  // kUnk when absent
  const std::string& token(int id) const { return id2tok_[id]; }
  int size() const { return static_cast<int>(id2tok_.size()); }
  bool contains(const std::string& token) const { return tok2id_.count(token) > 0; }
  const std::vector<std::string>& tokens() const { return id2tok_; }

 private:
  std::vector<std::string> id2tok_;
  std::unordered_map<std::string, int> tok2id_;
};

struct ModelConfig {
  EncoderConfig encoder;
  int max_len = 60;
  double dropout = 0.5;
  std::string strategy = "none";  // TFA the training data carries; for reports
};

struct Model {
  ModelConfig cfg;
  Vocabulary src_vocab;
  Vocabulary tgt_vocab;
  nn::ParamStore params;
};

Model make_model(const ModelConfig& cfg, const Vocabulary& src,
                 const Vocabulary& tgt, uint64_t seed);

// A graph/reference pair with everything precomputed that does not depend on
// parameter values.
struct Example {
  std::string id;
  LeviGraph graph;
  std::vector<std::string> src_tokens;
  std::vector<std::string> copy_surfaces;  // per node
  std::vector<int> src_ids;
  std::vector<std::string> tgt_tokens;
  std::string reference;
  VoiceType voice;
  std::string strategy = "none";

  Neighborhood nb;
  DirMats dm;

  std::vector<std::string> oov_surfaces;  // example-local target-vocab extension
  std::vector<int> node_ext_ids;          // per node: id in [0, tgt_size + oov)
  std::vector<int> tgt_ext_ids;
};

Example prepare_example(const Model& model, const LeviGraph& graph,
                        const std::string& reference, const VoiceType& voice,
                        const std::string& id, const std::string& strategy);

// ---- decoding ----

struct DecoderState {
  nn::Expr h, c;
  int prev_token = Vocabulary::kBos;  // target-vocab id fed at the next step
};

// Decoder parameters and per-example constants bound to one tape.
struct BoundDecoder {
  nn::Tape* tape = nullptr;
  const Model* model = nullptr;
  const Example* example = nullptr;
  nn::Expr memory;    // encoder node states, hidden x N
  nn::Expr mem_proj;  // attention key projection of the memory
  nn::Expr embed, Wq, v, ab;
  nn::LstmParams lstm;
  nn::Expr Wread, bread;
  nn::Expr Wo, bo, gate_wh, gate_wc, gate_wx, gate_b;
  nn::Expr copy_matrix;  // (tgt_size + oov) x N scatter of node ext ids
  nn::Expr oov_zeros;    // oov x 1
  double dropout = 0.0;
  Rng* drop_rng = nullptr;  // nullptr = evaluation mode
};

BoundDecoder bind_decoder(nn::Tape& t, Model& model, const Example& ex,
                          nn::Expr memory, Rng* drop_rng);

struct StepResult {
  nn::Expr dist;  // (tgt_size + oov) x 1, sums to 1
  nn::Expr attn;  // N x 1
  DecoderState state;
};

// One decoder step: additive attention with the previous hidden state as
// query, LSTM over [embedding; context], then a generation distribution mixed
// with the attention copy distribution through the p_gen gate.
StepResult decode_step(BoundDecoder& dec, const DecoderState& state);

// Initial state: h = pooled encoder output, c = 0.
DecoderState initial_state(BoundDecoder& dec, nn::Expr pooled);

// Teacher-forced negative log-likelihood (sum over tokens) for one example.
std::pair<nn::Expr, int> example_loss(nn::Tape& t, Model& model,
                                      const Example& ex, Rng* drop_rng);

// Greedy decode; copy-produced out-of-vocabulary tokens surface verbatim.
std::vector<std::string> generate(Model& model, const Example& ex, int max_len = -1);

// ---- training ----

struct TrainHyper {
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 1.0;
  double decay = 0.8;
  double clip_norm = 5.0;
  double dropout = 0.5;
  int patience = 5;
  std::string checkpoint_dir;  // per-epoch checkpoints when set
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // per-token
  double dev_ppl = 0.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  std::vector<EpochMetrics> epochs;
  double best_dev_ppl = 0.0;
  int best_epoch = -1;
};

// Token-level cross entropy with teacher forcing, SGD with gradient
// accumulation across the batch, learning-rate decay on non-improving dev
// perplexity, early stop after `patience` bad epochs. The model ends at its
// best-dev parameters. Deterministic for a fixed seed.
TrainResult train(Model& model, const std::vector<Example>& train_set,
                  const std::vector<Example>& dev_set, const TrainHyper& hyper,
                  uint64_t seed);

double dev_perplexity(Model& model, const std::vector<Example>& dev_set);

struct MultiSeedReport {
  struct Run {
    uint64_t seed = 0;
    double dev_ppl = 0.0;
    double bleu = 0.0;
  };
  std::vector<Run> runs;
  double mean_dev_ppl = 0.0;
  double mean_bleu = 0.0;
};

MultiSeedReport run_multi_seed(const ModelConfig& cfg, const Vocabulary& src,
                               const Vocabulary& tgt,
                               const std::vector<Example>& train_set,
                               const std::vector<Example>& dev_set,
                               const TrainHyper& hyper,
                               const std::vector<uint64_t>& seeds);

// ---- checkpoints ----

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace drs2text
