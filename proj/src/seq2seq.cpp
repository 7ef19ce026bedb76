#include "drs2text/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "drs2text/eval.hpp"
#include "drs2text/nn/optimizer.hpp"
#include "json.hpp"

namespace drs2text {

using nn::Expr;
using nn::Mat;
using nn::Tape;

Vocabulary::Vocabulary() {
  id2tok_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (int i = 0; i < static_cast<int>(id2tok_.size()); ++i) tok2id_[id2tok_[i]] = i;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             int min_freq) {
  std::map<std::string, int> counts;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq) ++counts[tok];
  }
  std::vector<std::pair<std::string, int>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  for (const auto& [tok, count] : items) {
    if (count < min_freq || v.tok2id_.count(tok)) continue;
    v.tok2id_[tok] = static_cast<int>(v.id2tok_.size());
    v.id2tok_.push_back(tok);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  v.id2tok_ = tokens;
  v.tok2id_.clear();
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) v.tok2id_[tokens[i]] = i;
  return v;
}

int Vocabulary::id(const std::string& token) const {
  auto it = tok2id_.find(token);
  return it == tok2id_.end() ? kUnk : it->second;
}

Model make_model(const ModelConfig& cfg, const Vocabulary& src,
                 const Vocabulary& tgt, uint64_t seed) {
  cfg.encoder.validate();
  Model m;
  m.cfg = cfg;
  m.src_vocab = src;
  m.tgt_vocab = tgt;
  Rng rng(seed);
  const long h = cfg.encoder.hidden;
  create_encoder_params(m.params, cfg.encoder, src.size(), rng);
  m.params.add("dec.embed", h, tgt.size(), nn::Init::Glorot, rng);
  nn::LstmParams::create(m.params, "dec.lstm", 2 * h, h, rng);
  m.params.add("dec.attn.Wm", h, h, nn::Init::Glorot, rng);
  m.params.add("dec.attn.Wq", h, h, nn::Init::Glorot, rng);
  m.params.add("dec.attn.v", h, 1, nn::Init::Glorot, rng);
  m.params.add("dec.attn.b", h, 1, nn::Init::Zeros, rng);
  m.params.add("dec.read.W", h, 2 * h, nn::Init::Glorot, rng);
  m.params.add("dec.read.b", h, 1, nn::Init::Zeros, rng);
  m.params.add("dec.out.W", tgt.size(), h, nn::Init::Glorot, rng);
  m.params.add("dec.out.b", tgt.size(), 1, nn::Init::Zeros, rng);
  m.params.add("dec.gate.wh", 1, h, nn::Init::Glorot, rng);
  m.params.add("dec.gate.wc", 1, h, nn::Init::Glorot, rng);
  m.params.add("dec.gate.wx", 1, h, nn::Init::Glorot, rng);
  // Biased towards generation at the start; the copy path opens up as the
  // gate learns.
  m.params.add("dec.gate.b", 1, 1, nn::Init::Zeros, rng).tensor.value(0, 0) = 2.0;
  return m;
}

Example prepare_example(const Model& model, const LeviGraph& graph,
                        const std::string& reference, const VoiceType& voice,
                        const std::string& id, const std::string& strategy) {
  Example ex;
  ex.id = id;
  ex.graph = graph;
  ex.src_tokens = linearize(graph);
  ex.reference = reference;
  ex.tgt_tokens = tokenize(reference);
  ex.voice = voice;
  ex.strategy = strategy;

  ex.src_ids.reserve(ex.src_tokens.size());
  for (const auto& tok : ex.src_tokens) ex.src_ids.push_back(model.src_vocab.id(tok));

  ex.nb = model.cfg.encoder.neighborhood == NeighborhoodKind::Local
              ? local_neighborhood(graph)
              : deep_neighborhood(graph);
  ex.dm = neighborhood_matrices(ex.nb);

  const int vt = model.tgt_vocab.size();
  std::map<std::string, int> oov_index;
  for (const auto& tok : ex.src_tokens) {
    std::string surf = copy_surface(tok);
    ex.copy_surfaces.push_back(surf);
    const int vid = model.tgt_vocab.id(surf);
    if (vid != Vocabulary::kUnk) {
      ex.node_ext_ids.push_back(vid);
    } else {
      auto [it, inserted] = oov_index.try_emplace(surf, static_cast<int>(ex.oov_surfaces.size()));
      if (inserted) ex.oov_surfaces.push_back(surf);
      ex.node_ext_ids.push_back(vt + it->second);
    }
  }
  for (const auto& tok : ex.tgt_tokens) {
    const int vid = model.tgt_vocab.id(tok);
    if (vid != Vocabulary::kUnk) {
      ex.tgt_ext_ids.push_back(vid);
    } else if (auto it = oov_index.find(tok); it != oov_index.end()) {
      ex.tgt_ext_ids.push_back(vt + it->second);
    } else {
      ex.tgt_ext_ids.push_back(Vocabulary::kUnk);
    }
  }
  return ex;
}

BoundDecoder bind_decoder(Tape& t, Model& model, const Example& ex,
                          Expr memory, Rng* drop_rng) {
  BoundDecoder d;
  d.tape = &t;
  d.model = &model;
  d.example = &ex;
  d.memory = memory;
  d.embed = t.leaf(model.params.get("dec.embed"));
  Expr Wm = t.leaf(model.params.get("dec.attn.Wm"));
  d.mem_proj = Wm * memory;
  d.Wq = t.leaf(model.params.get("dec.attn.Wq"));
  d.v = t.leaf(model.params.get("dec.attn.v"));
  d.ab = t.leaf(model.params.get("dec.attn.b"));
  d.lstm = nn::LstmParams::bind(t, model.params, "dec.lstm");
  d.Wread = t.leaf(model.params.get("dec.read.W"));
  d.bread = t.leaf(model.params.get("dec.read.b"));
  d.Wo = t.leaf(model.params.get("dec.out.W"));
  d.bo = t.leaf(model.params.get("dec.out.b"));
  d.gate_wh = t.leaf(model.params.get("dec.gate.wh"));
  d.gate_wc = t.leaf(model.params.get("dec.gate.wc"));
  d.gate_wx = t.leaf(model.params.get("dec.gate.wx"));
  d.gate_b = t.leaf(model.params.get("dec.gate.b"));
  d.dropout = model.cfg.dropout;
  d.drop_rng = drop_rng;

  const long n = static_cast<long>(ex.node_ext_ids.size());
  const long vext = model.tgt_vocab.size() + static_cast<long>(ex.oov_surfaces.size());
  Mat scatter = Mat::Zero(vext, n);
  for (long i = 0; i < n; ++i) scatter(ex.node_ext_ids[i], i) = 1.0;
  d.copy_matrix = t.constant(std::move(scatter));
  if (!ex.oov_surfaces.empty()) {
    d.oov_zeros = t.constant(Mat::Zero(static_cast<long>(ex.oov_surfaces.size()), 1));
  }
  return d;
}

DecoderState initial_state(BoundDecoder& dec, Expr pooled) {
  DecoderState s;
  s.h = pooled;
  s.c = dec.tape->constant(Mat::Zero(pooled.value().rows(), 1));
  s.prev_token = Vocabulary::kBos;
  return s;
}

StepResult decode_step(BoundDecoder& dec, const DecoderState& state) {
  Tape& t = *dec.tape;
  const bool train = dec.drop_rng != nullptr;

  Expr emb = gather_cols(dec.embed, {state.prev_token});
  Expr scores_pre = nn::tanh(add_colvec(dec.mem_proj, dec.Wq * state.h + dec.ab));
  Expr scores = transpose(transpose(dec.v) * scores_pre);  // N x 1
  Expr alpha = softmax_cols(scores);
  Expr ctx = dec.memory * alpha;

  Expr x = vcat(emb, ctx);
  if (train) x = dropout(x, dec.dropout, *dec.drop_rng, true);
  auto [h_next, c_next] = lstm_step(dec.lstm, x, state.h, state.c);

  // attentional readout: the context gets a direct path to the softmax
  Expr read = nn::tanh(add_colvec(dec.Wread * vcat(h_next, ctx), dec.bread));
  Expr out_h = train ? dropout(read, dec.dropout, *dec.drop_rng, true) : read;
  Expr p_vocab = softmax_cols(dec.Wo * out_h + dec.bo);
  Expr p_gen = sigmoid(dec.gate_wh * h_next + dec.gate_wc * ctx +
                       dec.gate_wx * emb + dec.gate_b);

  Expr p_vocab_ext =
      dec.oov_zeros.valid() ? vcat(p_vocab, dec.oov_zeros) : p_vocab;
  Expr copy = dec.copy_matrix * alpha;
  Expr dist = add(scale(p_gen, p_vocab_ext), scale(one_minus(p_gen), copy));

  StepResult r;
  r.dist = dist;
  r.attn = alpha;
  r.state.h = h_next;
  r.state.c = c_next;
  return r;
}

std::pair<Expr, int> example_loss(Tape& t, Model& model, const Example& ex,
                                  Rng* drop_rng) {
  EncodeResult enc = encode(t, model.params, model.cfg.encoder, ex.src_ids,
                            ex.nb, ex.dm);
  BoundDecoder dec = bind_decoder(t, model, ex, enc.states, drop_rng);
  DecoderState state = initial_state(dec, enc.pooled);

  std::vector<int> prev_ids = {Vocabulary::kBos};
  for (const auto& tok : ex.tgt_tokens) prev_ids.push_back(model.tgt_vocab.id(tok));
  std::vector<int> targets = ex.tgt_ext_ids;
  targets.push_back(Vocabulary::kEos);

  Expr loss;
  for (size_t step = 0; step < targets.size(); ++step) {
    state.prev_token = prev_ids[step];
    StepResult r = decode_step(dec, state);
    Expr nll = neg(ln(pick(r.dist, targets[step], 0)));
    loss = loss.valid() ? loss + nll : nll;
    state = r.state;
  }
  return {loss, static_cast<int>(targets.size())};
}

std::vector<std::string> generate(Model& model, const Example& ex, int max_len) {
  if (max_len <= 0) max_len = model.cfg.max_len;
  Tape t;
  // Inference: parameters enter as constants so no backward graph is kept.
  nn::ParamStore& ps = model.params;
  EncodeResult enc = encode(t, ps, model.cfg.encoder, ex.src_ids, ex.nb, ex.dm);
  BoundDecoder dec = bind_decoder(t, model, ex, enc.states, nullptr);
  DecoderState state = initial_state(dec, enc.pooled);

  const int vt = model.tgt_vocab.size();
  std::vector<std::string> out;
  for (int step = 0; step < max_len; ++step) {
    StepResult r = decode_step(dec, state);
    long best = 0;
    r.dist.value().col(0).maxCoeff(&best);
    if (best == Vocabulary::kEos) break;
    if (best < vt) {
      out.push_back(model.tgt_vocab.token(static_cast<int>(best)));
      state = r.state;
      state.prev_token = static_cast<int>(best);
    } else {
      out.push_back(ex.oov_surfaces[best - vt]);
      state = r.state;
      state.prev_token = Vocabulary::kUnk;
    }
  }
  return out;
}

double dev_perplexity(Model& model, const std::vector<Example>& dev_set) {
  double total = 0.0;
  long tokens = 0;
  for (const auto& ex : dev_set) {
    Tape t;
    auto [loss, n] = example_loss(t, model, ex, nullptr);
    total += loss.value()(0, 0);
    tokens += n;
  }
  return tokens ? std::exp(total / static_cast<double>(tokens)) : 0.0;
}

namespace {

std::map<std::string, Mat> snapshot_params(const nn::ParamStore& ps) {
  std::map<std::string, Mat> snap;
  for (const auto& [name, p] : ps.all()) snap[name] = p.tensor.value;
  return snap;
}

void restore_params(nn::ParamStore& ps, const std::map<std::string, Mat>& snap) {
  for (auto& [name, p] : ps.all()) p.tensor.value = snap.at(name);
}

}  // namespace

TrainResult train(Model& model, const std::vector<Example>& train_set,
                  const std::vector<Example>& dev_set, const TrainHyper& hyper,
                  uint64_t seed) {
  TrainResult result;
  nn::OptimizerState opt;
  opt.learning_rate = hyper.learning_rate;
  opt.decay_factor = hyper.decay;
  opt.clip_norm = hyper.clip_norm;
  model.cfg.dropout = hyper.dropout;

  Rng rng(seed ^ 0x7ea1c0ffee5ULL);
  std::vector<int> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  double best = std::numeric_limits<double>::infinity();
  std::map<std::string, Mat> best_snap = snapshot_params(model.params);
  int bad_epochs = 0;

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    long epoch_tokens = 0;
    size_t cursor = 0;
    while (cursor < order.size()) {
      const size_t batch_end =
          std::min(order.size(), cursor + static_cast<size_t>(hyper.batch_size));
      model.params.zero_grads();
      long batch_tokens = 0;
      for (size_t k = cursor; k < batch_end; ++k) {
        const Example& ex = train_set[order[k]];
        Tape t;
        auto [loss, n] = example_loss(t, model, ex, &rng);
        const double value = loss.value()(0, 0);
        if (!std::isfinite(value)) {
          throw nn::NnError(nn::NnErrorKind::NonFiniteLoss,
                            "non-finite loss at epoch " + std::to_string(epoch) +
                                ", example '" + ex.id + "'");
        }
        t.backward(loss);
        epoch_loss += value;
        batch_tokens += n;
      }
      epoch_tokens += batch_tokens;
      if (batch_tokens > 0) {
        for (auto& [name, p] : model.params.all()) {
          p.tensor.grad /= static_cast<double>(batch_tokens);
        }
        nn::sgd_update(model.params, opt);
      }
      cursor = batch_end;
    }

    EpochMetrics em;
    em.epoch = epoch;
    em.train_loss = epoch_tokens ? epoch_loss / static_cast<double>(epoch_tokens) : 0.0;
    em.learning_rate = opt.learning_rate;
    if (!dev_set.empty()) {
      em.dev_ppl = dev_perplexity(model, dev_set);
      if (em.dev_ppl < best) {
        best = em.dev_ppl;
        best_snap = snapshot_params(model.params);
        result.best_epoch = epoch;
        bad_epochs = 0;
      } else {
        ++bad_epochs;
        nn::decay_learning_rate(opt);
      }
    }
    result.epochs.push_back(em);

    if (!hyper.checkpoint_dir.empty()) {
      std::filesystem::create_directories(hyper.checkpoint_dir);
      save_model(model, hyper.checkpoint_dir + "/epoch_" +
                            std::to_string(epoch) + ".json");
    }
    if (!dev_set.empty() && bad_epochs >= hyper.patience) break;
  }

  if (!dev_set.empty()) {
    restore_params(model.params, best_snap);
    result.best_dev_ppl = best;
  } else {
    result.best_epoch = static_cast<int>(result.epochs.size());
  }
  return result;
}

MultiSeedReport run_multi_seed(const ModelConfig& cfg, const Vocabulary& src,
                               const Vocabulary& tgt,
                               const std::vector<Example>& train_set,
                               const std::vector<Example>& dev_set,
                               const TrainHyper& hyper,
                               const std::vector<uint64_t>& seeds) {
  MultiSeedReport report;
  for (uint64_t seed : seeds) {
    Model model = make_model(cfg, src, tgt, seed);
    train(model, train_set, dev_set, hyper, seed);
    MultiSeedReport::Run run;
    run.seed = seed;
    run.dev_ppl = dev_set.empty() ? dev_perplexity(model, train_set)
                                  : dev_perplexity(model, dev_set);
    const auto& eval_set = dev_set.empty() ? train_set : dev_set;
    std::vector<std::vector<std::string>> hyps, refs;
    for (const auto& ex : eval_set) {
      hyps.push_back(generate(model, ex));
      refs.push_back(ex.tgt_tokens);
    }
    run.bleu = bleu(hyps, refs);
    report.runs.push_back(run);
    report.mean_dev_ppl += run.dev_ppl;
    report.mean_bleu += run.bleu;
  }
  if (!report.runs.empty()) {
    report.mean_dev_ppl /= static_cast<double>(report.runs.size());
    report.mean_bleu /= static_cast<double>(report.runs.size());
  }
  return report;
}

// ---- checkpoints ----

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json encoder_config_to_json(const EncoderConfig& cfg) {
  ordered_json j;
  j["kind"] = to_string(cfg.kind);
  j["neighborhood"] = to_string(cfg.neighborhood);
  j["layers"] = cfg.layers;
  j["hidden"] = cfg.hidden;
  j["highway"] = cfg.highway;
  j["attention_heads"] = cfg.attention_heads;
  return j;
}

EncoderConfig encoder_config_from_json(const ordered_json& j) {
  EncoderConfig cfg;
  cfg.kind = encoder_kind_from_string(j.at("kind").get<std::string>()).value();
  cfg.neighborhood =
      neighborhood_kind_from_string(j.at("neighborhood").get<std::string>()).value();
  cfg.layers = j.at("layers").get<int>();
  cfg.hidden = j.at("hidden").get<int>();
  cfg.highway = j.at("highway").get<bool>();
  cfg.attention_heads = j.at("attention_heads").get<int>();
  return cfg;
}

}  // namespace

std::string model_to_json(const Model& model) {
  ordered_json j;
  j["format_version"] = 1;
  ordered_json cfg;
  cfg["encoder"] = encoder_config_to_json(model.cfg.encoder);
  cfg["max_len"] = model.cfg.max_len;
  cfg["dropout"] = model.cfg.dropout;
  cfg["strategy"] = model.cfg.strategy;
  j["config"] = cfg;
  j["src_vocab"] = model.src_vocab.tokens();
  j["tgt_vocab"] = model.tgt_vocab.tokens();
  ordered_json params = ordered_json::object();
  for (const auto& [name, p] : model.params.all()) {
    ordered_json pj;
    pj["rows"] = p.tensor.rows();
    pj["cols"] = p.tensor.cols();
    std::vector<double> values(p.tensor.value.size());
    Eigen::Map<Mat>(values.data(), p.tensor.rows(), p.tensor.cols()) = p.tensor.value;
    pj["values"] = values;
    params[name] = pj;
  }
  j["params"] = params;
  return j.dump();
}

Model model_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (j.at("format_version").get<int>() != 1) {
    throw nn::NnError(nn::NnErrorKind::ConfigInvalid, "unknown checkpoint version");
  }
  ModelConfig cfg;
  cfg.encoder = encoder_config_from_json(j.at("config").at("encoder"));
  cfg.max_len = j.at("config").at("max_len").get<int>();
  cfg.dropout = j.at("config").at("dropout").get<double>();
  cfg.strategy = j.at("config").at("strategy").get<std::string>();

  Vocabulary src = Vocabulary::from_tokens(j.at("src_vocab").get<std::vector<std::string>>());
  Vocabulary tgt = Vocabulary::from_tokens(j.at("tgt_vocab").get<std::vector<std::string>>());
  Model model = make_model(cfg, src, tgt, 0);
  for (auto& [name, p] : model.params.all()) {
    const auto& pj = j.at("params").at(name);
    const long rows = pj.at("rows").get<long>();
    const long cols = pj.at("cols").get<long>();
    if (rows != p.tensor.rows() || cols != p.tensor.cols()) {
      throw nn::NnError(nn::NnErrorKind::ShapeMismatch,
                        "checkpoint shape mismatch for '" + name + "'");
    }
    const auto values = pj.at("values").get<std::vector<double>>();
    p.tensor.value = Eigen::Map<const Mat>(values.data(), rows, cols);
  }
  return model;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  out << model_to_json(model);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw nn::NnError(nn::NnErrorKind::ConfigInvalid, "cannot open checkpoint " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace drs2text
