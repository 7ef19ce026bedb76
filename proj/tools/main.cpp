#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "drs2text/eval.hpp"
#include "drs2text/graph_json.hpp"
#include "drs2text/seq2seq.hpp"
#include "drs2text/template_corpus.hpp"

namespace fs = std::filesystem;
using namespace drs2text;

namespace {

// ---- config snapshots ------------------------------------------------------
// Every command resolves its options into a JSON object and writes it next to
// its outputs; `--config <snapshot>` replays the exact run.

void write_snapshot(const ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

ordered_json load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config snapshot " + path);
  return ordered_json::parse(in);
}

// ---- shared pipeline steps --------------------------------------------------

PipelineRow make_row(const CorpusEntry& entry) {
  PipelineRow row;
  row.id = entry.doc.source_id;
  row.reference = entry.reference;
  Drg drg = build_drg(entry.doc);
  row.graph = to_levi(drg);
  try {
    if (auto va = analyze_voice(drg)) {
      row.voice = va->voice;
      row.info = to_levi_voice(*va, row.graph);
    }
  } catch (const TfaError&) {
    row.ambiguous_voice = true;  // reported, not guessed
  }
  return row;
}

std::vector<Example> rows_to_examples(const Model& model,
                                      const std::vector<PipelineRow>& rows) {
  std::vector<Example> examples;
  for (const auto& row : rows) {
    if (row.skipped) continue;
    examples.push_back(prepare_example(model, row.graph, row.reference,
                                       row.voice, row.id,
                                       row.strategy.value_or("none")));
  }
  return examples;
}

std::pair<Vocabulary, Vocabulary> build_vocabs(const std::vector<PipelineRow>& rows) {
  std::vector<std::vector<std::string>> src, tgt;
  for (const auto& row : rows) {
    if (row.skipped) continue;
    src.push_back(linearize(row.graph));
    tgt.push_back(tokenize(row.reference));
  }
  return {Vocabulary::build(src), Vocabulary::build(tgt)};
}

// ---- convert -----------------------------------------------------------------

struct ConvertOptions {
  std::string manifest;
  std::string out;
  std::string stats;

  ordered_json to_json() const {
    return {{"command", "convert"}, {"manifest", manifest}, {"out", out},
            {"stats", stats}};
  }
  static ConvertOptions from_json(const ordered_json& j) {
    return {j.at("manifest"), j.at("out"), j.value("stats", "")};
  }
};

int run_convert(const ConvertOptions& opt) {
  Corpus corpus = load_corpus(opt.manifest);
  std::vector<PipelineRow> rows;
  std::map<std::string, std::pair<int, int>> histogram;  // role -> (active, passive)
  int not_transitive = 0, ambiguous = 0;
  for (const auto& entry : corpus.entries) {
    PipelineRow row = make_row(entry);
    if (row.ambiguous_voice) {
      ++ambiguous;
    } else if (row.voice.voice == VoiceClass::Active) {
      ++histogram[row.voice.pair_role].first;
    } else if (row.voice.voice == VoiceClass::Passive) {
      ++histogram[row.voice.pair_role].second;
    } else {
      ++not_transitive;
    }
    rows.push_back(std::move(row));
  }
  write_rows_jsonl(opt.out, rows);
  for (const auto& err : corpus.errors) {
    std::cerr << "convert: row " << err.row << " skipped (" << err.message
              << ")\n";
  }

  ordered_json stats;
  stats["rows"] = corpus.entries.size() + corpus.errors.size();
  stats["converted"] = rows.size();
  stats["parse_failures"] = ordered_json::array();
  for (const auto& err : corpus.errors) {
    stats["parse_failures"].push_back(
        {{"row", err.row}, {"path", err.path}, {"error", err.message}});
  }
  ordered_json hist = ordered_json::object();
  for (const auto& role : voice_pair_roles()) {
    const auto it = histogram.find(role);
    hist[role] = {{"active", it == histogram.end() ? 0 : it->second.first},
                  {"passive", it == histogram.end() ? 0 : it->second.second}};
  }
  stats["voice_histogram"] = hist;
  stats["not_transitive"] = not_transitive;
  stats["ambiguous"] = ambiguous;
  if (!opt.stats.empty()) {
    std::ofstream out(opt.stats);
    out << stats.dump(2) << '\n';
  }
  std::cerr << "convert: " << rows.size() << " graphs -> " << opt.out << "\n";
  write_snapshot(opt.to_json(), opt.out + ".config.json");
  return 0;
}

// ---- augment -----------------------------------------------------------------

struct AugmentOptions {
  std::string in;
  std::string out;
  std::string strategy = "ctc";
  bool flip = false;

  ordered_json to_json() const {
    return {{"command", "augment"}, {"in", in}, {"out", out},
            {"strategy", strategy}, {"flip", flip}};
  }
  static AugmentOptions from_json(const ordered_json& j) {
    return {j.at("in"), j.at("out"), j.at("strategy"), j.at("flip")};
  }
};

int run_augment(const AugmentOptions& opt) {
  const auto strategy = tfa_strategy_from_string(opt.strategy);
  if (!strategy) throw std::runtime_error("unknown strategy " + opt.strategy);
  std::vector<PipelineRow> rows = read_rows_jsonl(opt.in);
  int skipped = 0;
  for (auto& row : rows) {
    if (row.skipped) continue;
    if (!row.info.valid()) {
      row.skipped = "not_transitive";
      ++skipped;
      continue;
    }
    TfaSpec spec = make_tfa_spec(*strategy, row.voice, row.info, opt.flip);
    row.graph = apply_tfa(row.graph, spec);
    row.strategy = opt.strategy;
    row.topic = spec.topic_node;
    row.flipped = opt.flip;
  }
  write_rows_jsonl(opt.out, rows);
  std::cerr << "augment: " << rows.size() - skipped << " rows tagged, "
            << skipped << " skipped -> " << opt.out << "\n";
  write_snapshot(opt.to_json(), opt.out + ".config.json");
  return 0;
}

// ---- train -------------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string dev;
  std::string out_dir;
  std::string encoder = "ggnn";
  std::string neighborhood = "deep";
  int layers = 0;
  int hidden = 256;
  int heads = 1;
  bool no_highway = false;
  int max_len = 60;
  int epochs = 30;
  int batch = 32;
  double lr = 1.0;
  double decay = 0.8;
  double clip = 5.0;
  double dropout = 0.5;
  int patience = 5;
  uint64_t seed = 1;
  std::vector<uint64_t> seeds;  // multi-seed runs
  bool save_epochs = false;

  ordered_json to_json() const {
    return {{"command", "train"}, {"data", data}, {"dev", dev},
            {"out_dir", out_dir}, {"encoder", encoder},
            {"neighborhood", neighborhood}, {"layers", layers},
            {"hidden", hidden}, {"heads", heads}, {"no_highway", no_highway},
            {"max_len", max_len}, {"epochs", epochs}, {"batch", batch},
            {"lr", lr}, {"decay", decay}, {"clip", clip},
            {"dropout", dropout}, {"patience", patience}, {"seed", seed},
            {"seeds", seeds}, {"save_epochs", save_epochs}};
  }
  static TrainOptions from_json(const ordered_json& j) {
    TrainOptions o;
    o.data = j.at("data");
    o.dev = j.value("dev", "");
    o.out_dir = j.at("out_dir");
    o.encoder = j.at("encoder");
    o.neighborhood = j.at("neighborhood");
    o.layers = j.at("layers");
    o.hidden = j.at("hidden");
    o.heads = j.at("heads");
    o.no_highway = j.at("no_highway");
    o.max_len = j.at("max_len");
    o.epochs = j.at("epochs");
    o.batch = j.at("batch");
    o.lr = j.at("lr");
    o.decay = j.at("decay");
    o.clip = j.at("clip");
    o.dropout = j.at("dropout");
    o.patience = j.at("patience");
    o.seed = j.at("seed");
    o.seeds = j.value("seeds", std::vector<uint64_t>{});
    o.save_epochs = j.value("save_epochs", false);
    return o;
  }
};

ModelConfig model_config_from(const TrainOptions& opt,
                              const std::vector<PipelineRow>& rows) {
  ModelConfig cfg;
  const auto kind = encoder_kind_from_string(opt.encoder);
  const auto nb = neighborhood_kind_from_string(opt.neighborhood);
  if (!kind) throw std::runtime_error("unknown encoder " + opt.encoder);
  if (!nb) throw std::runtime_error("unknown neighborhood " + opt.neighborhood);
  cfg.encoder.kind = *kind;
  cfg.encoder.neighborhood = *nb;
  cfg.encoder.layers = opt.layers;
  cfg.encoder.hidden = opt.hidden;
  cfg.encoder.attention_heads = opt.heads;
  cfg.encoder.highway = !opt.no_highway;
  cfg.max_len = opt.max_len;
  cfg.dropout = opt.dropout;
  for (const auto& row : rows) {
    if (!row.skipped && row.strategy) {
      cfg.strategy = *row.strategy;
      break;
    }
  }
  return cfg;
}

void write_metrics_csv(const std::string& path, const TrainResult& result) {
  std::ofstream out(path);
  out << "epoch,train_loss,dev_ppl,learning_rate\n";
  for (const auto& em : result.epochs) {
    out << em.epoch << ',' << em.train_loss << ',' << em.dev_ppl << ','
        << em.learning_rate << '\n';
  }
}

int run_train(const TrainOptions& opt) {
  std::vector<PipelineRow> rows = read_rows_jsonl(opt.data);
  std::vector<PipelineRow> dev_rows;
  if (!opt.dev.empty()) dev_rows = read_rows_jsonl(opt.dev);

  auto [src_vocab, tgt_vocab] = build_vocabs(rows);
  ModelConfig cfg = model_config_from(opt, rows);

  TrainHyper hyper;
  hyper.epochs = opt.epochs;
  hyper.batch_size = opt.batch;
  hyper.learning_rate = opt.lr;
  hyper.decay = opt.decay;
  hyper.clip_norm = opt.clip;
  hyper.dropout = opt.dropout;
  hyper.patience = opt.patience;

  fs::create_directories(opt.out_dir);
  const std::vector<uint64_t> seeds = opt.seeds.empty()
                                          ? std::vector<uint64_t>{opt.seed}
                                          : opt.seeds;
  ordered_json seed_reports = ordered_json::array();
  double sum_ppl = 0.0, sum_bleu = 0.0;
  for (uint64_t seed : seeds) {
    Model model = make_model(cfg, src_vocab, tgt_vocab, seed);
    std::vector<Example> train_set = rows_to_examples(model, rows);
    std::vector<Example> dev_set = rows_to_examples(model, dev_rows);
    if (opt.save_epochs) {
      hyper.checkpoint_dir = opt.out_dir + "/epochs_seed_" + std::to_string(seed);
    }
    TrainResult result = train(model, train_set, dev_set, hyper, seed);

    const std::string tag =
        seeds.size() == 1 ? "" : "_seed_" + std::to_string(seed);
    save_model(model, opt.out_dir + "/checkpoint" + tag + ".json");
    write_metrics_csv(opt.out_dir + "/metrics" + tag + ".csv", result);

    const auto& eval_set = dev_set.empty() ? train_set : dev_set;
    std::vector<std::vector<std::string>> hyps, refs;
    for (const auto& ex : eval_set) {
      hyps.push_back(generate(model, ex));
      refs.push_back(ex.tgt_tokens);
    }
    const double run_bleu = bleu(hyps, refs);
    const double run_ppl = dev_set.empty() ? dev_perplexity(model, train_set)
                                           : result.best_dev_ppl;
    sum_ppl += run_ppl;
    sum_bleu += run_bleu;
    seed_reports.push_back({{"seed", seed}, {"dev_ppl", run_ppl},
                            {"bleu", run_bleu},
                            {"best_epoch", result.best_epoch}});
    std::cerr << "train: seed " << seed << " dev_ppl " << run_ppl << " bleu "
              << run_bleu << "\n";
  }
  if (seeds.size() > 1) {
    ordered_json report;
    report["runs"] = seed_reports;
    report["mean_dev_ppl"] = sum_ppl / static_cast<double>(seeds.size());
    report["mean_bleu"] = sum_bleu / static_cast<double>(seeds.size());
    std::ofstream out(opt.out_dir + "/multiseed_report.json");
    out << report.dump(2) << '\n';
  }
  write_snapshot(opt.to_json(), opt.out_dir + "/config.json");
  return 0;
}

// ---- generate ------------------------------------------------------------------

struct GenerateOptions {
  std::string model;
  std::string data;
  std::string out;
  bool flip = false;
  int max_len = 0;

  ordered_json to_json() const {
    return {{"command", "generate"}, {"model", model}, {"data", data},
            {"out", out}, {"flip", flip}, {"max_len", max_len}};
  }
  static GenerateOptions from_json(const ordered_json& j) {
    return {j.at("model"), j.at("data"), j.at("out"), j.at("flip"),
            j.at("max_len")};
  }
};

VoiceType opposite_voice(const VoiceType& v) {
  VoiceType o = v;
  if (v.voice == VoiceClass::Active) o.voice = VoiceClass::Passive;
  else if (v.voice == VoiceClass::Passive) o.voice = VoiceClass::Active;
  return o;
}

int run_generate(const GenerateOptions& opt) {
  Model model = load_model(opt.model);
  std::vector<PipelineRow> rows = read_rows_jsonl(opt.data);
  std::vector<GenerationRecord> records;
  int skipped = 0;
  for (const auto& row : rows) {
    if (row.skipped) {
      ++skipped;
      continue;
    }
    LeviGraph graph = row.graph;
    bool flipped = row.flipped;
    if (opt.flip) {
      if (!row.strategy || !row.topic) {
        std::cerr << "generate: row " << row.id
                  << " has no augmentation to flip; skipped\n";
        ++skipped;
        continue;
      }
      TfaSpec spec{tfa_strategy_from_string(*row.strategy).value(), *row.topic};
      auto [g, s] = flip_voice(graph, spec);
      graph = std::move(g);
      flipped = !flipped;
    }
    Example ex = prepare_example(model, graph, row.reference, row.voice, row.id,
                                 row.strategy.value_or("none"));
    GenerationRecord rec;
    rec.source_id = row.id;
    rec.hypothesis = join_tokens(generate(model, ex, opt.max_len));
    rec.reference = row.reference;
    rec.voice_expected = flipped ? opposite_voice(row.voice) : row.voice;
    rec.strategy = row.strategy.value_or(model.cfg.strategy);
    rec.encoder = to_string(model.cfg.encoder.kind);
    rec.neighborhood = to_string(model.cfg.encoder.neighborhood);
    rec.flipped = flipped;
    records.push_back(std::move(rec));
  }
  write_records_jsonl(opt.out, records);
  std::cerr << "generate: " << records.size() << " hypotheses, " << skipped
            << " skipped -> " << opt.out << "\n";
  write_snapshot(opt.to_json(), opt.out + ".config.json");
  return 0;
}

// ---- evaluate ------------------------------------------------------------------

struct EvaluateOptions {
  std::vector<std::string> gen;
  std::string out;
  std::string judgments;

  ordered_json to_json() const {
    return {{"command", "evaluate"}, {"gen", gen}, {"out", out},
            {"judgments", judgments}};
  }
  static EvaluateOptions from_json(const ordered_json& j) {
    return {j.at("gen").get<std::vector<std::string>>(), j.at("out"),
            j.value("judgments", "")};
  }
};

int run_evaluate(const EvaluateOptions& opt) {
  std::vector<GenerationRecord> records;
  for (const auto& path : opt.gen) {
    auto part = read_records_jsonl(path);
    records.insert(records.end(), part.begin(), part.end());
  }

  // BLEU / METEOR-lite per encoder x neighborhood x strategy
  std::map<std::string, std::vector<const GenerationRecord*>> groups;
  for (const auto& rec : records) {
    groups[rec.encoder + "/" + rec.neighborhood + "/" + rec.strategy +
           (rec.flipped ? "/flipped" : "")]
        .push_back(&rec);
  }
  ordered_json automatic = ordered_json::array();
  for (const auto& [key, group] : groups) {
    std::vector<std::vector<std::string>> hyps, refs;
    int verdict_hits = 0;
    for (const auto* rec : group) {
      hyps.push_back(tokenize(rec->hypothesis));
      refs.push_back(tokenize(rec->reference));
      const VoiceVerdict verdict = voice_heuristic(hyps.back());
      verdict_hits += to_string(verdict) == to_string(rec->voice_expected.voice);
    }
    const auto& first = *group.front();
    automatic.push_back(
        {{"encoder", first.encoder}, {"neighborhood", first.neighborhood},
         {"strategy", first.strategy}, {"flipped", first.flipped},
         {"n", group.size()},
         {"bleu", bleu(hyps, refs)}, {"meteor_lite", meteor_lite(hyps, refs)},
         {"voice_heuristic_match",
          100.0 * verdict_hits / static_cast<double>(group.size())}});
  }

  ordered_json report;
  report["automatic"] = automatic;
  if (!opt.judgments.empty()) {
    auto judgments = load_judgments_tsv(opt.judgments);
    RoseReport rose = rose_accuracy(records, judgments);
    auto column = [](const RoseColumn& c) {
      return ordered_json{{"sem", c.semantics}, {"gram", c.grammaticality},
                          {"phen", c.phenomenon}, {"rose", c.rose}, {"n", c.n}};
    };
    report["rose"] = {{"passive_to_active", column(rose.passive_to_active)},
                      {"active_to_passive", column(rose.active_to_passive)},
                      {"all_rose", rose.all_rose}, {"total", rose.total}};
  } else {
    report["rose"] = "pending";
  }
  std::ofstream out(opt.out);
  out << report.dump(2) << '\n';
  std::cerr << "evaluate: " << records.size() << " records -> " << opt.out
            << "\n";
  write_snapshot(opt.to_json(), opt.out + ".config.json");
  return 0;
}

// ---- challenge-set ---------------------------------------------------------------

struct ChallengeOptions {
  std::string manifest;
  std::string out;
  uint64_t seed = 1;
  bool no_stratify = false;
  std::string strategy;  // optional TFA to apply
  bool flip = false;

  ordered_json to_json() const {
    return {{"command", "challenge-set"}, {"manifest", manifest}, {"out", out},
            {"seed", seed}, {"no_stratify", no_stratify},
            {"strategy", strategy}, {"flip", flip}};
  }
  static ChallengeOptions from_json(const ordered_json& j) {
    return {j.at("manifest"), j.at("out"), j.at("seed"), j.at("no_stratify"),
            j.value("strategy", ""), j.at("flip")};
  }
};

int run_challenge(const ChallengeOptions& opt) {
  Corpus corpus = load_corpus(opt.manifest);
  std::vector<ChallengeItem> candidates;
  for (const auto& entry : corpus.entries) {
    PipelineRow row = make_row(entry);
    if (!row.info.valid()) continue;
    candidates.push_back({row.id, row.graph, row.reference, row.voice, row.info});
  }
  ChallengeSet set = build_challenge_set(candidates, opt.seed, !opt.no_stratify);
  for (const auto& warning : set.warnings) {
    std::cerr << "challenge-set: " << warning << "\n";
  }

  std::vector<PipelineRow> rows;
  for (const auto& item : set.items) {
    PipelineRow row;
    row.id = item.source_id;
    row.graph = item.graph;
    row.reference = item.reference;
    row.voice = item.voice;
    row.info = item.info;
    if (!opt.strategy.empty()) {
      TfaSpec spec = make_tfa_spec(tfa_strategy_from_string(opt.strategy).value(),
                                   item.voice, item.info, opt.flip);
      row.graph = apply_tfa(row.graph, spec);
      row.strategy = opt.strategy;
      row.topic = spec.topic_node;
      row.flipped = opt.flip;
    }
    rows.push_back(std::move(row));
  }
  write_rows_jsonl(opt.out, rows);
  std::cerr << "challenge-set: " << rows.size() << " rows -> " << opt.out << "\n";
  write_snapshot(opt.to_json(), opt.out + ".config.json");
  return 0;
}

// ---- make-fixture ---------------------------------------------------------------

struct FixtureOptions {
  std::string out_dir;
  int pairs = 100;
  uint64_t seed = 7;
  int interrogatives = 0;

  ordered_json to_json() const {
    return {{"command", "make-fixture"}, {"out_dir", out_dir}, {"pairs", pairs},
            {"seed", seed}, {"interrogatives", interrogatives}};
  }
  static FixtureOptions from_json(const ordered_json& j) {
    return {j.at("out_dir"), j.at("pairs"), j.at("seed"),
            j.at("interrogatives")};
  }
};

int run_fixture(const FixtureOptions& opt) {
  TemplateCorpus corpus = make_template_corpus(opt.pairs, opt.seed,
                                               opt.interrogatives);
  write_corpus(corpus, opt.out_dir);
  std::cerr << "make-fixture: " << corpus.pairs.size() << " pairs -> "
            << opt.out_dir << "\n";
  write_snapshot(opt.to_json(), opt.out_dir + "/config.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meaning graphs to text with controllable voice"};
  app.require_subcommand(1);

  ConvertOptions convert_opt;
  std::string convert_cfg;
  auto* convert = app.add_subcommand(
      "convert", "Parse a manifest of SBN files into a graph JSONL");
  convert->add_option("--manifest", convert_opt.manifest, "Manifest TSV");
  convert->add_option("--out", convert_opt.out, "Output JSONL");
  convert->add_option("--stats", convert_opt.stats, "Conversion stats JSON");
  convert->add_option("--config", convert_cfg, "Replay a config snapshot");

  AugmentOptions augment_opt;
  std::string augment_cfg;
  auto* augment = app.add_subcommand(
      "augment", "Apply a TFA strategy to converted graphs");
  augment->add_option("--in", augment_opt.in, "Input JSONL");
  augment->add_option("--out", augment_opt.out, "Output JSONL");
  augment->add_option("--strategy", augment_opt.strategy, "ctc | btc | rtr");
  augment->add_flag("--flip", augment_opt.flip, "Mark the other argument");
  augment->add_option("--config", augment_cfg, "Replay a config snapshot");

  TrainOptions train_opt;
  std::string train_cfg;
  auto* train_cmd = app.add_subcommand("train", "Train a graph-to-text model");
  train_cmd->add_option("--data", train_opt.data, "Training JSONL");
  train_cmd->add_option("--dev", train_opt.dev, "Dev JSONL");
  train_cmd->add_option("--out-dir", train_opt.out_dir, "Output directory");
  train_cmd->add_option("--encoder", train_opt.encoder, "gcn | gat | ggnn");
  train_cmd->add_option("--neighborhood", train_opt.neighborhood, "local | deep");
  train_cmd->add_option("--layers", train_opt.layers,
                        "Encoder layers (0 = default for the neighborhood)");
  train_cmd->add_option("--hidden", train_opt.hidden, "Hidden size");
  train_cmd->add_option("--heads", train_opt.heads, "GAT attention heads");
  train_cmd->add_flag("--no-highway", train_opt.no_highway,
                      "Disable the GCN/GAT highway mix");
  train_cmd->add_option("--max-len", train_opt.max_len, "Decoder length cap");
  train_cmd->add_option("--epochs", train_opt.epochs, "Max epochs");
  train_cmd->add_option("--batch", train_opt.batch, "Batch size");
  train_cmd->add_option("--lr", train_opt.lr, "Initial learning rate");
  train_cmd->add_option("--decay", train_opt.decay, "Learning-rate decay");
  train_cmd->add_option("--clip", train_opt.clip, "Gradient clip norm");
  train_cmd->add_option("--dropout", train_opt.dropout, "Decoder dropout");
  train_cmd->add_option("--patience", train_opt.patience,
                        "Early-stop patience (dev epochs)");
  train_cmd->add_option("--seed", train_opt.seed, "Seed");
  train_cmd->add_option("--seeds", train_opt.seeds,
                        "Multiple seeds; writes a multi-seed report");
  train_cmd->add_flag("--save-epochs", train_opt.save_epochs,
                      "Keep per-epoch checkpoints");
  train_cmd->add_option("--config", train_cfg, "Replay a config snapshot");

  GenerateOptions generate_opt;
  std::string generate_cfg;
  auto* generate_cmd =
      app.add_subcommand("generate", "Greedy-decode text from graphs");
  generate_cmd->add_option("--model", generate_opt.model, "Checkpoint JSON");
  generate_cmd->add_option("--data", generate_opt.data, "Input JSONL");
  generate_cmd->add_option("--out", generate_opt.out, "Records JSONL");
  generate_cmd->add_flag("--flip", generate_opt.flip,
                         "Flip the TFA before decoding");
  generate_cmd->add_option("--max-len", generate_opt.max_len,
                           "Override the decoder length cap");
  generate_cmd->add_option("--config", generate_cfg, "Replay a config snapshot");

  EvaluateOptions evaluate_opt;
  std::string evaluate_cfg;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score generation records");
  evaluate_cmd->add_option("--gen", evaluate_opt.gen,
                           "Generation JSONL (repeatable)");
  evaluate_cmd->add_option("--out", evaluate_opt.out, "Report JSON");
  evaluate_cmd->add_option("--judgments", evaluate_opt.judgments,
                           "Manual judgment TSV");
  evaluate_cmd->add_option("--config", evaluate_cfg, "Replay a config snapshot");

  ChallengeOptions challenge_opt;
  std::string challenge_cfg;
  auto* challenge_cmd = app.add_subcommand(
      "challenge-set", "Build a balanced active/passive challenge set");
  challenge_cmd->add_option("--manifest", challenge_opt.manifest, "Manifest TSV");
  challenge_cmd->add_option("--out", challenge_opt.out, "Output JSONL");
  challenge_cmd->add_option("--seed", challenge_opt.seed, "Sampling seed");
  challenge_cmd->add_flag("--no-stratify", challenge_opt.no_stratify,
                          "Draw actives without pair-type stratification");
  challenge_cmd->add_option("--strategy", challenge_opt.strategy,
                            "Apply this TFA to each row");
  challenge_cmd->add_flag("--flip", challenge_opt.flip,
                          "Mark the other argument when applying the TFA");
  challenge_cmd->add_option("--config", challenge_cfg, "Replay a config snapshot");

  FixtureOptions fixture_opt;
  std::string fixture_cfg;
  auto* fixture_cmd = app.add_subcommand(
      "make-fixture", "Write a template SBN corpus with a manifest");
  fixture_cmd->add_option("--out-dir", fixture_opt.out_dir, "Output directory");
  fixture_cmd->add_option("--pairs", fixture_opt.pairs, "Corpus size");
  fixture_cmd->add_option("--seed", fixture_opt.seed, "Seed");
  fixture_cmd->add_option("--interrogatives", fixture_opt.interrogatives,
                          "Extra question-form rows");
  fixture_cmd->add_option("--config", fixture_cfg, "Replay a config snapshot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) {
      if (!convert_cfg.empty())
        convert_opt = ConvertOptions::from_json(load_snapshot(convert_cfg));
      return run_convert(convert_opt);
    }
    if (augment->parsed()) {
      if (!augment_cfg.empty())
        augment_opt = AugmentOptions::from_json(load_snapshot(augment_cfg));
      return run_augment(augment_opt);
    }
    if (train_cmd->parsed()) {
      if (!train_cfg.empty())
        train_opt = TrainOptions::from_json(load_snapshot(train_cfg));
      return run_train(train_opt);
    }
    if (generate_cmd->parsed()) {
      if (!generate_cfg.empty())
        generate_opt = GenerateOptions::from_json(load_snapshot(generate_cfg));
      return run_generate(generate_opt);
    }
    if (evaluate_cmd->parsed()) {
      if (!evaluate_cfg.empty())
        evaluate_opt = EvaluateOptions::from_json(load_snapshot(evaluate_cfg));
      return run_evaluate(evaluate_opt);
    }
    if (challenge_cmd->parsed()) {
      if (!challenge_cfg.empty())
        challenge_opt = ChallengeOptions::from_json(load_snapshot(challenge_cfg));
      return run_challenge(challenge_opt);
    }
    if (fixture_cmd->parsed()) {
      if (!fixture_cfg.empty())
        fixture_opt = FixtureOptions::from_json(load_snapshot(fixture_cfg));
      return run_fixture(fixture_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
