// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. An optional argv lists criterion numbers to run (default: all).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "bleu_oracle.hpp"
#include "drs2text/eval.hpp"
#include "drs2text/graph_json.hpp"
#include "drs2text/nn/optimizer.hpp"
#include "drs2text/seq2seq.hpp"
#include "drs2text/template_corpus.hpp"
#include "test_support.hpp"

#ifndef DRS2TEXT_SOURCE_DIR
#define DRS2TEXT_SOURCE_DIR "."
#endif
#ifndef DRS2TEXT_CLI_PATH
#define DRS2TEXT_CLI_PATH "drs2text"
#endif

using namespace drs2text;
using nn::Mat;
using nn::Tape;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------
// 1. Structural oracles: Levi counting identities, Reverse mirrors, SelfLoop
//    completeness, TFA deltas, flip involution; >= 1000 random graphs, < 30 s.
// ---------------------------------------------------------------------------
Outcome criterion_1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  Rng rng(1001);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    SbnDocument doc = testing::random_document(rng);
    const auto c = testing::count_document(doc);
    Drg g = build_drg(doc);
    LeviGraph levi = to_levi(g);
    ++checked;

    int chain = 0, originals = c.head_lines + c.boxes;
    auto add_parts = [&](const std::string& token) {
      const int parts = static_cast<int>(split_constant_token(token).size());
      originals += parts - 1;
      chain += parts - 1;
    };
    for (const auto& line : doc.lines) {
      if (!line.is_relation() && line.head.kind == AtomKind::Constant) {
        add_parts(line.head.text);
      }
      for (const auto& slot : line.slots) {
        if (!slot.target.is_index) {
          ++originals;
          add_parts(slot.target.constant.text);
        }
      }
    }
    const int e = static_cast<int>(g.edges.size());
    out.require(static_cast<int>(g.nodes.size()) ==
                    c.head_lines + c.boxes + c.constant_slots,
                "drg node count");
    out.require(static_cast<int>(levi.nodes.size()) == originals + e,
                "levi node count != N + E");
    out.require(levi.count(DirClass::Default) == 2 * e + chain,
                "default edge count != 2E");
    out.require(levi.count(DirClass::SelfLoop) ==
                    static_cast<int>(levi.nodes.size()),
                "self-loop completeness");
    std::multiset<std::pair<int, int>> defaults, reverses;
    for (const auto& edge : levi.edges) {
      if (edge.dir == DirClass::Default) defaults.insert({edge.src, edge.dst});
      if (edge.dir == DirClass::Reverse) reverses.insert({edge.dst, edge.src});
    }
    out.require(defaults == reverses, "reverse mirror mismatch");
    if (!out.pass) break;
  }

  TemplateCorpus corpus = make_template_corpus(1000, 1002);
  for (const auto& pair : corpus.pairs) {
    Drg g = build_drg(parse_sbn(pair.sbn, pair.id));
    LeviGraph levi = to_levi(g);
    auto va = analyze_voice(g);
    out.require(va.has_value(), "template not transitive");
    if (!va) break;
    LeviVoiceInfo info = to_levi_voice(*va, levi);
    ++checked;
    for (TfaStrategy s : {TfaStrategy::CTC, TfaStrategy::BTC, TfaStrategy::RTR}) {
      TfaSpec spec = make_tfa_spec(s, va->voice, info);
      LeviGraph aug = apply_tfa(levi, spec);
      const int dn = s == TfaStrategy::RTR ? 0 : 1;
      const int de = s == TfaStrategy::RTR ? 1 : 2;
      out.require(aug.nodes.size() == levi.nodes.size() + dn, "tfa node delta");
      out.require(aug.count(DirClass::Default) ==
                      levi.count(DirClass::Default) + de,
                  "tfa default delta");
      out.require(aug.count(DirClass::Reverse) ==
                      levi.count(DirClass::Reverse) + de,
                  "tfa reverse delta");
      out.require(aug.count(DirClass::SelfLoop) ==
                      levi.count(DirClass::SelfLoop) + dn,
                  "tfa self-loop delta");
      auto [flipped, fspec] = flip_voice(aug, spec);
      auto [back, bspec] = flip_voice(flipped, fspec);
      out.require(bspec == spec && levi_to_json(back) == levi_to_json(aug),
                  "flip involution");
    }
    if (!out.pass) break;
  }

  const double dt = seconds_since(t0);
  out.require(dt < 30.0, "runtime over 30 s");
  if (out.pass) {
    out.detail = std::to_string(checked) + " graphs in " +
                 std::to_string(dt).substr(0, 4) + " s";
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. deep_neighborhood equals a transitive-closure oracle on >= 500 random
//    graphs up to 50 nodes, including cyclic TFA-augmented graphs.
// ---------------------------------------------------------------------------
Outcome criterion_2() {
  Outcome out;
  Rng rng(2001);
  int checked = 0;

  auto verify = [&](const LeviGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges) {
      if (e.dir == DirClass::Default) reach[e.src][e.dst] = true;
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        }
      }
    }
    Neighborhood nb = deep_neighborhood(g);
    for (int i = 0; i < n; ++i) {
      std::set<int> fwd, rev;
      int selfs = 0;
      for (const auto& [j, dir] : nb[i]) {
        if (dir == DirClass::Default) fwd.insert(j);
        if (dir == DirClass::Reverse) rev.insert(j);
        selfs += dir == DirClass::SelfLoop;
      }
      std::set<int> fwd_expect, rev_expect;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (reach[i][j]) fwd_expect.insert(j);
        if (reach[j][i]) rev_expect.insert(j);
      }
      out.require(fwd == fwd_expect && rev == rev_expect && selfs == 1,
                  "closure mismatch at node " + std::to_string(i));
      if (!out.pass) return;
    }
    ++checked;
  };

  for (int trial = 0; trial < 400 && out.pass; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(49));
    LeviGraph g;
    for (int i = 0; i < n; ++i) {
      g.nodes.push_back({"n" + std::to_string(i), LeviNodeKind::Original});
    }
    const int m = static_cast<int>(rng.below(static_cast<uint64_t>(3 * n)));
    for (int k = 0; k < m; ++k) {
      const int a = static_cast<int>(rng.below(n));
      const int b = static_cast<int>(rng.below(n));
      if (a != b) g.edges.push_back({a, b, DirClass::Default});
    }
    verify(g);
  }

  TemplateCorpus corpus = make_template_corpus(200, 2002);
  for (const auto& pair : corpus.pairs) {
    if (!out.pass) break;
    Drg g = build_drg(parse_sbn(pair.sbn, pair.id));
    LeviGraph levi = to_levi(g);
    auto va = analyze_voice(g);
    LeviVoiceInfo info = to_levi_voice(*va, levi);
    verify(apply_tfa(levi, make_tfa_spec(TfaStrategy::CTC, va->voice, info)));
  }

  if (out.pass) out.detail = std::to_string(checked) + " graphs, 100% agreement";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Numerical suite: finite-difference gradient checks < 1e-4 for every
//    layer, cell, attention and copy gate; DFS order invariance to 1e-12.
// ---------------------------------------------------------------------------
Outcome criterion_3() {
  Outcome out;
  Rng rng(3001);
  double worst = 0.0;

  {
    nn::ParamStore ps;
    nn::GruParams::create(ps, "gru", 4, 4, rng);
    Mat x = Mat::Random(4, 2), h = Mat::Random(4, 2);
    const double err = nn::grad_check(
        [&](Tape& t) {
          return sum_all(
              tanh(gru_step(nn::GruParams::bind(t, ps, "gru"), t.constant(x),
                            t.constant(h))));
        },
        ps);
    worst = std::max(worst, err);
    out.require(err < 1e-4, "gru gradient");
  }
  {
    nn::ParamStore ps;
    nn::LstmParams::create(ps, "lstm", 4, 4, rng);
    Mat x = Mat::Random(4, 1), h = Mat::Random(4, 1), c = Mat::Random(4, 1);
    const double err = nn::grad_check(
        [&](Tape& t) {
          auto [h1, c1] = lstm_step(nn::LstmParams::bind(t, ps, "lstm"),
                                    t.constant(x), t.constant(h), t.constant(c));
          return sum_all(cmul(h1, c1));
        },
        ps);
    worst = std::max(worst, err);
    out.require(err < 1e-4, "lstm gradient");
  }

  // the encoder layers, over both neighborhood schemes
  TemplateCorpus corpus = make_template_corpus(2, 3002);
  Drg drg = build_drg(parse_sbn(corpus.pairs[0].sbn, "g"));
  LeviGraph levi = to_levi(drg);
  Mat h0 = Mat::Random(3, static_cast<long>(levi.nodes.size()));
  for (auto nbkind : {NeighborhoodKind::Local, NeighborhoodKind::DeepTraversal}) {
    Neighborhood nb = nbkind == NeighborhoodKind::Local
                          ? local_neighborhood(levi)
                          : deep_neighborhood(levi);
    DirMats dm = neighborhood_matrices(nb);
    const std::string tag = to_string(nbkind);
    {
      nn::ParamStore ps;
      GgnnLayerParams::create(ps, "g", 3, rng);
      const double err = nn::grad_check(
          [&](Tape& t) {
            return sum_all(tanh(
                ggnn_layer(t.constant(h0), dm, GgnnLayerParams::bind(t, ps, "g"))));
          },
          ps);
      worst = std::max(worst, err);
      out.require(err < 1e-4, "ggnn-" + tag + " gradient");
    }
    {
      nn::ParamStore ps;
      GcnLayerParams::create(ps, "g", 3, true, rng);
      const double err = nn::grad_check(
          [&](Tape& t) {
            return sum_all(tanh(gcn_layer(t.constant(h0), dm,
                                          GcnLayerParams::bind(t, ps, "g", true))));
          },
          ps);
      worst = std::max(worst, err);
      out.require(err < 1e-4, "gcn-" + tag + " gradient");
    }
    {
      nn::ParamStore ps;
      GatLayerParams::create(ps, "g", 3, 2, true, rng);
      const double err = nn::grad_check(
          [&](Tape& t) {
            return sum_all(tanh(gat_layer(
                t.constant(h0), nb, GatLayerParams::bind(t, ps, "g", 2, true))));
          },
          ps);
      worst = std::max(worst, err);
      out.require(err < 1e-4, "gat-" + tag + " gradient");
    }
  }

  // attention + copy gate through a full decode step
  {
    ModelConfig cfg;
    cfg.encoder.kind = EncoderKind::GGNN;
    cfg.encoder.neighborhood = NeighborhoodKind::DeepTraversal;
    cfg.encoder.hidden = 4;
    Vocabulary src = Vocabulary::build({linearize(levi)});
    Vocabulary tgt = Vocabulary::build({tokenize(corpus.pairs[0].reference)});
    Model model = make_model(cfg, src, tgt, 3003);
    Example ex = prepare_example(model, levi, corpus.pairs[0].reference,
                                 VoiceType{}, "g", "none");
    const double err = nn::grad_check(
        [&](Tape& t) { return example_loss(t, model, ex, nullptr).first; },
        model.params);
    worst = std::max(worst, err);
    out.require(err < 1e-4, "decoder attention/copy gradient");
  }

  // DFS visit-order invariance of the deep-traversal encoder
  {
    auto va = analyze_voice(drg);
    LeviGraph cyclic = apply_tfa(
        levi, make_tfa_spec(TfaStrategy::CTC, va->voice, to_levi_voice(*va, levi)));
    LeviGraph shuffled = cyclic;
    Rng srng(3004);
    srng.shuffle(shuffled.edges);

    EncoderConfig cfg;
    cfg.kind = EncoderKind::GGNN;
    cfg.neighborhood = NeighborhoodKind::DeepTraversal;
    cfg.hidden = 8;
    nn::ParamStore ps;
    Rng prng(3005);
    create_encoder_params(ps, cfg, 32, prng);
    std::vector<int> ids(cyclic.nodes.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i % 32);
    auto run = [&](const LeviGraph& g) {
      Neighborhood nb = deep_neighborhood(g);
      DirMats dm = neighborhood_matrices(nb);
      Tape t;
      return encode(t, ps, cfg, ids, nb, dm).states.value().eval();
    };
    const double delta = (run(cyclic) - run(shuffled)).cwiseAbs().maxCoeff();
    out.require(delta < 1e-12, "DFS order invariance");
  }

  if (out.pass) {
    std::ostringstream ss;
    ss << "max relative gradient error " << worst;
    out.detail = ss.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Voice detection scores 100% on the 50-sentence hand-labeled fixture.
// ---------------------------------------------------------------------------
Outcome criterion_4() {
  Outcome out;
  const std::string path =
      std::string(DRS2TEXT_SOURCE_DIR) + "/tests/data/voice_fixture.jsonl";
  std::ifstream in(path);
  out.require(static_cast<bool>(in), "fixture missing: " + path);
  if (!out.pass) return out;

  int total = 0, correct = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ordered_json j = ordered_json::parse(line);
    ++total;
    VoiceType detected;
    try {
      detected = detect_voice(
          build_drg(parse_sbn(j.at("sbn").get<std::string>(), "fx")));
    } catch (const std::exception& e) {
      out.require(false, std::string("fixture row threw: ") + e.what());
      continue;
    }
    const bool hit = to_string(detected.voice) == j.at("voice").get<std::string>() &&
                     detected.pair_role == j.at("pair").get<std::string>();
    if (!hit) {
      out.require(false, "row " + std::to_string(total) + " detected " +
                             to_string(detected.voice));
    }
    correct += hit;
  }
  out.require(total == 50, "fixture must hold 50 rows");
  if (out.pass) {
    out.detail = std::to_string(correct) + "/" + std::to_string(total);
  }
  return out;
}

// shared by criteria 5 and 6
std::vector<Example> make_examples(
    const Model& model, const std::vector<std::tuple<LeviGraph, std::string,
                                                     VoiceType, std::string>>& rows) {
  std::vector<Example> out;
  for (const auto& [graph, ref, voice, id] : rows) {
    out.push_back(prepare_example(model, graph, ref, voice, id, "ctc"));
  }
  return out;
}

struct CorpusSplit {
  Vocabulary src, tgt;
  std::vector<std::tuple<LeviGraph, std::string, VoiceType, std::string>> rows;
};

// Template pairs -> (optionally CTC-augmented) graphs plus vocabularies.
CorpusSplit prepare_rows(const std::vector<TemplatePair>& pairs, bool augment) {
  CorpusSplit split;
  std::vector<std::vector<std::string>> src_tokens, tgt_tokens;
  for (const auto& pair : pairs) {
    Drg drg = build_drg(parse_sbn(pair.sbn, pair.id));
    LeviGraph levi = to_levi(drg);
    auto va = analyze_voice(drg);
    if (augment) {
      levi = apply_tfa(levi, make_tfa_spec(TfaStrategy::CTC, va->voice,
                                           to_levi_voice(*va, levi)));
    }
    src_tokens.push_back(linearize(levi));
    tgt_tokens.push_back(tokenize(pair.reference));
    split.rows.emplace_back(std::move(levi), pair.reference, va->voice, pair.id);
  }
  split.src = Vocabulary::build(src_tokens);
  split.tgt = Vocabulary::build(tgt_tokens);
  return split;
}

// ---------------------------------------------------------------------------
// 5. Overfit sanity: deep-traversal GGNN + CTC reaches train BLEU >= 95 on the
//    bundled 100-sentence fixture within 200 epochs and 10 CPU minutes.
// ---------------------------------------------------------------------------
Outcome criterion_5() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  Corpus corpus = load_corpus(std::string(DRS2TEXT_SOURCE_DIR) +
                              "/data/fixture100/manifest.tsv");
  out.require(corpus.entries.size() == 100, "fixture100 must hold 100 rows");
  if (!out.pass) return out;
  std::vector<TemplatePair> pairs;
  for (const auto& entry : corpus.entries) {
    TemplatePair p;
    p.id = entry.doc.source_id;
    p.sbn = serialize_sbn(entry.doc);
    p.reference = entry.reference;
    pairs.push_back(std::move(p));
  }
  CorpusSplit data = prepare_rows(pairs, /*augment=*/true);

  ModelConfig cfg;
  cfg.encoder.kind = EncoderKind::GGNN;
  cfg.encoder.neighborhood = NeighborhoodKind::DeepTraversal;
  cfg.encoder.hidden = 96;
  cfg.strategy = "ctc";
  Model model = make_model(cfg, data.src, data.tgt, 5001);
  std::vector<Example> examples = make_examples(model, data.rows);

  TrainHyper hyper;
  hyper.batch_size = 8;
  hyper.learning_rate = 1.0;
  hyper.dropout = 0.0;
  hyper.epochs = 25;

  double train_bleu = 0.0;
  int epochs_used = 0;
  for (int chunk = 0; chunk < 8; ++chunk) {  // 8 x 25 = 200 epochs cap
    train(model, examples, {}, hyper, 5001 + chunk);
    epochs_used += hyper.epochs;
    std::vector<std::vector<std::string>> hyps, refs;
    for (const auto& ex : examples) {
      hyps.push_back(generate(model, ex));
      refs.push_back(ex.tgt_tokens);
    }
    train_bleu = bleu(hyps, refs);
    if (train_bleu >= 95.0) break;
  }
  const double dt = seconds_since(t0);
  out.require(train_bleu >= 95.0, "train BLEU " + std::to_string(train_bleu));
  out.require(epochs_used <= 200, "epoch budget exceeded");
  out.require(dt < 600.0, "over 10 CPU minutes");
  if (out.pass) {
    std::ostringstream ss;
    ss << "BLEU " << train_bleu << " after " << epochs_used << " epochs, "
       << static_cast<int>(dt) << " s";
    out.detail = ss.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 6. Voice control at desk scale: flipping the CTC mark flips the voice
//    heuristic's verdict on >= 80% of 50 held-out pairs; the untagged
//    baseline sits at or below the 55% chance level.
// ---------------------------------------------------------------------------
Outcome criterion_6() {
  Outcome out;
  TemplateCorpus corpus = make_template_corpus(500, 6001);
  out.require(corpus.pairs.size() == 500, "corpus must hold 500 pairs");
  if (!out.pass) return out;
  // last 25 triples (both voices) are held out
  std::vector<TemplatePair> train_pairs(corpus.pairs.begin(),
                                        corpus.pairs.end() - 50);
  std::vector<TemplatePair> held_pairs(corpus.pairs.end() - 50,
                                       corpus.pairs.end());

  TrainHyper hyper;
  hyper.batch_size = 16;
  hyper.learning_rate = 1.0;
  hyper.dropout = 0.1;
  hyper.epochs = 30;

  ModelConfig cfg;
  cfg.encoder.kind = EncoderKind::GGNN;
  cfg.encoder.neighborhood = NeighborhoodKind::DeepTraversal;
  cfg.encoder.hidden = 96;

  auto flip_rate = [&](bool tagged) {
    CorpusSplit train_data = prepare_rows(train_pairs, tagged);
    cfg.strategy = tagged ? "ctc" : "none";
    Model model = make_model(cfg, train_data.src, train_data.tgt, 6002);
    std::vector<Example> train_set = make_examples(model, train_data.rows);
    train(model, train_set, {}, hyper, 6002);

    int hits = 0;
    for (const auto& pair : held_pairs) {
      Drg drg = build_drg(parse_sbn(pair.sbn, pair.id));
      LeviGraph levi = to_levi(drg);
      auto va = analyze_voice(drg);
      if (tagged) {
        // apply the CTC mark for the opposite argument
        levi = apply_tfa(levi, make_tfa_spec(TfaStrategy::CTC, va->voice,
                                             to_levi_voice(*va, levi),
                                             /*flipped=*/true));
      }
      Example ex = prepare_example(model, levi, pair.reference, va->voice,
                                   pair.id, cfg.strategy);
      const VoiceVerdict verdict = voice_heuristic(generate(model, ex));
      const VoiceClass opposite = pair.voice == VoiceClass::Active
                                      ? VoiceClass::Passive
                                      : VoiceClass::Active;
      hits += to_string(verdict) == to_string(opposite);
    }
    return 100.0 * hits / static_cast<double>(held_pairs.size());
  };

  const double tagged_rate = flip_rate(true);
  out.require(tagged_rate >= 80.0,
              "CTC flip rate " + std::to_string(tagged_rate) + "% < 80%");
  const double baseline_rate = flip_rate(false);
  out.require(baseline_rate <= 55.0,
              "baseline flip rate " + std::to_string(baseline_rate) + "% > 55%");
  if (out.pass) {
    std::ostringstream ss;
    ss << "CTC " << tagged_rate << "%, baseline " << baseline_rate << "%";
    out.detail = ss.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 7. Metric oracles: BLEU vs brute force to 1e-9; identity BLEU 100.0; the
//    ten-row ROSE fixture matches hand-computed values exactly.
// ---------------------------------------------------------------------------
Outcome criterion_7() {
  Outcome out;
  Rng rng(7001);
  for (int trial = 0; trial < 40; ++trial) {
    auto refs = testing::random_token_corpus(rng, 20, 12, 14);
    auto hyps = testing::random_token_corpus(rng, 20, 12, 14);
    for (size_t i = 0; i < hyps.size(); i += 2) hyps[i] = refs[i];
    const double got = bleu(hyps, refs);
    const double expect = testing::oracle_bleu(hyps, refs);
    out.require(std::abs(got - expect) < 1e-9,
                "bleu oracle mismatch " + std::to_string(got - expect));
    if (!out.pass) return out;
  }

  testing::TokCorpus identity = {
      {"the", "wolf", "killed", "two", "sheep", "."},
      {"that", "was", "written", "by", "taro", "akagawa", "."}};
  out.require(bleu(identity, identity) == 100.0, "identity BLEU not 100.0");

  std::vector<GenerationRecord> records;
  std::map<std::string, RoseJudgment> judgments;
  struct Row { const char* id; VoiceClass dir; int s, g, p; };
  const std::vector<Row> rows = {
      {"r0", VoiceClass::Active, 1, 1, 1}, {"r1", VoiceClass::Active, 1, 1, 0},
      {"r2", VoiceClass::Active, 0, 1, 1}, {"r3", VoiceClass::Active, 1, 0, 1},
      {"r4", VoiceClass::Active, 1, 1, 1}, {"r5", VoiceClass::Active, 0, 0, 0},
      {"r6", VoiceClass::Passive, 1, 1, 1}, {"r7", VoiceClass::Passive, 1, 1, 0},
      {"r8", VoiceClass::Passive, 0, 1, 0}, {"r9", VoiceClass::Passive, 1, 0, 0},
  };
  for (const auto& row : rows) {
    GenerationRecord rec;
    rec.source_id = row.id;
    rec.voice_expected.voice = row.dir;
    rec.flipped = true;
    records.push_back(rec);
    judgments[row.id] = {row.id, row.s, row.g, row.p, ""};
  }
  RoseReport report = rose_accuracy(records, judgments);
  out.require(report.passive_to_active.semantics == 100.0 * 4 / 6, "p2a sem");
  out.require(report.passive_to_active.rose == 100.0 * 2 / 6, "p2a rose");
  out.require(report.active_to_passive.phenomenon == 25.0, "a2p phen");
  out.require(report.active_to_passive.rose == 25.0, "a2p rose");
  out.require(report.all_rose == 30.0, "ALL rose");
  if (out.pass) out.detail = "bleu oracle, identity, rose fixture";
  return out;
}

// ---------------------------------------------------------------------------
// 8. Reproducibility: two CLI runs with the same config and seed produce
//    byte-identical checkpoints, generations and reports.
// ---------------------------------------------------------------------------
Outcome criterion_8() {
  Outcome out;
  const fs::path work = fs::temp_directory_path() / "drs2text_acceptance_repro";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string cli = DRS2TEXT_CLI_PATH;

  auto sh = [&](const std::string& cmd) {
    const std::string full = cmd + " >/dev/null 2>&1";
    return std::system(full.c_str()) == 0;
  };
  auto file_bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const std::string corpus = (work / "corpus").string();
  out.require(sh(cli + " make-fixture --out-dir " + corpus +
                 " --pairs 16 --seed 4"),
              "make-fixture failed");
  for (const std::string run : {"a", "b"}) {
    const std::string dir = (work / run).string();
    fs::create_directories(dir);
    bool ok = sh(cli + " convert --manifest " + corpus + "/manifest.tsv --out " +
                 dir + "/graphs.jsonl");
    ok = ok && sh(cli + " augment --in " + dir + "/graphs.jsonl --out " + dir +
                  "/aug.jsonl --strategy rtr");
    ok = ok && sh(cli + " train --data " + dir + "/aug.jsonl --dev " + dir +
                  "/aug.jsonl --out-dir " + dir +
                  "/model --hidden 16 --epochs 2 --seed 9");
    ok = ok && sh(cli + " generate --model " + dir +
                  "/model/checkpoint.json --data " + dir + "/aug.jsonl --out " +
                  dir + "/gen.jsonl --flip");
    ok = ok && sh(cli + " evaluate --gen " + dir + "/gen.jsonl --out " + dir +
                  "/report.json");
    out.require(ok, "pipeline run " + run + " failed");
    if (!out.pass) return out;
  }
  for (const std::string name :
       {"model/checkpoint.json", "gen.jsonl", "report.json", "aug.jsonl"}) {
    out.require(file_bytes(work / "a" / name) == file_bytes(work / "b" / name),
                name + " differs between runs");
  }
  if (out.pass) out.detail = "checkpoint, generations and report byte-identical";
  fs::remove_all(work);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return selected.empty() || selected.count(id); };

  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Entry> criteria = {
      {1, "structural oracle suite", criterion_1},
      {2, "deep-neighborhood closure equivalence", criterion_2},
      {3, "numerical gradient suite", criterion_3},
      {4, "voice detection fixture", criterion_4},
      {5, "overfit sanity on the bundled fixture", criterion_5},
      {6, "voice control on held-out data", criterion_6},
      {7, "metric oracles", criterion_7},
      {8, "reproducibility of CLI runs", criterion_8},
  };

  bool all_pass = true;
  for (const auto& entry : criteria) {
    if (!want(entry.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
              << entry.id << ": " << entry.name << " (" << std::fixed
              << std::setprecision(1) << dt << " s)"
              << (outcome.detail.empty() ? "" : " -- " + outcome.detail)
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
