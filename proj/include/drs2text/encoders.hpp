#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drs2text/drg.hpp"
#include "drs2text/nn/cells.hpp"

namespace drs2text {

// Aggregation entries per node: (neighbor index, direction class). Exactly
// one SelfLoop entry per node, no duplicate (neighbor, class) pairs.
using Neighborhood = std::vector<std::vector<std::pair<int, DirClass>>>;

// Immediate neighbors: Default-edge targets tagged Default, sources tagged
// Reverse, plus the node itself.
Neighborhood local_neighborhood(const LeviGraph& g);

// Depth-first reachability over Default edges, cycle-safe: everything
// reachable from i tagged Default, everything that reaches i tagged Reverse,
// the node itself excluded from both and present only as the SelfLoop entry.
Neighborhood deep_neighborhood(const LeviGraph& g);

// Dense per-direction aggregation operators: A[dir](j, i) = 1 / |nb(i)| for
// every entry (j, dir) in nb(i). Constant per graph; cache next to it.
struct DirMats {
  std::array<nn::Mat, 3> A;
  long nodes() const { return A[0].rows(); }
};
DirMats neighborhood_matrices(const Neighborhood& nb);

enum class EncoderKind { GCN, GAT, GGNN };
enum class NeighborhoodKind { Local, DeepTraversal };

std::string to_string(EncoderKind k);
std::string to_string(NeighborhoodKind k);
std::optional<EncoderKind> encoder_kind_from_string(const std::string& s);
std::optional<NeighborhoodKind> neighborhood_kind_from_string(const std::string& s);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::GGNN;
  NeighborhoodKind neighborhood = NeighborhoodKind::DeepTraversal;
  int layers = 0;  // 0 = default for the neighborhood: 1 deep, 2 local
  int hidden = 256;
  bool highway = true;      // GCN/GAT only
  int attention_heads = 1;  // GAT only

  int resolved_layers() const {
    if (layers > 0) return layers;
    return neighborhood == NeighborhoodKind::DeepTraversal ? 1 : 2;
  }
  void validate() const;
};

// ---- individual layers ----

struct GgnnLayerParams {
  std::array<nn::Expr, 3> W;
  nn::GruParams gru;
  static void create(nn::ParamStore& ps, const std::string& prefix, long hidden, Rng& rng);
  static GgnnLayerParams bind(nn::Tape& t, nn::ParamStore& ps, const std::string& prefix);
};

// h_i' = GRU(h_i, sum over nb(i) of W_dir h_j / |nb(i)|).
nn::Expr ggnn_layer(nn::Expr h, const DirMats& dm, const GgnnLayerParams& p);

struct GcnLayerParams {
  std::array<nn::Expr, 3> W;
  nn::Expr b;
  bool highway = false;
  nn::Expr Wg, bg;  // highway gate
  static void create(nn::ParamStore& ps, const std::string& prefix, long hidden,
                     bool highway, Rng& rng);
  static GcnLayerParams bind(nn::Tape& t, nn::ParamStore& ps, const std::string& prefix,
                             bool highway);
};

// h_i' = ReLU(sum W_dir h_j / |nb(i)| + b), optionally mixed with the input
// through a tanh gate.
nn::Expr gcn_layer(nn::Expr h, const DirMats& dm, const GcnLayerParams& p);

struct GatHeadParams {
  std::array<nn::Expr, 3> W;  // value/key transform per direction class
  nn::Expr Wq, aq, ak;        // query transform and scoring vectors
};
struct GatLayerParams {
  std::vector<GatHeadParams> heads;
  nn::Expr b;
  bool highway = false;
  nn::Expr Wg, bg;
  static void create(nn::ParamStore& ps, const std::string& prefix, long hidden,
                     int heads, bool highway, Rng& rng);
  static GatLayerParams bind(nn::Tape& t, nn::ParamStore& ps, const std::string& prefix,
                             int heads, bool highway);
};

// Attention over nb(i) with leaky-ReLU-scored logits; with zeroed scoring
// vectors this reduces exactly to gcn_layer on the same W and b.
nn::Expr gat_layer(nn::Expr h, const Neighborhood& nb, const GatLayerParams& p);

// ---- full encoder ----

void create_encoder_params(nn::ParamStore& ps, const EncoderConfig& cfg,
                           long src_vocab, Rng& rng);

struct EncodeResult {
  nn::Expr states;  // hidden x nodes, keyed to linearize() order
  nn::Expr pooled;  // hidden x 1, mean over nodes
};

// `token_ids`: source-vocabulary id per Levi node. `nb` must match
// cfg.neighborhood for the same graph.
EncodeResult encode(nn::Tape& t, nn::ParamStore& ps, const EncoderConfig& cfg,
                    const std::vector<int>& token_ids, const Neighborhood& nb,
                    const DirMats& dm);

}  // namespace drs2text
