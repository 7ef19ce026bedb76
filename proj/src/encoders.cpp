#include "drs2text/encoders.hpp"

#include <algorithm>
#include <set>

namespace drs2text {

using nn::Expr;
using nn::hcat;
using nn::Mat;
using nn::Tape;

namespace {

// Default-edge adjacency lists (out and in), deduplicated, in edge order.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
default_adjacency(const LeviGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> out(n), in(n);
  for (const auto& e : g.edges) {
    if (e.dir != DirClass::Default) continue;
    if (std::find(out[e.src].begin(), out[e.src].end(), e.dst) == out[e.src].end())
      out[e.src].push_back(e.dst);
    if (std::find(in[e.dst].begin(), in[e.dst].end(), e.src) == in[e.dst].end())
      in[e.dst].push_back(e.src);
  }
  return {out, in};
}

// Iterative DFS from `start`; returns visited nodes (excluding start unless
// revisited through a cycle, which is still excluded) in visit order.
std::vector<int> dfs_reachable(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> order;
  std::vector<int> stack(adj[start].rbegin(), adj[start].rend());
  seen[start] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    order.push_back(v);
    for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
      if (!seen[*it]) stack.push_back(*it);
    }
  }
  return order;
}

}  // namespace

Neighborhood local_neighborhood(const LeviGraph& g) {
  const auto [out, in] = default_adjacency(g);
  const int n = static_cast<int>(g.nodes.size());
  Neighborhood nb(n);
  for (int i = 0; i < n; ++i) {
    for (int j : out[i]) nb[i].emplace_back(j, DirClass::Default);
    for (int j : in[i]) nb[i].emplace_back(j, DirClass::Reverse);
    nb[i].emplace_back(i, DirClass::SelfLoop);
  }
  return nb;
}

Neighborhood deep_neighborhood(const LeviGraph& g) {
  const auto [out, in] = default_adjacency(g);
  const int n = static_cast<int>(g.nodes.size());
  Neighborhood nb(n);
  for (int i = 0; i < n; ++i) {
    for (int j : dfs_reachable(out, i)) {
      if (j != i) nb[i].emplace_back(j, DirClass::Default);
    }
    for (int j : dfs_reachable(in, i)) {
      if (j != i) nb[i].emplace_back(j, DirClass::Reverse);
    }
    nb[i].emplace_back(i, DirClass::SelfLoop);
  }
  return nb;
}

DirMats neighborhood_matrices(const Neighborhood& nb) {
  const long n = static_cast<long>(nb.size());
  DirMats dm;
  for (auto& a : dm.A) a = Mat::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    const double w = nb[i].empty() ? 0.0 : 1.0 / static_cast<double>(nb[i].size());
    for (const auto& [j, dir] : nb[i]) {
      dm.A[static_cast<int>(dir)](j, i) = w;
    }
  }
  return dm;
}

std::string to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::GCN: return "gcn";
    case EncoderKind::GAT: return "gat";
    case EncoderKind::GGNN: return "ggnn";
  }
  return "ggnn";
}

std::string to_string(NeighborhoodKind k) {
  return k == NeighborhoodKind::Local ? "local" : "deep";
}

std::optional<EncoderKind> encoder_kind_from_string(const std::string& s) {
  if (s == "gcn") return EncoderKind::GCN;
  if (s == "gat") return EncoderKind::GAT;
  if (s == "ggnn") return EncoderKind::GGNN;
  return std::nullopt;
}

std::optional<NeighborhoodKind> neighborhood_kind_from_string(const std::string& s) {
  if (s == "local") return NeighborhoodKind::Local;
  if (s == "deep") return NeighborhoodKind::DeepTraversal;
  return std::nullopt;
}

void EncoderConfig::validate() const {
  if (hidden <= 0) throw nn::NnError(nn::NnErrorKind::ConfigInvalid, "hidden must be positive");
  if (layers < 0) throw nn::NnError(nn::NnErrorKind::ConfigInvalid, "layers must be >= 0");
  if (attention_heads <= 0) {
    throw nn::NnError(nn::NnErrorKind::ConfigInvalid, "attention_heads must be positive");
  }
}

namespace {

const char* dir_suffix(int d) {
  switch (d) {
    case 0: return "default";
    case 1: return "reverse";
    default: return "self";
  }
}

// Message aggregation shared by GGNN and GCN: sum over direction classes of
// W_dir (H A_dir).
Expr aggregate(Expr h, const DirMats& dm, const std::array<Expr, 3>& W) {
  Tape& t = *h.tape;
  Expr m;
  for (int d = 0; d < 3; ++d) {
    Expr part = W[d] * (h * t.constant(dm.A[d]));
    m = m.valid() ? m + part : part;
  }
  return m;
}

Expr highway_mix(Expr h_in, Expr h_new, Expr Wg, Expr bg) {
  // tanh gate mapped to (0, 1)
  Expr gate = scalar_mul(0.5, one_minus(neg(tanh(add_colvec(Wg * h_in, bg)))));
  return cmul(gate, h_new) + cmul(one_minus(gate), h_in);
}

}  // namespace

void GgnnLayerParams::create(nn::ParamStore& ps, const std::string& prefix,
                             long hidden, Rng& rng) {
  for (int d = 0; d < 3; ++d) {
    ps.add(prefix + ".W." + dir_suffix(d), hidden, hidden, nn::Init::Glorot, rng);
  }
  nn::GruParams::create(ps, prefix + ".gru", hidden, hidden, rng);
}

GgnnLayerParams GgnnLayerParams::bind(Tape& t, nn::ParamStore& ps,
                                      const std::string& prefix) {
  GgnnLayerParams p;
  for (int d = 0; d < 3; ++d) {
    p.W[d] = t.leaf(ps.get(prefix + ".W." + dir_suffix(d)));
  }
  p.gru = nn::GruParams::bind(t, ps, prefix + ".gru");
  return p;
}

Expr ggnn_layer(Expr h, const DirMats& dm, const GgnnLayerParams& p) {
  if (h.value().cols() != dm.nodes()) {
    throw nn::NnError(nn::NnErrorKind::ShapeMismatch,
                      "ggnn_layer: state count != neighborhood size");
  }
  return gru_step(p.gru, aggregate(h, dm, p.W), h);
}

void GcnLayerParams::create(nn::ParamStore& ps, const std::string& prefix,
                            long hidden, bool highway, Rng& rng) {
  for (int d = 0; d < 3; ++d) {
    ps.add(prefix + ".W." + dir_suffix(d), hidden, hidden, nn::Init::Glorot, rng);
  }
  ps.add(prefix + ".b", hidden, 1, nn::Init::Zeros, rng);
  if (highway) {
    ps.add(prefix + ".Wg", hidden, hidden, nn::Init::Glorot, rng);
    ps.add(prefix + ".bg", hidden, 1, nn::Init::Zeros, rng);
  }
}

GcnLayerParams GcnLayerParams::bind(Tape& t, nn::ParamStore& ps,
                                    const std::string& prefix, bool highway) {
  GcnLayerParams p;
  for (int d = 0; d < 3; ++d) {
    p.W[d] = t.leaf(ps.get(prefix + ".W." + dir_suffix(d)));
  }
  p.b = t.leaf(ps.get(prefix + ".b"));
  p.highway = highway;
  if (highway) {
    p.Wg = t.leaf(ps.get(prefix + ".Wg"));
    p.bg = t.leaf(ps.get(prefix + ".bg"));
  }
  return p;
}

Expr gcn_layer(Expr h, const DirMats& dm, const GcnLayerParams& p) {
  if (h.value().cols() != dm.nodes()) {
    throw nn::NnError(nn::NnErrorKind::ShapeMismatch,
                      "gcn_layer: state count != neighborhood size");
  }
  Expr out = relu(add_colvec(aggregate(h, dm, p.W), p.b));
  if (p.highway) out = highway_mix(h, out, p.Wg, p.bg);
  return out;
}

void GatLayerParams::create(nn::ParamStore& ps, const std::string& prefix,
                            long hidden, int heads, bool highway, Rng& rng) {
  for (int k = 0; k < heads; ++k) {
    const std::string hp = prefix + ".h" + std::to_string(k);
    for (int d = 0; d < 3; ++d) {
      ps.add(hp + ".W." + dir_suffix(d), hidden, hidden, nn::Init::Glorot, rng);
    }
    ps.add(hp + ".Wq", hidden, hidden, nn::Init::Glorot, rng);
    ps.add(hp + ".aq", hidden, 1, nn::Init::Glorot, rng);
    ps.add(hp + ".ak", hidden, 1, nn::Init::Glorot, rng);
  }
  ps.add(prefix + ".b", hidden, 1, nn::Init::Zeros, rng);
  if (highway) {
    ps.add(prefix + ".Wg", hidden, hidden, nn::Init::Glorot, rng);
    ps.add(prefix + ".bg", hidden, 1, nn::Init::Zeros, rng);
  }
}

GatLayerParams GatLayerParams::bind(Tape& t, nn::ParamStore& ps,
                                    const std::string& prefix, int heads,
                                    bool highway) {
  GatLayerParams p;
  for (int k = 0; k < heads; ++k) {
    const std::string hp = prefix + ".h" + std::to_string(k);
    GatHeadParams head;
    for (int d = 0; d < 3; ++d) {
      head.W[d] = t.leaf(ps.get(hp + ".W." + dir_suffix(d)));
    }
    head.Wq = t.leaf(ps.get(hp + ".Wq"));
    head.aq = t.leaf(ps.get(hp + ".aq"));
    head.ak = t.leaf(ps.get(hp + ".ak"));
    p.heads.push_back(head);
  }
  p.b = t.leaf(ps.get(prefix + ".b"));
  p.highway = highway;
  if (highway) {
    p.Wg = t.leaf(ps.get(prefix + ".Wg"));
    p.bg = t.leaf(ps.get(prefix + ".bg"));
  }
  return p;
}

Expr gat_layer(Expr h, const Neighborhood& nb, const GatLayerParams& p) {
  Tape& t = *h.tape;
  const long n = h.value().cols();
  if (n != static_cast<long>(nb.size())) {
    throw nn::NnError(nn::NnErrorKind::ShapeMismatch,
                      "gat_layer: state count != neighborhood size");
  }
  Expr mixed;
  for (const GatHeadParams& head : p.heads) {
    std::array<Expr, 3> U;
    for (int d = 0; d < 3; ++d) U[d] = head.W[d] * h;
    Expr U_all = hcat({U[0], U[1], U[2]});                        // hidden x 3n
    Expr sq = transpose(head.aq) * (head.Wq * h);                 // 1 x n
    Expr sk = transpose(head.ak) * U_all;                         // 1 x 3n

    std::vector<Expr> cols;
    cols.reserve(n);
    for (long i = 0; i < n; ++i) {
      std::vector<int> self_ids(nb[i].size(), static_cast<int>(i));
      std::vector<int> flat_ids;
      flat_ids.reserve(nb[i].size());
      for (const auto& [j, dir] : nb[i]) {
        flat_ids.push_back(static_cast<int>(dir) * static_cast<int>(n) + j);
      }
      Expr logits = gather_cols(sq, self_ids) + gather_cols(sk, flat_ids);
      Expr alpha = softmax_cols(transpose(leaky_relu(logits)));   // k x 1
      Expr values = gather_cols(U_all, flat_ids);                 // hidden x k
      cols.push_back(values * alpha);
    }
    Expr agg = hcat(cols);
    mixed = mixed.valid() ? mixed + agg : agg;
  }
  if (p.heads.size() > 1) {
    mixed = scalar_mul(1.0 / static_cast<double>(p.heads.size()), mixed);
  }
  Expr out = relu(add_colvec(mixed, p.b));
  if (p.highway) out = highway_mix(h, out, p.Wg, p.bg);
  return out;
}

namespace {

std::string layer_prefix(const EncoderConfig& cfg, int layer) {
  // GGNN ties parameters across layers.
  if (cfg.kind == EncoderKind::GGNN) return "enc.ggnn";
  return "enc." + to_string(cfg.kind) + ".l" + std::to_string(layer);
}

}  // namespace

void create_encoder_params(nn::ParamStore& ps, const EncoderConfig& cfg,
                           long src_vocab, Rng& rng) {
  cfg.validate();
  ps.add("enc.embed", cfg.hidden, src_vocab, nn::Init::Glorot, rng);
  const int n_layers = cfg.kind == EncoderKind::GGNN ? 1 : cfg.resolved_layers();
  for (int l = 0; l < n_layers; ++l) {
    const std::string prefix = layer_prefix(cfg, l);
    switch (cfg.kind) {
      case EncoderKind::GGNN:
        GgnnLayerParams::create(ps, prefix, cfg.hidden, rng);
        break;
      case EncoderKind::GCN:
        GcnLayerParams::create(ps, prefix, cfg.hidden, cfg.highway, rng);
        break;
      case EncoderKind::GAT:
        GatLayerParams::create(ps, prefix, cfg.hidden, cfg.attention_heads,
                               cfg.highway, rng);
        break;
    }
  }
}

EncodeResult encode(Tape& t, nn::ParamStore& ps, const EncoderConfig& cfg,
                    const std::vector<int>& token_ids, const Neighborhood& nb,
                    const DirMats& dm) {
  cfg.validate();
  if (token_ids.size() != nb.size()) {
    throw nn::NnError(nn::NnErrorKind::ShapeMismatch,
                      "encode: token/neighborhood size mismatch");
  }
  Expr embed = t.leaf(ps.get("enc.embed"));
  Expr h = gather_cols(embed, token_ids);
  for (int l = 0; l < cfg.resolved_layers(); ++l) {
    const std::string prefix = layer_prefix(cfg, l);
    switch (cfg.kind) {
      case EncoderKind::GGNN:
        h = ggnn_layer(h, dm, GgnnLayerParams::bind(t, ps, prefix));
        break;
      case EncoderKind::GCN:
        h = gcn_layer(h, dm, GcnLayerParams::bind(t, ps, prefix, cfg.highway));
        break;
      case EncoderKind::GAT:
        h = gat_layer(h, nb, GatLayerParams::bind(t, ps, prefix,
                                                  cfg.attention_heads, cfg.highway));
        break;
    }
  }
  return {h, mean_cols(h)};
}

}  // namespace drs2text
