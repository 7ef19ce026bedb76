#include "drs2text/drg.hpp"

#include <cassert>

namespace drs2text {

Drg build_drg(const SbnDocument& doc) {
  Drg g;
  g.source_id = doc.source_id;

  const int n_lines = static_cast<int>(doc.lines.size());
  std::vector<int> head_node(n_lines, -1);  // line -> node (box node for relation lines)

  // Heads and inline constants, in introduction order.
  struct ConstRef { int line; const SbnSlot* slot; int node; };
  std::vector<ConstRef> const_nodes;
  for (int i = 0; i < n_lines; ++i) {
    const SbnLine& line = doc.lines[i];
    if (line.is_relation()) continue;
    DrgNode node;
    node.kind = line.head.kind == AtomKind::Synset ? DrgNodeKind::Concept
                                                   : DrgNodeKind::Constant;
    node.token = line.head.text;
    node.pos = line.head.pos;
    node.line = i;
    head_node[i] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(std::move(node));
    for (const auto& slot : line.slots) {
      if (slot.target.is_index) continue;
      DrgNode cnode;
      cnode.kind = DrgNodeKind::Constant;
      cnode.token = slot.target.constant.text;
      cnode.line = i;
      const_nodes.push_back({i, &slot, static_cast<int>(g.nodes.size())});
      g.nodes.push_back(std::move(cnode));
    }
  }

  // One box node per box, after the textual material.
  const int n_boxes = doc.box_count();
  std::vector<int> box_node(n_boxes, -1);
  for (int b = 0; b < n_boxes; ++b) {
    DrgNode node;
    node.kind = DrgNodeKind::Box;
    node.token = kBoxToken;
    node.box_id = b;
    box_node[b] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(std::move(node));
  }
  for (int i = 0; i < n_lines; ++i) {
    if (doc.lines[i].is_relation()) head_node[i] = box_node[doc.lines[i].box_id];
  }

  // Role edges in line/slot order; offsets kept as metadata.
  size_t const_cursor = 0;
  for (int i = 0; i < n_lines; ++i) {
    const SbnLine& line = doc.lines[i];
    if (line.is_relation()) continue;
    for (const auto& slot : line.slots) {
      DrgEdge e;
      e.src = head_node[i];
      e.label = slot.label;
      if (slot.target.is_index) {
        e.dst = head_node[i + slot.target.offset];
        e.offset = slot.target.offset;
      } else {
        assert(const_cursor < const_nodes.size() &&
               const_nodes[const_cursor].slot == &slot);
        e.dst = const_nodes[const_cursor].node;
        ++const_cursor;
      }
      g.edges.push_back(std::move(e));
    }
  }

  // Discourse relations: edge from the box the relation appears in to the box
  // it opens.
  for (int i = 0; i < n_lines; ++i) {
    const SbnLine& line = doc.lines[i];
    if (!line.is_relation()) continue;
    DrgEdge e;
    e.src = box_node[line.box_id - 1];
    e.label = line.head.text;
    e.dst = box_node[line.box_id];
    g.edges.push_back(std::move(e));
  }

  // Membership: each box points at the heads introduced inside it.
  for (int b = 0; b < n_boxes; ++b) {
    for (int i = 0; i < n_lines; ++i) {
      const SbnLine& line = doc.lines[i];
      if (line.is_relation() || line.box_id != b) continue;
      DrgEdge e;
      e.src = box_node[b];
      e.label = kMemberLabel;
      e.dst = head_node[i];
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

std::vector<std::string> split_constant_token(const std::string& token) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : token) {
    if (c == '~' || c == '_') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  if (parts.empty()) parts.push_back(token);
  return parts;
}

LeviGraph to_levi(const Drg& g) {
  LeviGraph levi;
  levi.source_id = g.source_id;
  levi.alignment.resize(g.nodes.size(), -1);

  std::vector<LeviEdge> chain_edges;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const DrgNode& node = g.nodes[i];
    levi.alignment[i] = static_cast<int>(levi.nodes.size());
    if (node.kind == DrgNodeKind::Constant) {
      const auto parts = split_constant_token(node.token);
      for (size_t p = 0; p < parts.size(); ++p) {
        if (p > 0) {
          const int prev = static_cast<int>(levi.nodes.size()) - 1;
          chain_edges.push_back({prev, prev + 1, DirClass::Default});
        }
        levi.nodes.push_back({parts[p], LeviNodeKind::Original});
      }
    } else {
      levi.nodes.push_back({node.token, LeviNodeKind::Original});
    }
  }

  levi.edges = std::move(chain_edges);
  levi.edge_label_node.resize(g.edges.size(), -1);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const DrgEdge& edge = g.edges[e];
    const int label = static_cast<int>(levi.nodes.size());
    levi.edge_label_node[e] = label;
    levi.nodes.push_back({edge.label, LeviNodeKind::Label});
    levi.edges.push_back({levi.alignment[edge.src], label, DirClass::Default});
    levi.edges.push_back({label, levi.alignment[edge.dst], DirClass::Default});
  }

  const size_t n_default = levi.edges.size();
  for (size_t k = 0; k < n_default; ++k) {
    levi.edges.push_back({levi.edges[k].dst, levi.edges[k].src, DirClass::Reverse});
  }
  for (int v = 0; v < static_cast<int>(levi.nodes.size()); ++v) {
    levi.edges.push_back({v, v, DirClass::SelfLoop});
  }
  return levi;
}

std::vector<int> LeviGraph::default_out(int node) const {
  std::vector<int> out;
  for (const auto& e : edges) {
    if (e.dir == DirClass::Default && e.src == node) out.push_back(e.dst);
  }
  return out;
}

std::vector<int> LeviGraph::default_in(int node) const {
  std::vector<int> in;
  for (const auto& e : edges) {
    if (e.dir == DirClass::Default && e.dst == node) in.push_back(e.src);
  }
  return in;
}

int LeviGraph::count(DirClass dir) const {
  int n = 0;
  for (const auto& e : edges) n += (e.dir == dir);
  return n;
}

std::vector<std::string> linearize(const LeviGraph& g) {
  std::vector<std::string> tokens;
  tokens.reserve(g.nodes.size());
  for (const auto& node : g.nodes) tokens.push_back(node.token);
  return tokens;
}

}  // namespace drs2text
