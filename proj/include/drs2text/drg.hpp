#pragma once

#include <string>
#include <vector>

#include "drs2text/sbn.hpp"

namespace drs2text {

enum class DrgNodeKind { Concept, Constant, Box };

struct DrgNode {
  DrgNodeKind kind = DrgNodeKind::Constant;
  std::string token;  // synset text, constant content, or "Box"
  char pos = 0;       // concept part of speech
  int line = -1;      // owning SBN line for head nodes
  int box_id = -1;    // for Box nodes

  bool operator==(const DrgNode&) const = default;
};

struct DrgEdge {
  int src = -1;
  std::string label;
  int dst = -1;
  int offset = 0;  // relative-index metadata; 0 for constant/member/relation edges

  bool operator==(const DrgEdge&) const = default;
};

// Directed labeled meaning graph: concepts, constants and discourse boxes as
// nodes; roles, operators, box membership and discourse relations as edge
// labels.
struct Drg {
  std::vector<DrgNode> nodes;
  std::vector<DrgEdge> edges;
  std::string source_id;
};

inline const std::string kMemberLabel = "member";
inline const std::string kBoxToken = "Box";

// Node order: per line its head node followed by that line's inline-constant
// nodes, then box nodes by id. Role slots produce (owner -> target) edges in
// slot order, then relation edges box-to-box, then membership edges.
Drg build_drg(const SbnDocument& doc);

enum class LeviNodeKind { Original, Label };
enum class DirClass { Default, Reverse, SelfLoop };

struct LeviNode {
  std::string token;
  LeviNodeKind kind = LeviNodeKind::Original;
  bool operator==(const LeviNode&) const = default;
};

struct LeviEdge {
  int src = -1;
  int dst = -1;
  DirClass dir = DirClass::Default;
  bool operator==(const LeviEdge&) const = default;
};

// Unlabeled graph in which every labeled edge has been replaced by a fresh
// label node and two Default edges; every Default edge has a Reverse mirror
// and every node a SelfLoop.
struct LeviGraph {
  std::vector<LeviNode> nodes;
  std::vector<LeviEdge> edges;
  std::vector<int> alignment;        // Drg node index -> Levi node index
  std::vector<int> edge_label_node;  // Drg edge index -> label node index (empty after JSON load)
  std::string source_id;

  std::vector<int> default_out(int node) const;
  std::vector<int> default_in(int node) const;
  int count(DirClass dir) const;
};

// Multiword constants split on '~'/'_' into one node per token, chained left
// to right by plain Default edges.
LeviGraph to_levi(const Drg& g);

std::vector<std::string> split_constant_token(const std::string& token);

// Node tokens in graph order: originals in introduction order, then label
// nodes in edge-creation order.
std::vector<std::string> linearize(const LeviGraph& g);

}  // namespace drs2text
