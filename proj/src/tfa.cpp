#include "drs2text/tfa.hpp"

#include <algorithm>
#include <map>

#include "drs2text/rng.hpp"

namespace drs2text {

const std::vector<std::string>& voice_pair_roles() {
  static const std::vector<std::string> kRoles = {
      "Patient", "Theme", "Experiencer", "Result", "Source"};
  return kRoles;
}

bool is_voice_pair_role(const std::string& role) {
  const auto& roles = voice_pair_roles();
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

std::string to_string(VoiceClass v) {
  switch (v) {
    case VoiceClass::Active: return "active";
    case VoiceClass::Passive: return "passive";
    case VoiceClass::NotTransitive: return "not_transitive";
  }
  return "not_transitive";
}

std::optional<VoiceClass> voice_class_from_string(const std::string& s) {
  if (s == "active") return VoiceClass::Active;
  if (s == "passive") return VoiceClass::Passive;
  if (s == "not_transitive") return VoiceClass::NotTransitive;
  return std::nullopt;
}

std::string to_string(TfaStrategy s) {
  switch (s) {
    case TfaStrategy::CTC: return "ctc";
    case TfaStrategy::BTC: return "btc";
    case TfaStrategy::RTR: return "rtr";
  }
  return "ctc";
}

std::optional<TfaStrategy> tfa_strategy_from_string(const std::string& s) {
  if (s == "ctc") return TfaStrategy::CTC;
  if (s == "btc") return TfaStrategy::BTC;
  if (s == "rtr") return TfaStrategy::RTR;
  return std::nullopt;
}

std::optional<VoiceAnalysis> analyze_voice(const Drg& g) {
  // Main verb: first verb concept with an Agent slot; later verbs ignored.
  int verb = -1, agent_edge = -1;
  for (int v = 0; v < static_cast<int>(g.nodes.size()) && verb < 0; ++v) {
    if (g.nodes[v].kind != DrgNodeKind::Concept || g.nodes[v].pos != 'v') continue;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      if (g.edges[e].src == v && g.edges[e].label == "Agent") {
        verb = v;
        agent_edge = e;
        break;
      }
    }
  }
  if (verb < 0) return std::nullopt;

  int other_edge = -1;
  int pair_count = 0;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].src != verb || !is_voice_pair_role(g.edges[e].label)) continue;
    ++pair_count;
    if (other_edge < 0) other_edge = e;
  }
  if (pair_count != 1) return std::nullopt;

  const int a = g.edges[agent_edge].offset;
  const int o = g.edges[other_edge].offset;
  if (a == 0 || o == 0) return std::nullopt;  // inline-constant argument
  if ((a < 0) == (o < 0)) {
    throw TfaError(TfaErrorKind::AmbiguousVoice,
                   "role offsets share sign on verb '" + g.nodes[verb].token + "'");
  }

  VoiceAnalysis va;
  va.verb_node = verb;
  va.agent_edge = agent_edge;
  va.other_edge = other_edge;
  va.agent_target = g.edges[agent_edge].dst;
  va.other_target = g.edges[other_edge].dst;
  va.voice.pair_role = g.edges[other_edge].label;
  if (a < 0) {
    va.voice.voice = VoiceClass::Active;
    va.subject_node = va.agent_target;
    va.object_node = va.other_target;
  } else {
    va.voice.voice = VoiceClass::Passive;
    va.subject_node = va.other_target;
    va.object_node = va.agent_target;
  }
  return va;
}

VoiceType detect_voice(const Drg& g) {
  auto va = analyze_voice(g);
  return va ? va->voice : VoiceType{};
}

LeviVoiceInfo to_levi_voice(const VoiceAnalysis& va, const LeviGraph& levi) {
  LeviVoiceInfo info;
  info.verb = levi.alignment[va.verb_node];
  info.subject = levi.alignment[va.subject_node];
  info.object = levi.alignment[va.object_node];
  info.agent_label = levi.edge_label_node[va.agent_edge];
  info.other_label = levi.edge_label_node[va.other_edge];
  return info;
}

TfaSpec make_tfa_spec(TfaStrategy s, const VoiceType& voice,
                      const LeviVoiceInfo& info, bool flipped) {
  if (voice.voice == VoiceClass::NotTransitive || !info.valid()) {
    throw TfaError(TfaErrorKind::StrategyInapplicable,
                   "graph has no transitive clause to mark");
  }
  TfaSpec spec;
  spec.strategy = s;
  if (s == TfaStrategy::RTR) {
    const bool subject_is_agent = (voice.voice == VoiceClass::Active) != flipped;
    spec.topic_node = subject_is_agent ? info.agent_label : info.other_label;
  } else {
    spec.topic_node = flipped ? info.object : info.subject;
  }
  return spec;
}

namespace {

bool in_range(const LeviGraph& g, int node) {
  return node >= 0 && node < static_cast<int>(g.nodes.size());
}

// The membership box of a concept: Box --Default--> member-label --Default--> concept.
int find_member_box(const LeviGraph& g, int arg) {
  for (const auto& e1 : g.edges) {
    if (e1.dir != DirClass::Default || e1.dst != arg) continue;
    const int label = e1.src;
    if (g.nodes[label].kind != LeviNodeKind::Label ||
        g.nodes[label].token != kMemberLabel)
      continue;
    for (const auto& e2 : g.edges) {
      if (e2.dir == DirClass::Default && e2.dst == label) return e2.src;
    }
  }
  return -1;
}

// The verb node a role-label hangs off: verb --Default--> role-label.
int find_role_owner(const LeviGraph& g, int role_label) {
  for (const auto& e : g.edges) {
    if (e.dir == DirClass::Default && e.dst == role_label &&
        g.nodes[e.src].kind == LeviNodeKind::Original)
      return e.src;
  }
  return -1;
}

bool is_role_label(const LeviGraph& g, int node) {
  return in_range(g, node) && g.nodes[node].kind == LeviNodeKind::Label &&
         (g.nodes[node].token == "Agent" || is_voice_pair_role(g.nodes[node].token));
}

// The other role label of the same verb: Agent pairs with one of the five
// subject roles and vice versa.
int find_role_partner(const LeviGraph& g, int role_label) {
  const int verb = find_role_owner(g, role_label);
  if (verb < 0) return -1;
  const bool want_agent = g.nodes[role_label].token != "Agent";
  for (const auto& e : g.edges) {
    if (e.dir != DirClass::Default || e.src != verb || e.dst == role_label) continue;
    if (!in_range(g, e.dst) || g.nodes[e.dst].kind != LeviNodeKind::Label) continue;
    const std::string& tok = g.nodes[e.dst].token;
    if (want_agent ? (tok == "Agent") : is_voice_pair_role(tok)) return e.dst;
  }
  return -1;
}

// The argument concept a role label points at.
int find_role_target(const LeviGraph& g, int role_label) {
  for (const auto& e : g.edges) {
    if (e.dir == DirClass::Default && e.src == role_label) return e.dst;
  }
  return -1;
}

// The concept filling the other role of the clause `concept` takes part in.
int find_other_argument(const LeviGraph& g, int arg) {
  for (int label = 0; label < static_cast<int>(g.nodes.size()); ++label) {
    if (!is_role_label(g, label)) continue;
    if (find_role_target(g, label) != arg) continue;
    const int partner = find_role_partner(g, label);
    if (partner < 0) continue;
    return find_role_target(g, partner);
  }
  return -1;
}

void append_default_with_mirror(LeviGraph& g, int src, int dst) {
  g.edges.push_back({src, dst, DirClass::Default});
  g.edges.push_back({dst, src, DirClass::Reverse});
}

}  // namespace

LeviGraph apply_tfa(const LeviGraph& g, const TfaSpec& spec) {
  LeviGraph out = g;
  if (!in_range(g, spec.topic_node)) {
    throw TfaError(TfaErrorKind::TopicNotFound, "topic node out of range");
  }

  switch (spec.strategy) {
    case TfaStrategy::CTC: {
      if (g.nodes[spec.topic_node].kind != LeviNodeKind::Original) {
        throw TfaError(TfaErrorKind::TopicNotFound, "topic must be a concept node");
      }
      const int topic = static_cast<int>(out.nodes.size());
      out.nodes.push_back({kTopicLabel, LeviNodeKind::Label});
      append_default_with_mirror(out, spec.topic_node, topic);
      append_default_with_mirror(out, topic, spec.topic_node);
      out.edges.push_back({topic, topic, DirClass::SelfLoop});
      break;
    }
    case TfaStrategy::BTC: {
      if (g.nodes[spec.topic_node].kind != LeviNodeKind::Original) {
        throw TfaError(TfaErrorKind::TopicNotFound, "topic must be a concept node");
      }
      const int box = find_member_box(g, spec.topic_node);
      if (box < 0) {
        throw TfaError(TfaErrorKind::TopicNotFound,
                       "topic concept is not a member of any box");
      }
      const int topic = static_cast<int>(out.nodes.size());
      out.nodes.push_back({kTopicLabel, LeviNodeKind::Label});
      append_default_with_mirror(out, box, topic);
      append_default_with_mirror(out, topic, spec.topic_node);
      out.edges.push_back({topic, topic, DirClass::SelfLoop});
      break;
    }
    case TfaStrategy::RTR: {
      if (!is_role_label(g, spec.topic_node)) {
        throw TfaError(TfaErrorKind::TopicNotFound,
                       "topic must be a VerbNet role label node");
      }
      const int partner = find_role_partner(g, spec.topic_node);
      if (partner < 0) {
        throw TfaError(TfaErrorKind::StrategyInapplicable,
                       "role has no Agent/non-Agent partner");
      }
      append_default_with_mirror(out, spec.topic_node, partner);
      break;
    }
  }
  return out;
}

namespace {

// Rewrites endpoint `from` to `to` on every Default/Reverse edge touching
// `pivot`, in place, so that a double flip restores the byte-exact edge list.
void rewire(LeviGraph& g, int pivot, int from, int to) {
  for (auto& e : g.edges) {
    if (e.dir == DirClass::SelfLoop) continue;
    if (e.src == pivot && e.dst == from) e.dst = to;
    else if (e.dst == pivot && e.src == from) e.src = to;
  }
}

int find_topic_label(const LeviGraph& g, int attached_concept) {
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    if (g.nodes[v].kind != LeviNodeKind::Label || g.nodes[v].token != kTopicLabel)
      continue;
    for (const auto& e : g.edges) {
      if (e.dir == DirClass::Default && e.src == v && e.dst == attached_concept)
        return v;
    }
  }
  return -1;
}

}  // namespace

std::pair<LeviGraph, TfaSpec> flip_voice(const LeviGraph& g, const TfaSpec& spec) {
  LeviGraph out = g;
  TfaSpec flipped = spec;

  if (spec.strategy == TfaStrategy::RTR) {
    if (!is_role_label(g, spec.topic_node)) {
      throw TfaError(TfaErrorKind::StrategyInapplicable,
                     "spec does not match an applied role-role augmentation");
    }
    // The role-role edge is the only label-to-label Default edge.
    int other = -1;
    for (auto& e : out.edges) {
      if (e.dir == DirClass::Default && e.src == spec.topic_node &&
          is_role_label(out, e.dst)) {
        other = e.dst;
        std::swap(e.src, e.dst);
        break;
      }
    }
    if (other < 0) {
      throw TfaError(TfaErrorKind::StrategyInapplicable,
                     "no role-role edge found to flip");
    }
    for (auto& e : out.edges) {
      if (e.dir == DirClass::Reverse && e.src == other && e.dst == spec.topic_node) {
        std::swap(e.src, e.dst);
        break;
      }
    }
    flipped.topic_node = other;
    return {std::move(out), flipped};
  }

  const int arg = spec.topic_node;
  const int topic = find_topic_label(g, arg);
  if (topic < 0) {
    throw TfaError(TfaErrorKind::StrategyInapplicable,
                   "graph carries no TOPIC attachment on the spec'd concept");
  }
  const int other = find_other_argument(g, arg);
  if (other < 0) {
    throw TfaError(TfaErrorKind::StrategyInapplicable,
                   "no opposite argument to move the TOPIC to");
  }
  rewire(out, topic, arg, other);
  if (spec.strategy == TfaStrategy::BTC) {
    const int old_box = find_member_box(g, arg);
    const int new_box = find_member_box(g, other);
    if (old_box != new_box && old_box >= 0 && new_box >= 0) {
      rewire(out, topic, old_box, new_box);
    }
  }
  flipped.topic_node = other;
  return {std::move(out), flipped};
}

ChallengeSet build_challenge_set(const std::vector<ChallengeItem>& candidates,
                                 uint64_t seed, bool stratify) {
  ChallengeSet result;

  std::vector<int> passives;
  std::map<std::string, std::vector<int>> actives_by_role;
  std::map<std::string, int> passive_by_role;
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    const ChallengeItem& item = candidates[i];
    std::string ref = item.reference;
    while (!ref.empty() && (ref.back() == ' ' || ref.back() == '\n')) ref.pop_back();
    if (!ref.empty() && ref.back() == '?') continue;  // interrogatives excluded
    if (item.voice.voice == VoiceClass::Passive) {
      passives.push_back(i);
      ++passive_by_role[item.voice.pair_role];
    } else if (item.voice.voice == VoiceClass::Active) {
      actives_by_role[item.voice.pair_role].push_back(i);
    }
  }

  if (passives.empty()) {
    result.warnings.push_back("no passive instances; challenge set is empty");
    return result;
  }

  Rng rng(seed);
  std::vector<int> chosen;
  std::vector<char> taken(candidates.size(), 0);
  int deficit = 0;

  if (stratify) {
    for (const auto& role : voice_pair_roles()) {
      const int need = passive_by_role.count(role) ? passive_by_role[role] : 0;
      if (need == 0) continue;
      auto pool = actives_by_role.count(role) ? actives_by_role[role]
                                              : std::vector<int>{};
      rng.shuffle(pool);
      const int take = std::min<int>(need, static_cast<int>(pool.size()));
      for (int k = 0; k < take; ++k) {
        chosen.push_back(pool[k]);
        taken[pool[k]] = 1;
      }
      if (take < need) {
        deficit += need - take;
        result.warnings.push_back("insufficient active instances of type " +
                                  role + " x Agent; short by " +
                                  std::to_string(need - take));
      }
    }
  } else {
    deficit = static_cast<int>(passives.size());
  }

  if (deficit > 0) {
    std::vector<int> rest;
    for (const auto& [role, pool] : actives_by_role) {
      for (int idx : pool) {
        if (!taken[idx]) rest.push_back(idx);
      }
    }
    std::sort(rest.begin(), rest.end());
    rng.shuffle(rest);
    const int take = std::min<int>(deficit, static_cast<int>(rest.size()));
    for (int k = 0; k < take; ++k) {
      chosen.push_back(rest[k]);
      taken[rest[k]] = 1;
    }
    if (take < deficit) {
      result.warnings.push_back("active pool exhausted; challenge set is unbalanced by " +
                                std::to_string(deficit - take));
    }
  }

  // Emit passives then actives, both in corpus order.
  for (int idx : passives) result.items.push_back(candidates[idx]);
  std::sort(chosen.begin(), chosen.end());
  for (int idx : chosen) result.items.push_back(candidates[idx]);
  return result;
}

}  // namespace drs2text
