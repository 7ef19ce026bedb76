#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drs2text/drg.hpp"

namespace drs2text {

enum class VoiceClass { Active, Passive, NotTransitive };

// Voice of a transitive clause together with its subject-role pair type
// (Patient, Theme, Experiencer, Result or Source, each paired with Agent).
struct VoiceType {
  VoiceClass voice = VoiceClass::NotTransitive;
  std::string pair_role;  // the non-Agent role; empty when not transitive
  bool operator==(const VoiceType&) const = default;
};

const std::vector<std::string>& voice_pair_roles();
bool is_voice_pair_role(const std::string& role);

std::string to_string(VoiceClass v);
std::optional<VoiceClass> voice_class_from_string(const std::string& s);

enum class TfaErrorKind {
  AmbiguousVoice,
  TopicNotFound,
  StrategyInapplicable,
};

class TfaError : public std::runtime_error {
 public:
  TfaError(TfaErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  TfaErrorKind kind() const { return kind_; }
 private:
  TfaErrorKind kind_;
};

// Main verb = first verb concept carrying an Agent role. Voice comes from the
// introduction order of the two role arguments (relative-offset signs), not
// from edge direction.
VoiceType detect_voice(const Drg& g);

// Node-level detail behind detect_voice; nullopt when not transitive.
struct VoiceAnalysis {
  VoiceType voice;
  int verb_node = -1;  // Drg indices
  int agent_edge = -1;
  int other_edge = -1;
  int agent_target = -1;
  int other_target = -1;
  int subject_node = -1;  // surface subject concept
  int object_node = -1;
};
std::optional<VoiceAnalysis> analyze_voice(const Drg& g);

// Same analysis mapped onto Levi node indices.
struct LeviVoiceInfo {
  int verb = -1;
  int subject = -1;
  int object = -1;
  int agent_label = -1;
  int other_label = -1;
  bool valid() const { return verb >= 0; }
  bool operator==(const LeviVoiceInfo&) const = default;
};
LeviVoiceInfo to_levi_voice(const VoiceAnalysis& va, const LeviGraph& levi);

enum class TfaStrategy { CTC, BTC, RTR };

std::string to_string(TfaStrategy s);
std::optional<TfaStrategy> tfa_strategy_from_string(const std::string& s);

struct TfaSpec {
  TfaStrategy strategy = TfaStrategy::CTC;
  int topic_node = -1;  // Levi concept (CTC/BTC) or subject-role label node (RTR)
  bool operator==(const TfaSpec&) const = default;
};

inline const std::string kTopicLabel = "TOPIC";

// Spec for a graph with known voice; `flipped` marks the other argument.
TfaSpec make_tfa_spec(TfaStrategy s, const VoiceType& voice,
                      const LeviVoiceInfo& info, bool flipped = false);

// Functional update: the input graph is untouched. CTC adds a TOPIC label
// node looping on the topic concept, BTC routes Box -> TOPIC -> concept, RTR
// adds a subject-role -> object-role edge. Added Default edges get Reverse
// mirrors; added nodes get SelfLoops.
LeviGraph apply_tfa(const LeviGraph& g, const TfaSpec& spec);

// Moves the augmentation to the other argument (CTC/BTC) or reverses the
// role-role edge (RTR). Applying it twice restores the input graph exactly.
std::pair<LeviGraph, TfaSpec> flip_voice(const LeviGraph& g, const TfaSpec& spec);

struct ChallengeItem {
  std::string source_id;
  LeviGraph graph;  // before TFA augmentation
  std::string reference;
  VoiceType voice;
  LeviVoiceInfo info;
};

struct ChallengeSet {
  std::vector<ChallengeItem> items;
  std::vector<std::string> warnings;
};

// All passive candidates plus an equal-count draw of actives, stratified by
// pair type unless disabled; interrogatives (reference ending in '?') and
// non-transitive candidates are dropped first. Deterministic under `seed`.
ChallengeSet build_challenge_set(const std::vector<ChallengeItem>& candidates,
                                 uint64_t seed, bool stratify = true);

}  // namespace drs2text
