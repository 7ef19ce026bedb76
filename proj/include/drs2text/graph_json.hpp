#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drs2text/eval.hpp"
#include "drs2text/tfa.hpp"
#include "json.hpp"

namespace drs2text {

using ordered_json = nlohmann::ordered_json;

// Stable field order: {nodes: [{id, token, kind}], edges: [{src, dst, dir}],
// alignment: {drg index -> levi index}}.
ordered_json levi_to_json(const LeviGraph& g);
LeviGraph levi_from_json(const ordered_json& j, const std::string& source_id = "");

ordered_json voice_to_json(const VoiceType& v);
VoiceType voice_from_json(const ordered_json& j);

// One pipeline row: a graph plus everything needed to augment, train on and
// evaluate it.
struct PipelineRow {
  std::string id;
  LeviGraph graph;
  std::string reference;
  VoiceType voice;
  bool ambiguous_voice = false;
  LeviVoiceInfo info;  // invalid() when voice is not transitive
  std::optional<std::string> strategy;
  std::optional<int> topic;
  bool flipped = false;
  std::optional<std::string> skipped;
};

ordered_json row_to_json(const PipelineRow& row);
PipelineRow row_from_json(const ordered_json& j);

std::vector<PipelineRow> read_rows_jsonl(const std::string& path);
void write_rows_jsonl(const std::string& path, const std::vector<PipelineRow>& rows);

ordered_json record_to_json(const GenerationRecord& rec);
GenerationRecord record_from_json(const ordered_json& j);

std::vector<GenerationRecord> read_records_jsonl(const std::string& path);
void write_records_jsonl(const std::string& path,
                         const std::vector<GenerationRecord>& records);

}  // namespace drs2text
