#include "drs2text/graph_json.hpp"

#include <fstream>
#include <sstream>

namespace drs2text {

namespace {

const char* dir_name(DirClass d) {
  switch (d) {
    case DirClass::Default: return "default";
    case DirClass::Reverse: return "reverse";
    case DirClass::SelfLoop: return "self";
  }
  return "default";
}

DirClass dir_from_name(const std::string& s) {
  if (s == "default") return DirClass::Default;
  if (s == "reverse") return DirClass::Reverse;
  if (s == "self") return DirClass::SelfLoop;
  throw std::runtime_error("unknown edge direction '" + s + "'");
}

}  // namespace

ordered_json levi_to_json(const LeviGraph& g) {
  ordered_json j;
  j["nodes"] = ordered_json::array();
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    ordered_json n;
    n["id"] = i;
    n["token"] = g.nodes[i].token;
    n["kind"] = g.nodes[i].kind == LeviNodeKind::Original ? "original" : "label";
    j["nodes"].push_back(n);
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : g.edges) {
    ordered_json ej;
    ej["src"] = e.src;
    ej["dst"] = e.dst;
    ej["dir"] = dir_name(e.dir);
    j["edges"].push_back(ej);
  }
  ordered_json align = ordered_json::object();
  for (size_t i = 0; i < g.alignment.size(); ++i) {
    align[std::to_string(i)] = g.alignment[i];
  }
  j["alignment"] = align;
  return j;
}

LeviGraph levi_from_json(const ordered_json& j, const std::string& source_id) {
  LeviGraph g;
  g.source_id = source_id;
  for (const auto& n : j.at("nodes")) {
    LeviNode node;
    node.token = n.at("token").get<std::string>();
    node.kind = n.at("kind").get<std::string>() == "label" ? LeviNodeKind::Label
                                                           : LeviNodeKind::Original;
    g.nodes.push_back(std::move(node));
  }
  for (const auto& e : j.at("edges")) {
    g.edges.push_back({e.at("src").get<int>(), e.at("dst").get<int>(),
                       dir_from_name(e.at("dir").get<std::string>())});
  }
  if (j.contains("alignment")) {
    g.alignment.resize(j.at("alignment").size(), -1);
    for (const auto& [key, value] : j.at("alignment").items()) {
      const size_t idx = std::stoul(key);
      if (idx >= g.alignment.size()) g.alignment.resize(idx + 1, -1);
      g.alignment[idx] = value.get<int>();
    }
  }
  return g;
}

ordered_json voice_to_json(const VoiceType& v) {
  ordered_json j;
  j["voice"] = to_string(v.voice);
  j["pair"] = v.pair_role;
  return j;
}

VoiceType voice_from_json(const ordered_json& j) {
  VoiceType v;
  v.voice = voice_class_from_string(j.at("voice").get<std::string>())
                .value_or(VoiceClass::NotTransitive);
  v.pair_role = j.at("pair").get<std::string>();
  return v;
}

ordered_json row_to_json(const PipelineRow& row) {
  ordered_json j;
  j["id"] = row.id;
  j["graph"] = levi_to_json(row.graph);
  j["reference"] = row.reference;
  j["voice"] = voice_to_json(row.voice);
  j["ambiguous_voice"] = row.ambiguous_voice;
  if (row.info.valid()) {
    ordered_json info;
    info["verb"] = row.info.verb;
    info["subject"] = row.info.subject;
    info["object"] = row.info.object;
    info["agent_label"] = row.info.agent_label;
    info["other_label"] = row.info.other_label;
    j["voice_info"] = info;
  } else {
    j["voice_info"] = nullptr;
  }
  j["strategy"] = row.strategy ? ordered_json(*row.strategy) : ordered_json(nullptr);
  j["topic"] = row.topic ? ordered_json(*row.topic) : ordered_json(nullptr);
  j["flipped"] = row.flipped;
  if (row.skipped) j["skipped"] = *row.skipped;
  return j;
}

PipelineRow row_from_json(const ordered_json& j) {
  PipelineRow row;
  row.id = j.at("id").get<std::string>();
  row.graph = levi_from_json(j.at("graph"), row.id);
  row.reference = j.at("reference").get<std::string>();
  row.voice = voice_from_json(j.at("voice"));
  row.ambiguous_voice = j.value("ambiguous_voice", false);
  if (j.contains("voice_info") && !j.at("voice_info").is_null()) {
    const auto& info = j.at("voice_info");
    row.info.verb = info.at("verb").get<int>();
    row.info.subject = info.at("subject").get<int>();
    row.info.object = info.at("object").get<int>();
    row.info.agent_label = info.at("agent_label").get<int>();
    row.info.other_label = info.at("other_label").get<int>();
  }
  if (j.contains("strategy") && !j.at("strategy").is_null()) {
    row.strategy = j.at("strategy").get<std::string>();
  }
  if (j.contains("topic") && !j.at("topic").is_null()) {
    row.topic = j.at("topic").get<int>();
  }
  row.flipped = j.value("flipped", false);
  if (j.contains("skipped") && !j.at("skipped").is_null()) {
    row.skipped = j.at("skipped").get<std::string>();
  }
  return row;
}

std::vector<PipelineRow> read_rows_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PipelineRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(row_from_json(ordered_json::parse(line)));
  }
  return rows;
}

void write_rows_jsonl(const std::string& path, const std::vector<PipelineRow>& rows) {
  std::ofstream out(path);
  for (const auto& row : rows) out << row_to_json(row).dump() << '\n';
}

ordered_json record_to_json(const GenerationRecord& rec) {
  ordered_json j;
  j["source_id"] = rec.source_id;
  j["hypothesis"] = rec.hypothesis;
  j["reference"] = rec.reference;
  j["voice_expected"] = voice_to_json(rec.voice_expected);
  j["strategy"] = rec.strategy;
  j["encoder"] = rec.encoder;
  j["neighborhood"] = rec.neighborhood;
  j["flipped"] = rec.flipped;
  return j;
}

GenerationRecord record_from_json(const ordered_json& j) {
  GenerationRecord rec;
  rec.source_id = j.at("source_id").get<std::string>();
  rec.hypothesis = j.at("hypothesis").get<std::string>();
  rec.reference = j.at("reference").get<std::string>();
  rec.voice_expected = voice_from_json(j.at("voice_expected"));
  rec.strategy = j.at("strategy").get<std::string>();
  rec.encoder = j.value("encoder", std::string());
  rec.neighborhood = j.value("neighborhood", std::string());
  rec.flipped = j.value("flipped", false);
  return rec;
}

std::vector<GenerationRecord> read_records_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<GenerationRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(ordered_json::parse(line)));
  }
  return records;
}

void write_records_jsonl(const std::string& path,
                         const std::vector<GenerationRecord>& records) {
  std::ofstream out(path);
  for (const auto& rec : records) out << record_to_json(rec).dump() << '\n';
}

}  // namespace drs2text
