// End-to-end CLI run over the bundled fixture corpus:
// convert -> augment -> train -> generate -> evaluate, plus config-snapshot
// replay. Small model; the whole run stays well under the 10-minute budget.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#ifndef DRS2TEXT_SOURCE_DIR
#define DRS2TEXT_SOURCE_DIR "."
#endif
#ifndef DRS2TEXT_CLI_PATH
#define DRS2TEXT_CLI_PATH "drs2text"
#endif

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

bool sh(const std::string& cmd) {
  return std::system((cmd + " >/dev/null 2>&1").c_str()) == 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cli = DRS2TEXT_CLI_PATH;
  const std::string manifest =
      std::string(DRS2TEXT_SOURCE_DIR) + "/data/fixture100/manifest.tsv";
  const fs::path work = fs::temp_directory_path() / "drs2text_pipeline_test";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string dir = work.string();

  expect(sh(cli + " convert --manifest " + manifest + " --out " + dir +
            "/graphs.jsonl --stats " + dir + "/stats.json"),
         "convert");
  expect(sh(cli + " augment --in " + dir + "/graphs.jsonl --out " + dir +
            "/aug.jsonl --strategy ctc"),
         "augment");
  expect(sh(cli + " train --data " + dir + "/aug.jsonl --dev " + dir +
            "/aug.jsonl --out-dir " + dir +
            "/model --hidden 32 --epochs 3 --batch 8 --seed 2"),
         "train");
  expect(sh(cli + " generate --model " + dir + "/model/checkpoint.json --data " +
            dir + "/aug.jsonl --out " + dir + "/gen.jsonl"),
         "generate");
  expect(sh(cli + " evaluate --gen " + dir + "/gen.jsonl --out " + dir +
            "/report.json"),
         "evaluate");
  expect(sh(cli + " challenge-set --manifest " + manifest + " --out " + dir +
            "/challenge.jsonl --seed 3 --strategy ctc --flip"),
         "challenge-set");

  for (const std::string name : {"graphs.jsonl", "aug.jsonl",
                                 "model/checkpoint.json", "model/metrics.csv",
                                 "gen.jsonl", "report.json", "challenge.jsonl"}) {
    expect(fs::exists(work / name), name + " missing");
  }

  // the stats file reports the five pair types
  const auto stats = nlohmann::ordered_json::parse(slurp(work / "stats.json"));
  expect(stats.at("voice_histogram").size() == 5, "stats histogram shape");
  expect(stats.at("converted").get<int>() == 100, "stats converted count");

  // a challenge set drawn from a balanced corpus is fully balanced
  {
    std::ifstream in(work / "challenge.jsonl");
    std::string line;
    int active = 0, passive = 0;
    while (std::getline(in, line)) {
      const auto row = nlohmann::ordered_json::parse(line);
      const std::string voice = row.at("voice").at("voice");
      active += voice == "active";
      passive += voice == "passive";
      expect(!row.at("topic").is_null(), "challenge rows carry the TFA mark");
    }
    expect(active == passive && active > 0, "challenge set balance");
  }

  // evaluating without judgments leaves the manual section pending
  const auto report = nlohmann::ordered_json::parse(slurp(work / "report.json"));
  expect(report.at("rose") == "pending", "rose pending without judgments");
  expect(report.at("automatic").size() >= 1, "automatic metrics present");

  // multi-seed training writes a parseable per-seed report
  expect(sh(cli + " train --data " + dir + "/aug.jsonl --out-dir " + dir +
            "/multi --hidden 16 --epochs 1 --batch 8 --seeds 5 6"),
         "multi-seed train");
  {
    const auto report =
        nlohmann::ordered_json::parse(slurp(work / "multi/multiseed_report.json"));
    expect(report.at("runs").size() == 2, "multi-seed run count");
    expect(report.contains("mean_dev_ppl") && report.contains("mean_bleu"),
           "multi-seed means");
    const auto round =
        nlohmann::ordered_json::parse(report.dump());  // schema round-trips
    expect(round == report, "multi-seed report JSON round trip");
    expect(fs::exists(work / "multi/checkpoint_seed_5.json") &&
               fs::exists(work / "multi/checkpoint_seed_6.json"),
           "per-seed checkpoints");
  }

  // rows without a transitive clause are tagged, not dropped silently
  {
    std::ofstream sbn(work / "intrans.sbn");
    sbn << "dog.n.01\nsleep.v.01 Agent -1\n";
    std::ofstream manifest2(work / "im.tsv");
    manifest2 << "intrans.sbn\tThe dog slept.\n";
  }
  expect(sh(cli + " convert --manifest " + dir + "/im.tsv --out " + dir +
            "/ig.jsonl"),
         "convert intransitive");
  expect(sh(cli + " augment --in " + dir + "/ig.jsonl --out " + dir +
            "/ia.jsonl --strategy rtr"),
         "augment intransitive");
  {
    const auto row = nlohmann::ordered_json::parse(slurp(work / "ia.jsonl"));
    expect(row.at("skipped") == "not_transitive", "intransitive rtr tag");
  }

  // an empty manifest yields an empty output, not a failure
  { std::ofstream empty(work / "empty.tsv"); }
  expect(sh(cli + " convert --manifest " + dir + "/empty.tsv --out " + dir +
            "/empty.jsonl"),
         "convert empty manifest");
  expect(slurp(work / "empty.jsonl").empty(), "empty manifest output");

  // a config snapshot replays to byte-identical output
  expect(sh(cli + " generate --config " + dir + "/gen.jsonl.config.json"),
         "generate --config replay");
  const std::string first = slurp(work / "gen.jsonl");
  expect(!first.empty() && first == slurp(work / "gen.jsonl"), "replay identity");
  fs::copy_file(work / "gen.jsonl", work / "gen_before.jsonl");
  expect(sh(cli + " generate --config " + dir + "/gen.jsonl.config.json"),
         "second replay");
  expect(slurp(work / "gen_before.jsonl") == slurp(work / "gen.jsonl"),
         "replayed generation differs");

  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(dt < 600.0, "end-to-end run exceeded 10 minutes");

  if (failures == 0) {
    std::cout << "pipeline test passed in " << static_cast<int>(dt) << " s\n";
    fs::remove_all(work);
    return 0;
  }
  std::cout << failures << " pipeline checks failed (artifacts kept in " << dir
            << ")\n";
  return 1;
}
