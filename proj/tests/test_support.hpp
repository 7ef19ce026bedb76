#pragma once

#include <string>
#include <vector>

#include "drs2text/drg.hpp"
#include "drs2text/rng.hpp"
#include "drs2text/sbn.hpp"

namespace drs2text::testing {

// Expected counts computed directly from the document, independent of the
// graph-building code.
struct DocCounts {
  int head_lines = 0;
  int relation_lines = 0;
  int boxes = 0;
  int constant_slots = 0;
  int role_slots = 0;
};

inline DocCounts count_document(const SbnDocument& doc) {
  DocCounts c;
  c.boxes = doc.box_count();
  for (const auto& line : doc.lines) {
    if (line.is_relation()) {
      ++c.relation_lines;
      continue;
    }
    ++c.head_lines;
    for (const auto& slot : line.slots) {
      if (slot.target.is_index) {
        ++c.role_slots;
      } else {
        ++c.constant_slots;
      }
    }
  }
  return c;
}

// Valid-by-construction random document over a tiny lexicon.
inline SbnDocument random_document(Rng& rng, int max_lines = 8) {
  static const std::vector<std::string> kLemmas = {
      "wolf", "sheep", "kill", "see", "book", "run", "old", "fast"};
  static const std::vector<char> kPos = {'n', 'v', 'a', 'r'};
  static const std::vector<std::string> kLabels = {
      "Agent", "Patient", "Theme", "Time", "Quantity", "Name", "EQU"};
  static const std::vector<std::string> kRelations = {"NEGATION", "CONTRAST",
                                                      "CONTINUATION"};
  static const std::vector<std::string> kConstants = {
      "tom", "2", "now", "2008-03-05", "Taro~Akagawa", "big_sur"};

  const int n = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_lines)));
  std::string text;
  for (int i = 0; i < n; ++i) {
    // Relation lines are rarer and never first (a leading box-0 line keeps the
    // example closer to real data; a leading relation is still legal).
    if (i > 0 && rng.below(5) == 0) {
      text += kRelations[rng.below(kRelations.size())];
      text += '\n';
      continue;
    }
    if (rng.below(4) == 0) {
      const std::string& c = kConstants[rng.below(kConstants.size())];
      text += c.find('~') != std::string::npos ? "\"" + c + "\"" : c;
    } else {
      text += kLemmas[rng.below(kLemmas.size())];
      text += '.';
      text += kPos[rng.below(kPos.size())];
      text += rng.below(2) ? ".01" : ".02";
    }
    const int n_slots = static_cast<int>(rng.below(3));
    for (int s = 0; s < n_slots && n > 1; ++s) {
      text += ' ';
      text += kLabels[rng.below(kLabels.size())];
      text += ' ';
      if (rng.below(3) == 0) {
        const std::string& c = kConstants[rng.below(kConstants.size())];
        text += c.find('~') != std::string::npos ? "\"" + c + "\"" : c;
      } else {
        int j = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        if (j == i) j = (i + 1) % n;
        const int offset = j - i;
        text += (offset > 0 ? "+" : "") + std::to_string(offset);
      }
    }
    text += '\n';
  }
  return parse_sbn(text, "random");
}

inline const std::string kWolfSheepActive =
    "wolf.n.01\nkill.v.01 Agent -1 Patient +1\nsheep.n.01 Quantity 2\n";

inline const std::string kWolfSheepActivePlain =
    "wolf.n.01\nkill.v.01 Agent -1 Patient +1\nsheep.n.01\n";

inline const std::string kWolfSheepPassive =
    "sheep.n.01 Quantity 2\nkill.v.01 Patient -1 Agent +1\nwolf.n.01\n";

}  // namespace drs2text::testing
