#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drs2text/tfa.hpp"

namespace drs2text {

struct TemplatePair {
  std::string id;
  std::string sbn;
  std::string reference;
  VoiceClass voice = VoiceClass::Active;
  std::string pair_role;
  int triple_id = 0;  // (subject, verb, object) combination
};

struct TemplateCorpus {
  std::vector<TemplatePair> pairs;
};

// Transitive sentences over a small lexicon covering all five subject-role
// pair types; each drawn (subject, verb, object) triple contributes one
// active and one passive pair, so the corpus is voice-balanced by
// construction. Deterministic under `seed`. `interrogatives` appends that
// many question-form extras on top of `n_pairs`.
TemplateCorpus make_template_corpus(int n_pairs, uint64_t seed,
                                    int interrogatives = 0);

// Writes one .sbn file per pair plus manifest.tsv with inline references.
void write_corpus(const TemplateCorpus& corpus, const std::string& dir);

}  // namespace drs2text
