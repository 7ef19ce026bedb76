#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "drs2text/tfa.hpp"

namespace drs2text {

enum class EvalErrorKind { LengthMismatch, MissingJudgment };

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }
 private:
  EvalErrorKind kind_;
};

// Corpus-level BLEU-4 in [0, 100]: geometric mean of modified n-gram
// precisions times the brevity penalty, zero match counts smoothed to 1e-9.
double bleu(const std::vector<std::vector<std::string>>& hypotheses,
            const std::vector<std::vector<std::string>>& references);

// Unigram-overlap metric in [0, 100] with exact and stem matching stages,
// alpha = 0.9 F-mean and 0.5 * fragmentation^3 chunk penalty. No synonym or
// paraphrase stage, hence the "lite".
double meteor_lite(const std::vector<std::vector<std::string>>& hypotheses,
                   const std::vector<std::vector<std::string>>& references);

// Suffix-stripping stemmer used by the stem stage.
std::string stem(const std::string& token);

enum class VoiceVerdict { Active, Passive, Unknown };
std::string to_string(VoiceVerdict v);

// Passive iff an auxiliary is followed within three tokens by a past
// participle (suffix heuristic plus an irregular list); otherwise Active when
// a finite verb is present, else Unknown.
VoiceVerdict voice_heuristic(const std::vector<std::string>& tokens);

struct GenerationRecord {
  std::string source_id;
  std::string hypothesis;
  std::string reference;
  VoiceType voice_expected;  // voice the hypothesis should realize
  std::string strategy = "none";
  std::string encoder;
  std::string neighborhood;
  bool flipped = false;
};

struct RoseJudgment {
  std::string source_id;
  int semantics = 0;
  int grammaticality = 0;
  int phenomenon = 0;
  std::string note;
  int rose() const { return semantics && grammaticality && phenomenon; }
};

// TSV: source_id \t sem \t gram \t phen [\t note]
std::map<std::string, RoseJudgment> load_judgments_tsv(const std::string& path);

struct RoseColumn {
  double semantics = 0.0;
  double grammaticality = 0.0;
  double phenomenon = 0.0;
  double rose = 0.0;
  int n = 0;
};

struct RoseReport {
  RoseColumn passive_to_active;  // expected output voice: active
  RoseColumn active_to_passive;
  double all_rose = 0.0;  // weighted by direction set sizes
  int total = 0;
};

// Per-direction dimension means (x100) plus the conjunction accuracy. Every
// record must have a judgment; missing ids raise MissingJudgment.
RoseReport rose_accuracy(const std::vector<GenerationRecord>& records,
                         const std::map<std::string, RoseJudgment>& judgments);

}  // namespace drs2text
