#include "drs2text/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace drs2text {

namespace {

constexpr double kBleuEpsilon = 1e-9;

void check_aligned(size_t h, size_t r) {
  if (h != r) {
    throw EvalError(EvalErrorKind::LengthMismatch,
                    "hypothesis/reference count mismatch: " + std::to_string(h) +
                        " vs " + std::to_string(r));
  }
}

std::string ngram_key(const std::vector<std::string>& tokens, size_t start, int n) {
  std::string key;
  for (int k = 0; k < n; ++k) {
    key += tokens[start + k];
    key += '\x1f';
  }
  return key;
}

}  // namespace

double bleu(const std::vector<std::vector<std::string>>& hypotheses,
            const std::vector<std::vector<std::string>>& references) {
  check_aligned(hypotheses.size(), references.size());

  long hyp_len = 0, ref_len = 0;
  double matches[4] = {0, 0, 0, 0};
  double totals[4] = {0, 0, 0, 0};

  for (size_t i = 0; i < hypotheses.size(); ++i) {
    const auto& hyp = hypotheses[i];
    const auto& ref = references[i];
    hyp_len += static_cast<long>(hyp.size());
    ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= 4; ++n) {
      if (static_cast<int>(hyp.size()) < n) continue;
      std::unordered_map<std::string, int> hyp_counts, ref_counts;
      for (size_t s = 0; s + n <= hyp.size(); ++s) ++hyp_counts[ngram_key(hyp, s, n)];
      for (size_t s = 0; s + n <= ref.size(); ++s) ++ref_counts[ngram_key(ref, s, n)];
      for (const auto& [gram, count] : hyp_counts) {
        totals[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  if (hyp_len == 0) return 0.0;
  const double bp =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  double log_prec = 0.0;
  for (int n = 0; n < 4; ++n) {
    const double m = matches[n] > 0.0 ? matches[n] : kBleuEpsilon;
    const double t = std::max(totals[n], 1.0);
    log_prec += 0.25 * std::log(m / t);
  }
  return 100.0 * bp * std::exp(log_prec);
}

std::string stem(const std::string& token) {
  static const std::vector<std::string> kSuffixes = {"ing", "ed", "es", "s"};
  for (const auto& suf : kSuffixes) {
    if (token.size() > suf.size() + 2 &&
        token.compare(token.size() - suf.size(), suf.size(), suf) == 0) {
      return token.substr(0, token.size() - suf.size());
    }
  }
  return token;
}

namespace {

struct PairStats {
  int matched = 0;
  int chunks = 0;
};

// Two-stage greedy alignment (exact, then stem) in hypothesis order, each
// reference token used at most once.
PairStats align_pair(const std::vector<std::string>& hyp,
                     const std::vector<std::string>& ref) {
  std::vector<int> aligned(hyp.size(), -1);
  std::vector<char> ref_used(ref.size(), 0);
  for (int stage = 0; stage < 2; ++stage) {
    for (size_t i = 0; i < hyp.size(); ++i) {
      if (aligned[i] >= 0) continue;
      for (size_t j = 0; j < ref.size(); ++j) {
        if (ref_used[j]) continue;
        const bool hit = stage == 0 ? hyp[i] == ref[j] : stem(hyp[i]) == stem(ref[j]);
        if (hit) {
          aligned[i] = static_cast<int>(j);
          ref_used[j] = 1;
          break;
        }
      }
    }
  }
  PairStats stats;
  int prev_i = -2, prev_j = -2;
  for (size_t i = 0; i < hyp.size(); ++i) {
    if (aligned[i] < 0) continue;
    ++stats.matched;
    if (static_cast<int>(i) != prev_i + 1 || aligned[i] != prev_j + 1) ++stats.chunks;
    prev_i = static_cast<int>(i);
    prev_j = aligned[i];
  }
  return stats;
}

}  // namespace

double meteor_lite(const std::vector<std::vector<std::string>>& hypotheses,
                   const std::vector<std::vector<std::string>>& references) {
  check_aligned(hypotheses.size(), references.size());

  long matched = 0, chunks = 0, hyp_len = 0, ref_len = 0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    const PairStats stats = align_pair(hypotheses[i], references[i]);
    matched += stats.matched;
    chunks += stats.chunks;
    hyp_len += static_cast<long>(hypotheses[i].size());
    ref_len += static_cast<long>(references[i].size());
  }
  if (matched == 0 || hyp_len == 0 || ref_len == 0) return 0.0;

  const double p = static_cast<double>(matched) / static_cast<double>(hyp_len);
  const double r = static_cast<double>(matched) / static_cast<double>(ref_len);
  const double alpha = 0.9;
  const double f_mean = (p * r) / (alpha * p + (1.0 - alpha) * r);
  const double frag = static_cast<double>(chunks) / static_cast<double>(matched);
  const double penalty = 0.5 * frag * frag * frag;
  return 100.0 * f_mean * (1.0 - penalty);
}

std::string to_string(VoiceVerdict v) {
  switch (v) {
    case VoiceVerdict::Active: return "active";
    case VoiceVerdict::Passive: return "passive";
    case VoiceVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

const std::set<std::string>& auxiliaries() {
  static const std::set<std::string> kAux = {
      "am", "is", "are", "was", "were", "been", "being",
      "get", "got", "gets", "getting"};
  return kAux;
}

const std::set<std::string>& irregular_participles() {
  static const std::set<std::string> kPp = {
      "beaten", "been",   "begun",  "bitten", "blown",  "broken", "brought",
      "built",  "bought", "caught", "chosen", "come",   "cut",    "done",
      "drawn",  "driven", "drunk",  "eaten",  "fallen", "fed",    "felt",
      "fought", "flown",  "forgotten", "found", "frozen", "given", "gone",
      "gotten", "grown",  "heard",  "held",   "hidden", "hit",    "hurt",
      "kept",   "known",  "laid",   "led",    "left",   "lent",   "lost",
      "made",   "meant",  "met",    "paid",   "put",    "read",   "ridden",
      "risen",  "run",    "said",   "seen",   "sent",   "set",    "shaken",
      "shot",   "shown",  "shut",   "sold",   "spent",  "spoken", "stolen",
      "stung",  "struck", "sung",   "sunk",   "swum",   "taken",  "taught",
      "thrown", "told",   "torn",   "understood", "woken", "won",  "worn",
      "written"};
  return kPp;
}

const std::set<std::string>& irregular_pasts() {
  static const std::set<std::string> kPast = {
      "ate",   "beat",  "began", "bit",   "blew",  "broke",  "brought",
      "built", "bought", "came",  "caught", "chose", "cut",    "did",
      "drank", "drew",  "drove", "fed",   "fell",  "felt",   "flew",
      "forgot", "fought", "found", "froze", "gave",  "got",    "grew",
      "heard", "held",  "hid",   "hit",   "hurt",  "kept",   "knew",
      "laid",  "led",   "left",  "lent",  "lost",  "made",   "meant",
      "met",   "paid",  "put",   "ran",   "read",  "rode",   "rose",
      "said",  "sang",  "sank",  "saw",   "sent",  "set",    "shook",
      "shot",  "shut",  "sold",  "spent", "spoke", "stole",  "struck",
      "stung", "swam",  "taught", "threw", "told",  "took",   "tore",
      "understood", "went", "woke", "won", "wore",  "wrote"};
  return kPast;
}

bool is_past_participle(const std::string& token) {
  if (irregular_participles().count(token)) return true;
  return token.size() >= 4 && token.compare(token.size() - 2, 2, "ed") == 0;
}

bool is_finite_verb(const std::string& token) {
  if (auxiliaries().count(token)) return true;
  if (irregular_pasts().count(token)) return true;
  return token.size() >= 4 && token.compare(token.size() - 2, 2, "ed") == 0;
}

}  // namespace

VoiceVerdict voice_heuristic(const std::vector<std::string>& tokens) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!auxiliaries().count(tokens[i])) continue;
    for (size_t j = i + 1; j < tokens.size() && j <= i + 3; ++j) {
      if (is_past_participle(tokens[j])) return VoiceVerdict::Passive;
    }
  }
  for (const auto& tok : tokens) {
    if (is_finite_verb(tok)) return VoiceVerdict::Active;
  }
  return VoiceVerdict::Unknown;
}

std::map<std::string, RoseJudgment> load_judgments_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw EvalError(EvalErrorKind::MissingJudgment, "cannot open judgments " + path);
  }
  std::map<std::string, RoseJudgment> out;
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty() || row[0] == '#') continue;
    std::stringstream ss(row);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 4) continue;
    RoseJudgment j;
    j.source_id = fields[0];
    j.semantics = std::stoi(fields[1]) ? 1 : 0;
    j.grammaticality = std::stoi(fields[2]) ? 1 : 0;
    j.phenomenon = std::stoi(fields[3]) ? 1 : 0;
    if (fields.size() > 4) j.note = fields[4];
    out[j.source_id] = j;
  }
  return out;
}

RoseReport rose_accuracy(const std::vector<GenerationRecord>& records,
                         const std::map<std::string, RoseJudgment>& judgments) {
  std::vector<std::string> missing;
  for (const auto& rec : records) {
    if (!judgments.count(rec.source_id)) missing.push_back(rec.source_id);
  }
  if (!missing.empty()) {
    std::string ids;
    for (size_t i = 0; i < missing.size() && i < 10; ++i) {
      if (i) ids += ", ";
      ids += missing[i];
    }
    throw EvalError(EvalErrorKind::MissingJudgment,
                    "missing judgments for: " + ids +
                        (missing.size() > 10 ? ", ..." : ""));
  }

  RoseReport report;
  auto add = [](RoseColumn& col, const RoseJudgment& j) {
    col.semantics += j.semantics;
    col.grammaticality += j.grammaticality;
    col.phenomenon += j.phenomenon;
    col.rose += j.rose();
    ++col.n;
  };
  for (const auto& rec : records) {
    const RoseJudgment& j = judgments.at(rec.source_id);
    if (rec.voice_expected.voice == VoiceClass::Active) {
      add(report.passive_to_active, j);
    } else {
      add(report.active_to_passive, j);
    }
  }
  auto finish = [](RoseColumn& col) {
    if (col.n == 0) return;
    const double n = static_cast<double>(col.n);
    col.semantics = 100.0 * col.semantics / n;
    col.grammaticality = 100.0 * col.grammaticality / n;
    col.phenomenon = 100.0 * col.phenomenon / n;
    col.rose = 100.0 * col.rose / n;
  };
  const double rose_sum = report.passive_to_active.rose + report.active_to_passive.rose;
  report.total = report.passive_to_active.n + report.active_to_passive.n;
  finish(report.passive_to_active);
  finish(report.active_to_passive);
  report.all_rose = report.total ? 100.0 * rose_sum / static_cast<double>(report.total) : 0.0;
  return report;
}

}  // namespace drs2text
