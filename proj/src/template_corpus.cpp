#include "drs2text/template_corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "drs2text/rng.hpp"

namespace drs2text {

namespace {

struct Verb {
  const char* lemma;
  const char* past;
  const char* participle;
  const char* role;
};

const std::vector<Verb>& verbs() {
  static const std::vector<Verb> kVerbs = {
      {"kill", "killed", "killed", "Patient"},
      {"chase", "chased", "chased", "Patient"},
      {"attack", "attacked", "attacked", "Patient"},
      {"push", "pushed", "pushed", "Patient"},
      {"bite", "bit", "bitten", "Patient"},
      {"carry", "carried", "carried", "Theme"},
      {"hold", "held", "held", "Theme"},
      {"throw", "threw", "thrown", "Theme"},
      {"move", "moved", "moved", "Theme"},
      {"drop", "dropped", "dropped", "Theme"},
      {"scare", "scared", "scared", "Experiencer"},
      {"surprise", "surprised", "surprised", "Experiencer"},
      {"annoy", "annoyed", "annoyed", "Experiencer"},
      {"amuse", "amused", "amused", "Experiencer"},
      {"sting", "stung", "stung", "Experiencer"},
      {"write", "wrote", "written", "Result"},
      {"build", "built", "built", "Result"},
      {"paint", "painted", "painted", "Result"},
      {"compose", "composed", "composed", "Result"},
      {"make", "made", "made", "Result"},
      {"desert", "deserted", "deserted", "Source"},
      {"abandon", "abandoned", "abandoned", "Source"},
  };
  return kVerbs;
}

const std::vector<std::string>& subjects() {
  static const std::vector<std::string> kSubjects = {
      "wolf", "farmer", "teacher", "soldier", "intruder", "hunter", "doctor",
      "artist", "giant", "neighbor", "stranger", "woman", "man", "boy",
      "girl", "bee", "lion", "bear", "thief", "king"};
  return kSubjects;
}

struct Noun {
  const char* singular;
  const char* plural;
};

const std::vector<Noun>& animate_objects() {
  static const std::vector<Noun> kNouns = {
      {"sheep", "sheep"}, {"rabbit", "rabbits"}, {"bird", "birds"},
      {"fish", "fish"},   {"mouse", "mice"},     {"horse", "horses"},
      {"goat", "goats"},  {"snake", "snakes"},   {"fox", "foxes"},
      {"child", "children"}};
  return kNouns;
}

const std::vector<Noun>& thing_objects() {
  static const std::vector<Noun> kNouns = {
      {"stone", "stones"}, {"box", "boxes"},   {"ladder", "ladders"},
      {"basket", "baskets"}, {"flag", "flags"}, {"rope", "ropes"},
      {"chair", "chairs"}, {"ball", "balls"}};
  return kNouns;
}

const std::vector<Noun>& artifact_objects() {
  static const std::vector<Noun> kNouns = {
      {"letter", "letters"}, {"song", "songs"},     {"book", "books"},
      {"poem", "poems"},     {"wall", "walls"},     {"house", "houses"},
      {"picture", "pictures"}, {"statue", "statues"}};
  return kNouns;
}

const std::vector<Noun>& objects_for_role(const std::string& role) {
  if (role == "Theme") return thing_objects();
  if (role == "Result") return artifact_objects();
  return animate_objects();
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

struct Triple {
  std::string subject;
  Verb verb;
  Noun object;
  bool quantity;  // "two <plural>" form for the object
};

TemplatePair realize(const Triple& t, VoiceClass voice, int triple_id,
                     bool interrogative) {
  TemplatePair pair;
  pair.voice = voice;
  pair.pair_role = t.verb.role;
  pair.triple_id = triple_id;

  const std::string obj_np =
      t.quantity ? "two " + std::string(t.object.plural)
                 : "the " + std::string(t.object.singular);
  const std::string subj_np = "the " + t.subject;
  const std::string be = t.quantity ? "were" : "was";

  if (interrogative) {
    // Passive yes/no question, used only for filter coverage.
    pair.reference = capitalize(be) + " " + obj_np + " " +
                     t.verb.participle + " by " + subj_np + "?";
  } else if (voice == VoiceClass::Active) {
    pair.reference = capitalize(subj_np) + " " + t.verb.past + " " + obj_np + ".";
  } else {
    pair.reference = capitalize(obj_np) + " " + be + " " + t.verb.participle +
                     " by " + subj_np + ".";
  }

  const std::string subj_line = t.subject + ".n.01";
  std::string obj_line = std::string(t.object.singular) + ".n.01";
  if (t.quantity) obj_line += " Quantity 2";
  const std::string verb_tok = std::string(t.verb.lemma) + ".v.01";

  if (voice == VoiceClass::Active && !interrogative) {
    pair.sbn = subj_line + "\n" + verb_tok + " Agent -1 " + t.verb.role +
               " +1\n" + obj_line + "\n";
  } else {
    pair.sbn = obj_line + "\n" + verb_tok + " " + t.verb.role +
               " -1 Agent +1\n" + subj_line + "\n";
  }
  return pair;
}

}  // namespace

TemplateCorpus make_template_corpus(int n_pairs, uint64_t seed,
                                    int interrogatives) {
  TemplateCorpus corpus;
  const int n_triples = n_pairs / 2;

  Rng rng(seed);
  std::vector<Triple> triples;
  triples.reserve(n_triples);
  // Rejection-free draw over the cross product, deduplicated.
  std::vector<uint64_t> used;
  int guard = 0;
  while (static_cast<int>(triples.size()) < n_triples && guard < n_triples * 50) {
    ++guard;
    const auto& vs = verbs();
    const Verb verb = vs[rng.below(vs.size())];
    const auto& subj_pool = subjects();
    const std::string subject = subj_pool[rng.below(subj_pool.size())];
    const auto& obj_pool = objects_for_role(verb.role);
    const Noun object = obj_pool[rng.below(obj_pool.size())];
    const uint64_t key =
        std::hash<std::string>{}(subject + "|" + verb.lemma + "|" + object.singular);
    if (std::find(used.begin(), used.end(), key) != used.end()) continue;
    used.push_back(key);
    Triple t{subject, verb, object, triples.size() % 3 == 0};
    triples.push_back(std::move(t));
  }

  char buf[32];
  for (int i = 0; i < static_cast<int>(triples.size()); ++i) {
    std::snprintf(buf, sizeof(buf), "tpl_%04d", i);
    TemplatePair active = realize(triples[i], VoiceClass::Active, i, false);
    active.id = std::string(buf) + "a";
    TemplatePair passive = realize(triples[i], VoiceClass::Passive, i, false);
    passive.id = std::string(buf) + "p";
    corpus.pairs.push_back(std::move(active));
    corpus.pairs.push_back(std::move(passive));
  }
  for (int q = 0; q < interrogatives; ++q) {
    const Triple& t = triples[q % triples.size()];
    TemplatePair question = realize(t, VoiceClass::Passive, -1, true);
    std::snprintf(buf, sizeof(buf), "tpl_q%03d", q);
    question.id = buf;
    corpus.pairs.push_back(std::move(question));
  }
  return corpus;
}

void write_corpus(const TemplateCorpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.tsv");
  for (const auto& pair : corpus.pairs) {
    const std::string file = pair.id + ".sbn";
    std::ofstream sbn(fs::path(dir) / file);
    sbn << pair.sbn;
    manifest << file << '\t' << pair.reference << '\n';
  }
}

}  // namespace drs2text
