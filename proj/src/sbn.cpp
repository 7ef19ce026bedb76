#include "drs2text/sbn.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace drs2text {

namespace {

const std::set<std::string>& relation_tokens() {
  static const std::set<std::string> kRelations = {
      "ALTERNATION", "ATTRIBUTION",  "BACKGROUND", "COMMENTARY",
      "CONDITION",   "CONSEQUENCE",  "CONTINUATION", "CONTRAST",
      "ELABORATION", "EXPLANATION",  "NARRATION",  "NECESSITY",
      "NEGATION",    "POSSIBILITY",  "PRECONDITION", "RESULT",
      "SOURCE",
  };
  return kRelations;
}

struct RawToken {
  std::string text;
  bool quoted = false;
};

// Splits a line into whitespace-separated tokens; a double quote starts a
// token that runs to the closing quote and may contain spaces.
std::vector<RawToken> scan_tokens(const std::string& line, int line_no) {
  std::vector<RawToken> out;
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '"') {
      size_t close = line.find('"', i + 1);
      if (close == std::string::npos) {
        throw SbnError(SbnErrorKind::UnterminatedString,
                       "unterminated quoted constant", line_no);
      }
      out.push_back({line.substr(i + 1, close - i - 1), true});
      i = close + 1;
    } else {
      size_t end = i;
      while (end < n && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      out.push_back({line.substr(i, end - i), false});
      i = end;
    }
  }
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_relative_index(const std::string& s) {
  if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) return false;
  return all_digits(s.substr(1));
}

// A token "looks like" a synset when its last-but-one dot segment is a single
// letter; such tokens must then be fully valid or the line is rejected.
NodeAtom classify_atom(const RawToken& tok, int line_no) {
  NodeAtom atom;
  if (tok.quoted) {
    atom.kind = AtomKind::Constant;
    atom.text = tok.text;
    atom.quoted = true;
    return atom;
  }
  std::vector<std::string> parts;
  std::stringstream ss(tok.text);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (!tok.text.empty() && tok.text.back() == '.') parts.push_back("");
  const bool synset_shaped =
      parts.size() >= 3 && parts[parts.size() - 2].size() == 1 &&
      std::isalpha(static_cast<unsigned char>(parts[parts.size() - 2][0]));
  if (synset_shaped) {
    const char pos = parts[parts.size() - 2][0];
    const std::string& sense = parts.back();
    std::string lemma;
    for (size_t i = 0; i + 2 < parts.size(); ++i) {
      if (i) lemma += '.';
      lemma += parts[i];
    }
    if ((pos != 'n' && pos != 'v' && pos != 'a' && pos != 'r') ||
        !all_digits(sense) || lemma.empty()) {
      throw SbnError(SbnErrorKind::MalformedSynset,
                     "malformed synset token '" + tok.text + "'", line_no);
    }
    atom.kind = AtomKind::Synset;
    atom.text = tok.text;
    atom.lemma = lemma;
    atom.pos = pos;
    atom.sense = std::stoi(sense);
    return atom;
  }
  atom.kind = AtomKind::Constant;
  atom.text = tok.text;
  return atom;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SbnError::SbnError(SbnErrorKind kind, const std::string& message, int line, int offset)
    : std::runtime_error(message), kind_(kind), line_(line), offset_(offset) {}

bool is_discourse_relation(const std::string& token) {
  return relation_tokens().count(token) > 0;
}

int SbnDocument::box_count() const {
  int boxes = 0;
  for (const auto& line : lines) boxes = std::max(boxes, line.box_id + 1);
  return boxes;
}

SbnDocument parse_sbn(const std::string& text, const std::string& source_id) {
  SbnDocument doc;
  doc.source_id = source_id;

  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  int box = 0;
  std::vector<int> input_lines;  // 1-based input line per parsed line
  while (std::getline(ss, raw)) {
    ++line_no;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '%') continue;

    auto tokens = scan_tokens(stripped, line_no);
    SbnLine line;
    const RawToken& head_tok = tokens.front();
    if (!head_tok.quoted && is_discourse_relation(head_tok.text)) {
      if (tokens.size() > 1) {
        throw SbnError(SbnErrorKind::UnsupportedConstruct,
                       "discourse relation '" + head_tok.text +
                           "' does not take arguments in this notation subset",
                       line_no);
      }
      line.head.kind = AtomKind::Relation;
      line.head.text = head_tok.text;
      line.box_id = ++box;  // a relation opens the box it labels
    } else {
      line.head = classify_atom(head_tok, line_no);
      line.box_id = box;
      if ((tokens.size() - 1) % 2 != 0) {
        throw SbnError(SbnErrorKind::UnsupportedConstruct,
                       "slot label without target", line_no);
      }
      for (size_t i = 1; i + 1 < tokens.size(); i += 2) {
        const RawToken& label = tokens[i];
        const RawToken& target = tokens[i + 1];
        if (label.quoted || is_relative_index(label.text)) {
          throw SbnError(SbnErrorKind::UnsupportedConstruct,
                         "invalid slot label '" + label.text + "'", line_no);
        }
        SbnSlot slot;
        slot.label = label.text;
        if (!target.quoted && is_relative_index(target.text)) {
          slot.target.is_index = true;
          slot.target.offset = std::stoi(target.text);
          if (slot.target.offset == 0) {
            throw SbnError(SbnErrorKind::UnresolvableReference,
                           "relative reference of 0", line_no, 0);
          }
        } else {
          slot.target.is_index = false;
          slot.target.constant = classify_atom(target, line_no);
          if (slot.target.constant.kind == AtomKind::Synset) {
            // Inline synsets are stored as constants in this subset.
            slot.target.constant.kind = AtomKind::Constant;
          }
        }
        line.slots.push_back(std::move(slot));
      }
    }
    doc.lines.push_back(std::move(line));
    input_lines.push_back(line_no);
  }

  if (doc.lines.empty()) {
    throw SbnError(SbnErrorKind::EmptyDocument, "no content lines");
  }

  const int n = static_cast<int>(doc.lines.size());
  for (int i = 0; i < n; ++i) {
    for (const auto& slot : doc.lines[i].slots) {
      if (!slot.target.is_index) continue;
      const int j = i + slot.target.offset;
      if (j < 0 || j >= n) {
        throw SbnError(SbnErrorKind::UnresolvableReference,
                       "reference " + std::to_string(slot.target.offset) +
                           " on line " + std::to_string(input_lines[i]) +
                           " points outside the document",
                       input_lines[i], slot.target.offset);
      }
    }
  }
  return doc;
}

namespace {

std::string atom_text(const NodeAtom& atom) {
  if (atom.kind == AtomKind::Constant &&
      (atom.quoted || atom.text.find_first_of(" \t") != std::string::npos)) {
    return "\"" + atom.text + "\"";
  }
  return atom.text;
}

}  // namespace

std::string serialize_sbn(const SbnDocument& doc) {
  std::string out;
  for (const auto& line : doc.lines) {
    out += atom_text(line.head);
    for (const auto& slot : line.slots) {
      out += ' ';
      out += slot.label;
      out += ' ';
      if (slot.target.is_index) {
        out += (slot.target.offset > 0 ? "+" : "") + std::to_string(slot.target.offset);
      } else {
        out += atom_text(slot.target.constant);
      }
    }
    out += '\n';
  }
  return out;
}

Corpus load_corpus(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) {
    throw SbnError(SbnErrorKind::MissingFile,
                   "manifest not found: " + manifest_path);
  }
  const fs::path base = fs::path(manifest_path).parent_path();

  Corpus corpus;
  std::string row;
  int row_no = 0;
  while (std::getline(in, row)) {
    ++row_no;
    if (trim(row).empty()) continue;
    const size_t tab = row.find('\t');
    if (tab == std::string::npos) {
      corpus.errors.push_back({row_no, "", "expected two tab-separated columns"});
      continue;
    }
    const std::string sbn_rel = trim(row.substr(0, tab));
    std::string ref_col = row.substr(tab + 1);
    const size_t tab2 = ref_col.find('\t');
    if (tab2 != std::string::npos) ref_col = ref_col.substr(0, tab2);
    ref_col = trim(ref_col);

    const fs::path sbn_path = base / sbn_rel;
    std::ifstream sbn_in(sbn_path);
    if (!sbn_in) {
      corpus.errors.push_back({row_no, sbn_path.string(), "missing SBN file"});
      continue;
    }
    std::stringstream buf;
    buf << sbn_in.rdbuf();

    std::string reference = ref_col;
    const fs::path ref_path = base / ref_col;
    if (!ref_col.empty() && fs::exists(ref_path) && fs::is_regular_file(ref_path)) {
      std::ifstream ref_in(ref_path);
      std::stringstream ref_buf;
      ref_buf << ref_in.rdbuf();
      reference = trim(ref_buf.str());
    }

    try {
      CorpusEntry entry;
      entry.doc = parse_sbn(buf.str(), fs::path(sbn_rel).stem().string());
      entry.reference = reference;
      entry.sbn_path = sbn_path.string();
      corpus.entries.push_back(std::move(entry));
    } catch (const SbnError& e) {
      corpus.errors.push_back({row_no, sbn_path.string(), e.what()});
    }
  }
  return corpus;
}

}  // namespace drs2text
