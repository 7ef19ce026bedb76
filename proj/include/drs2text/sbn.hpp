#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace drs2text {

// Atoms that can head a line or fill a slot in sequential box notation.
enum class AtomKind { Synset, Constant, Relation };

struct NodeAtom {
  AtomKind kind = AtomKind::Constant;
  std::string text;     // synset/relation token, or constant content (unquoted)
  bool quoted = false;  // constant appeared in double quotes
  std::string lemma;    // synset only
  char pos = 0;         // synset only: n, v, a or r
  int sense = 0;        // synset only

  bool operator==(const NodeAtom&) const = default;
};

// Target of a slot: either a relative line offset or an inline constant.
struct SlotTarget {
  bool is_index = false;
  int offset = 0;       // nonzero iff is_index
  NodeAtom constant;    // valid iff !is_index

  bool operator==(const SlotTarget&) const = default;
};

struct SbnSlot {
  std::string label;
  SlotTarget target;
  bool operator==(const SbnSlot&) const = default;
};

struct SbnLine {
  NodeAtom head;
  std::vector<SbnSlot> slots;
  int box_id = 0;

  bool is_relation() const { return head.kind == AtomKind::Relation; }
  bool operator==(const SbnLine&) const = default;
};

struct SbnDocument {
  std::vector<SbnLine> lines;
  std::string source_id;

  int box_count() const;
  // Structural equality; source_id is bookkeeping, not content.
  bool operator==(const SbnDocument& o) const { return lines == o.lines; }
};

enum class SbnErrorKind {
  EmptyDocument,
  UnresolvableReference,
  MalformedSynset,
  UnterminatedString,
  UnsupportedConstruct,
  MissingFile,
};

class SbnError : public std::runtime_error {
 public:
  SbnError(SbnErrorKind kind, const std::string& message, int line = 0, int offset = 0);
  SbnErrorKind kind() const { return kind_; }
  int line() const { return line_; }      // 1-based input line, 0 when n/a
  int offset() const { return offset_; }  // offending relative offset, when applicable
 private:
  SbnErrorKind kind_;
  int line_;
  int offset_;
};

// True for the fixed set of all-uppercase discourse relation tokens that open
// a new box (NEGATION, CONTRAST, ...).
bool is_discourse_relation(const std::string& token);

// Parses the supported subset of sequential box notation:
// one head token per line followed by zero or more (label, target) pairs,
// '%' comment lines, double-quoted constants that may contain spaces.
SbnDocument parse_sbn(const std::string& text, const std::string& source_id);

// Inverse of parse_sbn up to whitespace normalization.
std::string serialize_sbn(const SbnDocument& doc);

struct CorpusEntry {
  SbnDocument doc;
  std::string reference;
  std::string sbn_path;
};

struct CorpusRowError {
  int row = 0;  // 1-based manifest row
  std::string path;
  std::string message;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::vector<CorpusRowError> errors;
};

// Manifest TSV: "<sbn_path>\t<reference_text_or_path>" per row. Paths resolve
// relative to the manifest location; a second column naming an existing file
// is read as the reference text, otherwise the column is the text itself.
// Rows that fail to load or parse are skipped and reported in `errors`.
Corpus load_corpus(const std::string& manifest_path);

}  // namespace drs2text
