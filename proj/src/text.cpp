#include "drs2text/text.hpp"

#include <cctype>

namespace drs2text {

namespace {

bool word_char(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c == '-' || c == '_' || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else if (word_char(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
      tokens.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

bool looks_like_synset(const std::string& token) {
  const size_t last = token.rfind('.');
  if (last == std::string::npos || last + 1 >= token.size()) return false;
  for (size_t i = last + 1; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
  }
  const size_t prev = token.rfind('.', last - 1);
  if (prev == std::string::npos || last - prev != 2 || prev == 0) return false;
  const char pos = token[prev + 1];
  return pos == 'n' || pos == 'v' || pos == 'a' || pos == 'r';
}

std::string copy_surface(const std::string& node_token) {
  if (looks_like_synset(node_token)) {
    const size_t last = node_token.rfind('.');
    const size_t prev = node_token.rfind('.', last - 1);
    std::string lemma = node_token.substr(0, prev);
    if (!lemma.empty()) return lemma;
  }
  return node_token;
}

}  // namespace drs2text
