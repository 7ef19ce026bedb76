#pragma once

#include <string>
#include <vector>

namespace drs2text {

// Lowercases ASCII and splits on whitespace; punctuation becomes standalone
// tokens. Apostrophes, hyphens and underscores stay inside words.
std::vector<std::string> tokenize(const std::string& text);

std::string join_tokens(const std::vector<std::string>& tokens);

// True for tokens shaped lemma.pos.sense with pos in {n, v, a, r}.
bool looks_like_synset(const std::string& token);

// Surface form a copied graph node contributes to the output text: the lemma
// segment of a synset, anything else verbatim (so a failed split surfaces the
// raw token).
std::string copy_surface(const std::string& node_token);

}  // namespace drs2text
