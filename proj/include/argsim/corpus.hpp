// SPDX-License-Identifier: Apache-2.0
//
// The linguistic data model: tokenized, optionally dependency-annotated
// sentences grouped per debate topic. Everything here is immutable after
// load and safe to share across threads.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "argsim/text.hpp"

namespace argsim {

struct Token {
  std::string surface;
  std::string lemma;
  std::string upos;
  std::optional<std::uint32_t> head;  // 0-based governor index; nullopt = root / unannotated
  std::string deprel;
};

struct ParsedSentence {
  std::string id;
  std::string topic;
  std::string post_id;
  std::string raw_text;
  std::vector<Token> tokens;
  std::optional<double> aq_score;

  /// True when the tokens form a dependency tree (exactly one root).
  bool has_dependencies() const;
};

struct Corpus {
  std::string topic;
  std::vector<ParsedSentence> sentences;
  std::vector<std::pair<std::string, std::size_t>> source_manifest;

  const ParsedSentence& by_id(const std::string& id) const;
  void build_index() const;

 private:
  mutable std::unordered_map<std::string, std::size_t> index_;
};

class Dictionary {
 public:
  static Dictionary load(const std::string& path);
  static Dictionary from_words(const std::vector<std::string>& words);

  bool contains(const std::string& lower_word) const { return words_.count(lower_word) > 0; }
  std::size_t size() const { return words_.size(); }

  /// Union, for the oracle tests of count_dictionary_words.
  Dictionary merged_with(const Dictionary& other) const;

 private:
  StringSet words_;
};

// ---------------------------------------------------------------------------
// CoNLL-U

struct ConlluError {
  std::size_t line;  // 1-based line number in the source stream
  std::string message;
};

struct ConlluParseResult {
  std::vector<ParsedSentence> sentences;
  std::vector<ConlluError> errors;  // one per rejected block
};

/// 10-column CoNLL-U. Multiword ranges (`1-2`) and empty nodes (`1.1`) are
/// skipped. HEAD is converted to 0-based; the CoNLL-U root head 0 becomes
/// nullopt. A malformed row rejects its whole block and parsing continues
/// with the next one. `# sent_id = `, `# topic = `, `# post_id = ` and
/// `# text = ` comments populate the sentence; a missing sent_id becomes
/// `<source>:<block-index>`.
ConlluParseResult parse_conllu(std::istream& in, std::string_view source_name = "stream");

void write_conllu(std::ostream& out, const ParsedSentence& s);
void write_conllu(std::ostream& out, const Corpus& corpus);

// ---------------------------------------------------------------------------
// Raw sentences

/// Whitespace split, then leading/trailing ASCII punctuation stripped from
/// each piece. Internal apostrophes/hyphens survive; case is preserved.
std::vector<std::string> tokenize_raw(std::string_view text);

/// CSV with header id,topic,post_id,text. Tokens come from tokenize_raw;
/// lemmas default to the lowercased surface, no dependency annotation.
Corpus read_raw_csv(std::istream& in, std::string_view source_name);

struct DedupResult {
  Corpus corpus;
  std::size_t removed = 0;
};

/// Keeps the first sentence for each normalized text (lowercase, collapsed
/// whitespace). Idempotent.
DedupResult normalize_and_dedup(const Corpus& corpus);

std::size_t count_dictionary_words(const ParsedSentence& s, const Dictionary& dict);

}  // namespace argsim
