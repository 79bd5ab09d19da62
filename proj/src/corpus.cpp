// SPDX-License-Identifier: Apache-2.0

#include "argsim/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"

namespace argsim {

bool ParsedSentence::has_dependencies() const {
  if (tokens.empty()) return false;
  std::size_t roots = 0;
  for (const Token& t : tokens) {
    if (!t.head) ++roots;
  }
  return roots == 1;
}

void Corpus::build_index() const {
  index_.clear();
  index_.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    index_.emplace(sentences[i].id, i);
  }
}

const ParsedSentence& Corpus::by_id(const std::string& id) const {
  if (index_.size() != sentences.size()) build_index();
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown sentence id: " + id);
  return sentences[it->second];
}

Dictionary Dictionary::load(const std::string& path) {
  Dictionary d;
  d.words_ = load_wordlist(path);
  if (d.words_.empty()) throw Error("dictionary is empty: " + path);
  return d;
}

Dictionary Dictionary::from_words(const std::vector<std::string>& words) {
  Dictionary d;
  for (const auto& w : words) d.words_.insert(to_lower_ascii(w));
  if (d.words_.empty()) throw Error("dictionary is empty");
  return d;
}

Dictionary Dictionary::merged_with(const Dictionary& other) const {
  Dictionary d = *this;
  d.words_.insert(other.words_.begin(), other.words_.end());
  return d;
}

// ---------------------------------------------------------------------------
// CoNLL-U

namespace {

struct PendingBlock {
  std::vector<std::vector<std::string>> rows;  // 10 columns each
  std::vector<std::size_t> row_lines;
  std::string sent_id, topic, post_id, text, aq_score;
};

bool parse_head(const std::string& field, long long& value) {
  if (field == "_") {
    value = -1;  // unannotated
    return true;
  }
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && p == last && value >= 0;
}

std::string unescape_field(const std::string& f) {
  return f == "_" ? std::string() : f;
}

// Finalizes one block; on any malformed row the whole block is rejected with
// a single error naming the offending line.
void finish_block(PendingBlock& b, std::string_view source, std::size_t block_index,
                  ConlluParseResult& out) {
  if (b.rows.empty()) return;

  ParsedSentence s;
  s.id = b.sent_id.empty()
             ? std::string(source) + ":" + std::to_string(block_index)
             : b.sent_id;
  s.topic = b.topic;
  s.post_id = b.post_id;
  if (!b.aq_score.empty()) {
    s.aq_score = parse_double(b.aq_score, "conllu aq_score");
  }

  std::size_t roots = 0;
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    const auto& f = b.rows[r];
    Token t;
    t.surface = f[1];
    t.lemma = unescape_field(f[2]);
    t.upos = unescape_field(f[3]);
    t.deprel = unescape_field(f[7]);
    if (t.surface.empty()) {
      out.errors.push_back({b.row_lines[r], "empty FORM column"});
      return;
    }
    long long head = 0;
    if (!parse_head(f[6], head)) {
      out.errors.push_back({b.row_lines[r], "non-integer HEAD '" + f[6] + "'"});
      return;
    }
    if (head <= 0) {
      t.head = std::nullopt;  // root (0) or unannotated (_)
      if (head == 0) ++roots;
    } else {
      t.head = static_cast<std::uint32_t>(head - 1);
    }
    s.tokens.push_back(std::move(t));
  }

  const std::size_t n = s.tokens.size();
  if (roots > 1) {
    out.errors.push_back({b.row_lines[0], "more than one root in dependency tree"});
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& h = s.tokens[i].head;
    if (h && (*h >= n || *h == i)) {
      out.errors.push_back({b.row_lines[i], "HEAD out of range"});
      return;
    }
  }

  if (b.text.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) joined += ' ';
      joined += s.tokens[i].surface;
    }
    s.raw_text = joined;
  } else {
    s.raw_text = b.text;
  }
  out.sentences.push_back(std::move(s));
}

}  // namespace

ConlluParseResult parse_conllu(std::istream& in, std::string_view source_name) {
  ConlluParseResult out;
  PendingBlock block;
  bool block_bad = false;
  bool block_seen = false;
  std::size_t line_no = 0;
  std::size_t block_index = 0;
  std::string line;

  auto flush = [&] {
    if (block_seen) {
      if (!block_bad) finish_block(block, source_name, block_index, out);
      ++block_index;
    }
    block = PendingBlock{};
    block_bad = false;
    block_seen = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (line.empty()) {
      flush();
      continue;
    }
    block_seen = true;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = trim(line.substr(1, eq - 1));
        std::string value = trim(line.substr(eq + 1));
        if (key == "sent_id") block.sent_id = value;
        else if (key == "topic") block.topic = value;
        else if (key == "post_id") block.post_id = value;
        else if (key == "text") block.text = value;
        else if (key == "aq_score") block.aq_score = value;
      }
      continue;
    }

    if (block_bad) continue;  // rest of a rejected block

    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 10) {
      out.errors.push_back(
          {line_no, "expected 10 tab-separated columns, got " + std::to_string(fields.size())});
      block_bad = true;
      continue;
    }
    const std::string& id = fields[0];
    if (id.find('-') != std::string::npos) continue;  // multiword token range
    if (id.find('.') != std::string::npos) continue;  // empty node
    block.row_lines.push_back(line_no);
    block.rows.push_back(std::move(fields));
  }
  flush();
  return out;
}

namespace {

std::string escape_field(const std::string& f) {
  return f.empty() ? std::string("_") : f;
}

}  // namespace

void write_conllu(std::ostream& out, const ParsedSentence& s) {
  out << "# sent_id = " << s.id << '\n';
  if (!s.topic.empty()) out << "# topic = " << s.topic << '\n';
  if (!s.post_id.empty()) out << "# post_id = " << s.post_id << '\n';
  if (!s.raw_text.empty()) out << "# text = " << s.raw_text << '\n';
  if (s.aq_score) out << "# aq_score = " << format_double_exact(*s.aq_score) << '\n';
  // In a proper tree the root serializes as HEAD 0; sentences without
  // dependency annotation keep "_" so they round-trip as unannotated.
  const bool tree = s.has_dependencies();
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    out << (i + 1) << '\t' << t.surface << '\t' << escape_field(t.lemma) << '\t'
        << escape_field(t.upos) << "\t_\t_\t";
    if (t.head) out << (*t.head + 1);
    else if (tree) out << 0;
    else out << '_';
    out << '\t' << escape_field(t.deprel) << "\t_\t_\n";
  }
  out << '\n';
}

void write_conllu(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences) write_conllu(out, s);
}

// ---------------------------------------------------------------------------
// Raw sentences

std::vector<std::string> tokenize_raw(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& piece : split_ws(text)) {
    std::size_t b = 0, e = piece.size();
    while (b < e && is_ascii_punct(piece[b])) ++b;
    while (e > b && is_ascii_punct(piece[e - 1])) --e;
    if (e > b) out.emplace_back(piece.substr(b, e - b));
  }
  return out;
}

Corpus read_raw_csv(std::istream& in, std::string_view source_name) {
  auto table = CsvTable::from_rows(parse_csv(in), std::string(source_name));
  const std::size_t c_id = table.col("id");
  const std::size_t c_topic = table.col("topic");
  const std::size_t c_post = table.col("post_id");
  const std::size_t c_text = table.col("text");

  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    ParsedSentence s;
    s.id = table.at(r, c_id);
    s.topic = table.at(r, c_topic);
    s.post_id = table.at(r, c_post);
    s.raw_text = table.at(r, c_text);
    if (s.id.empty()) throw Error(std::string(source_name) + ": empty sentence id at data row " + std::to_string(r + 1));
    if (!seen_ids.insert(s.id).second) {
      throw Error(std::string(source_name) + ": duplicate sentence id '" + s.id + "'");
    }
    for (std::string& surf : tokenize_raw(s.raw_text)) {
      Token t;
      t.lemma = to_lower_ascii(surf);
      t.surface = std::move(surf);
      s.tokens.push_back(std::move(t));
    }
    if (s.tokens.empty()) continue;  // nothing tokenizable; drop silently
    if (corpus.topic.empty()) corpus.topic = s.topic;
    corpus.sentences.push_back(std::move(s));
  }
  corpus.source_manifest.emplace_back(std::string(source_name), corpus.sentences.size());
  return corpus;
}

DedupResult normalize_and_dedup(const Corpus& corpus) {
  DedupResult out;
  out.corpus.topic = corpus.topic;
  out.corpus.source_manifest = corpus.source_manifest;
  std::unordered_set<std::string> seen;
  seen.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    if (seen.insert(normalize_text(s.raw_text)).second) {
      out.corpus.sentences.push_back(s);
    } else {
      ++out.removed;
    }
  }
  return out;
}

std::size_t count_dictionary_words(const ParsedSentence& s, const Dictionary& dict) {
  std::size_t n = 0;
  for (const Token& t : s.tokens) {
    if (dict.contains(to_lower_ascii(t.surface))) ++n;
  }
  return n;
}

}  // namespace argsim
