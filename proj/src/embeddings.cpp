// SPDX-License-Identifier: Apache-2.0

#include "argsim/embeddings.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/text.hpp"

namespace argsim::features {

namespace {

void read_header(std::istream& in, std::size_t& vocab, std::size_t& dim, const std::string& what) {
  std::string header;
  if (!std::getline(in, header)) throw Error(what + ": missing header line");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto parts = split_ws(header);
  if (parts.size() != 2) throw Error(what + ": header must be 'vocab_size dim'");
  vocab = static_cast<std::size_t>(parse_int(parts[0], what + " header"));
  dim = static_cast<std::size_t>(parse_int(parts[1], what + " header"));
  if (dim == 0) throw Error(what + ": dimension must be positive");
}

}  // namespace

EmbeddingTable EmbeddingTable::load_text(std::istream& in, const std::string& what) {
  std::size_t vocab = 0, dim = 0;
  read_header(in, vocab, dim, what);
  EmbeddingTable table;
  table.dim_ = dim;
  table.vectors_.reserve(vocab);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto parts = split_ws(line);
    if (parts.size() != dim + 1) {
      throw Error(what + ":" + std::to_string(line_no) + ": expected word + " +
                  std::to_string(dim) + " values");
    }
    std::vector<float> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      vec[i] = static_cast<float>(parse_double(parts[i + 1], what));
    }
    table.vectors_[parts[0]] = std::move(vec);
  }
  if (table.vectors_.size() != vocab) {
    throw Error(what + ": header says " + std::to_string(vocab) + " words, file has " +
                std::to_string(table.vectors_.size()));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_binary(std::istream& in, const std::string& what) {
  std::size_t vocab = 0, dim = 0;
  read_header(in, vocab, dim, what);
  EmbeddingTable table;
  table.dim_ = dim;
  table.vectors_.reserve(vocab);
  static_assert(std::endian::native == std::endian::little,
                "binary embedding reader assumes a little-endian host");
  for (std::size_t e = 0; e < vocab; ++e) {
    std::string word;
    char c;
    while (in.get(c)) {
      if (c == ' ') break;
      if (c == '\n') {
        if (word.empty()) continue;  // entry separator, tolerated
        throw Error(what + ": unexpected newline inside word");
      }
      word.push_back(c);
    }
    if (word.empty()) throw Error(what + ": truncated entry " + std::to_string(e + 1));
    std::vector<float> vec(dim);
    in.read(reinterpret_cast<char*>(vec.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (!in) throw Error(what + ": truncated vector for word '" + word + "'");
    table.vectors_[word] = std::move(vec);
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bin") {
    return load_binary(in, path);
  }
  return load_text(in, path);
}

EmbeddingTable EmbeddingTable::from_vectors(
    std::size_t dim, std::vector<std::pair<std::string, std::vector<float>>> entries) {
  EmbeddingTable table;
  table.dim_ = dim;
  for (auto& [word, vec] : entries) {
    if (vec.size() != dim) throw Error("embedding vector for '" + word + "' has wrong length");
    table.vectors_[word] = std::move(vec);
  }
  return table;
}

const std::vector<float>* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors_.find(word);
  if (it != vectors_.end()) return &it->second;
  const std::string lower = to_lower_ascii(word);
  if (lower != word) {
    it = vectors_.find(lower);
    if (it != vectors_.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace argsim::features
