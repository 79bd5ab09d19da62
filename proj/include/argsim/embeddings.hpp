// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace argsim::features {

/// Pre-trained word vectors. Two on-disk formats:
///  - text: first line "vocab_size dim", then "word v1 ... vdim" per line
///  - binary (word2vec .bin): ASCII header "vocab_size dim\n", then per
///    entry the word terminated by a space followed by dim little-endian
///    float32 values; '\n' between entries is tolerated and skipped
/// Lookup is case-sensitive with a lowercase fallback.
class EmbeddingTable {
 public:
  static EmbeddingTable load_text(std::istream& in, const std::string& what = "embeddings");
  static EmbeddingTable load_binary(std::istream& in, const std::string& what = "embeddings");
  /// Sniffs the format: a .bin suffix or a non-text payload selects binary.
  static EmbeddingTable load_file(const std::string& path);

  static EmbeddingTable from_vectors(std::size_t dim,
                                     std::vector<std::pair<std::string, std::vector<float>>> entries);

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return vectors_.size(); }

  /// nullptr when neither the word nor its lowercase form is present.
  const std::vector<float>* find(const std::string& word) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<float>> vectors_;
};

}  // namespace argsim::features
