// SPDX-License-Identifier: Apache-2.0
//
// Pair feature families: pooled n-gram cosine, the ROUGE family (N1-4, L,
// W, S*, SU*), generalized dependency-category overlap, the STS prescore,
// and averaged word-embedding features (cosine and concatenation).
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argsim/corpus.hpp"
#include "argsim/embeddings.hpp"
#include "argsim/lexicon.hpp"
#include "argsim/pairing.hpp"

namespace argsim::features {

struct FeatureConfig {
  bool ngram = true;
  bool rouge = true;
  bool liwc = true;
  bool sts = true;
  bool w2v_cosine = true;
  bool w2v_concat = true;

  int ngram_max_order = 3;
  std::vector<std::string> rouge_metrics{"rouge_1", "rouge_2",      "rouge_3",
                                         "rouge_4", "rouge_l",      "rouge_w",
                                         "rouge_s_star", "rouge_su_star"};
  double rouge_beta = 1.0;
  double rouge_w_weight = 1.2;

  enum class LexicalizedSide { governor, dependent };
  LexicalizedSide lexicalized_side = LexicalizedSide::governor;

  enum class OverlapNorm { sum_lengths, mean_lengths };
  OverlapNorm overlap_norm = OverlapNorm::sum_lengths;

  bool any_enabled() const { return ngram || rouge || liwc || sts || w2v_cosine || w2v_concat; }
  void validate() const;
};

/// Column names of the flattened vector for a config; the order is fixed:
/// ngram_cosine, rouge metrics in config order, liwc_dep_overlap, sts,
/// w2v_cosine, then the w2v_concat block (w2v_a_*, w2v_b_*).
struct FeatureLayout {
  std::vector<std::string> names;
  std::string fingerprint() const;
  static FeatureLayout from_config(const FeatureConfig& cfg, std::size_t embedding_dim);
};

struct FeatureResources {
  const StringSet* stopwords = nullptr;        // required by w2v groups
  const CategoryLexicon* lexicon = nullptr;    // required by liwc
  const EmbeddingTable* embeddings = nullptr;  // required by w2v groups
};

struct FeatureVector {
  std::string pair_id;
  std::vector<double> values;
};

// --- individual families ----------------------------------------------------

/// Cosine over pooled 1..max_order n-gram counts of lowercased surfaces.
double ngram_cosine(const ParsedSentence& a, const ParsedSentence& b, int max_order);

struct Prf {
  double precision = 0.0, recall = 0.0, f = 0.0;
};

// Directional scores (a = reference, b = candidate); exposed for the oracle
// tests. The suite below symmetrizes by averaging both directions.
Prf rouge_n(std::span<const std::string> ref, std::span<const std::string> cand, int n, double beta);
Prf rouge_l(std::span<const std::string> ref, std::span<const std::string> cand, double beta);
Prf rouge_w(std::span<const std::string> ref, std::span<const std::string> cand, double weight,
            double beta);
Prf rouge_s_star(std::span<const std::string> ref, std::span<const std::string> cand, double beta);
Prf rouge_su_star(std::span<const std::string> ref, std::span<const std::string> cand, double beta);

std::vector<std::string> lowercased_surfaces(const ParsedSentence& s);

/// Symmetrized f-scores for the metrics named in the config.
std::map<std::string, double> rouge_suite(const ParsedSentence& a, const ParsedSentence& b,
                                          const FeatureConfig& cfg);

/// (lexicalized token, category of the other side) with the dependency label
/// dropped; one tuple per category the lexicon assigns, ancestors included.
/// Key order is deterministic.
using TupleMultiset = std::map<std::pair<std::string, int>, std::size_t>;
TupleMultiset dep_category_tuples(const ParsedSentence& s, const CategoryLexicon& lex,
                                  const FeatureConfig& cfg);

/// Multiset-intersection size normalized by the two token counts.
double dep_overlap(const ParsedSentence& a, const ParsedSentence& b, const CategoryLexicon& lex,
                   const FeatureConfig& cfg);

struct SentenceEmbedding {
  std::vector<double> vec;
  bool degenerate = false;  // every token filtered or out of vocabulary
};

/// Mean embedding over non-stopword, non-punctuation, in-vocabulary tokens.
SentenceEmbedding sentence_embedding(const ParsedSentence& s, const EmbeddingTable& table,
                                     const StringSet& stopwords);

std::vector<double> embedding_concat(const SentenceEmbedding& a, const SentenceEmbedding& b);
double embedding_cosine(const SentenceEmbedding& a, const SentenceEmbedding& b);

// --- assembly ----------------------------------------------------------------

/// Computes the enabled groups for one pair and flattens them in layout
/// order. The sts slot is the pair's recorded prescore.
FeatureVector assemble_features(const pairing::ArgumentPair& pair, const ParsedSentence& a,
                                const ParsedSentence& b, const FeatureConfig& cfg,
                                const FeatureResources& res);

}  // namespace argsim::features
