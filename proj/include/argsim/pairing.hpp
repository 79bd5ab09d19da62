// SPDX-License-Identifier: Apache-2.0
//
// Candidate-pair prescoring and selection under the per-sentence cap, gold
// AFS aggregation, and the inter-annotator topline.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "argsim/corpus.hpp"

namespace argsim::pairing {

struct AfsAnnotation {
  std::string pair_id;
  std::string worker_id;
  int score = 0;  // 0..5

  void validate() const;
};

struct ArgumentPair {
  std::string pair_id;
  std::string sent_a, sent_b;
  double sts_prescore = 0.0;
  std::vector<AfsAnnotation> annotations;
  std::optional<double> gold_afs;
};

struct PairSamplingConfig {
  int target_pairs = 2000;
  int per_sentence_cap = 10;
  std::optional<double> min_prescore;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Similarity prescorer used only to bias pair selection. Symmetric;
/// score(a,a) is the scale maximum.
class StsScorer {
 public:
  virtual ~StsScorer() = default;
  virtual double score(const ParsedSentence& a, const ParsedSentence& b) const = 0;
  virtual double scale_max() const = 0;
};

/// Local stand-in for an external STS service: cosine of tf-idf weighted
/// lemma vectors. idf comes from the topic corpus (each sentence is one
/// document), lemmas are lowercased, stopwords removed.
class ProxyStsScorer : public StsScorer {
 public:
  ProxyStsScorer(const Corpus& corpus, StringSet stopwords);

  struct Value {
    double value = 0.0;
    bool degenerate = false;  // both sides all-stopword/all-filtered
  };
  Value score_ex(const ParsedSentence& a, const ParsedSentence& b) const;

  double score(const ParsedSentence& a, const ParsedSentence& b) const override {
    return score_ex(a, b).value;
  }
  double scale_max() const override { return 1.0; }

  double idf(const std::string& lemma) const;

 private:
  StringSet stopwords_;
  std::unordered_map<std::string, double> idf_;
  double default_idf_ = 0.0;
  std::unordered_map<std::string, double> weights(const ParsedSentence& s) const;
};

/// Scores loaded from CSV sent_a,sent_b,score,scale_max; lookup is
/// unordered (a,b) == (b,a).
class ExternalStsScorer : public StsScorer {
 public:
  static ExternalStsScorer load(const std::string& path);
  double score(const ParsedSentence& a, const ParsedSentence& b) const override;
  double scale_max() const override { return scale_max_; }

 private:
  std::unordered_map<std::string, double> scores_;  // key = min_id \x1f max_id
  double scale_max_ = 1.0;
};

struct SelectResult {
  std::vector<ArgumentPair> pairs;
  double min_accepted_prescore = 0.0;
  bool target_reached = false;
};

/// Enumerates all unordered pairs, sorts by descending prescore (ties by id
/// pair), then greedily accepts while both members stay under the cap.
/// Deterministic; pair ids are assigned in acceptance order.
SelectResult select_pairs(const Corpus& corpus, const StsScorer& scorer,
                          const PairSamplingConfig& cfg);

/// Gold AFS = arithmetic mean of the annotator scores.
double aggregate_gold(std::span<const AfsAnnotation> annotations);

struct WorkerPairR {
  std::string worker_a, worker_b;
  std::size_t n_common = 0;
  std::optional<double> r;  // nullopt when undefined (zero variance)
};

struct ToplineResult {
  double topline = 0.0;  // unweighted mean of the defined pairwise r values
  std::vector<WorkerPairR> worker_pairs;
  std::size_t excluded = 0;
};

/// Mean pairwise Pearson r across workers over the pairs both annotated.
/// Worker pairs with fewer than 2 common pairs or zero-variance scores are
/// excluded and reported.
ToplineResult human_topline(std::span<const AfsAnnotation> annotations);

std::vector<AfsAnnotation> load_afs_annotations(const std::string& path);

/// Attaches annotations to pairs and fills gold_afs with the mean score.
void merge_annotations(std::vector<ArgumentPair>& pairs,
                       std::span<const AfsAnnotation> annotations);

std::vector<ArgumentPair> load_pairs_csv(const std::string& path);

}  // namespace argsim::pairing
