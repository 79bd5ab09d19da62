// SPDX-License-Identifier: Apache-2.0
//
// Argument-quality rescoring, length banding, score binning, per-bin
// sampling for annotation, and the bin-quality report.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argsim/corpus.hpp"

namespace argsim::aq {

struct AqConfig {
  int zero_rule_min_dict_words = 4;
  int min_tokens = 10;
  int max_tokens = 40;
  std::vector<double> bin_edges{0.55, 0.65, 0.75, 0.85, 0.95, 1.0};
  int sample_per_bin = 500;
  std::uint64_t rng_seed = 0;
  double high_aq_threshold = 0.55;

  void validate() const;
  std::size_t n_bins() const { return bin_edges.size() - 1; }
};

struct AqAnnotation {
  std::string sentence_id;
  std::string worker_id;
  int score = 0;  // 1, 2 or 3
};

enum class Label { yes, no };

/// Source of raw AQ scores. The regressor itself is external; scores arrive
/// from a file or from the trainable surface-feature baseline below.
class AqScorer {
 public:
  virtual ~AqScorer() = default;
  virtual double score(const ParsedSentence& s) const = 0;
  virtual std::string_view provenance() const = 0;
};

/// Scores read from a CSV `sentence_id,aq_score`.
class ExternalAqScorer : public AqScorer {
 public:
  static ExternalAqScorer load(const std::string& path);
  double score(const ParsedSentence& s) const override;
  std::string_view provenance() const override { return "external-file"; }

 private:
  std::unordered_map<std::string, double> scores_;
};

bool has_verb(const ParsedSentence& s);  // UPOS VERB or AUX

/// The zero rule: a sentence with no verb and fewer than
/// zero_rule_min_dict_words dictionary tokens is rescored to 0; everything
/// else keeps its raw score. Never increases a score.
double rescore_aq(const ParsedSentence& s, double raw_score, const Dictionary& dict,
                  const AqConfig& cfg);

struct LengthPartition {
  std::vector<std::size_t> kept, dropped_short, dropped_long;  // indices into input
};

LengthPartition filter_by_length(std::span<const ParsedSentence> sentences, const AqConfig& cfg);

struct ScoredSentence {
  std::size_t index = 0;  // caller-side index
  std::string id;
  double score = 0.0;
};

struct ScoreBins {
  std::vector<double> edges;
  std::vector<std::vector<ScoredSentence>> bins;  // bin i = [edges[i], edges[i+1]), last closed
  std::vector<ScoredSentence> below_range;        // scores < edges[0]
};

ScoreBins bin_by_score(std::span<const ScoredSentence> scored, const AqConfig& cfg);

struct SampledSentence {
  std::size_t bin = 0;
  ScoredSentence sentence;
};

/// Up to sample_per_bin draws per bin, uniform without replacement,
/// deterministic for a fixed seed. Output order is (bin index, draw order).
std::vector<SampledSentence> sample_bins(const ScoreBins& bins, const AqConfig& cfg);

Label map_annotation_label(const AqAnnotation& a);

/// Majority vote over the mapped labels; ties are "no".
Label gold_label(std::span<const AqAnnotation> annotations);

struct BinQuality {
  double lo = 0.0, hi = 0.0;
  std::size_t n = 0;
  std::optional<double> p_yes;  // empty bin -> no probability, not 0
};

struct BinQualityReport {
  std::vector<BinQuality> bins;
  std::size_t n_total = 0;
  double global_yes_rate = 0.0;
  /// Agreement between (rescored score > threshold) and the gold label.
  double agreement = 0.0;
};

struct LabeledSample {
  std::size_t bin = 0;
  double rescored_score = 0.0;
  Label gold = Label::no;
};

BinQualityReport bin_quality_report(std::span<const LabeledSample> samples, const AqConfig& cfg);

/// Ridge regression on surface features (token count, dictionary-word
/// ratio, verb presence, type/token ratio, punctuation count, presence of
/// the most frequent unigrams). Scores are clipped to [0,1].
class BaselineAqScorer : public AqScorer {
 public:
  double score(const ParsedSentence& s) const override;
  std::string_view provenance() const override { return "trained-baseline"; }

  static constexpr std::size_t kMaxUnigrams = 1000;

 private:
  friend std::unique_ptr<BaselineAqScorer> train_baseline_aq_scorer(
      std::span<const ParsedSentence> sentences, std::span<const Label> labels,
      const Dictionary& dict, double alpha);
  std::vector<std::string> unigrams_;  // feature order is frequency rank
  std::unordered_map<std::string, std::size_t> unigram_index_;
  std::vector<double> weights_;
  double intercept_ = 0.0;
  Dictionary dict_;
  std::vector<double> featurize(const ParsedSentence& s) const;
};

std::unique_ptr<BaselineAqScorer> train_baseline_aq_scorer(
    std::span<const ParsedSentence> sentences, std::span<const Label> labels,
    const Dictionary& dict, double alpha = 1.0);

}  // namespace argsim::aq
