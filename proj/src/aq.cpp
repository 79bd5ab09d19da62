// SPDX-License-Identifier: Apache-2.0

#include "argsim/aq.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/ml.hpp"

namespace argsim::aq {

void AqConfig::validate() const {
  if (bin_edges.size() < 2) throw Error("aq config: need at least two bin edges");
  for (std::size_t i = 0; i < bin_edges.size(); ++i) {
    if (bin_edges[i] < 0.0 || bin_edges[i] > 1.0) {
      throw Error("aq config: bin edges must lie in [0,1]");
    }
    if (i > 0 && bin_edges[i] <= bin_edges[i - 1]) {
      throw Error("aq config: bin edges must be strictly ascending");
    }
  }
  if (min_tokens >= max_tokens) throw Error("aq config: min_tokens must be < max_tokens");
  if (sample_per_bin < 0) throw Error("aq config: sample_per_bin must be non-negative");
  if (zero_rule_min_dict_words < 0) throw Error("aq config: zero_rule_min_dict_words must be non-negative");
}

ExternalAqScorer ExternalAqScorer::load(const std::string& path) {
  ExternalAqScorer s;
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_id = t.col("sentence_id");
  const std::size_t c_score = t.col("aq_score");
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    const double v = parse_double(t.at(r, c_score), path);
    if (v < 0.0 || v > 1.0) throw Error(path + ": aq_score outside [0,1]");
    s.scores_[t.at(r, c_id)] = v;
  }
  return s;
}

double ExternalAqScorer::score(const ParsedSentence& s) const {
  auto it = scores_.find(s.id);
  if (it == scores_.end()) throw Error("no external AQ score for sentence '" + s.id + "'");
  return it->second;
}

bool has_verb(const ParsedSentence& s) {
  for (const Token& t : s.tokens) {
    if (t.upos == "VERB" || t.upos == "AUX") return true;
  }
  return false;
}

double rescore_aq(const ParsedSentence& s, double raw_score, const Dictionary& dict,
                  const AqConfig& cfg) {
  if (raw_score < 0.0 || raw_score > 1.0) throw Error("rescore_aq: raw score outside [0,1]");
  if (!has_verb(s) &&
      count_dictionary_words(s, dict) < static_cast<std::size_t>(cfg.zero_rule_min_dict_words)) {
    return 0.0;
  }
  return raw_score;
}

LengthPartition filter_by_length(std::span<const ParsedSentence> sentences, const AqConfig& cfg) {
  LengthPartition p;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::size_t n = sentences[i].tokens.size();
    if (n < static_cast<std::size_t>(cfg.min_tokens)) p.dropped_short.push_back(i);
    else if (n > static_cast<std::size_t>(cfg.max_tokens)) p.dropped_long.push_back(i);
    else p.kept.push_back(i);
  }
  return p;
}

ScoreBins bin_by_score(std::span<const ScoredSentence> scored, const AqConfig& cfg) {
  cfg.validate();
  ScoreBins out;
  out.edges = cfg.bin_edges;
  out.bins.resize(cfg.n_bins());
  for (const ScoredSentence& s : scored) {
    if (s.score < 0.0 || s.score > 1.0) throw Error("bin_by_score: score outside [0,1]");
    if (s.score < out.edges.front()) {
      out.below_range.push_back(s);
      continue;
    }
    // bin i covers [edges[i], edges[i+1]); the last bin is closed at the top
    std::size_t bin = out.bins.size() - 1;
    for (std::size_t i = 0; i + 1 < out.edges.size(); ++i) {
      if (s.score < out.edges[i + 1]) {
        bin = i;
        break;
      }
    }
    out.bins[bin].push_back(s);
  }
  return out;
}

std::vector<SampledSentence> sample_bins(const ScoreBins& bins, const AqConfig& cfg) {
  if (cfg.sample_per_bin < 0) throw Error("sample_bins: sample_per_bin must be non-negative");
  Rng rng(cfg.rng_seed);
  std::vector<SampledSentence> out;
  for (std::size_t b = 0; b < bins.bins.size(); ++b) {
    const auto& bin = bins.bins[b];
    const std::size_t want = std::min<std::size_t>(bin.size(), static_cast<std::size_t>(cfg.sample_per_bin));
    // partial Fisher-Yates over the bin's index range
    std::vector<std::size_t> idx(bin.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t j = 0; j < want; ++j) {
      const std::size_t r = j + rng.bounded(idx.size() - j);
      std::swap(idx[j], idx[r]);
      out.push_back({b, bin[idx[j]]});
    }
  }
  return out;
}

Label map_annotation_label(const AqAnnotation& a) {
  if (a.score == 3) return Label::yes;
  if (a.score == 1 || a.score == 2) return Label::no;
  throw Error("aq annotation score must be 1, 2 or 3 (got " + std::to_string(a.score) + ")");
}

Label gold_label(std::span<const AqAnnotation> annotations) {
  if (annotations.empty()) throw Error("gold_label: no annotations");
  std::size_t yes = 0, no = 0;
  for (const auto& a : annotations) {
    (map_annotation_label(a) == Label::yes ? yes : no) += 1;
  }
  return yes > no ? Label::yes : Label::no;  // ties are "no"
}

BinQualityReport bin_quality_report(std::span<const LabeledSample> samples, const AqConfig& cfg) {
  cfg.validate();
  BinQualityReport report;
  const std::size_t n_bins = cfg.n_bins();
  std::vector<std::size_t> total(n_bins, 0), yes(n_bins, 0);
  std::size_t agree = 0, yes_all = 0;
  for (const auto& s : samples) {
    if (s.bin >= n_bins) throw Error("bin_quality_report: bin index out of range");
    ++total[s.bin];
    const bool is_yes = s.gold == Label::yes;
    if (is_yes) {
      ++yes[s.bin];
      ++yes_all;
    }
    const bool predicted_high = s.rescored_score > cfg.high_aq_threshold;
    if (predicted_high == is_yes) ++agree;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    BinQuality q;
    q.lo = cfg.bin_edges[b];
    q.hi = cfg.bin_edges[b + 1];
    q.n = total[b];
    if (total[b] > 0) q.p_yes = static_cast<double>(yes[b]) / static_cast<double>(total[b]);
    report.bins.push_back(q);
  }
  report.n_total = samples.size();
  if (!samples.empty()) {
    report.global_yes_rate = static_cast<double>(yes_all) / static_cast<double>(samples.size());
    report.agreement = static_cast<double>(agree) / static_cast<double>(samples.size());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Baseline scorer

std::vector<double> BaselineAqScorer::featurize(const ParsedSentence& s) const {
  std::vector<double> x(5 + unigrams_.size(), 0.0);
  const double n = static_cast<double>(s.tokens.size());
  x[0] = n;
  x[1] = n > 0 ? static_cast<double>(count_dictionary_words(s, dict_)) / n : 0.0;
  x[2] = has_verb(s) ? 1.0 : 0.0;
  StringSet types;
  double punct = 0.0;
  for (const Token& t : s.tokens) {
    const std::string lower = to_lower_ascii(t.surface);
    types.insert(lower);
    if (is_punctuation_token(t.surface)) punct += 1.0;
    auto it = unigram_index_.find(lower);
    if (it != unigram_index_.end()) x[5 + it->second] = 1.0;
  }
  x[3] = n > 0 ? static_cast<double>(types.size()) / n : 0.0;
  x[4] = punct;
  return x;
}

double BaselineAqScorer::score(const ParsedSentence& s) const {
  const std::vector<double> x = featurize(s);
  double v = intercept_;
  for (std::size_t j = 0; j < weights_.size(); ++j) v += weights_[j] * x[j];
  return std::clamp(v, 0.0, 1.0);
}

std::unique_ptr<BaselineAqScorer> train_baseline_aq_scorer(std::span<const ParsedSentence> sentences,
                                                           std::span<const Label> labels,
                                                           const Dictionary& dict, double alpha) {
  if (sentences.size() != labels.size()) throw Error("baseline aq: input length mismatch");
  if (sentences.size() < 50) throw Error("baseline aq: need at least 50 labeled sentences");

  auto scorer = std::make_unique<BaselineAqScorer>();
  scorer->dict_ = dict;

  std::size_t yes = 0;
  for (Label l : labels) {
    if (l == Label::yes) ++yes;
  }
  if (yes == 0 || yes == labels.size()) {
    // degenerate single-class input: constant class prior
    scorer->intercept_ = yes == 0 ? 0.0 : 1.0;
    return scorer;
  }

  // most frequent unigrams, frequency then lexicographic for determinism
  std::map<std::string, std::size_t> freq;
  for (const auto& s : sentences) {
    for (const Token& t : s.tokens) ++freq[to_lower_ascii(t.surface)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > BaselineAqScorer::kMaxUnigrams) ranked.resize(BaselineAqScorer::kMaxUnigrams);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    scorer->unigrams_.push_back(ranked[i].first);
    scorer->unigram_index_.emplace(ranked[i].first, i);
  }

  ml::Matrix X(sentences.size(), 5 + scorer->unigrams_.size());
  std::vector<double> y(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::vector<double> row = scorer->featurize(sentences[i]);
    std::copy(row.begin(), row.end(), X.row(i));
    y[i] = labels[i] == Label::yes ? 1.0 : 0.0;
  }
  ml::RegressionModel model = ml::ridge_fit(X, y, alpha);
  scorer->weights_ = std::move(model.weights);
  scorer->intercept_ = model.intercept;
  return scorer;
}

}  // namespace argsim::aq
