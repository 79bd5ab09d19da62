// SPDX-License-Identifier: Apache-2.0

#include "argsim/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/kernels.hpp"
#include "argsim/ml.hpp"

namespace argsim::pairing {

void AfsAnnotation::validate() const {
  if (score < 0 || score > 5) {
    throw Error("afs annotation score must be in 0..5 (got " + std::to_string(score) + ")");
  }
}

void PairSamplingConfig::validate() const {
  if (target_pairs <= 0) throw Error("pair config: target_pairs must be positive");
  if (per_sentence_cap < 1) throw Error("pair config: per_sentence_cap must be >= 1");
}

// ---------------------------------------------------------------------------
// Proxy STS

namespace {

// Lemma stream used for tf-idf: lowercased lemma (surface fallback),
// stopwords and pure punctuation removed.
std::vector<std::string> content_lemmas(const ParsedSentence& s, const StringSet& stopwords) {
  std::vector<std::string> out;
  for (const Token& t : s.tokens) {
    const std::string& base = t.lemma.empty() ? t.surface : t.lemma;
    std::string lemma = to_lower_ascii(base);
    if (is_punctuation_token(lemma)) continue;
    if (stopwords.count(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

}  // namespace

ProxyStsScorer::ProxyStsScorer(const Corpus& corpus, StringSet stopwords)
    : stopwords_(std::move(stopwords)) {
  const double n_docs = static_cast<double>(corpus.sentences.size());
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& s : corpus.sentences) {
    StringSet seen;
    for (const auto& lemma : content_lemmas(s, stopwords_)) {
      if (seen.insert(lemma).second) ++df[lemma];
    }
  }
  // smoothed idf: ln((1 + N) / (1 + df)) + 1
  for (const auto& [lemma, count] : df) {
    idf_[lemma] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(count))) + 1.0;
  }
  default_idf_ = std::log(1.0 + n_docs) + 1.0;  // df = 0
}

double ProxyStsScorer::idf(const std::string& lemma) const {
  auto it = idf_.find(lemma);
  return it == idf_.end() ? default_idf_ : it->second;
}

std::unordered_map<std::string, double> ProxyStsScorer::weights(const ParsedSentence& s) const {
  std::unordered_map<std::string, double> tf;
  for (const auto& lemma : content_lemmas(s, stopwords_)) tf[lemma] += 1.0;
  for (auto& [lemma, v] : tf) v *= idf(lemma);
  return tf;
}

ProxyStsScorer::Value ProxyStsScorer::score_ex(const ParsedSentence& a,
                                               const ParsedSentence& b) const {
  const auto wa = weights(a);
  const auto wb = weights(b);
  if (wa.empty() && wb.empty()) return {0.0, true};
  if (wa.empty() || wb.empty()) return {0.0, false};
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [lemma, v] : wa) {
    na += v * v;
    auto it = wb.find(lemma);
    if (it != wb.end()) dot += v * it->second;
  }
  for (const auto& [lemma, v] : wb) nb += v * v;
  if (na == 0.0 || nb == 0.0) return {0.0, false};
  return {dot / std::sqrt(na * nb), false};
}

// ---------------------------------------------------------------------------
// External STS

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  return a <= b ? a + '\x1f' + b : b + '\x1f' + a;
}

}  // namespace

ExternalStsScorer ExternalStsScorer::load(const std::string& path) {
  ExternalStsScorer s;
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_a = t.col("sent_a");
  const std::size_t c_b = t.col("sent_b");
  const std::size_t c_score = t.col("score");
  const std::size_t c_scale = t.col("scale_max");
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    const double scale = parse_double(t.at(r, c_scale), path);
    if (r == 0) s.scale_max_ = scale;
    else if (scale != s.scale_max_) throw Error(path + ": inconsistent scale_max values");
    s.scores_[pair_key(t.at(r, c_a), t.at(r, c_b))] = parse_double(t.at(r, c_score), path);
  }
  if (s.scores_.empty()) throw Error(path + ": no STS rows");
  return s;
}

double ExternalStsScorer::score(const ParsedSentence& a, const ParsedSentence& b) const {
  if (a.id == b.id) return scale_max_;
  auto it = scores_.find(pair_key(a.id, b.id));
  if (it == scores_.end()) {
    throw Error("no external STS score for pair (" + a.id + ", " + b.id + ")");
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Pair selection

SelectResult select_pairs(const Corpus& corpus, const StsScorer& scorer,
                          const PairSamplingConfig& cfg) {
  cfg.validate();
  const auto& sentences = corpus.sentences;
  if (sentences.size() < 2) throw Error("select_pairs: need at least 2 sentences");

  struct Candidate {
    double score;
    std::size_t a, b;  // indices; ids of a sorted before b
  };
  std::vector<Candidate> candidates;
  candidates.reserve(sentences.size() * (sentences.size() - 1) / 2);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (std::size_t j = i + 1; j < sentences.size(); ++j) {
      const bool swap = sentences[j].id < sentences[i].id;
      const std::size_t a = swap ? j : i;
      const std::size_t b = swap ? i : j;
      candidates.push_back({scorer.score(sentences[i], sentences[j]), a, b});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    if (sentences[x.a].id != sentences[y.a].id) return sentences[x.a].id < sentences[y.a].id;
    return sentences[x.b].id < sentences[y.b].id;
  });

  SelectResult result;
  std::unordered_map<std::size_t, int> usage;
  const std::size_t target = static_cast<std::size_t>(cfg.target_pairs);
  double min_accepted = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) {
    if (result.pairs.size() >= target) break;
    if (cfg.min_prescore && c.score < *cfg.min_prescore) break;  // sorted: nothing below qualifies
    if (usage[c.a] >= cfg.per_sentence_cap || usage[c.b] >= cfg.per_sentence_cap) continue;
    ++usage[c.a];
    ++usage[c.b];
    ArgumentPair p;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "pair%06zu", result.pairs.size() + 1);
    p.pair_id = buf;
    p.sent_a = sentences[c.a].id;
    p.sent_b = sentences[c.b].id;
    p.sts_prescore = c.score;
    min_accepted = std::min(min_accepted, c.score);
    result.pairs.push_back(std::move(p));
  }
  result.min_accepted_prescore = result.pairs.empty() ? 0.0 : min_accepted;
  result.target_reached = result.pairs.size() >= target;
  return result;
}

// ---------------------------------------------------------------------------
// Gold aggregation and topline

double aggregate_gold(std::span<const AfsAnnotation> annotations) {
  if (annotations.empty()) throw Error("aggregate_gold: no annotations");
  double total = 0.0;
  for (const auto& a : annotations) {
    a.validate();
    total += a.score;
  }
  return total / static_cast<double>(annotations.size());
}

ToplineResult human_topline(std::span<const AfsAnnotation> annotations) {
  // worker -> (pair_id -> score); std::map keeps worker order stable
  std::map<std::string, std::map<std::string, double>> by_worker;
  for (const auto& a : annotations) {
    a.validate();
    by_worker[a.worker_id][a.pair_id] = a.score;
  }
  if (by_worker.size() < 2) throw Error("human_topline: need at least 2 workers");

  ToplineResult result;
  double total = 0.0;
  std::size_t defined = 0;
  for (auto ita = by_worker.begin(); ita != by_worker.end(); ++ita) {
    for (auto itb = std::next(ita); itb != by_worker.end(); ++itb) {
      std::vector<double> a, b;
      for (const auto& [pair_id, score] : ita->second) {
        auto common = itb->second.find(pair_id);
        if (common != itb->second.end()) {
          a.push_back(score);
          b.push_back(common->second);
        }
      }
      WorkerPairR wp;
      wp.worker_a = ita->first;
      wp.worker_b = itb->first;
      wp.n_common = a.size();
      if (a.size() >= 2) {
        const double ma = kernels::sum(a.data(), a.size()) / a.size();
        const double mb = kernels::sum(b.data(), b.size()) / b.size();
        if (kernels::sumsqdev(a.data(), a.size(), ma) > 0.0 &&
            kernels::sumsqdev(b.data(), b.size(), mb) > 0.0) {
          wp.r = ml::pearson_r(a, b);
        }
      }
      if (wp.r) {
        total += *wp.r;
        ++defined;
      } else {
        ++result.excluded;
      }
      result.worker_pairs.push_back(std::move(wp));
    }
  }
  if (defined == 0) throw Error("human_topline: no worker pair has a defined correlation");
  result.topline = total / static_cast<double>(defined);
  return result;
}

// ---------------------------------------------------------------------------
// File formats

std::vector<AfsAnnotation> load_afs_annotations(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_pair = t.col("pair_id");
  const std::size_t c_worker = t.col("worker_id");
  const std::size_t c_score = t.col("score");
  std::vector<AfsAnnotation> out;
  out.reserve(t.n_rows());
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    AfsAnnotation a;
    a.pair_id = t.at(r, c_pair);
    a.worker_id = t.at(r, c_worker);
    a.score = static_cast<int>(parse_int(t.at(r, c_score), path));
    a.validate();
    out.push_back(std::move(a));
  }
  return out;
}

void merge_annotations(std::vector<ArgumentPair>& pairs,
                       std::span<const AfsAnnotation> annotations) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pairs[i].pair_id, i);
  for (const auto& a : annotations) {
    auto it = index.find(a.pair_id);
    if (it == index.end()) throw Error("afs annotation references unknown pair '" + a.pair_id + "'");
    pairs[it->second].annotations.push_back(a);
  }
  for (auto& p : pairs) {
    if (!p.annotations.empty()) p.gold_afs = aggregate_gold(p.annotations);
  }
}

std::vector<ArgumentPair> load_pairs_csv(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_id = t.col("pair_id");
  const std::size_t c_a = t.col("sent_a");
  const std::size_t c_b = t.col("sent_b");
  const std::size_t c_score = t.col("sts_prescore");
  std::vector<ArgumentPair> out;
  out.reserve(t.n_rows());
  StringSet seen;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    ArgumentPair p;
    p.pair_id = t.at(r, c_id);
    p.sent_a = t.at(r, c_a);
    p.sent_b = t.at(r, c_b);
    p.sts_prescore = parse_double(t.at(r, c_score), path);
    if (p.sent_a == p.sent_b) throw Error(path + ": pair '" + p.pair_id + "' repeats a sentence");
    if (!seen.insert(p.pair_id).second) throw Error(path + ": duplicate pair id '" + p.pair_id + "'");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace argsim::pairing
