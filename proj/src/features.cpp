// SPDX-License-Identifier: Apache-2.0

#include "argsim/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "argsim/common.hpp"
#include "argsim/kernels.hpp"

namespace argsim::features {

namespace {

constexpr char kSep = '\x1f';
// Begin-of-sentence marker prepended for ROUGE-SU*; control byte keeps it
// disjoint from real tokens.
const std::string kBosMarker = "\x02<s>";

using Counts = std::unordered_map<std::string, double>;

double fscore(double p, double r, double beta) {
  const double b2 = beta * beta;
  const double denom = r + b2 * p;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

Counts ngram_counts(std::span<const std::string> tokens, int order) {
  Counts counts;
  if (order <= 0 || tokens.size() < static_cast<std::size_t>(order)) return counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string key = std::to_string(order);
    key.push_back(':');
    for (int k = 0; k < order; ++k) {
      if (k) key.push_back(kSep);
      key += tokens[i + k];
    }
    counts[key] += 1.0;
  }
  return counts;
}

Counts skip_bigram_counts(std::span<const std::string> tokens) {
  Counts counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      counts[tokens[i] + kSep + tokens[j]] += 1.0;
    }
  }
  return counts;
}

double clipped_matches(const Counts& ref, const Counts& cand) {
  double total = 0.0;
  for (const auto& [key, count] : ref) {
    auto it = cand.find(key);
    if (it != cand.end()) total += std::min(count, it->second);
  }
  return total;
}

double total_count(const Counts& c) {
  double t = 0.0;
  for (const auto& [key, count] : c) t += count;
  return t;
}

Prf prf_from_matches(double matches, double ref_total, double cand_total, double beta) {
  Prf out;
  if (ref_total <= 0.0 || cand_total <= 0.0) return out;  // too short for the unit
  out.recall = matches / ref_total;
  out.precision = matches / cand_total;
  out.f = fscore(out.precision, out.recall, beta);
  return out;
}

std::size_t lcs_length(std::span<const std::string> x, std::span<const std::string> y) {
  const std::size_t m = x.size(), n = y.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (x[i - 1] == y[j - 1]) cur[j] = prev[j - 1] + 1;
      else cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

std::vector<std::string> lowercased_surfaces(const ParsedSentence& s) {
  std::vector<std::string> out;
  out.reserve(s.tokens.size());
  for (const Token& t : s.tokens) out.push_back(to_lower_ascii(t.surface));
  return out;
}

double ngram_cosine(const ParsedSentence& a, const ParsedSentence& b, int max_order) {
  if (max_order < 1) throw Error("ngram_cosine: max_order must be >= 1");
  const auto ta = lowercased_surfaces(a);
  const auto tb = lowercased_surfaces(b);
  Counts ca, cb;
  for (int n = 1; n <= max_order; ++n) {
    for (auto& [key, count] : ngram_counts(ta, n)) ca[key] += count;
    for (auto& [key, count] : ngram_counts(tb, n)) cb[key] += count;
  }
  if (ca.empty() || cb.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [key, count] : ca) {
    na += count * count;
    auto it = cb.find(key);
    if (it != cb.end()) dot += count * it->second;
  }
  for (const auto& [key, count] : cb) nb += count * count;
  return dot / std::sqrt(na * nb);
}

Prf rouge_n(std::span<const std::string> ref, std::span<const std::string> cand, int n,
            double beta) {
  const Counts cr = ngram_counts(ref, n);
  const Counts cc = ngram_counts(cand, n);
  return prf_from_matches(clipped_matches(cr, cc), total_count(cr), total_count(cc), beta);
}

Prf rouge_l(std::span<const std::string> ref, std::span<const std::string> cand, double beta) {
  if (ref.empty() || cand.empty()) return {};
  const double lcs = static_cast<double>(lcs_length(ref, cand));
  Prf out;
  out.recall = lcs / static_cast<double>(ref.size());
  out.precision = lcs / static_cast<double>(cand.size());
  out.f = fscore(out.precision, out.recall, beta);
  return out;
}

Prf rouge_w(std::span<const std::string> ref, std::span<const std::string> cand, double weight,
            double beta) {
  if (ref.empty() || cand.empty()) return {};
  if (weight < 1.0) throw Error("rouge_w: weight must be >= 1");
  const std::size_t m = ref.size(), n = cand.size();
  auto f = [weight](double k) { return std::pow(k, weight); };
  auto f_inv = [weight](double x) { return std::pow(x, 1.0 / weight); };

  // Exact weighted LCS: maximize the sum of f(run length) over all common
  // subsequence embeddings, where a run is a block of matches consecutive in
  // BOTH sequences. Run-aware DP over (cell, diagonal chain): M(i,j) is the
  // best score of an embedding whose final match sits at (i,j); a run of
  // length k ending there must start at (i-k+1, j-k+1), so M(i,j) =
  // max_k [ best-before(start) + f(k) ] along the diagonal match chain.
  auto idx = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };
  std::vector<double> M((m + 1) * (n + 1), 0.0);
  std::vector<double> P((m + 1) * (n + 1), 0.0);  // prefix max of M
  std::vector<std::size_t> chain((m + 1) * (n + 1), 0);
  double best = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      double cell = 0.0;
      if (ref[i - 1] == cand[j - 1]) {
        const std::size_t len = chain[idx(i - 1, j - 1)] + 1;
        chain[idx(i, j)] = len;
        for (std::size_t k = 1; k <= len; ++k) {
          const double before = P[idx(i - k, j - k)];  // best closed score before the run
          cell = std::max(cell, before + f(static_cast<double>(k)));
        }
        best = std::max(best, cell);
      }
      M[idx(i, j)] = cell;
      P[idx(i, j)] = std::max({cell, P[idx(i - 1, j)], P[idx(i, j - 1)]});
    }
  }
  const double wlcs = best;
  Prf out;
  out.recall = f_inv(wlcs / f(static_cast<double>(m)));
  out.precision = f_inv(wlcs / f(static_cast<double>(n)));
  out.f = fscore(out.precision, out.recall, beta);
  return out;
}

Prf rouge_s_star(std::span<const std::string> ref, std::span<const std::string> cand, double beta) {
  const Counts cr = skip_bigram_counts(ref);
  const Counts cc = skip_bigram_counts(cand);
  const auto choose2 = [](std::size_t k) { return static_cast<double>(k) * (k - 1) / 2.0; };
  return prf_from_matches(clipped_matches(cr, cc), ref.size() < 2 ? 0.0 : choose2(ref.size()),
                          cand.size() < 2 ? 0.0 : choose2(cand.size()), beta);
}

Prf rouge_su_star(std::span<const std::string> ref, std::span<const std::string> cand,
                  double beta) {
  std::vector<std::string> mref, mcand;
  mref.reserve(ref.size() + 1);
  mcand.reserve(cand.size() + 1);
  mref.push_back(kBosMarker);
  mcand.push_back(kBosMarker);
  mref.insert(mref.end(), ref.begin(), ref.end());
  mcand.insert(mcand.end(), cand.begin(), cand.end());
  return rouge_s_star(mref, mcand, beta);
}

std::map<std::string, double> rouge_suite(const ParsedSentence& a, const ParsedSentence& b,
                                          const FeatureConfig& cfg) {
  const auto ta = lowercased_surfaces(a);
  const auto tb = lowercased_surfaces(b);
  const double beta = cfg.rouge_beta;

  auto directional = [&](const std::string& metric, std::span<const std::string> ref,
                         std::span<const std::string> cand) -> double {
    if (metric == "rouge_l") return rouge_l(ref, cand, beta).f;
    if (metric == "rouge_w") return rouge_w(ref, cand, cfg.rouge_w_weight, beta).f;
    if (metric == "rouge_s_star") return rouge_s_star(ref, cand, beta).f;
    if (metric == "rouge_su_star") return rouge_su_star(ref, cand, beta).f;
    if (metric.rfind("rouge_", 0) == 0 && metric.size() == 7 && metric[6] >= '1' &&
        metric[6] <= '9') {
      return rouge_n(ref, cand, metric[6] - '0', beta).f;
    }
    throw Error("unknown rouge metric: " + metric);
  };

  std::map<std::string, double> out;
  for (const std::string& metric : cfg.rouge_metrics) {
    // AFS is symmetric in the pair, ROUGE is not: average both directions
    out[metric] = 0.5 * (directional(metric, ta, tb) + directional(metric, tb, ta));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generalized dependency tuples

void FeatureConfig::validate() const {
  if (!any_enabled()) throw Error("feature config: no feature group enabled");
  if (ngram_max_order < 1) throw Error("feature config: ngram_max_order must be >= 1");
  if (rouge_beta <= 0.0) throw Error("feature config: rouge_beta must be positive");
  if (rouge_w_weight < 1.0) throw Error("feature config: rouge_w_weight must be >= 1");
  if (rouge && rouge_metrics.empty()) throw Error("feature config: rouge enabled with no metrics");
}

TupleMultiset dep_category_tuples(const ParsedSentence& s, const CategoryLexicon& lex,
                                  const FeatureConfig& cfg) {
  if (!s.has_dependencies()) {
    throw Error("sentence '" + s.id +
                "' has no dependency annotation; supply CoNLL-U input for the liwc feature group");
  }
  TupleMultiset tuples;
  for (const Token& t : s.tokens) {
    if (!t.head) continue;  // root edge skipped
    const Token& gov = s.tokens[*t.head];
    const Token& lexicalized =
        cfg.lexicalized_side == FeatureConfig::LexicalizedSide::governor ? gov : t;
    const Token& categorized =
        cfg.lexicalized_side == FeatureConfig::LexicalizedSide::governor ? t : gov;
    const std::vector<int> cats = lex.lookup(to_lower_ascii(categorized.surface));
    if (cats.empty()) continue;
    const std::string word = to_lower_ascii(lexicalized.surface);
    for (int c : cats) tuples[{word, c}] += 1;
  }
  return tuples;
}

double dep_overlap(const ParsedSentence& a, const ParsedSentence& b, const CategoryLexicon& lex,
                   const FeatureConfig& cfg) {
  const TupleMultiset ta = dep_category_tuples(a, lex, cfg);
  const TupleMultiset tb = dep_category_tuples(b, lex, cfg);
  std::size_t common = 0;
  for (const auto& [key, count] : ta) {
    auto it = tb.find(key);
    if (it != tb.end()) common += std::min(count, it->second);
  }
  const double len_sum = static_cast<double>(a.tokens.size() + b.tokens.size());
  const double norm =
      cfg.overlap_norm == FeatureConfig::OverlapNorm::sum_lengths ? len_sum : len_sum / 2.0;
  return norm > 0.0 ? static_cast<double>(common) / norm : 0.0;
}

// ---------------------------------------------------------------------------
// Embedding features

SentenceEmbedding sentence_embedding(const ParsedSentence& s, const EmbeddingTable& table,
                                     const StringSet& stopwords) {
  SentenceEmbedding out;
  out.vec.assign(table.dim(), 0.0);
  std::size_t used = 0;
  for (const Token& t : s.tokens) {
    if (is_punctuation_token(t.surface)) continue;
    if (stopwords.count(to_lower_ascii(t.surface))) continue;
    const std::vector<float>* vec = table.find(t.surface);
    if (!vec) continue;  // out of vocabulary
    for (std::size_t i = 0; i < out.vec.size(); ++i) out.vec[i] += static_cast<double>((*vec)[i]);
    ++used;
  }
  if (used == 0) {
    out.degenerate = true;
    return out;
  }
  for (double& v : out.vec) v /= static_cast<double>(used);
  return out;
}

std::vector<double> embedding_concat(const SentenceEmbedding& a, const SentenceEmbedding& b) {
  if (a.vec.size() != b.vec.size()) throw Error("embedding_concat: dimension mismatch");
  std::vector<double> out;
  out.reserve(a.vec.size() * 2);
  out.insert(out.end(), a.vec.begin(), a.vec.end());
  out.insert(out.end(), b.vec.begin(), b.vec.end());
  return out;
}

double embedding_cosine(const SentenceEmbedding& a, const SentenceEmbedding& b) {
  if (a.vec.size() != b.vec.size()) throw Error("embedding_cosine: dimension mismatch");
  const std::size_t n = a.vec.size();
  const double na = kernels::dot(a.vec.data(), a.vec.data(), n);
  const double nb = kernels::dot(b.vec.data(), b.vec.data(), n);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::dot(a.vec.data(), b.vec.data(), n) / std::sqrt(na * nb);
}

// ---------------------------------------------------------------------------
// Assembly

std::string FeatureLayout::fingerprint() const {
  std::string joined;
  for (const auto& n : names) {
    joined += n;
    joined.push_back(',');
  }
  return to_hex(fnv1a64(joined));
}

FeatureLayout FeatureLayout::from_config(const FeatureConfig& cfg, std::size_t embedding_dim) {
  cfg.validate();
  FeatureLayout layout;
  if (cfg.ngram) layout.names.push_back("ngram_cosine");
  if (cfg.rouge) {
    for (const auto& m : cfg.rouge_metrics) layout.names.push_back(m);
  }
  if (cfg.liwc) layout.names.push_back("liwc_dep_overlap");
  if (cfg.sts) layout.names.push_back("sts");
  if (cfg.w2v_cosine) layout.names.push_back("w2v_cosine");
  if (cfg.w2v_concat) {
    for (std::size_t i = 0; i < embedding_dim; ++i) {
      layout.names.push_back("w2v_a_" + std::to_string(i));
    }
    for (std::size_t i = 0; i < embedding_dim; ++i) {
      layout.names.push_back("w2v_b_" + std::to_string(i));
    }
  }
  return layout;
}

FeatureVector assemble_features(const pairing::ArgumentPair& pair, const ParsedSentence& a,
                                const ParsedSentence& b, const FeatureConfig& cfg,
                                const FeatureResources& res) {
  cfg.validate();
  if (cfg.liwc && !res.lexicon) throw Error("feature group 'liwc' needs a category lexicon");
  if ((cfg.w2v_cosine || cfg.w2v_concat) && !res.embeddings) {
    throw Error("feature groups 'w2v_*' need an embedding table");
  }
  if ((cfg.w2v_cosine || cfg.w2v_concat) && !res.stopwords) {
    throw Error("feature groups 'w2v_*' need a stopword list");
  }

  FeatureVector fv;
  fv.pair_id = pair.pair_id;
  if (cfg.ngram) fv.values.push_back(ngram_cosine(a, b, cfg.ngram_max_order));
  if (cfg.rouge) {
    const auto scores = rouge_suite(a, b, cfg);
    for (const auto& m : cfg.rouge_metrics) fv.values.push_back(scores.at(m));
  }
  if (cfg.liwc) fv.values.push_back(dep_overlap(a, b, *res.lexicon, cfg));
  if (cfg.sts) fv.values.push_back(pair.sts_prescore);
  if (cfg.w2v_cosine || cfg.w2v_concat) {
    const SentenceEmbedding ea = sentence_embedding(a, *res.embeddings, *res.stopwords);
    const SentenceEmbedding eb = sentence_embedding(b, *res.embeddings, *res.stopwords);
    if (cfg.w2v_cosine) fv.values.push_back(embedding_cosine(ea, eb));
    if (cfg.w2v_concat) {
      const std::vector<double> cat = embedding_concat(ea, eb);
      fv.values.insert(fv.values.end(), cat.begin(), cat.end());
    }
  }
  return fv;
}

}  // namespace argsim::features
