// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion runs end to end, prints one PASS/FAIL
// line, and the process exits nonzero if any criterion fails. Criterion 6
// (full replication) is conditional on an external corpus; without it the
// criterion is reported as SKIP and does not fail the suite.
//
// Usage: acceptance_tests [path-to-argsim-binary]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "argsim/aq.hpp"
#include "argsim/common.hpp"
#include "argsim/config.hpp"
#include "argsim/corpus.hpp"
#include "argsim/csv.hpp"
#include "argsim/features.hpp"
#include "argsim/kernels.hpp"
#include "argsim/ml.hpp"
#include "argsim/pairing.hpp"
#include "argsim/report.hpp"
#include "oracles.hpp"

using namespace argsim;
namespace fs = std::filesystem;

namespace {

std::string g_argsim_bin;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

ParsedSentence make_sentence(const std::string& id, const std::vector<std::string>& tokens,
                             bool with_deps) {
  ParsedSentence s;
  s.id = id;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token t;
    t.surface = tokens[i];
    t.lemma = to_lower_ascii(tokens[i]);
    t.upos = "NOUN";
    if (with_deps && i > 0) {
      t.head = static_cast<std::uint32_t>(i - 1);
      t.deprel = "dep";
    }
    s.tokens.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s.raw_text += ' ';
    s.raw_text += tokens[i];
  }
  return s;
}

// ---------------------------------------------------------------------------
// 1. metric oracle equivalence

Check criterion_metrics() {
  Check c;
  Rng rng(11001);
  const std::vector<std::string> vocab{"a", "b", "c", "d"};

  std::map<int, features::CategoryLexicon::Category> cats;
  cats[1] = {"letters", std::nullopt};
  cats[2] = {"ab", 1};
  cats[3] = {"cd", 1};
  const auto lex = features::CategoryLexicon::from_parts(
      std::move(cats), {{"a", {2}}, {"b", {2}}, {"c", {3}}, {"d", {3}}});
  features::FeatureConfig fc;

  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    std::vector<std::string> sa, sb;
    const std::size_t la = 1 + rng.bounded(8), lb = 1 + rng.bounded(8);
    for (std::size_t i = 0; i < la; ++i) sa.push_back(vocab[rng.bounded(vocab.size())]);
    for (std::size_t i = 0; i < lb; ++i) sb.push_back(vocab[rng.bounded(vocab.size())]);

    auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-12; };
    for (int n = 1; n <= 4; ++n) {
      const auto got = features::rouge_n(sa, sb, n, 1.0);
      const auto want = oracle::rouge_n(sa, sb, n, 1.0);
      c.require(close(got.f, want.f) && close(got.precision, want.precision) &&
                    close(got.recall, want.recall),
                "rouge_" + std::to_string(n) + " mismatch at trial " + std::to_string(trial));
    }
    c.require(close(features::rouge_l(sa, sb, 1.0).f, oracle::rouge_l(sa, sb, 1.0).f),
              "rouge_l mismatch at trial " + std::to_string(trial));
    c.require(close(features::rouge_w(sa, sb, 1.2, 1.0).f, oracle::rouge_w(sa, sb, 1.2, 1.0).f),
              "rouge_w mismatch at trial " + std::to_string(trial));
    c.require(
        close(features::rouge_s_star(sa, sb, 1.0).f, oracle::rouge_s_star(sa, sb, 1.0).f),
        "rouge_s_star mismatch at trial " + std::to_string(trial));
    c.require(
        close(features::rouge_su_star(sa, sb, 1.0).f, oracle::rouge_su_star(sa, sb, 1.0).f),
        "rouge_su_star mismatch at trial " + std::to_string(trial));

    const auto pa = make_sentence("a", sa, true);
    const auto pb = make_sentence("b", sb, true);
    c.require(close(features::ngram_cosine(pa, pb, 3), oracle::ngram_cosine(sa, sb, 3)),
              "ngram_cosine mismatch at trial " + std::to_string(trial));

    auto flatten = [&](const features::TupleMultiset& m) {
      std::vector<std::pair<std::string, int>> out;
      for (const auto& [key, count] : m) {
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(key.first, key.second);
      }
      return out;
    };
    const auto fa = flatten(features::dep_category_tuples(pa, lex, fc));
    const auto fb = flatten(features::dep_category_tuples(pb, lex, fc));
    const double want_overlap = static_cast<double>(oracle::multiset_intersection(fa, fb)) /
                                static_cast<double>(la + lb);
    c.require(close(features::dep_overlap(pa, pb, lex, fc), want_overlap),
              "dep_overlap mismatch at trial " + std::to_string(trial));
  }
  return c;
}

// ---------------------------------------------------------------------------
// 2. solver oracle equivalence

Check criterion_solvers() {
  Check c;
  Rng rng(22002);

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    const std::size_t n = 5 + rng.bounded(26);  // <= 30
    const std::size_t d = 1 + rng.bounded(std::min<std::size_t>(10, n - 1));
    std::vector<std::vector<double>> X(n, std::vector<double>(d));
    std::vector<double> y(n);
    for (auto& row : X) {
      for (double& v : row) v = 4.0 * (rng.unit() - 0.5);
    }
    for (double& v : y) v = 6.0 * (rng.unit() - 0.5);
    const double alpha = 0.05 + 20.0 * rng.unit();

    ml::Matrix M(n, d);
    for (std::size_t i = 0; i < n; ++i) std::copy(X[i].begin(), X[i].end(), M.row(i));
    const auto model = ml::ridge_fit(M, y, alpha);
    const auto want = oracle::ridge_normal_equations(X, y, alpha, true);
    for (std::size_t j = 0; j < d; ++j) {
      const double scale = std::max(1.0, std::fabs(want.weights[j]));
      c.require(std::fabs(model.weights[j] - want.weights[j]) <= 1e-8 * scale,
                "ridge weight mismatch at trial " + std::to_string(trial));
    }
    c.require(std::fabs(model.intercept - want.intercept) <=
                  1e-8 * std::max(1.0, std::fabs(want.intercept)),
              "ridge intercept mismatch at trial " + std::to_string(trial));
  }

  for (int trial = 0; trial < 20 && c.ok; ++trial) {
    const std::size_t n = 8 + rng.bounded(23);  // <= 30
    const std::size_t d = 1 + rng.bounded(3);
    std::vector<std::vector<double>> X(n, std::vector<double>(d));
    std::vector<double> y(n);
    for (auto& row : X) {
      for (double& v : row) v = 4.0 * (rng.unit() - 0.5);
    }
    for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(1.7 * X[i][0]) + 0.4 * rng.unit();
    const double C = 0.5 + 9.5 * rng.unit();
    const double gamma = 0.3 + 1.2 * rng.unit();
    const double eps = 0.02 + 0.15 * rng.unit();

    ml::Matrix M(n, d);
    for (std::size_t i = 0; i < n; ++i) std::copy(X[i].begin(), X[i].end(), M.row(i));

    // KKT suite on the default-tolerance solve
    const auto model = ml::svr_fit(M, y, C, gamma, eps);
    c.require(model.converged, "svr did not converge at trial " + std::to_string(trial));
    double beta_sum = 0.0;
    for (double b : model.dual_coefs) {
      c.require(std::fabs(b) <= C + 1e-9, "dual outside [-C, C] at trial " + std::to_string(trial));
      beta_sum += b;
    }
    c.require(std::fabs(beta_sum) <= 1e-6 * C,
              "dual coefficients do not sum to zero at trial " + std::to_string(trial));
    const auto fitted = ml::predict(model, M);
    // map duals back to rows to check the in-tube condition
    std::vector<double> beta(n, 0.0);
    for (std::size_t s = 0; s < model.support_vectors.rows; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        bool same = beta[i] == 0.0;
        for (std::size_t j = 0; same && j < d; ++j) {
          same = model.support_vectors.at(s, j) == X[i][j];
        }
        if (same) {
          beta[i] = model.dual_coefs[s];
          break;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(y[i] - fitted[i]) < eps - 5e-3) {
        c.require(std::fabs(beta[i]) <= 1e-3 * C,
                  "in-tube point carries dual weight at trial " + std::to_string(trial));
      }
    }

    // prediction equivalence against the projected-gradient oracle,
    // solved tighter than the comparison tolerance
    ml::SvrOptions opts;
    opts.tol = 1e-6;
    opts.max_iter = 10000000;
    const auto tight = ml::svr_fit(M, y, C, gamma, eps, opts);
    const auto tight_fit = ml::predict(tight, M);
    const auto sol = oracle::svr_projected_gradient(X, y, C, gamma, eps, 2000000);
    for (std::size_t i = 0; i < n; ++i) {
      const double want = oracle::svr_oracle_predict(sol, X, gamma, X[i]);
      c.require(std::fabs(tight_fit[i] - want) <= 1e-3,
                "svr prediction differs from the QP oracle at trial " + std::to_string(trial));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 3. statistics

Check criterion_statistics() {
  Check c;
  Rng rng(33003);

  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    const std::size_t n = 3 + rng.bounded(40);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 10.0 * (rng.unit() - 0.5);
      b[i] = 0.5 * a[i] + 3.0 * (rng.unit() - 0.5);
    }
    c.require(std::fabs(ml::pearson_r(a, b) - oracle::pearson_naive(a, b)) <= 1e-12,
              "pearson_r differs from the naive oracle");
    c.require(std::fabs(ml::rmse(a, b) - oracle::rmse_naive(a, b)) <= 1e-12,
              "rmse differs from the naive oracle");
  }

  {
    // paired t worked example: diffs 1..5
    const std::vector<double> a{2, 4, 6, 8, 10}, b{1, 2, 3, 4, 5};
    const auto res = ml::paired_ttest(a, b);
    c.require(std::fabs(res.t - 4.242640687119285) <= 1e-6, "paired t statistic mismatch");
    c.require(res.df == 4, "paired t df mismatch");
    const double p_want = 2.0 * (1.0 - oracle::t_cdf_quadrature(res.t, 4));
    c.require(std::fabs(res.p - p_want) <= 1e-6, "paired t p-value mismatch");
  }

  for (double df : {1.0, 2.0, 3.0, 4.0, 7.0, 12.0, 30.0, 120.0}) {
    for (double t : {-15.0, -4.0, -1.3, -0.2, 0.0, 0.5, 1.0, 2.776, 6.0, 20.0}) {
      if (!c.ok) break;
      c.require(std::fabs(ml::t_cdf(t, df) - oracle::t_cdf_quadrature(t, df)) <= 1e-8,
                "t_cdf differs from quadrature at t=" + std::to_string(t) +
                    " df=" + std::to_string(df));
    }
  }

  {
    // Monte-Carlo calibration at the 5% level
    int rejections = 0;
    const int trials = 10000;
    std::vector<double> d(10), zero(10, 0.0);
    for (int trial = 0; trial < trials; ++trial) {
      for (double& v : d) v = rng.normal();
      if (ml::paired_ttest(d, zero).p < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / trials;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "MC rejection rate %.4f", rate);
    c.note(buf);
    c.require(rate >= 0.035 && rate <= 0.065, "t-test miscalibrated: " + std::string(buf));
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. synthetic pipeline property

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<pairing::ArgumentPair> pairs;
  features::CategoryLexicon lexicon;
  features::EmbeddingTable embeddings;
  StringSet stopwords;
};

SyntheticCorpus synthetic_afs_corpus(std::size_t n_pairs, std::uint64_t seed) {
  SyntheticCorpus out;
  out.corpus.topic = "synthetic";
  Rng rng(seed);

  constexpr std::size_t kFamilies = 10, kWordsPerFamily = 6, kDim = 8;
  std::vector<std::vector<std::string>> families(kFamilies);
  std::vector<std::pair<std::string, std::vector<float>>> vectors;
  std::map<int, features::CategoryLexicon::Category> cats;
  std::vector<std::pair<std::string, std::vector<int>>> entries;
  cats[100] = {"themes_low", std::nullopt};
  cats[101] = {"themes_high", std::nullopt};
  for (std::size_t f = 0; f < kFamilies; ++f) {
    cats[static_cast<int>(f)] = {"family" + std::to_string(f),
                                 f < kFamilies / 2 ? 100 : 101};
    std::vector<float> centroid(kDim);
    for (float& v : centroid) v = static_cast<float>(rng.normal());
    for (std::size_t w = 0; w < kWordsPerFamily; ++w) {
      const std::string word = "t" + std::to_string(f) + "w" + std::to_string(w);
      families[f].push_back(word);
      entries.push_back({word, {static_cast<int>(f)}});
      std::vector<float> vec(kDim);
      for (std::size_t k = 0; k < kDim; ++k) {
        vec[k] = centroid[k] + 0.3f * static_cast<float>(rng.normal());
      }
      vectors.emplace_back(word, std::move(vec));
    }
  }
  out.lexicon = features::CategoryLexicon::from_parts(std::move(cats), std::move(entries));
  out.embeddings = features::EmbeddingTable::from_vectors(kDim, std::move(vectors));

  auto random_word = [&](const std::vector<std::size_t>& theme) {
    const std::size_t f = theme[rng.bounded(theme.size())];
    return families[f][rng.bounded(kWordsPerFamily)];
  };

  for (std::size_t p = 0; p < n_pairs; ++p) {
    std::vector<std::size_t> theme;
    while (theme.size() < 3) {
      const std::size_t f = rng.bounded(kFamilies);
      if (std::find(theme.begin(), theme.end(), f) == theme.end()) theme.push_back(f);
    }
    const double copy_rate = rng.unit();

    std::vector<std::string> sa;
    const std::size_t la = 8 + rng.bounded(9);
    while (sa.size() < la) {
      sa.push_back(random_word(theme));
      if (rng.unit() < 0.15 && sa.size() < la) sa.push_back(sa.back());  // duplicates
    }
    std::vector<std::string> sb;
    for (const auto& w : sa) {
      if (rng.unit() < copy_rate) sb.push_back(w);
    }
    const std::size_t lb = 8 + rng.bounded(9);
    while (sb.size() < lb) {
      const std::size_t pos = rng.bounded(sb.size() + 1);
      sb.insert(sb.begin() + static_cast<std::ptrdiff_t>(pos), random_word(theme));
    }

    const std::string ida = "syn" + std::to_string(p) + "a";
    const std::string idb = "syn" + std::to_string(p) + "b";
    out.corpus.sentences.push_back(make_sentence(ida, sa, true));
    out.corpus.sentences.push_back(make_sentence(idb, sb, true));

    std::set<std::string> seta(sa.begin(), sa.end()), setb(sb.begin(), sb.end());
    std::size_t inter = 0;
    for (const auto& w : seta) inter += setb.count(w);
    const double jacc =
        static_cast<double>(inter) / static_cast<double>(seta.size() + setb.size() - inter);

    pairing::ArgumentPair pair;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04zu", p);
    pair.pair_id = buf;
    pair.sent_a = ida;
    pair.sent_b = idb;
    // a weak, noisy prescore standing in for an external STS hint
    pair.sts_prescore = std::clamp(jacc + 0.25 * rng.normal(), 0.0, 1.0);
    // gold AFS: noisy monotone function of lexical overlap, sd 0.3 on 0-5
    pair.gold_afs = std::clamp(5.0 * std::min(1.0, 1.5 * jacc) + 0.3 * rng.normal(), 0.0, 5.0);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

Check criterion_pipeline_property() {
  Check c;
  const SyntheticCorpus syn = synthetic_afs_corpus(500, 44004);

  features::FeatureResources res;
  res.lexicon = &syn.lexicon;
  res.embeddings = &syn.embeddings;
  res.stopwords = &syn.stopwords;

  report::ExperimentConfig cfg;
  {
    report::ExperimentRow row;
    row.name = "ngram";
    row.features = features::FeatureConfig{};
    row.features.rouge = row.features.liwc = row.features.sts = false;
    row.features.w2v_cosine = row.features.w2v_concat = false;
    row.kind = ml::ModelKind::svr;
    cfg.rows.push_back(row);
  }
  {
    report::ExperimentRow row;
    row.name = "combined";
    row.features = features::FeatureConfig{};  // every group enabled
    row.kind = ml::ModelKind::svr;
    cfg.rows.push_back(row);
  }

  ml::GridSpec grids;
  grids.svr_C = {1.0, 10.0};
  grids.svr_gamma = {0.1, 1.0};
  grids.svr_epsilon = {0.1};

  const auto table = report::run_table(syn.pairs, syn.corpus, res, cfg, grids, 10, 3, 909, 2);
  const double r_ngram = table.rows[0].mean_r.value_or(-1.0);
  const double r_combined = table.rows[1].mean_r.value_or(-1.0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "combined r=%.4f, ngram r=%.4f", r_combined, r_ngram);
  c.note(buf);
  c.require(r_combined >= 0.85, "combined model r below 0.85 (" + std::string(buf) + ")");
  c.require(r_combined > r_ngram,
            "combined model does not beat the ngram-only model (" + std::string(buf) + ")");
  return c;
}

// ---------------------------------------------------------------------------
// 5. paper-rule conformance from config defaults

Check criterion_conformance() {
  Check c;
  const auto cfg = PipelineConfig::from_file(ConfigFile::from_string("[global]\nseed = 3\n"));

  // zero rule: threshold of 4 dictionary words, verbless sentences only
  c.require(cfg.aq.zero_rule_min_dict_words == 4, "default zero-rule word count is not 4");
  const Dictionary dict = Dictionary::from_words({"the", "law", "works", "people"});
  const auto junk = make_sentence("j", {"zz", "qq", "ww"}, false);
  c.require(aq::rescore_aq(junk, 0.9, dict, cfg.aq) == 0.0, "zero rule did not fire");
  auto wordy = make_sentence("w", {"the", "law", "works", "people"}, false);
  c.require(aq::rescore_aq(wordy, 0.9, dict, cfg.aq) == 0.9,
            "zero rule fired with 4 dictionary words");

  // 10-40 token band, inclusive
  c.require(cfg.aq.min_tokens == 10 && cfg.aq.max_tokens == 40, "default band is not 10-40");
  std::vector<ParsedSentence> lengths;
  for (std::size_t n : {9u, 10u, 40u, 41u}) {
    std::vector<std::string> toks(n, "w");
    lengths.push_back(make_sentence("len" + std::to_string(n), toks, false));
  }
  const auto part = aq::filter_by_length(lengths, cfg.aq);
  c.require(part.kept == std::vector<std::size_t>{1, 2} &&
                part.dropped_short == std::vector<std::size_t>{0} &&
                part.dropped_long == std::vector<std::size_t>{3},
            "10-40 band not enforced inclusively");

  // 0.55 threshold and the bin scheme
  c.require(cfg.aq.high_aq_threshold == 0.55, "default AQ threshold is not 0.55");
  const std::vector<double> edges{0.55, 0.65, 0.75, 0.85, 0.95, 1.0};
  c.require(cfg.aq.bin_edges == edges, "default bin edges are not .55-1.0 in .10 steps");
  std::vector<aq::ScoredSentence> scored{{0, "x", 0.54}, {1, "y", 0.57}, {2, "z", 1.0}};
  const auto bins = aq::bin_by_score(scored, cfg.aq);
  c.require(bins.below_range.size() == 1 && bins.bins[0].size() == 1 &&
                bins.bins[4].size() == 1,
            "bin boundaries not enforced");

  // 2000-pair target and the cap of 10
  c.require(cfg.pairs.target_pairs == 2000, "default pair target is not 2000");
  c.require(cfg.pairs.per_sentence_cap == 10, "default per-sentence cap is not 10");
  {
    Corpus hub;
    hub.topic = "t";
    hub.sentences.push_back(make_sentence("hub", {"alpha", "beta", "gamma"}, false));
    for (int i = 0; i < 14; ++i) {
      hub.sentences.push_back(
          make_sentence("s" + std::to_string(10 + i), {"alpha", "beta", "x" + std::to_string(i)},
                        false));
    }
    pairing::ProxyStsScorer scorer(hub, StringSet{});
    const auto sel = pairing::select_pairs(hub, scorer, cfg.pairs);
    std::map<std::string, int> usage;
    for (const auto& p : sel.pairs) {
      ++usage[p.sent_a];
      ++usage[p.sent_b];
    }
    bool capped = true;
    for (const auto& [id, n] : usage) capped = capped && n <= cfg.pairs.per_sentence_cap;
    c.require(capped && usage["hub"] == 10, "cap-10 constraint not enforced");
  }

  // 90/10 split and the 10-fold protocol
  c.require(cfg.experiment.set_aside_fraction == 0.10, "default set-aside fraction is not 0.10");
  std::vector<pairing::ArgumentPair> pairs(2000);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].pair_id = "p" + std::to_string(i);
  }
  const auto split = report::split_setaside(pairs, cfg.experiment.set_aside_fraction, cfg.seed);
  c.require(split.setaside.size() == 200 && split.dev.size() == 1800,
            "90/10 split sizes are wrong");
  c.require(cfg.outer_k == 10, "default outer fold count is not 10");
  {
    Rng rng(5);
    ml::Matrix X(60, 2);
    for (double& v : X.data) v = rng.unit();
    std::vector<double> y(60);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = X.at(i, 0) + 0.1 * rng.unit();
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < y.size(); ++i) ids.push_back("r" + std::to_string(i));
    const auto grid = ml::default_ridge_grid();
    const auto report = ml::nested_cv(ml::ModelKind::ridge, X, y, ids, grid, cfg.outer_k, 1);
    c.require(report.folds.size() == 10, "nested CV does not run 10 outer folds");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. conditional full replication

Check criterion_replication() {
  Check c;
  const char* dir_env = std::getenv("ARGSIM_REPLICATION_DIR");
  if (!dir_env || !fs::exists(dir_env)) {
    c.note("SKIP: released AFS corpus not supplied (set ARGSIM_REPLICATION_DIR)");
    return c;
  }
  const fs::path dir(dir_env);
  const fs::path emb_path_txt = dir / "embeddings.txt";
  const fs::path emb_path_bin = dir / "embeddings.bin";
  if (!fs::exists(emb_path_txt) && !fs::exists(emb_path_bin)) {
    c.note("SKIP: no embeddings.{txt,bin} in replication dir");
    return c;
  }
  const auto embeddings = features::EmbeddingTable::load_file(
      fs::exists(emb_path_bin) ? emb_path_bin.string() : emb_path_txt.string());

  const std::map<std::string, double> targets{{"gc", 0.73}, {"gm", 0.54}, {"dp", 0.63}};
  StringSet stopwords = load_wordlist(std::string(ARGSIM_SOURCE_DIR) + "/data/stopwords.txt");
  std::optional<features::CategoryLexicon> lexicon;
  const fs::path lex_path = dir / "lexicon.txt";
  lexicon = features::CategoryLexicon::load_file(
      fs::exists(lex_path) ? lex_path.string()
                           : std::string(ARGSIM_SOURCE_DIR) + "/data/lexicon.txt");

  for (const auto& [topic, target_r] : targets) {
    const fs::path tdir = dir / topic;
    if (!fs::exists(tdir)) {
      c.note("SKIP topic " + topic + ": directory missing");
      continue;
    }
    std::ifstream corpus_in(tdir / "corpus.conllu", std::ios::binary);
    if (!corpus_in) {
      c.note("SKIP topic " + topic + ": corpus.conllu missing");
      continue;
    }
    auto parsed = parse_conllu(corpus_in, topic);
    Corpus corpus;
    corpus.topic = topic;
    corpus.sentences = std::move(parsed.sentences);
    auto pairs = pairing::load_pairs_csv((tdir / "pairs.csv").string());
    const auto annotations =
        pairing::load_afs_annotations((tdir / "afs_annotations.csv").string());
    pairing::merge_annotations(pairs, annotations);

    const auto split = report::split_setaside(pairs, 0.10, 1);
    std::vector<pairing::ArgumentPair> dev;
    for (std::size_t i : split.dev) {
      if (pairs[i].gold_afs) dev.push_back(pairs[i]);
    }

    features::FeatureResources res;
    res.stopwords = &stopwords;
    res.lexicon = &*lexicon;
    res.embeddings = &embeddings;

    report::ExperimentConfig cfg;
    {
      report::ExperimentRow row;
      row.name = "combined";  // Table 3 row 8 analogue
      row.features = features::FeatureConfig{};
      row.features.w2v_cosine = false;
      row.kind = ml::ModelKind::svr;
      cfg.rows.push_back(row);
    }
    {
      report::ExperimentRow row;
      row.name = "cosine_only";
      row.features = features::FeatureConfig{};
      row.features.ngram = row.features.rouge = row.features.liwc = row.features.sts = false;
      row.features.w2v_concat = false;
      row.kind = ml::ModelKind::svr;
      cfg.rows.push_back(row);
    }
    const auto table =
        report::run_table(dev, corpus, res, cfg, ml::GridSpec{}, 10, 3, 1, 2);
    const double combined_r = table.rows[0].mean_r.value_or(-1.0);
    const double cosine_r = table.rows[1].mean_r.value_or(-1.0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: combined r=%.3f (target %.2f), cosine r=%.3f",
                  topic.c_str(), combined_r, target_r, cosine_r);
    c.note(buf);
    c.require(std::fabs(combined_r - target_r) <= 0.07,
              std::string(buf) + " outside the +/-0.07 window");
    c.require(combined_r > cosine_r, std::string(buf) + ": concatenation does not beat cosine");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. determinism of the full pipeline

Check criterion_determinism() {
  Check c;
  if (g_argsim_bin.empty() || !fs::exists(g_argsim_bin)) {
    c.ok = false;
    c.detail = "argsim binary path not supplied";
    return c;
  }
  const std::string config = std::string(ARGSIM_SOURCE_DIR) + "/data/mini/config.ini";
  const fs::path base = fs::temp_directory_path() / ("argsim_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const std::vector<std::string> commands{"ingest",    "filter-aq", "bin-report",
                                          "sample-pairs", "featurize", "train",
                                          "evaluate",  "score",     "export-qualitative"};
  for (const char* run : {"runA", "runB"}) {
    const fs::path out = base / run;
    for (const auto& cmd : commands) {
      const std::string invocation = "ARGSIM_SIMD=scalar " + g_argsim_bin + " --config " + config +
                                     " --out " + out.string() + " " + cmd + " >/dev/null 2>&1";
      if (std::system(invocation.c_str()) != 0) {
        c.ok = false;
        c.detail = std::string(run) + ": command failed: " + cmd;
        fs::remove_all(base);
        return c;
      }
    }
  }

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string manifest_a = slurp(base / "runA" / "manifest.json");
  const std::string manifest_b = slurp(base / "runB" / "manifest.json");
  c.require(!manifest_a.empty(), "manifest missing");
  c.require(manifest_a == manifest_b, "manifests differ between identical runs");

  // belt and braces: every artifact byte-identical, not just the hashes
  std::size_t artifacts = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "runA")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), base / "runA");
    ++artifacts;
    if (slurp(entry.path()) != slurp(base / "runB" / rel)) {
      c.require(false, "artifact differs between runs: " + rel.string());
    }
  }
  c.note(std::to_string(artifacts) + " artifacts compared");
  fs::remove_all(base);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_argsim_bin = argv[1];
  kernels::force_backend("scalar");  // reference semantics for reproducibility

  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> fn;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "metric oracle equivalence", criterion_metrics, 10.0},
      {2, "solver oracle equivalence", criterion_solvers, 60.0},
      {3, "statistics oracles and calibration", criterion_statistics, 60.0},
      {4, "synthetic pipeline property", criterion_pipeline_property, 300.0},
      {5, "paper-rule conformance", criterion_conformance, 60.0},
      {6, "full replication (conditional)", criterion_replication, 3600.0},
      {7, "pipeline determinism", criterion_determinism, 300.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criterion.fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      result.ok = false;
      result.detail += (result.detail.empty() ? "" : "; ");
      result.detail += "runtime budget exceeded";
    }
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", result.ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, seconds, result.detail.empty() ? "" : " - ",
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
