// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/report.hpp"

using namespace argsim;

namespace {

ParsedSentence plain(const std::string& id, const std::vector<std::string>& surfaces) {
  ParsedSentence s;
  s.id = id;
  for (const auto& w : surfaces) {
    Token t;
    t.surface = w;
    t.lemma = to_lower_ascii(w);
    t.upos = "NOUN";
    s.tokens.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (i) s.raw_text += ' ';
    s.raw_text += surfaces[i];
  }
  return s;
}

std::vector<pairing::ArgumentPair> dummy_pairs(std::size_t n) {
  std::vector<pairing::ArgumentPair> pairs(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04zu", i);
    pairs[i].pair_id = buf;
    pairs[i].sent_a = "a";
    pairs[i].sent_b = "b";
  }
  return pairs;
}

features::FeatureConfig groups_only(bool ngram, bool rouge) {
  features::FeatureConfig cfg;
  cfg.ngram = ngram;
  cfg.rouge = rouge;
  cfg.liwc = cfg.sts = cfg.w2v_cosine = cfg.w2v_concat = false;
  return cfg;
}

// corpus + pairs where gold AFS tracks an order-sensitive overlap signal
// that the rouge family captures much better than pooled ngram cosine
struct Fixture {
  Corpus corpus;
  std::vector<pairing::ArgumentPair> pairs;
};

Fixture rouge_signal_fixture(std::size_t n_pairs, std::uint64_t seed) {
  Fixture fx;
  fx.corpus.topic = "synthetic";
  Rng rng(seed);
  const std::vector<std::string> vocab{"guns", "kill",  "people", "law",   "fear", "court",
                                       "vote", "crime", "safety", "right", "ban",  "state"};
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const std::size_t la = 4 + rng.bounded(7);
    std::vector<std::string> sa;
    for (std::size_t i = 0; i < la; ++i) sa.push_back(vocab[rng.bounded(vocab.size())]);
    // copy an in-order subset, pad with random words
    const double keep = rng.unit();
    std::vector<std::string> sb;
    for (const auto& w : sa) {
      if (rng.unit() < keep) sb.push_back(w);
    }
    const std::size_t lb = 4 + rng.bounded(7);
    while (sb.size() < lb) sb.push_back(vocab[rng.bounded(vocab.size())]);

    const std::string ida = "s" + std::to_string(p) + "a";
    const std::string idb = "s" + std::to_string(p) + "b";
    fx.corpus.sentences.push_back(plain(ida, sa));
    fx.corpus.sentences.push_back(plain(idb, sb));

    pairing::ArgumentPair pair;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04zu", p);
    pair.pair_id = buf;
    pair.sent_a = ida;
    pair.sent_b = idb;
    pair.sts_prescore = 0.0;
    const double su = 0.5 * (features::rouge_su_star(sa, sb, 1.0).f +
                             features::rouge_su_star(sb, sa, 1.0).f);
    pair.gold_afs = 5.0 * su;
    fx.pairs.push_back(std::move(pair));
  }
  return fx;
}

}  // namespace

TEST_CASE("split_setaside: 2000 pairs at 0.1 give 1800/200, deterministic partition") {
  const auto pairs = dummy_pairs(2000);
  const auto split = report::split_setaside(pairs, 0.1, 42);
  CHECK(split.setaside.size() == 200);
  CHECK(split.dev.size() == 1800);

  const auto again = report::split_setaside(pairs, 0.1, 42);
  CHECK(split.dev == again.dev);
  CHECK(split.setaside == again.setaside);

  std::set<std::size_t> all;
  for (std::size_t i : split.dev) all.insert(i);
  for (std::size_t i : split.setaside) all.insert(i);
  CHECK(all.size() == 2000);
  CHECK(*all.rbegin() == 1999);

  const auto other_seed = report::split_setaside(pairs, 0.1, 43);
  CHECK(other_seed.setaside != split.setaside);

  CHECK_THROWS_AS(report::split_setaside(pairs, 0.6, 1), Error);
}

TEST_CASE("split_setaside is keyed to pair ids, not positions") {
  auto pairs = dummy_pairs(100);
  const auto base = report::split_setaside(pairs, 0.1, 9);
  std::set<std::string> base_aside;
  for (std::size_t i : base.setaside) base_aside.insert(pairs[i].pair_id);

  Rng rng(1);
  rng.shuffle(pairs);
  const auto shuffled = report::split_setaside(pairs, 0.1, 9);
  std::set<std::string> shuffled_aside;
  for (std::size_t i : shuffled.setaside) shuffled_aside.insert(pairs[i].pair_id);
  CHECK(base_aside == shuffled_aside);
}

TEST_CASE("run_table: single row equals a direct nested_cv call") {
  const Fixture fx = rouge_signal_fixture(60, 11);
  features::FeatureResources res;

  report::ExperimentConfig cfg;
  report::ExperimentRow row;
  row.name = "ngram";
  row.features = groups_only(true, false);
  row.kind = ml::ModelKind::ridge;
  cfg.rows.push_back(row);

  ml::GridSpec grids;
  const auto table = report::run_table(fx.pairs, fx.corpus, res, cfg, grids, 5, 3, 77);
  REQUIRE(table.rows.size() == 1);

  const auto fm = report::build_feature_matrix(fx.pairs, fx.corpus, row.features, res);
  ml::Matrix X;
  std::vector<double> y;
  std::vector<std::string> ids;
  fm.gold_subset(X, y, ids);
  const auto grid = grids.build(ml::ModelKind::ridge, X.cols);
  const auto direct = ml::nested_cv(ml::ModelKind::ridge, X, y, ids, grid, 5, 77, 3);

  CHECK(table.rows[0].mean_rmse == direct.mean_rmse);
  CHECK(table.rows[0].mean_r == direct.mean_r);
  REQUIRE(table.rows[0].cv.folds.size() == direct.folds.size());
  for (std::size_t f = 0; f < direct.folds.size(); ++f) {
    CHECK(table.rows[0].cv.folds[f].rmse == direct.folds[f].rmse);
  }
  // the table row repeats its CV aggregates exactly
  CHECK(table.rows[0].mean_rmse == table.rows[0].cv.mean_rmse);
  CHECK(table.rows[0].mean_r == table.rows[0].cv.mean_r);

  // identical seed and config reproduce the table bitwise
  const auto rerun = report::run_table(fx.pairs, fx.corpus, res, cfg, grids, 5, 3, 77);
  CHECK(rerun.rows[0].mean_rmse == table.rows[0].mean_rmse);
  CHECK(rerun.rows[0].mean_r == table.rows[0].mean_r);
  for (std::size_t f = 0; f < rerun.rows[0].cv.folds.size(); ++f) {
    CHECK(rerun.rows[0].cv.folds[f].rmse == table.rows[0].cv.folds[f].rmse);
  }
}

TEST_CASE("run_table: rouge adds signal over ngram and the t-test sees it") {
  const Fixture fx = rouge_signal_fixture(80, 23);
  features::FeatureResources res;

  report::ExperimentConfig cfg;
  {
    report::ExperimentRow row;
    row.name = "ngram";
    row.features = groups_only(true, false);
    row.kind = ml::ModelKind::ridge;
    cfg.rows.push_back(row);
  }
  {
    report::ExperimentRow row;
    row.name = "ngram+rouge";
    row.features = groups_only(true, true);
    row.kind = ml::ModelKind::ridge;
    cfg.rows.push_back(row);
  }
  cfg.significance_pairs.emplace_back("ngram+rouge", "ngram");

  const auto table = report::run_table(fx.pairs, fx.corpus, res, cfg, ml::GridSpec{}, 10, 3, 5);
  REQUIRE(table.rows.size() == 2);
  const double ngram_rmse = table.rows[0].mean_rmse;
  const double combined_rmse = table.rows[1].mean_rmse;
  CHECK(combined_rmse < ngram_rmse);
  REQUIRE(table.significance.size() == 1);
  CHECK(table.significance[0].test.p < 0.05);
  CHECK(table.significance[0].test.df == 9);

  std::ostringstream text;
  report::write_result_text(text, table);
  CHECK(text.str().find("ngram+rouge") != std::string::npos);
  std::ostringstream csv;
  report::write_result_csv(csv, table);
  CHECK(csv.str().find("feature_set,model,r,rmse") == 0);
}

TEST_CASE("run_table requires gold on every dev pair") {
  Fixture fx = rouge_signal_fixture(20, 3);
  fx.pairs[5].gold_afs.reset();
  report::ExperimentConfig cfg;
  report::ExperimentRow row;
  row.name = "ngram";
  row.features = groups_only(true, false);
  row.kind = ml::ModelKind::ridge;
  cfg.rows.push_back(row);
  features::FeatureResources res;
  CHECK_THROWS_WITH_AS(
      report::run_table(fx.pairs, fx.corpus, res, cfg, ml::GridSpec{}, 5, 3, 1),
      doctest::Contains("gold"), Error);
}

TEST_CASE("qualitative_export: empty set-aside and layout arithmetic") {
  const Fixture fx = rouge_signal_fixture(10, 9);
  features::FeatureResources res;
  report::ExperimentConfig cfg;
  report::ExperimentRow row;
  row.name = "ngram";
  row.features = groups_only(true, false);
  row.kind = ml::ModelKind::ridge;
  cfg.rows.push_back(row);
  const auto models = report::train_row_models(fx.pairs, fx.corpus, res, cfg, ml::GridSpec{}, 3);
  REQUIRE(models.size() == 1);

  const std::vector<pairing::ArgumentPair> none;
  const auto empty = report::qualitative_export(none, fx.corpus, models, res);
  CHECK(empty.rows.empty());

  const auto table =
      report::qualitative_export({fx.pairs.data(), 5}, fx.corpus, models, res);
  CHECK(table.rows.size() == 5);
  std::ostringstream csv;
  report::write_qualitative_csv(csv, table);
  const auto parsed = parse_csv_string(csv.str());
  REQUIRE(parsed.size() == 6);  // header + 5 rows
  CHECK(parsed[0].size() == models.size() + 4);  // id, two texts, preds, gold

  // sorted ascending by gold
  for (std::size_t i = 2; i < parsed.size(); ++i) {
    CHECK(parse_double(parsed[i - 1].back(), "gold") <= parse_double(parsed[i].back(), "gold"));
  }
}

TEST_CASE("qualitative_export: golden CSV for a hand-built model") {
  Corpus corpus;
  corpus.topic = "t";
  corpus.sentences.push_back(plain("a1", {"guns", "kill"}));
  corpus.sentences.push_back(plain("a2", {"guns", "kill", "people"}));
  corpus.sentences.push_back(plain("b1", {"cats", "purr"}));
  corpus.sentences.push_back(plain("c1", {"law", "works"}));
  corpus.sentences.push_back(plain("c2", {"law", "works"}));

  std::vector<pairing::ArgumentPair> pairs(3);
  pairs[0] = {"p1", "a1", "a2", 0.0, {}, 3.5};
  pairs[1] = {"p2", "a1", "b1", 0.0, {}, 1.0};
  pairs[2] = {"p3", "c1", "c2", 0.0, {}, 5.0};

  // identity model over the single ngram_cosine feature: prediction = cosine
  report::TrainedRowModel m;
  m.name = "ngram";
  m.features = groups_only(true, false);
  m.model.kind = ml::ModelKind::ridge;
  m.model.weights = {1.0};
  m.model.intercept = 0.0;
  m.model.fingerprint = features::FeatureLayout::from_config(m.features, 0).fingerprint();

  features::FeatureResources res;
  const auto table = report::qualitative_export(pairs, corpus, {&m, 1}, res);
  std::ostringstream csv;
  report::write_qualitative_csv(csv, table);

  const std::string golden =
      "pair_id,argument_1,argument_2,pred_ngram,gold_afs\n"
      "p2,guns kill,cats purr,0.0000,1.0000\n"
      "p1,guns kill,guns kill people,0.7071,3.5000\n"
      "p3,law works,law works,1.0000,5.0000\n";
  CHECK(csv.str() == golden);
}
