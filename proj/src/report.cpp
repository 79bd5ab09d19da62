// SPDX-License-Identifier: Apache-2.0

#include "argsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"

namespace argsim::report {

void ExperimentConfig::validate() const {
  if (rows.empty()) throw Error("experiment config: no rows");
  if (!(set_aside_fraction > 0.0 && set_aside_fraction < 0.5)) {
    throw Error("experiment config: set_aside_fraction must be in (0, 0.5)");
  }
  StringSet names;
  for (const auto& row : rows) {
    if (row.name.empty()) throw Error("experiment config: row without a name");
    if (!names.insert(row.name).second) {
      throw Error("experiment config: duplicate row name '" + row.name + "'");
    }
  }
  for (const auto& [a, b] : significance_pairs) {
    if (!names.count(a) || !names.count(b)) {
      throw Error("experiment config: significance pair references unknown row");
    }
  }
}

SplitResult split_setaside(std::span<const pairing::ArgumentPair> pairs, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 0.5)) {
    throw Error("split_setaside: fraction must be in (0, 0.5)");
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) order[i] = i;
  // hash order keyed by (seed, pair_id); ties broken by id for stability
  std::vector<std::uint64_t> keys(pairs.size());
  const std::string seed_bytes(reinterpret_cast<const char*>(&seed), sizeof(seed));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    keys[i] = fnv1a64(pairs[i].pair_id, fnv1a64(seed_bytes));
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return pairs[a].pair_id < pairs[b].pair_id;
  });
  const auto n_aside = static_cast<std::size_t>(
      std::llround(static_cast<double>(pairs.size()) * fraction));
  SplitResult out;
  out.setaside.assign(order.begin(), order.begin() + n_aside);
  out.dev.assign(order.begin() + n_aside, order.end());
  // downstream consumers expect input order within each part
  std::sort(out.setaside.begin(), out.setaside.end());
  std::sort(out.dev.begin(), out.dev.end());
  return out;
}

void PairFeatureMatrix::gold_subset(ml::Matrix& X_out, std::vector<double>& y_out,
                                    std::vector<std::string>& ids_out) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i]) rows.push_back(i);
  }
  X_out = X.take_rows(rows);
  y_out.clear();
  ids_out.clear();
  for (std::size_t i : rows) {
    y_out.push_back(*gold[i]);
    ids_out.push_back(ids[i]);
  }
}

PairFeatureMatrix build_feature_matrix(std::span<const pairing::ArgumentPair> pairs,
                                       const Corpus& corpus, const features::FeatureConfig& cfg,
                                       const features::FeatureResources& res, unsigned jobs) {
  PairFeatureMatrix out;
  const std::size_t dim = res.embeddings ? res.embeddings->dim() : 0;
  out.layout = features::FeatureLayout::from_config(cfg, dim);
  out.X = ml::Matrix(pairs.size(), out.layout.names.size());
  out.gold.resize(pairs.size());
  out.ids.resize(pairs.size());

  corpus.build_index();  // before the workers share it read-only

  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto& p = pairs[i];
    const ParsedSentence& a = corpus.by_id(p.sent_a);
    const ParsedSentence& b = corpus.by_id(p.sent_b);
    const features::FeatureVector fv = features::assemble_features(p, a, b, cfg, res);
    if (fv.values.size() != out.X.cols) {
      throw Error("feature vector length mismatch for pair " + p.pair_id);
    }
    std::copy(fv.values.begin(), fv.values.end(), out.X.row(i));
    out.gold[i] = p.gold_afs;
    out.ids[i] = p.pair_id;
  });
  return out;
}

ResultTable run_table(std::span<const pairing::ArgumentPair> dev_pairs, const Corpus& corpus,
                      const features::FeatureResources& res, const ExperimentConfig& cfg,
                      const ml::GridSpec& grids, int outer_k, int inner_k, std::uint64_t seed,
                      unsigned jobs) {
  cfg.validate();
  ResultTable table;
  table.rows.resize(cfg.rows.size());
  for (std::size_t r = 0; r < cfg.rows.size(); ++r) {
    const ExperimentRow& row = cfg.rows[r];
    const PairFeatureMatrix fm = build_feature_matrix(dev_pairs, corpus, row.features, res, jobs);
    ml::Matrix X;
    std::vector<double> y;
    std::vector<std::string> ids;
    fm.gold_subset(X, y, ids);
    if (y.size() != dev_pairs.size()) {
      throw Error("row '" + row.name + "': " +
                  std::to_string(dev_pairs.size() - y.size()) +
                  " dev pairs have no gold AFS; supply annotations");
    }
    const auto grid = grids.build(row.kind, X.cols);
    ml::CVReport cv = ml::nested_cv(row.kind, X, y, ids, grid, outer_k, seed, inner_k, jobs);
    ResultRow& out = table.rows[r];
    out.name = row.name;
    out.kind = row.kind;
    out.mean_r = cv.mean_r;
    out.mean_rmse = cv.mean_rmse;
    out.cv = std::move(cv);
  }

  for (const auto& [name_a, name_b] : cfg.significance_pairs) {
    const auto find = [&](const std::string& name) -> const ResultRow& {
      for (const auto& row : table.rows) {
        if (row.name == name) return row;
      }
      throw Error("significance pair references unknown row '" + name + "'");
    };
    SignificanceEntry entry;
    entry.row_a = name_a;
    entry.row_b = name_b;
    entry.test = ml::paired_ttest(find(name_a).cv.fold_rmses(), find(name_b).cv.fold_rmses());
    table.significance.push_back(std::move(entry));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string opt_r(const std::optional<double>& r, int precision) {
  return r ? format_double(*r, precision) : std::string("NA");
}

}  // namespace

void write_result_csv(std::ostream& out, const ResultTable& table) {
  write_csv_row(out, {"feature_set", "model", "r", "rmse"});
  for (const auto& row : table.rows) {
    write_csv_row(out, {row.name, std::string(ml::kind_name(row.kind)), opt_r(row.mean_r, 6),
                        format_double(row.mean_rmse, 6)});
  }
  if (table.human_topline) {
    write_csv_row(out, {"HUMAN TOPLINE", "", format_double(*table.human_topline, 6), ""});
  }
}

void write_result_text(std::ostream& out, const ResultTable& table) {
  std::size_t name_w = 11;  // "feature set"
  for (const auto& row : table.rows) name_w = std::max(name_w, row.name.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %-6s  %8s  %8s\n", static_cast<int>(name_w),
                "feature set", "model", "r", "rmse");
  out << buf;
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %-6s  %8s  %8.4f\n", static_cast<int>(name_w),
                  row.name.c_str(), std::string(ml::kind_name(row.kind)).c_str(),
                  (row.mean_r ? format_double(*row.mean_r, 4) : std::string("NA")).c_str(),
                  row.mean_rmse);
    out << buf;
  }
  if (table.human_topline) {
    std::snprintf(buf, sizeof(buf), "%-*s  %-6s  %8.4f  %8s\n", static_cast<int>(name_w),
                  "HUMAN TOPLINE", "", *table.human_topline, "");
    out << buf;
  }
  for (const auto& sig : table.significance) {
    std::snprintf(buf, sizeof(buf), "t-test %s vs %s: t=%.4f df=%d p=%.5f\n", sig.row_a.c_str(),
                  sig.row_b.c_str(), sig.test.t, sig.test.df, sig.test.p);
    out << buf;
  }
}

void write_folds_csv(std::ostream& out, const ResultTable& table) {
  write_csv_row(out, {"feature_set", "model", "fold", "r", "rmse", "chosen_params"});
  for (const auto& row : table.rows) {
    for (std::size_t f = 0; f < row.cv.folds.size(); ++f) {
      const auto& fold = row.cv.folds[f];
      write_csv_row(out, {row.name, std::string(ml::kind_name(row.kind)), std::to_string(f),
                          opt_r(fold.r, 6), format_double(fold.rmse, 6),
                          fold.chosen.to_string(row.kind == ml::ModelKind::svr)});
    }
  }
}

// ---------------------------------------------------------------------------
// Qualitative export

std::vector<TrainedRowModel> train_row_models(std::span<const pairing::ArgumentPair> dev_pairs,
                                              const Corpus& corpus,
                                              const features::FeatureResources& res,
                                              const ExperimentConfig& cfg,
                                              const ml::GridSpec& grids, int inner_k,
                                              unsigned jobs) {
  cfg.validate();
  std::vector<TrainedRowModel> models;
  models.reserve(cfg.rows.size());
  for (const auto& row : cfg.rows) {
    const PairFeatureMatrix fm = build_feature_matrix(dev_pairs, corpus, row.features, res, jobs);
    ml::Matrix X;
    std::vector<double> y;
    std::vector<std::string> ids;
    fm.gold_subset(X, y, ids);
    if (y.empty()) throw Error("row '" + row.name + "': no dev pair has a gold AFS");
    const auto grid = grids.build(row.kind, X.cols);
    const ml::GridSearchResult gs = ml::grid_search(row.kind, X, y, grid, inner_k);
    TrainedRowModel m;
    m.name = row.name;
    m.features = row.features;
    m.model = ml::train_model(row.kind, X, y, gs.best, fm.layout.fingerprint());
    models.push_back(std::move(m));
  }
  return models;
}

QualitativeTable qualitative_export(std::span<const pairing::ArgumentPair> setaside_pairs,
                                    const Corpus& corpus,
                                    std::span<const TrainedRowModel> models,
                                    const features::FeatureResources& res, unsigned jobs) {
  QualitativeTable table;
  for (const auto& m : models) table.model_names.push_back(m.name);

  std::vector<const pairing::ArgumentPair*> scored;
  for (const auto& p : setaside_pairs) {
    if (p.gold_afs) scored.push_back(&p);
  }
  table.rows.resize(scored.size());

  std::vector<pairing::ArgumentPair> pairs_copy;
  pairs_copy.reserve(scored.size());
  for (const auto* p : scored) pairs_copy.push_back(*p);

  // feature matrices are per model (feature sets differ per row)
  std::vector<std::vector<double>> predictions(models.size());
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const PairFeatureMatrix fm =
        build_feature_matrix(pairs_copy, corpus, models[mi].features, res, jobs);
    if (!models[mi].model.fingerprint.empty() &&
        models[mi].model.fingerprint != fm.layout.fingerprint()) {
      throw Error("model '" + models[mi].name + "' was trained on a different feature layout");
    }
    predictions[mi] = ml::predict(models[mi].model, fm.X);
  }

  for (std::size_t i = 0; i < scored.size(); ++i) {
    QualitativeRow& row = table.rows[i];
    row.pair_id = scored[i]->pair_id;
    row.text_a = corpus.by_id(scored[i]->sent_a).raw_text;
    row.text_b = corpus.by_id(scored[i]->sent_b).raw_text;
    row.gold = *scored[i]->gold_afs;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      row.predictions.push_back(predictions[mi][i]);
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const QualitativeRow& a, const QualitativeRow& b) {
    if (a.gold != b.gold) return a.gold < b.gold;
    return a.pair_id < b.pair_id;
  });
  return table;
}

void write_qualitative_csv(std::ostream& out, const QualitativeTable& table) {
  std::vector<std::string> header{"pair_id", "argument_1", "argument_2"};
  for (const auto& name : table.model_names) header.push_back("pred_" + name);
  header.push_back("gold_afs");
  write_csv_row(out, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields{row.pair_id, row.text_a, row.text_b};
    for (double p : row.predictions) fields.push_back(format_double(p, 4));
    fields.push_back(format_double(row.gold, 4));
    write_csv_row(out, fields);
  }
}

}  // namespace argsim::report
