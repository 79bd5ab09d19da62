// SPDX-License-Identifier: Apache-2.0
//
// Result tables over nested CV, the 90/10 set-aside split, and the
// qualitative export of per-model predictions on the set-aside pairs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argsim/features.hpp"
#include "argsim/ml.hpp"
#include "argsim/pairing.hpp"

namespace argsim::report {

struct ExperimentRow {
  std::string name;
  features::FeatureConfig features;
  ml::ModelKind kind = ml::ModelKind::svr;
};

struct ExperimentConfig {
  std::vector<ExperimentRow> rows;
  double set_aside_fraction = 0.10;
  std::vector<std::pair<std::string, std::string>> significance_pairs;  // row names

  void validate() const;
};

struct SplitResult {
  std::vector<std::size_t> dev, setaside;  // indices into the input span
};

/// Seeded split keyed by pair_id hash, so reordering the input does not
/// change the assignment. round(n * fraction) pairs go to the set-aside.
SplitResult split_setaside(std::span<const pairing::ArgumentPair> pairs, double fraction,
                           std::uint64_t seed);

/// Feature matrix over pairs; rows follow the input order. Pairs without a
/// gold score keep their features but report no target.
struct PairFeatureMatrix {
  ml::Matrix X;
  std::vector<std::optional<double>> gold;
  std::vector<std::string> ids;
  features::FeatureLayout layout;

  /// Rows that have a gold AFS, in order.
  void gold_subset(ml::Matrix& X_out, std::vector<double>& y_out,
                   std::vector<std::string>& ids_out) const;
};

PairFeatureMatrix build_feature_matrix(std::span<const pairing::ArgumentPair> pairs,
                                       const Corpus& corpus, const features::FeatureConfig& cfg,
                                       const features::FeatureResources& res, unsigned jobs = 1);

struct ResultRow {
  std::string name;
  ml::ModelKind kind = ml::ModelKind::svr;
  std::optional<double> mean_r;
  double mean_rmse = 0.0;
  ml::CVReport cv;
};

struct SignificanceEntry {
  std::string row_a, row_b;
  ml::TTestResult test;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<SignificanceEntry> significance;
  std::optional<double> human_topline;
};

/// One nested-CV run per experiment row on the dev pairs (all of which need
/// gold scores), plus the configured paired t-tests between row fold RMSEs.
/// Fold assignment is shared across rows (same ids, same seed).
ResultTable run_table(std::span<const pairing::ArgumentPair> dev_pairs, const Corpus& corpus,
                      const features::FeatureResources& res, const ExperimentConfig& cfg,
                      const ml::GridSpec& grids, int outer_k, int inner_k, std::uint64_t seed,
                      unsigned jobs = 1);

void write_result_csv(std::ostream& out, const ResultTable& table);
void write_result_text(std::ostream& out, const ResultTable& table);
void write_folds_csv(std::ostream& out, const ResultTable& table);

struct TrainedRowModel {
  std::string name;
  features::FeatureConfig features;
  ml::RegressionModel model;
};

/// Fits one model per experiment row on the dev pairs (grid search by inner
/// CV, then a full refit).
std::vector<TrainedRowModel> train_row_models(std::span<const pairing::ArgumentPair> dev_pairs,
                                              const Corpus& corpus,
                                              const features::FeatureResources& res,
                                              const ExperimentConfig& cfg,
                                              const ml::GridSpec& grids, int inner_k,
                                              unsigned jobs = 1);

struct QualitativeRow {
  std::string pair_id;
  std::string text_a, text_b;
  std::vector<double> predictions;  // one per model, model order
  double gold = 0.0;
};

struct QualitativeTable {
  std::vector<std::string> model_names;
  std::vector<QualitativeRow> rows;  // sorted by gold AFS, then pair_id
};

QualitativeTable qualitative_export(std::span<const pairing::ArgumentPair> setaside_pairs,
                                    const Corpus& corpus,
                                    std::span<const TrainedRowModel> models,
                                    const features::FeatureResources& res, unsigned jobs = 1);

void write_qualitative_csv(std::ostream& out, const QualitativeTable& table);

}  // namespace argsim::report
