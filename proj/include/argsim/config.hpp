// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "argsim/aq.hpp"
#include "argsim/features.hpp"
#include "argsim/ml.hpp"
#include "argsim/pairing.hpp"
#include "argsim/report.hpp"

namespace argsim {

/// INI-style key/value file: `[section]` headers, `key = value` lines, `#`
/// or `;` comments. Environment variables ARGSIM_<SECTION>_<KEY> override
/// file values.
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path);
  static ConfigFile from_string(const std::string& text, const std::string& what = "config");

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;

  const std::string& dir() const { return dir_; }
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::string dir_;  // directory of the config file; relative paths resolve against it
  std::map<std::string, std::map<std::string, std::string>> sections_;
  void apply_env_overrides();
};

struct PipelinePaths {
  std::string corpus;         // normalized corpus (CoNLL-U)
  std::string raw_csv;        // raw sentences (ingest input)
  std::string conllu_dir;     // parsed sentences (ingest input)
  std::string dictionary;
  std::string stopwords;
  std::string lexicon;
  std::string embeddings;
  std::string aq_scores;
  std::string aq_annotations;
  std::string afs_annotations;
  std::string sts_file;
  std::string pairs;          // pair CSV (featurize/evaluate input)
  std::string features;      // feature matrix CSV (train/score input)
  std::string model;          // model JSON (score input)
};

/// Everything a pipeline command needs, with the published defaults
/// (10-40 token band, 0.55 threshold, 2000 pairs, cap 10, 90/10 split,
/// 10 outer folds) pre-populated.
struct PipelineConfig {
  PipelinePaths paths;
  aq::AqConfig aq;
  std::string aq_score_source = "external";  // or "baseline"
  pairing::PairSamplingConfig pairs;
  std::string sts_source = "proxy";  // or "external"
  features::FeatureConfig features;
  ml::GridSpec grids;
  int outer_k = 10;
  int inner_k = 3;
  report::ExperimentConfig experiment;
  std::uint64_t seed = 0;
  std::string topic;

  static PipelineConfig from_file(const ConfigFile& file);
};

/// Parses a feature-group list like "ngram+rouge+w2v_concat" into a config
/// whose other knobs come from `base`.
features::FeatureConfig feature_config_for_groups(const features::FeatureConfig& base,
                                                  const std::string& groups);

}  // namespace argsim
