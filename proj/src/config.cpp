// SPDX-License-Identifier: Apache-2.0

#include "argsim/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/text.hpp"

extern char** environ;

namespace argsim {

namespace {

std::map<std::string, std::map<std::string, std::string>> parse_ini(std::istream& in,
                                                                    const std::string& what) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw Error(what + ":" + std::to_string(line_no) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw Error(what + ":" + std::to_string(line_no) + ": empty section name");
      sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(what + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw Error(what + ":" + std::to_string(line_no) + ": key outside any [section]");
    }
    sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return sections;
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  ConfigFile cfg;
  cfg.sections_ = parse_ini(in, path);
  cfg.dir_ = std::filesystem::path(path).parent_path().string();
  cfg.apply_env_overrides();
  return cfg;
}

ConfigFile ConfigFile::from_string(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  ConfigFile cfg;
  cfg.sections_ = parse_ini(in, what);
  cfg.apply_env_overrides();
  return cfg;
}

void ConfigFile::apply_env_overrides() {
  // ARGSIM_<SECTION>_<KEY>=value, section/key uppercased
  for (char** env = environ; env && *env; ++env) {
    const std::string entry(*env);
    if (entry.rfind("ARGSIM_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = entry.substr(7, eq - 7);
    const std::string value = entry.substr(eq + 1);
    const auto sep = name.find('_');
    if (sep == std::string::npos) continue;
    std::string section = name.substr(0, sep);
    std::string key = name.substr(sep + 1);
    for (char& c : section) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!sections_.count(section)) continue;  // only known sections are overridable
    sections_[section][key] = value;
  }
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0 && !s->second.at(key).empty();
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  if (k == s->second.end() || k->second.empty()) return fallback;
  return k->second;
}

std::string ConfigFile::require(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    throw Error("config is missing required key [" + section + "] " + key);
  }
  return sections_.at(section).at(key);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(get(section, key, ""), "config [" + section + "] " + key);
}

long long ConfigFile::get_int(const std::string& section, const std::string& key,
                              long long fallback) const {
  if (!has(section, key)) return fallback;
  return parse_int(get(section, key, ""), "config [" + section + "] " + key);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  for (const std::string& piece : split(get(section, key, ""), ',')) {
    out.push_back(parse_double(trim(piece), "config [" + section + "] " + key));
  }
  return out;
}

// ---------------------------------------------------------------------------

features::FeatureConfig feature_config_for_groups(const features::FeatureConfig& base,
                                                  const std::string& groups) {
  features::FeatureConfig cfg = base;
  cfg.ngram = cfg.rouge = cfg.liwc = cfg.sts = cfg.w2v_cosine = cfg.w2v_concat = false;
  // both '+' and ',' accepted as separators
  for (const std::string& chunk : split(groups, ',')) {
    for (const std::string& piece : split(chunk, '+')) {
      const std::string g = trim(piece);
      if (g.empty()) continue;
      if (g == "ngram") cfg.ngram = true;
      else if (g == "rouge") cfg.rouge = true;
      else if (g == "liwc") cfg.liwc = true;
      else if (g == "sts") cfg.sts = true;
      else if (g == "w2v_cosine") cfg.w2v_cosine = true;
      else if (g == "w2v_concat") cfg.w2v_concat = true;
      else throw Error("unknown feature group '" + g + "'");
    }
  }
  cfg.validate();
  return cfg;
}

namespace {

std::string resolve_path(const std::string& dir, const std::string& value) {
  if (value.empty()) return value;
  std::filesystem::path p(value);
  if (p.is_absolute() || dir.empty()) return value;
  return (std::filesystem::path(dir) / p).lexically_normal().string();
}

features::FeatureConfig base_features(const ConfigFile& f) {
  features::FeatureConfig cfg;
  if (f.has("features", "groups")) {
    cfg = feature_config_for_groups(cfg, f.get("features", "groups", ""));
  }
  cfg.ngram_max_order = static_cast<int>(f.get_int("features", "ngram_max_order", 3));
  if (f.has("features", "rouge_metrics")) {
    cfg.rouge_metrics.clear();
    for (const std::string& piece : split(f.get("features", "rouge_metrics", ""), ',')) {
      cfg.rouge_metrics.push_back(trim(piece));
    }
  }
  cfg.rouge_beta = f.get_double("features", "rouge_beta", 1.0);
  cfg.rouge_w_weight = f.get_double("features", "rouge_w_weight", 1.2);
  const std::string side = f.get("features", "lexicalized_side", "governor");
  if (side == "governor") cfg.lexicalized_side = features::FeatureConfig::LexicalizedSide::governor;
  else if (side == "dependent") cfg.lexicalized_side = features::FeatureConfig::LexicalizedSide::dependent;
  else throw Error("config: lexicalized_side must be 'governor' or 'dependent'");
  const std::string norm = f.get("features", "overlap_norm", "sum_lengths");
  if (norm == "sum_lengths") cfg.overlap_norm = features::FeatureConfig::OverlapNorm::sum_lengths;
  else if (norm == "mean_lengths") cfg.overlap_norm = features::FeatureConfig::OverlapNorm::mean_lengths;
  else throw Error("config: overlap_norm must be 'sum_lengths' or 'mean_lengths'");
  return cfg;
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const ConfigFile& f) {
  PipelineConfig cfg;
  const std::string& dir = f.dir();

  auto path = [&](const char* key) { return resolve_path(dir, f.get("paths", key, "")); };
  cfg.paths.corpus = path("corpus");
  cfg.paths.raw_csv = path("raw_csv");
  cfg.paths.conllu_dir = path("conllu_dir");
  cfg.paths.dictionary = path("dictionary");
  cfg.paths.stopwords = path("stopwords");
  cfg.paths.lexicon = path("lexicon");
  cfg.paths.embeddings = path("embeddings");
  cfg.paths.aq_scores = path("aq_scores");
  cfg.paths.aq_annotations = path("aq_annotations");
  cfg.paths.afs_annotations = path("afs_annotations");
  cfg.paths.sts_file = path("sts_file");
  cfg.paths.pairs = path("pairs");
  cfg.paths.features = path("features");
  cfg.paths.model = path("model");

  cfg.aq.zero_rule_min_dict_words = static_cast<int>(f.get_int("aq", "zero_rule_min_dict_words", 4));
  cfg.aq.min_tokens = static_cast<int>(f.get_int("aq", "min_tokens", 10));
  cfg.aq.max_tokens = static_cast<int>(f.get_int("aq", "max_tokens", 40));
  cfg.aq.bin_edges = f.get_doubles("aq", "bin_edges", {0.55, 0.65, 0.75, 0.85, 0.95, 1.0});
  cfg.aq.sample_per_bin = static_cast<int>(f.get_int("aq", "sample_per_bin", 500));
  cfg.aq.high_aq_threshold = f.get_double("aq", "high_aq_threshold", 0.55);
  cfg.aq_score_source = f.get("aq", "score_source", "external");
  if (cfg.aq_score_source != "external" && cfg.aq_score_source != "baseline") {
    throw Error("config: aq score_source must be 'external' or 'baseline'");
  }

  cfg.pairs.target_pairs = static_cast<int>(f.get_int("pairs", "target_pairs", 2000));
  cfg.pairs.per_sentence_cap = static_cast<int>(f.get_int("pairs", "per_sentence_cap", 10));
  if (f.has("pairs", "min_prescore")) {
    cfg.pairs.min_prescore = f.get_double("pairs", "min_prescore", 0.0);
  }
  cfg.sts_source = f.get("pairs", "sts_source", "proxy");
  if (cfg.sts_source != "proxy" && cfg.sts_source != "external") {
    throw Error("config: sts_source must be 'proxy' or 'external'");
  }

  cfg.features = base_features(f);

  cfg.grids.ridge_alphas = f.get_doubles("ml", "ridge_alphas", cfg.grids.ridge_alphas);
  cfg.grids.svr_C = f.get_doubles("ml", "svr_c", cfg.grids.svr_C);
  cfg.grids.svr_gamma = f.get_doubles("ml", "svr_gamma", cfg.grids.svr_gamma);
  cfg.grids.svr_epsilon = f.get_doubles("ml", "svr_epsilon", cfg.grids.svr_epsilon);
  const std::string gscale = f.get("ml", "svr_gamma_scale", "features");
  if (gscale == "features") cfg.grids.svr_gamma_scale_by_features = true;
  else if (gscale == "none") cfg.grids.svr_gamma_scale_by_features = false;
  else throw Error("config: svr_gamma_scale must be 'features' or 'none'");
  cfg.outer_k = static_cast<int>(f.get_int("ml", "outer_k", 10));
  cfg.inner_k = static_cast<int>(f.get_int("ml", "inner_k", 3));

  cfg.experiment.set_aside_fraction = f.get_double("experiment", "set_aside_fraction", 0.10);
  const std::string rows = f.get("experiment", "rows", "combined : ngram+rouge+liwc+sts+w2v_concat : svr");
  for (const std::string& row_spec : split(rows, ';')) {
    if (trim(row_spec).empty()) continue;
    const auto parts = split(row_spec, ':');
    if (parts.size() != 3) {
      throw Error("config: experiment row must be 'name : group+group : kind' (got '" +
                  trim(row_spec) + "')");
    }
    report::ExperimentRow row;
    row.name = trim(parts[0]);
    row.features = feature_config_for_groups(cfg.features, trim(parts[1]));
    row.kind = ml::kind_from_name(trim(parts[2]));
    cfg.experiment.rows.push_back(std::move(row));
  }
  const std::string sig = f.get("experiment", "significance", "");
  for (const std::string& piece : split(sig, ';')) {
    if (trim(piece).empty()) continue;
    const auto parts = split(piece, '~');
    if (parts.size() != 2) {
      throw Error("config: significance entries are 'row_a ~ row_b'");
    }
    cfg.experiment.significance_pairs.emplace_back(trim(parts[0]), trim(parts[1]));
  }

  cfg.seed = static_cast<std::uint64_t>(f.get_int("global", "seed", 0));
  cfg.aq.rng_seed = cfg.seed;
  cfg.pairs.rng_seed = cfg.seed;
  cfg.topic = f.get("global", "topic", "");
  return cfg;
}

}  // namespace argsim
