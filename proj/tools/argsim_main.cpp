// SPDX-License-Identifier: Apache-2.0
//
// Pipeline driver. Staged subcommands share one --out tree: every command
// reads its predecessors' artifacts from there (falling back to configured
// paths), writes its own through atomic renames, and updates manifest.json
// with content hashes.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "argsim/aq.hpp"
#include "argsim/artifacts.hpp"
#include "argsim/common.hpp"
#include "argsim/config.hpp"
#include "argsim/corpus.hpp"
#include "argsim/csv.hpp"
#include "argsim/features.hpp"
#include "argsim/kernels.hpp"
#include "argsim/ml.hpp"
#include "argsim/model_io.hpp"
#include "argsim/pairing.hpp"
#include "argsim/report.hpp"

namespace {

using namespace argsim;
namespace fs = std::filesystem;

struct Context {
  PipelineConfig cfg;
  std::string out_dir = "out";
  unsigned jobs = 1;
  bool dry_run = false;

  std::string staged(const std::string& name) const { return (fs::path(out_dir) / name).string(); }

  // staged artifact if present, else the configured path
  std::string input(const std::string& staged_name, const std::string& cfg_path) const {
    const std::string s = staged(staged_name);
    if (fs::exists(s)) return s;
    return cfg_path;
  }

  std::string require_input(const std::string& staged_name, const std::string& cfg_path,
                            const std::string& what) const {
    const std::string p = input(staged_name, cfg_path);
    if (p.empty() || !fs::exists(p)) {
      throw Error("missing " + what + ": looked for " + staged(staged_name) +
                  (cfg_path.empty() ? "" : " and " + cfg_path));
    }
    return p;
  }
};

void summary(const std::string& command, const std::string& text) {
  std::printf("[argsim] %s: %s\n", command.c_str(), text.c_str());
}

Corpus load_corpus_file(const std::string& path, const std::string& topic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus: " + path);
  ConlluParseResult parsed = parse_conllu(in, path);
  for (const auto& e : parsed.errors) {
    std::fprintf(stderr, "warning: %s:%zu: %s\n", path.c_str(), e.line, e.message.c_str());
  }
  Corpus corpus;
  for (auto& s : parsed.sentences) {
    if (!topic.empty() && s.topic != topic) continue;
    if (corpus.topic.empty()) corpus.topic = s.topic;
    corpus.sentences.push_back(std::move(s));
  }
  corpus.source_manifest.emplace_back(path, corpus.sentences.size());
  if (corpus.sentences.empty()) throw Error("corpus is empty: " + path);
  return corpus;
}

StringSet load_stopwords(const Context& ctx) {
  if (ctx.cfg.paths.stopwords.empty()) throw Error("config: [paths] stopwords is required");
  return load_wordlist(ctx.cfg.paths.stopwords);
}

features::FeatureResources make_resources(const Context& ctx, const features::FeatureConfig& fc,
                                          StringSet& stopwords_storage,
                                          std::optional<features::CategoryLexicon>& lexicon_storage,
                                          std::optional<features::EmbeddingTable>& table_storage) {
  features::FeatureResources res;
  if (fc.w2v_cosine || fc.w2v_concat || fc.liwc) {
    stopwords_storage = load_stopwords(ctx);
    res.stopwords = &stopwords_storage;
  }
  if (fc.liwc) {
    if (ctx.cfg.paths.lexicon.empty()) throw Error("config: [paths] lexicon is required for the liwc group");
    lexicon_storage = features::CategoryLexicon::load_file(ctx.cfg.paths.lexicon);
    res.lexicon = &*lexicon_storage;
  }
  if (fc.w2v_cosine || fc.w2v_concat) {
    if (ctx.cfg.paths.embeddings.empty()) throw Error("config: [paths] embeddings is required for w2v groups");
    table_storage = features::EmbeddingTable::load_file(ctx.cfg.paths.embeddings);
    res.embeddings = &*table_storage;
  }
  return res;
}

// the union of groups needed by every experiment row
features::FeatureConfig union_of_rows(const report::ExperimentConfig& exp) {
  features::FeatureConfig u = exp.rows.front().features;
  for (const auto& row : exp.rows) {
    u.ngram |= row.features.ngram;
    u.rouge |= row.features.rouge;
    u.liwc |= row.features.liwc;
    u.sts |= row.features.sts;
    u.w2v_cosine |= row.features.w2v_cosine;
    u.w2v_concat |= row.features.w2v_concat;
  }
  return u;
}

std::vector<aq::AqAnnotation> load_aq_annotations(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_id = t.col("sentence_id");
  const std::size_t c_worker = t.col("worker_id");
  const std::size_t c_score = t.col("score");
  std::vector<aq::AqAnnotation> out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    aq::AqAnnotation a;
    a.sentence_id = t.at(r, c_id);
    a.worker_id = t.at(r, c_worker);
    a.score = static_cast<int>(parse_int(t.at(r, c_score), path));
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(Context& ctx) {
  const bool have_raw = !ctx.cfg.paths.raw_csv.empty();
  const bool have_dir = !ctx.cfg.paths.conllu_dir.empty();
  if (!have_raw && !have_dir) {
    throw Error("ingest needs [paths] raw_csv and/or conllu_dir");
  }
  if (ctx.dry_run) {
    summary("ingest", "dry-run: would read " + (have_dir ? ctx.cfg.paths.conllu_dir : std::string()) +
                          (have_raw ? " " + ctx.cfg.paths.raw_csv : std::string()) +
                          " and write " + ctx.staged("corpus.conllu"));
    return 0;
  }

  Corpus corpus;
  std::size_t parse_errors = 0;
  if (have_dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(ctx.cfg.paths.conllu_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".conllu") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .conllu files in " + ctx.cfg.paths.conllu_dir);
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error("cannot open " + file);
      ConlluParseResult parsed = parse_conllu(in, file);
      for (const auto& e : parsed.errors) {
        std::fprintf(stderr, "warning: %s:%zu: %s\n", file.c_str(), e.line, e.message.c_str());
      }
      parse_errors += parsed.errors.size();
      std::size_t used = 0;
      for (auto& s : parsed.sentences) {
        if (!ctx.cfg.topic.empty() && s.topic != ctx.cfg.topic) continue;
        if (corpus.topic.empty()) corpus.topic = s.topic;
        corpus.sentences.push_back(std::move(s));
        ++used;
      }
      corpus.source_manifest.emplace_back(file, used);
    }
  }
  if (have_raw) {
    std::ifstream in(ctx.cfg.paths.raw_csv, std::ios::binary);
    if (!in) throw Error("cannot open " + ctx.cfg.paths.raw_csv);
    Corpus raw = read_raw_csv(in, ctx.cfg.paths.raw_csv);
    StringSet known;
    for (const auto& s : corpus.sentences) known.insert(s.id);
    std::size_t used = 0;
    for (auto& s : raw.sentences) {
      if (!ctx.cfg.topic.empty() && s.topic != ctx.cfg.topic) continue;
      if (known.count(s.id)) continue;  // CoNLL-U version wins
      if (corpus.topic.empty()) corpus.topic = s.topic;
      corpus.sentences.push_back(std::move(s));
      ++used;
    }
    corpus.source_manifest.emplace_back(ctx.cfg.paths.raw_csv, used);
  }
  if (corpus.sentences.empty()) throw Error("ingest produced an empty corpus");

  DedupResult dedup = normalize_and_dedup(corpus);
  std::ostringstream conllu;
  write_conllu(conllu, dedup.corpus);

  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("corpus.conllu", conllu.str());
  out.finalize();
  summary("ingest", std::to_string(dedup.corpus.sentences.size()) + " sentences kept, " +
                        std::to_string(dedup.removed) + " duplicates removed, " +
                        std::to_string(parse_errors) + " parse errors -> " +
                        out.file_path("corpus.conllu"));
  return 0;
}

// ---------------------------------------------------------------------------
// filter-aq

int cmd_filter_aq(Context& ctx) {
  const std::string corpus_path =
      ctx.require_input("corpus.conllu", ctx.cfg.paths.corpus, "corpus");
  if (ctx.dry_run) {
    summary("filter-aq", "dry-run: would read " + corpus_path + " and write " +
                             ctx.staged("corpus_kept.conllu") + ", " +
                             ctx.staged("aq_rescored.csv") + ", " + ctx.staged("aq_samples.csv"));
    return 0;
  }
  Corpus corpus = load_corpus_file(corpus_path, ctx.cfg.topic);
  if (ctx.cfg.paths.dictionary.empty()) throw Error("config: [paths] dictionary is required");
  const Dictionary dict = Dictionary::load(ctx.cfg.paths.dictionary);
  const aq::AqConfig& acfg = ctx.cfg.aq;
  acfg.validate();

  std::unique_ptr<aq::AqScorer> scorer;
  if (ctx.cfg.aq_score_source == "external") {
    if (ctx.cfg.paths.aq_scores.empty()) throw Error("config: [paths] aq_scores is required for score_source=external");
    scorer = std::make_unique<aq::ExternalAqScorer>(aq::ExternalAqScorer::load(ctx.cfg.paths.aq_scores));
  } else {
    if (ctx.cfg.paths.aq_annotations.empty()) {
      throw Error("config: [paths] aq_annotations is required for score_source=baseline");
    }
    const auto annotations = load_aq_annotations(ctx.cfg.paths.aq_annotations);
    std::map<std::string, std::vector<aq::AqAnnotation>> by_sentence;
    for (const auto& a : annotations) by_sentence[a.sentence_id].push_back(a);
    std::vector<ParsedSentence> labeled;
    std::vector<aq::Label> labels;
    for (const auto& [id, anns] : by_sentence) {
      labeled.push_back(corpus.by_id(id));
      labels.push_back(aq::gold_label(anns));
    }
    scorer = aq::train_baseline_aq_scorer(labeled, labels, dict);
  }

  // rescore everything, band-filter, then bin the in-band sentences
  aq::LengthPartition part = aq::filter_by_length(corpus.sentences, acfg);
  std::vector<char> in_band(corpus.sentences.size(), 0);
  for (std::size_t i : part.kept) in_band[i] = 1;

  std::ostringstream rescored_csv;
  write_csv_row(rescored_csv, {"sentence_id", "raw_score", "rescored_score", "token_count", "in_band"});
  std::vector<aq::ScoredSentence> scored;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const ParsedSentence& s = corpus.sentences[i];
    const double raw = scorer->score(s);
    const double rescoredv = aq::rescore_aq(s, raw, dict, acfg);
    write_csv_row(rescored_csv,
                  {s.id, format_double_exact(raw), format_double_exact(rescoredv),
                   std::to_string(s.tokens.size()), in_band[i] ? "1" : "0"});
    if (in_band[i]) scored.push_back({i, s.id, rescoredv});
  }

  const aq::ScoreBins bins = aq::bin_by_score(scored, acfg);
  const std::vector<aq::SampledSentence> samples = aq::sample_bins(bins, acfg);

  Corpus kept;
  kept.topic = corpus.topic;
  for (const auto& bin : bins.bins) {
    for (const auto& s : bin) {
      ParsedSentence copy = corpus.sentences[s.index];
      copy.aq_score = s.score;
      kept.sentences.push_back(std::move(copy));
    }
  }
  // stable order for output: original corpus order
  std::sort(kept.sentences.begin(), kept.sentences.end(),
            [&](const ParsedSentence& a, const ParsedSentence& b) { return a.id < b.id; });
  std::ostringstream kept_conllu;
  write_conllu(kept_conllu, kept);

  std::ostringstream samples_csv;
  write_csv_row(samples_csv, {"sentence_id", "bin", "bin_low", "bin_high", "score"});
  for (const auto& s : samples) {
    write_csv_row(samples_csv,
                  {s.sentence.id, std::to_string(s.bin), format_double_exact(acfg.bin_edges[s.bin]),
                   format_double_exact(acfg.bin_edges[s.bin + 1]),
                   format_double_exact(s.sentence.score)});
  }

  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("aq_rescored.csv", rescored_csv.str());
  out.write("corpus_kept.conllu", kept_conllu.str());
  out.write("aq_samples.csv", samples_csv.str());
  out.finalize();
  summary("filter-aq", std::to_string(corpus.sentences.size()) + " sentences, " +
                           std::to_string(part.kept.size()) + " in the " +
                           std::to_string(acfg.min_tokens) + "-" + std::to_string(acfg.max_tokens) +
                           " band, " + std::to_string(kept.sentences.size()) + " binned, " +
                           std::to_string(samples.size()) + " sampled -> " + ctx.out_dir);
  return 0;
}

// ---------------------------------------------------------------------------
// bin-report

int cmd_bin_report(Context& ctx) {
  const std::string samples_path = ctx.require_input("aq_samples.csv", "", "aq_samples.csv");
  if (ctx.cfg.paths.aq_annotations.empty()) throw Error("config: [paths] aq_annotations is required");
  if (ctx.dry_run) {
    summary("bin-report", "dry-run: would read " + samples_path + " + " +
                              ctx.cfg.paths.aq_annotations + " and write " +
                              ctx.staged("bin_report.csv"));
    return 0;
  }
  const CsvTable samples = CsvTable::read_file(samples_path);
  const std::size_t c_id = samples.col("sentence_id");
  const std::size_t c_bin = samples.col("bin");
  const std::size_t c_score = samples.col("score");

  const auto annotations = load_aq_annotations(ctx.cfg.paths.aq_annotations);
  std::map<std::string, std::vector<aq::AqAnnotation>> by_sentence;
  for (const auto& a : annotations) by_sentence[a.sentence_id].push_back(a);

  std::vector<aq::LabeledSample> labeled;
  std::size_t missing = 0;
  for (std::size_t r = 0; r < samples.n_rows(); ++r) {
    auto it = by_sentence.find(samples.at(r, c_id));
    if (it == by_sentence.end()) {
      ++missing;
      continue;
    }
    aq::LabeledSample ls;
    ls.bin = static_cast<std::size_t>(parse_int(samples.at(r, c_bin), samples_path));
    ls.rescored_score = parse_double(samples.at(r, c_score), samples_path);
    ls.gold = aq::gold_label(it->second);
    labeled.push_back(ls);
  }
  if (missing > 0) {
    throw Error(std::to_string(missing) + " sampled sentences have no AQ annotation");
  }
  const aq::BinQualityReport report = aq::bin_quality_report(labeled, ctx.cfg.aq);

  std::ostringstream csv;
  write_csv_row(csv, {"bin_low", "bin_high", "n", "p_yes"});
  for (const auto& b : report.bins) {
    write_csv_row(csv, {format_double_exact(b.lo), format_double_exact(b.hi), std::to_string(b.n),
                        b.p_yes ? format_double(*b.p_yes, 6) : std::string()});
  }
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("bin_report.csv", csv.str());
  out.finalize();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu labeled samples, agreement %.4f (AQ > %.2f vs gold) -> %s",
                report.n_total, report.agreement, ctx.cfg.aq.high_aq_threshold,
                out.file_path("bin_report.csv").c_str());
  summary("bin-report", buf);
  return 0;
}

// ---------------------------------------------------------------------------
// sample-pairs

int cmd_sample_pairs(Context& ctx) {
  const std::string corpus_path =
      ctx.require_input("corpus_kept.conllu", ctx.cfg.paths.corpus, "high-AQ corpus");
  if (ctx.dry_run) {
    summary("sample-pairs",
            "dry-run: would read " + corpus_path + " and write " + ctx.staged("pairs.csv"));
    return 0;
  }
  Corpus corpus = load_corpus_file(corpus_path, ctx.cfg.topic);

  std::unique_ptr<pairing::StsScorer> scorer;
  if (ctx.cfg.sts_source == "external") {
    if (ctx.cfg.paths.sts_file.empty()) throw Error("config: [paths] sts_file is required for sts_source=external");
    scorer = std::make_unique<pairing::ExternalStsScorer>(
        pairing::ExternalStsScorer::load(ctx.cfg.paths.sts_file));
  } else {
    scorer = std::make_unique<pairing::ProxyStsScorer>(corpus, load_stopwords(ctx));
  }

  const pairing::SelectResult sel = pairing::select_pairs(corpus, *scorer, ctx.cfg.pairs);
  if (!sel.target_reached) {
    std::fprintf(stderr, "warning: selected %zu of %d requested pairs (cap %d)\n",
                 sel.pairs.size(), ctx.cfg.pairs.target_pairs, ctx.cfg.pairs.per_sentence_cap);
  }

  std::ostringstream csv;
  write_csv_row(csv, {"pair_id", "sent_a", "sent_b", "sts_prescore"});
  for (const auto& p : sel.pairs) {
    write_csv_row(csv, {p.pair_id, p.sent_a, p.sent_b, format_double_exact(p.sts_prescore)});
  }
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("pairs.csv", csv.str());
  out.finalize();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu pairs (min accepted prescore %.4f) -> %s",
                sel.pairs.size(), sel.min_accepted_prescore,
                out.file_path("pairs.csv").c_str());
  summary("sample-pairs", buf);
  return 0;
}

// ---------------------------------------------------------------------------
// featurize

std::vector<pairing::ArgumentPair> load_stage_pairs(const Context& ctx, bool need_gold) {
  const std::string pairs_path = ctx.require_input("pairs.csv", ctx.cfg.paths.pairs, "pairs.csv");
  std::vector<pairing::ArgumentPair> pairs = pairing::load_pairs_csv(pairs_path);
  if (!ctx.cfg.paths.afs_annotations.empty()) {
    const auto annotations = pairing::load_afs_annotations(ctx.cfg.paths.afs_annotations);
    pairing::merge_annotations(pairs, annotations);
  } else if (need_gold) {
    throw Error("config: [paths] afs_annotations is required for this command");
  }
  return pairs;
}

int cmd_featurize(Context& ctx) {
  const std::string corpus_path =
      ctx.require_input("corpus_kept.conllu", ctx.cfg.paths.corpus, "corpus");
  if (ctx.dry_run) {
    summary("featurize", "dry-run: would read " + corpus_path + " + pairs and write " +
                             ctx.staged("features.csv"));
    return 0;
  }
  const Corpus corpus = load_corpus_file(corpus_path, ctx.cfg.topic);
  std::vector<pairing::ArgumentPair> pairs = load_stage_pairs(ctx, false);

  StringSet stopwords;
  std::optional<features::CategoryLexicon> lexicon;
  std::optional<features::EmbeddingTable> table;
  const features::FeatureResources res =
      make_resources(ctx, ctx.cfg.features, stopwords, lexicon, table);

  const report::PairFeatureMatrix fm =
      report::build_feature_matrix(pairs, corpus, ctx.cfg.features, res, ctx.jobs);

  std::ostringstream csv;
  std::vector<std::string> header{"pair_id"};
  header.insert(header.end(), fm.layout.names.begin(), fm.layout.names.end());
  header.push_back("gold_afs");
  write_csv_row(csv, header);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<std::string> fields{fm.ids[i]};
    const double* row = fm.X.row(i);
    for (std::size_t j = 0; j < fm.X.cols; ++j) fields.push_back(format_double_exact(row[j]));
    fields.push_back(fm.gold[i] ? format_double_exact(*fm.gold[i]) : std::string());
    write_csv_row(csv, fields);
  }
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("features.csv", csv.str());
  out.finalize();
  summary("featurize", std::to_string(pairs.size()) + " pairs x " +
                           std::to_string(fm.X.cols) + " features (layout " +
                           fm.layout.fingerprint() + ") -> " + out.file_path("features.csv"));
  return 0;
}

// ---------------------------------------------------------------------------
// train / score (feature-matrix commands)

struct LoadedFeatures {
  ml::Matrix X;
  std::vector<std::optional<double>> gold;
  std::vector<std::string> ids;
  std::vector<std::string> names;  // feature columns
  std::string fingerprint;
};

LoadedFeatures load_feature_csv(const std::string& path) {
  const CsvTable t = CsvTable::read_file(path);
  const std::size_t c_id = t.col("pair_id");
  const std::size_t c_gold = t.col("gold_afs");
  LoadedFeatures out;
  for (std::size_t j = 0; j < t.header().size(); ++j) {
    if (j == c_id || j == c_gold) continue;
    out.names.push_back(t.header()[j]);
  }
  std::string joined;
  for (const auto& n : out.names) {
    joined += n;
    joined.push_back(',');
  }
  out.fingerprint = to_hex(fnv1a64(joined));
  out.X = ml::Matrix(t.n_rows(), out.names.size());
  out.gold.resize(t.n_rows());
  out.ids.resize(t.n_rows());
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    out.ids[r] = t.at(r, c_id);
    std::size_t col = 0;
    for (std::size_t j = 0; j < t.header().size(); ++j) {
      if (j == c_id || j == c_gold) continue;
      out.X.at(r, col++) = parse_double(t.at(r, j), path);
    }
    const std::string& g = t.at(r, c_gold);
    if (!g.empty()) out.gold[r] = parse_double(g, path);
  }
  return out;
}

int cmd_train(Context& ctx, const std::string& kind_name_arg) {
  const std::string features_path =
      ctx.require_input("features.csv", ctx.cfg.paths.features, "features.csv");
  if (ctx.dry_run) {
    summary("train", "dry-run: would read " + features_path + " and write " + ctx.staged("model.json"));
    return 0;
  }
  const LoadedFeatures lf = load_feature_csv(features_path);
  std::vector<std::size_t> with_gold;
  for (std::size_t i = 0; i < lf.gold.size(); ++i) {
    if (lf.gold[i]) with_gold.push_back(i);
  }
  if (with_gold.size() < 2) throw Error("train: need at least 2 pairs with gold AFS");
  const ml::Matrix X = lf.X.take_rows(with_gold);
  std::vector<double> y;
  for (std::size_t i : with_gold) y.push_back(*lf.gold[i]);

  const ml::ModelKind kind = ml::kind_from_name(kind_name_arg);
  const auto grid = ctx.cfg.grids.build(kind, X.cols);
  const ml::GridSearchResult gs = ml::grid_search(kind, X, y, grid, ctx.cfg.inner_k);
  const ml::RegressionModel model = ml::train_model(kind, X, y, gs.best, lf.fingerprint);
  if (!model.converged) std::fprintf(stderr, "warning: SVR did not fully converge\n");

  std::ostringstream json_out;
  ml::save_model(json_out, model);
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("model.json", json_out.str());
  out.finalize();
  summary("train", std::string(ml::kind_name(kind)) + " on " + std::to_string(y.size()) +
                       " pairs, chosen " + gs.best.to_string(kind == ml::ModelKind::svr) +
                       " -> " + out.file_path("model.json"));
  return 0;
}

int cmd_score(Context& ctx) {
  const std::string features_path =
      ctx.require_input("features.csv", ctx.cfg.paths.features, "features.csv");
  const std::string model_path = ctx.require_input("model.json", ctx.cfg.paths.model, "model.json");
  if (ctx.dry_run) {
    summary("score", "dry-run: would read " + features_path + " + " + model_path +
                         " and write " + ctx.staged("predictions.csv"));
    return 0;
  }
  const LoadedFeatures lf = load_feature_csv(features_path);
  const ml::RegressionModel model = ml::load_model_file(model_path);
  if (!model.fingerprint.empty() && model.fingerprint != lf.fingerprint) {
    throw Error("feature layout mismatch: model " + model.fingerprint + ", features " +
                lf.fingerprint);
  }
  const std::vector<double> pred = ml::predict(model, lf.X);

  std::ostringstream csv;
  write_csv_row(csv, {"pair_id", "prediction"});
  for (std::size_t i = 0; i < pred.size(); ++i) {
    write_csv_row(csv, {lf.ids[i], format_double(pred[i], 6)});
  }
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("predictions.csv", csv.str());
  out.finalize();
  summary("score", std::to_string(pred.size()) + " predictions -> " +
                       out.file_path("predictions.csv"));
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate / ttest / export-qualitative

int cmd_evaluate(Context& ctx) {
  const std::string corpus_path =
      ctx.require_input("corpus_kept.conllu", ctx.cfg.paths.corpus, "corpus");
  if (ctx.dry_run) {
    summary("evaluate", "dry-run: would read " + corpus_path +
                            " + pairs + annotations and write " + ctx.staged("results.csv") +
                            ", " + ctx.staged("results.txt") + ", " + ctx.staged("folds.csv"));
    return 0;
  }
  const Corpus corpus = load_corpus_file(corpus_path, ctx.cfg.topic);
  std::vector<pairing::ArgumentPair> pairs = load_stage_pairs(ctx, true);

  const report::SplitResult split =
      report::split_setaside(pairs, ctx.cfg.experiment.set_aside_fraction, ctx.cfg.seed);
  std::vector<pairing::ArgumentPair> dev;
  for (std::size_t i : split.dev) dev.push_back(pairs[i]);

  StringSet stopwords;
  std::optional<features::CategoryLexicon> lexicon;
  std::optional<features::EmbeddingTable> table;
  const features::FeatureResources res =
      make_resources(ctx, union_of_rows(ctx.cfg.experiment), stopwords, lexicon, table);

  report::ResultTable result =
      report::run_table(dev, corpus, res, ctx.cfg.experiment, ctx.cfg.grids, ctx.cfg.outer_k,
                        ctx.cfg.inner_k, ctx.cfg.seed, ctx.jobs);

  // human topline over the dev pairs' annotations, when >= 2 workers overlap
  std::vector<pairing::AfsAnnotation> dev_annotations;
  for (const auto& p : dev) {
    dev_annotations.insert(dev_annotations.end(), p.annotations.begin(), p.annotations.end());
  }
  try {
    result.human_topline = pairing::human_topline(dev_annotations).topline;
  } catch (const Error&) {
    // single-worker data has no topline
  }

  std::ostringstream results_csv, results_txt, folds_csv, split_json, aggregate_json;
  report::write_result_csv(results_csv, result);
  report::write_result_text(results_txt, result);
  report::write_folds_csv(folds_csv, result);

  nlohmann::json js;
  js["dev"] = nlohmann::json::array();
  js["setaside"] = nlohmann::json::array();
  for (std::size_t i : split.dev) js["dev"].push_back(pairs[i].pair_id);
  for (std::size_t i : split.setaside) js["setaside"].push_back(pairs[i].pair_id);
  split_json << js.dump(2) << '\n';

  nlohmann::json ja;
  ja["seed"] = ctx.cfg.seed;
  ja["outer_k"] = ctx.cfg.outer_k;
  ja["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json jr;
    jr["feature_set"] = row.name;
    jr["model"] = std::string(ml::kind_name(row.kind));
    if (row.mean_r) jr["mean_r"] = *row.mean_r;
    jr["mean_rmse"] = row.mean_rmse;
    ja["rows"].push_back(std::move(jr));
  }
  if (result.human_topline) ja["human_topline"] = *result.human_topline;
  aggregate_json << ja.dump(2) << '\n';

  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("results.csv", results_csv.str());
  out.write("results.txt", results_txt.str());
  out.write("folds.csv", folds_csv.str());
  out.write("split.json", split_json.str());
  out.write("results.json", aggregate_json.str());
  out.finalize();

  std::printf("%s", results_txt.str().c_str());
  summary("evaluate", std::to_string(result.rows.size()) + " rows on " +
                          std::to_string(dev.size()) + " dev pairs (" +
                          std::to_string(split.setaside.size()) + " set aside) -> " + ctx.out_dir);
  return 0;
}

int cmd_ttest(Context& ctx, const std::string& row_a, const std::string& row_b) {
  const std::string folds_path = ctx.require_input("folds.csv", "", "folds.csv (run evaluate first)");
  if (ctx.dry_run) {
    summary("ttest", "dry-run: would read " + folds_path + " and write " + ctx.staged("ttest.csv"));
    return 0;
  }
  const CsvTable t = CsvTable::read_file(folds_path);
  const std::size_t c_set = t.col("feature_set");
  const std::size_t c_fold = t.col("fold");
  const std::size_t c_rmse = t.col("rmse");
  std::map<long long, double> a_map, b_map;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    const std::string& name = t.at(r, c_set);
    if (name != row_a && name != row_b) continue;
    auto& m = name == row_a ? a_map : b_map;
    m[parse_int(t.at(r, c_fold), folds_path)] = parse_double(t.at(r, c_rmse), folds_path);
  }
  if (a_map.empty()) throw Error("ttest: no folds for row '" + row_a + "'");
  if (a_map.size() != b_map.size()) throw Error("ttest: fold counts differ between rows");
  std::vector<double> a, b;
  for (const auto& [fold, v] : a_map) {
    if (!b_map.count(fold)) throw Error("ttest: fold sets differ between rows");
    a.push_back(v);
    b.push_back(b_map[fold]);
  }
  const ml::TTestResult res = ml::paired_ttest(a, b);

  std::ostringstream csv;
  write_csv_row(csv, {"row_a", "row_b", "t", "df", "p"});
  write_csv_row(csv, {row_a, row_b, format_double(res.t, 6), std::to_string(res.df),
                      format_double(res.p, 6)});
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("ttest.csv", csv.str());
  out.finalize();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s vs %s: t=%.4f df=%d p=%.5f -> %s", row_a.c_str(),
                row_b.c_str(), res.t, res.df, res.p, out.file_path("ttest.csv").c_str());
  summary("ttest", buf);
  return 0;
}

int cmd_export_qualitative(Context& ctx) {
  const std::string corpus_path =
      ctx.require_input("corpus_kept.conllu", ctx.cfg.paths.corpus, "corpus");
  if (ctx.dry_run) {
    summary("export-qualitative", "dry-run: would read " + corpus_path +
                                      " + pairs + annotations and write " +
                                      ctx.staged("qualitative.csv"));
    return 0;
  }
  const Corpus corpus = load_corpus_file(corpus_path, ctx.cfg.topic);
  std::vector<pairing::ArgumentPair> pairs = load_stage_pairs(ctx, true);
  const report::SplitResult split =
      report::split_setaside(pairs, ctx.cfg.experiment.set_aside_fraction, ctx.cfg.seed);
  std::vector<pairing::ArgumentPair> dev, setaside;
  for (std::size_t i : split.dev) dev.push_back(pairs[i]);
  for (std::size_t i : split.setaside) setaside.push_back(pairs[i]);

  StringSet stopwords;
  std::optional<features::CategoryLexicon> lexicon;
  std::optional<features::EmbeddingTable> table;
  const features::FeatureResources res =
      make_resources(ctx, union_of_rows(ctx.cfg.experiment), stopwords, lexicon, table);

  const std::vector<report::TrainedRowModel> models = report::train_row_models(
      dev, corpus, res, ctx.cfg.experiment, ctx.cfg.grids, ctx.cfg.inner_k, ctx.jobs);
  const report::QualitativeTable table_out =
      report::qualitative_export(setaside, corpus, models, res, ctx.jobs);

  std::ostringstream csv;
  report::write_qualitative_csv(csv, table_out);
  OutputDir out(ctx.out_dir, ctx.dry_run);
  out.write("qualitative.csv", csv.str());
  out.finalize();
  summary("export-qualitative", std::to_string(table_out.rows.size()) + " set-aside pairs x " +
                                    std::to_string(models.size()) + " models -> " +
                                    out.file_path("qualitative.csv"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"argsim: sentential argument similarity pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string topic_override;
  std::string seed_override;
  unsigned jobs = 1;
  bool dry_run = false;
  app.add_option("--config", config_path, "pipeline config file (INI)")->required();
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--topic", topic_override, "restrict to one topic");
  app.add_option("--seed", seed_override, "override the global seed");
  app.add_option("--jobs", jobs, "worker threads (default 1, reproducible)");
  app.add_flag("--dry-run", dry_run, "validate config and print the plan without writing");

  auto* c_ingest = app.add_subcommand("ingest", "load raw/CoNLL-U sentences, dedup, write the corpus");
  auto* c_filter = app.add_subcommand("filter-aq", "rescore AQ, band-filter, bin and sample");
  auto* c_binrep = app.add_subcommand("bin-report", "per-bin argument quality from annotations");
  auto* c_pairs = app.add_subcommand("sample-pairs", "prescore and select annotation pairs");
  auto* c_feat = app.add_subcommand("featurize", "compute the feature matrix for pairs");
  auto* c_train = app.add_subcommand("train", "grid-search and fit one model on all gold pairs");
  std::string train_kind = "svr";
  c_train->add_option("--model", train_kind, "ridge or svr (default svr)");
  auto* c_eval = app.add_subcommand("evaluate", "nested CV result table on the dev split");
  auto* c_ttest = app.add_subcommand("ttest", "paired t-test between two evaluated rows");
  std::string row_a, row_b;
  c_ttest->add_option("--row-a", row_a, "first feature-set row")->required();
  c_ttest->add_option("--row-b", row_b, "second feature-set row")->required();
  auto* c_score = app.add_subcommand("score", "apply a trained model to a feature matrix");
  auto* c_export = app.add_subcommand("export-qualitative", "set-aside predictions per model");

  CLI11_PARSE(app, argc, argv);

  try {
    Context ctx;
    ctx.cfg = PipelineConfig::from_file(ConfigFile::load(config_path));
    ctx.out_dir = out_dir;
    ctx.jobs = jobs == 0 ? 1 : jobs;
    ctx.dry_run = dry_run;
    if (!topic_override.empty()) ctx.cfg.topic = topic_override;
    if (!seed_override.empty()) {
      ctx.cfg.seed = static_cast<std::uint64_t>(parse_int(seed_override, "--seed"));
      ctx.cfg.aq.rng_seed = ctx.cfg.seed;
      ctx.cfg.pairs.rng_seed = ctx.cfg.seed;
    }

    if (c_ingest->parsed()) return cmd_ingest(ctx);
    if (c_filter->parsed()) return cmd_filter_aq(ctx);
    if (c_binrep->parsed()) return cmd_bin_report(ctx);
    if (c_pairs->parsed()) return cmd_sample_pairs(ctx);
    if (c_feat->parsed()) return cmd_featurize(ctx);
    if (c_train->parsed()) return cmd_train(ctx, train_kind);
    if (c_eval->parsed()) return cmd_evaluate(ctx);
    if (c_ttest->parsed()) return cmd_ttest(ctx, row_a, row_b);
    if (c_score->parsed()) return cmd_score(ctx);
    if (c_export->parsed()) return cmd_export_qualitative(ctx);
    throw Error("no subcommand given");
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
