// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the argsim binary on the shipped mini corpus, plus
// config parsing units. The binary path comes from ARGSIM_BIN_PATH; runs are
// pinned to the scalar kernels so the golden files hold on any host.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "argsim/common.hpp"
#include "argsim/config.hpp"
#include "argsim/text.hpp"

using namespace argsim;
namespace fs = std::filesystem;

namespace {

const std::string kSourceDir = ARGSIM_SOURCE_DIR;
const std::string kBin = ARGSIM_BIN_PATH;
const std::string kConfig = kSourceDir + "/data/mini/config.ini";

int run(const std::string& args) {
  const std::string cmd = "ARGSIM_SIMD=scalar " + kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("argsim_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void run_full_pipeline(const fs::path& out) {
  const std::string base = "--config " + kConfig + " --out " + out.string() + " ";
  for (const char* cmd : {"ingest", "filter-aq", "bin-report", "sample-pairs", "featurize",
                          "train", "evaluate", "score", "export-qualitative"}) {
    CAPTURE(cmd);
    REQUIRE(run(base + cmd) == 0);
  }
}

}  // namespace

TEST_CASE("config file parsing: sections, defaults, row grammar") {
  const auto file = ConfigFile::from_string(
      "[global]\n"
      "seed = 99\n"
      "# comment line\n"
      "[aq]\n"
      "min_tokens = 12\n"
      "bin_edges = 0.5,0.7,1.0\n"
      "[experiment]\n"
      "rows = a : ngram : ridge ; b : ngram+rouge : svr\n"
      "significance = b ~ a\n");
  const auto cfg = PipelineConfig::from_file(file);
  CHECK(cfg.seed == 99);
  CHECK(cfg.aq.min_tokens == 12);
  CHECK(cfg.aq.max_tokens == 40);  // default survives
  CHECK(cfg.aq.bin_edges == std::vector<double>{0.5, 0.7, 1.0});
  REQUIRE(cfg.experiment.rows.size() == 2);
  CHECK(cfg.experiment.rows[0].name == "a");
  CHECK(cfg.experiment.rows[0].kind == ml::ModelKind::ridge);
  CHECK(cfg.experiment.rows[1].features.rouge);
  CHECK_FALSE(cfg.experiment.rows[0].features.rouge);
  REQUIRE(cfg.experiment.significance_pairs.size() == 1);
  CHECK(cfg.experiment.significance_pairs[0].first == "b");

  CHECK_THROWS_AS(ConfigFile::from_string("key = 1\n"), Error);            // key outside section
  CHECK_THROWS_AS(ConfigFile::from_string("[x]\nbroken line\n"), Error);   // no '='
  CHECK_THROWS_AS(
      PipelineConfig::from_file(ConfigFile::from_string("[experiment]\nrows = bad row\n")), Error);
}

TEST_CASE("config: paper defaults are pre-populated") {
  const auto cfg = PipelineConfig::from_file(ConfigFile::from_string("[global]\nseed = 1\n"));
  CHECK(cfg.aq.min_tokens == 10);
  CHECK(cfg.aq.max_tokens == 40);
  CHECK(cfg.aq.zero_rule_min_dict_words == 4);
  CHECK(cfg.aq.high_aq_threshold == 0.55);
  CHECK(cfg.aq.bin_edges == std::vector<double>{0.55, 0.65, 0.75, 0.85, 0.95, 1.0});
  CHECK(cfg.pairs.target_pairs == 2000);
  CHECK(cfg.pairs.per_sentence_cap == 10);
  CHECK(cfg.experiment.set_aside_fraction == 0.10);
  CHECK(cfg.outer_k == 10);
}

TEST_CASE("config: environment variables override file values") {
  ::setenv("ARGSIM_GLOBAL_SEED", "1234", 1);
  const auto cfg = PipelineConfig::from_file(ConfigFile::from_string("[global]\nseed = 1\n"));
  ::unsetenv("ARGSIM_GLOBAL_SEED");
  CHECK(cfg.seed == 1234);
}

TEST_CASE("cli: dry-run validates without writing") {
  TempDir tmp;
  const fs::path out = tmp.path / "dry";
  REQUIRE(run("--config " + kConfig + " --out " + out.string() + " --dry-run ingest") == 0);
  CHECK_FALSE(fs::exists(out / "corpus.conllu"));
}

TEST_CASE("cli: bad config exits 1") {
  CHECK(run("--config /nonexistent/config.ini ingest") == 1);
  TempDir tmp;
  // featurize without its staged inputs is a validation error
  CHECK(run("--config " + kConfig + " --out " + (tmp.path / "x").string() + " featurize") == 1);
}

TEST_CASE("cli: full pipeline on the mini corpus matches the golden outputs") {
  TempDir tmp;
  const fs::path out = tmp.path / "run";
  run_full_pipeline(out);

  for (const char* artifact :
       {"corpus.conllu", "corpus_kept.conllu", "aq_rescored.csv", "aq_samples.csv",
        "bin_report.csv", "pairs.csv", "features.csv", "model.json", "results.csv", "results.txt",
        "folds.csv", "split.json", "results.json", "predictions.csv", "qualitative.csv",
        "manifest.json"}) {
    CAPTURE(artifact);
    CHECK(fs::exists(out / artifact));
  }

  CHECK(slurp(out / "results.csv") == slurp(kSourceDir + "/data/mini/golden/results.csv"));
  CHECK(slurp(out / "qualitative.csv") == slurp(kSourceDir + "/data/mini/golden/qualitative.csv"));

  // featurize emitted one data row per pair
  const auto features = slurp(out / "features.csv");
  std::size_t lines = 0;
  for (char c : features) lines += c == '\n';
  const auto pairs = slurp(out / "pairs.csv");
  std::size_t pair_lines = 0;
  for (char c : pairs) pair_lines += c == '\n';
  CHECK(lines == pair_lines);  // same row count incl. header

  SUBCASE("ttest subcommand reads the folds table") {
    REQUIRE(run("--config " + kConfig + " --out " + out.string() +
                " ttest --row-a combined --row-b ngram") == 0);
    CHECK(fs::exists(out / "ttest.csv"));
  }

  SUBCASE("rerunning evaluate reproduces byte-identical outputs") {
    const std::string before_results = slurp(out / "results.csv");
    const std::string before_folds = slurp(out / "folds.csv");
    REQUIRE(run("--config " + kConfig + " --out " + out.string() + " evaluate") == 0);
    CHECK(slurp(out / "results.csv") == before_results);
    CHECK(slurp(out / "folds.csv") == before_folds);
  }
}

TEST_CASE("cli: train/score fingerprint guard") {
  TempDir tmp;
  const fs::path out = tmp.path / "run";
  const std::string base = "--config " + kConfig + " --out " + out.string() + " ";
  REQUIRE(run(base + "ingest") == 0);
  REQUIRE(run(base + "filter-aq") == 0);
  REQUIRE(run(base + "sample-pairs") == 0);
  REQUIRE(run(base + "featurize") == 0);
  REQUIRE(run(base + "train --model ridge") == 0);

  // corrupt the feature header so the layout fingerprint no longer matches
  auto text = slurp(out / "features.csv");
  const auto pos = text.find("ngram_cosine");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "ngram_cosinX");
  std::ofstream(out / "features.csv", std::ios::binary) << text;
  CHECK(run(base + "score") == 1);
}
