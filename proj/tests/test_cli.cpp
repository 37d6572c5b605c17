// Copyright 2026 The storyeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "storyeval/cli.hpp"
#include "storyeval/corpus_io.hpp"
#include "storyeval/error.hpp"
#include "storyeval/eval.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace storyeval;
namespace ts = storyeval::testsupport;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

// Small end-to-end world on disk plus a config pointing at it.
struct CliFixture {
  ts::TempDir dir;
  ts::SyntheticWorld world;
  std::filesystem::path config_path;

  explicit CliFixture(std::size_t stories = 60) : world(ts::make_world(stories, 5)) {
    world.write_files(dir.path);
    auto annotations = ts::make_annotations(world, 40, 17, nullptr);
    save_annotations(annotations, dir.path / "annotations.jsonl");
    // Stories to score: reuse the corpus file.
    config_path = dir.path / "run.conf";
    std::ofstream cfg(config_path);
    cfg << "seed = 11\n";
    cfg << "[paths]\n";
    cfg << "corpus = " << (dir.path / "corpus.jsonl").string() << "\n";
    cfg << "kb = " << (dir.path / "kb.tsv").string() << "\n";
    cfg << "verbs = " << (dir.path / "verbs.tsv").string() << "\n";
    cfg << "pos = " << (dir.path / "pos.tsv").string() << "\n";
    cfg << "annotations = " << (dir.path / "annotations.jsonl").string() << "\n";
    cfg << "stories = " << (dir.path / "corpus.jsonl").string() << "\n";
    cfg << "out_dir = " << (dir.path / "out").string() << "\n";
    cfg << "[corpus]\n";
    cfg << "max_words = 200\n";
    cfg << "min_freq = 1\n";
    cfg << "[model]\n";
    cfg << "hidden = 32\n";
    cfg << "layers = 1\n";
    cfg << "heads = 2\n";
    cfg << "ffn = 64\n";
    cfg << "max_len = 64\n";
    cfg << "lambda = 0.1\n";
    cfg << "dropout = 0.0\n";
    cfg << "[train]\n";
    cfg << "batch = 10\n";
    cfg << "learning_rate = 0.001\n";
    cfg << "epochs = 2\n";
  }

  cli::RunConfig config() const { return cli::parse_run_config(config_path); }
  std::filesystem::path out(const char* name) const {
    return dir.path / "out" / name;
  }
};

}  // namespace

TEST_CASE("config parser reads sections, rejects unknown keys") {
  ts::TempDir dir;
  auto path = dir.path / "c.conf";
  {
    std::ofstream out(path);
    out << "# comment\nseed = 7\n[mixer]\n";
    out << "count_distribution = 0.5 0.2 0.2 0.1\n";
    out << "keyword_substitution_rate = 0.15\n";
    out << "[model]\nhidden = 8\n";
  }
  cli::RunConfig cfg = cli::parse_run_config(path);
  CHECK(cfg.seed == 7);
  CHECK(cfg.model.hidden == 8);
  CHECK(cfg.mixer.keyword_substitution_rate == doctest::Approx(0.15));

  {
    std::ofstream out(path);
    out << "[model]\nwidth = 8\n";
  }
  CHECK_THROWS_WITH_AS(cli::parse_run_config(path),
                       doctest::Contains("unknown config key"), Error);
}

TEST_CASE("flag overrides change the hash") {
  CliFixture fx;
  cli::RunConfig base = fx.config();
  cli::RunConfig overridden = fx.config();
  cli::CommandOptions opts;
  opts.seed = 1234;
  opts.lambda = 0.0;
  cli::apply_overrides(overridden, opts);
  CHECK(overridden.seed == 1234);
  CHECK(overridden.model.lambda == 0.0);
  CHECK(base.config_hash() != overridden.config_hash());
}

TEST_CASE("perturb -> train -> score -> evaluate pipeline") {
  CliFixture fx;
  std::ostringstream log;
  cli::RunConfig cfg = fx.config();

  cli::cmd_perturb(cfg, log);
  REQUIRE(std::filesystem::exists(fx.out("pairs.jsonl")));
  {
    // Every output embeds the resolved config hash and seed up front.
    std::ifstream in(fx.out("pairs.jsonl"));
    std::string first_line;
    std::getline(in, first_line);
    CHECK(first_line.find("_header") != std::string::npos);
    CHECK(first_line.find(cfg.config_hash()) != std::string::npos);
    CHECK(first_line.find("\"seed\":11") != std::string::npos);
  }
  auto pairs = load_pairs(fx.out("pairs.jsonl"));
  CHECK(pairs.size() == 2 * fx.world.stories.size());
  std::size_t positives = 0;
  for (const auto& p : pairs) positives += p.y == 1;
  CHECK(positives == fx.world.stories.size());

  cli::cmd_train(cfg, log);
  REQUIRE(std::filesystem::exists(fx.out("model.ckpt")));
  REQUIRE(std::filesystem::exists(fx.out("train_log.jsonl")));
  {
    std::ifstream loss_log(fx.out("train_log.jsonl"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(loss_log, line))
      if (!line.empty()) ++lines;
    CHECK(lines == 1 + 2);  // header + one record per epoch
  }

  cli::cmd_score(cfg, log);
  REQUIRE(std::filesystem::exists(fx.out("scores.jsonl")));
  auto scores = load_scores(fx.out("scores.jsonl"));
  REQUIRE(scores.size() == fx.world.stories.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    CHECK(scores[i].first == fx.world.stories[i].id);  // order preserved
    CHECK(scores[i].second > 0.0);
    CHECK(scores[i].second < 1.0);
  }

  // Evaluate needs scores for the annotated ids; score the annotation file.
  cli::RunConfig eval_cfg = cfg;
  eval_cfg.paths.stories = cfg.paths.annotations;
  cli::cmd_score(eval_cfg, log);
  cli::cmd_evaluate(eval_cfg, /*json=*/true, log);
  REQUIRE(std::filesystem::exists(fx.out("report.json")));
  CHECK(slurp(fx.out("report.json")).find("pearson") != std::string::npos);

  cli::cmd_evaluate(eval_cfg, /*json=*/false, log);
  REQUIRE(std::filesystem::exists(fx.out("report.txt")));
}

TEST_CASE("pipeline outputs are byte-identical across reruns") {
  CliFixture fx(40);
  cli::RunConfig cfg = fx.config();
  std::ostringstream log;

  cli::cmd_perturb(cfg, log);
  cli::cmd_train(cfg, log);
  cli::cmd_score(cfg, log);
  std::string pairs1 = slurp(fx.out("pairs.jsonl"));
  std::string ckpt1 = slurp(fx.out("model.ckpt"));
  std::string scores1 = slurp(fx.out("scores.jsonl"));

  cli::cmd_perturb(cfg, log);
  cli::cmd_train(cfg, log);
  cli::cmd_score(cfg, log);
  CHECK(pairs1 == slurp(fx.out("pairs.jsonl")));
  CHECK(ckpt1 == slurp(fx.out("model.ckpt")));
  CHECK(scores1 == slurp(fx.out("scores.jsonl")));

  // A different seed changes the negatives.
  cli::RunConfig reseeded = cfg;
  reseeded.seed = 999;
  cli::cmd_perturb(reseeded, log);
  CHECK(pairs1 != slurp(fx.out("pairs.jsonl")));
}

TEST_CASE("bias command emits eight subset files and a report") {
  CliFixture fx(30);
  cli::RunConfig cfg = fx.config();
  std::ostringstream log;
  cli::cmd_perturb(cfg, log);
  cli::cmd_train(cfg, log);
  cli::RunConfig eval_cfg = cfg;
  eval_cfg.paths.stories = cfg.paths.annotations;
  cli::cmd_score(eval_cfg, log);

  cli::cmd_bias(eval_cfg, log);
  for (int i = 1; i <= 8; ++i) {
    auto path = fx.out(("bias_set_" + std::to_string(i) + ".jsonl").c_str());
    CAPTURE(i);
    REQUIRE(std::filesystem::exists(path));
    CHECK_NOTHROW(load_annotations(path));  // header line is tolerated
  }
  REQUIRE(std::filesystem::exists(fx.out("bias_report.json")));
}

TEST_CASE("lambda override propagates into training") {
  CliFixture fx(30);
  std::ostringstream log;
  cli::RunConfig cfg = fx.config();
  cli::cmd_perturb(cfg, log);
  cli::cmd_train(cfg, log);
  std::string with_recon = slurp(fx.out("model.ckpt"));

  cli::CommandOptions opts;
  opts.lambda = 0.0;
  cli::RunConfig no_recon_cfg = fx.config();
  cli::apply_overrides(no_recon_cfg, opts);
  cli::cmd_train(no_recon_cfg, log);
  std::string without_recon = slurp(fx.out("model.ckpt"));
  CHECK(with_recon != without_recon);

  // Lambda 0 must reproduce itself too.
  cli::cmd_train(no_recon_cfg, log);
  CHECK(without_recon == slurp(fx.out("model.ckpt")));
}

TEST_CASE("missing inputs exit with a diagnostic") {
  CliFixture fx(20);
  cli::RunConfig cfg = fx.config();
  cfg.paths.corpus = fx.dir.path / "does-not-exist.jsonl";
  std::ostringstream log;
  CHECK_THROWS_AS(cli::cmd_perturb(cfg, log), Error);

  cli::RunConfig no_pairs = fx.config();
  no_pairs.paths.out_dir = fx.dir.path / "fresh-out";
  CHECK_THROWS_AS(cli::cmd_train(no_pairs, log), Error);
}

TEST_CASE("empty story file scores to an empty output") {
  CliFixture fx(20);
  std::ostringstream log;
  cli::RunConfig cfg = fx.config();
  cli::cmd_perturb(cfg, log);
  cli::cmd_train(cfg, log);

  auto empty_path = fx.dir.path / "none.jsonl";
  std::ofstream(empty_path).close();
  cli::RunConfig cfg2 = cfg;
  cfg2.paths.stories = empty_path;
  cli::cmd_score(cfg2, log);
  auto scores = load_scores(fx.out("scores.jsonl"));
  CHECK(scores.empty());
}

TEST_CASE("ablation command writes a five-row table") {
  CliFixture fx(24);
  std::ostringstream log;
  cli::RunConfig cfg = fx.config();
  cfg.trainer.epochs = 1;
  cfg.model.hidden = 16;
  cfg.model.ffn = 32;
  cli::cmd_ablate(cfg, log);
  REQUIRE(std::filesystem::exists(fx.out("ablation.json")));
  REQUIRE(std::filesystem::exists(fx.out("ablation.txt")));
  std::string text = slurp(fx.out("ablation.txt"));
  CHECK(text.find("(none)") != std::string::npos);
  for (Technique t : kTechniques)
    CHECK(text.find(technique_name(t)) != std::string::npos);
  // Five data rows: none + four techniques.
  std::size_t rows = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6);  // header + 5
}
