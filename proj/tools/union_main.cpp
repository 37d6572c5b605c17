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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "storyeval/cli.hpp"
#include "storyeval/error.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  storyeval::cli::CommandOptions options;
};

void add_common(CLI::App* sub, GlobalArgs& args, bool* seed_set,
                std::uint64_t* seed, bool* lambda_set, double* lambda,
                bool* out_set, std::string* out_dir) {
  sub->add_option("--config", args.config_path, "run configuration file")
      ->required();
  sub->add_option("--seed", *seed, "override the global seed")
      ->each([seed_set](const std::string&) { *seed_set = true; });
  sub->add_option("--lambda", *lambda, "override the reconstruction weight")
      ->each([lambda_set](const std::string&) { *lambda_set = true; });
  sub->add_option("--out", *out_dir, "override the output directory")
      ->each([out_set](const std::string&) { *out_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unreferenced story-quality metric pipeline"};
  app.require_subcommand(1);

  GlobalArgs args;
  bool seed_set = false, lambda_set = false, out_set = false;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::string out_dir;
  bool json_report = false;

  CLI::App* perturb = app.add_subcommand("perturb", "build training pairs");
  CLI::App* train = app.add_subcommand("train", "train the scorer");
  CLI::App* score = app.add_subcommand("score", "score stories");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "correlate scores with annotations");
  CLI::App* bias = app.add_subcommand("bias", "build quality-drift subsets");
  CLI::App* ablate = app.add_subcommand("ablate", "technique ablation table");
  for (CLI::App* sub : {perturb, train, score, evaluate, bias, ablate})
    add_common(sub, args, &seed_set, &seed, &lambda_set, &lambda, &out_set,
               &out_dir);
  evaluate->add_flag("--json", json_report, "write the report as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    storyeval::cli::RunConfig config =
        storyeval::cli::parse_run_config(args.config_path);
    if (seed_set) args.options.seed = seed;
    if (lambda_set) args.options.lambda = lambda;
    if (out_set) args.options.out_dir = out_dir;
    storyeval::cli::apply_overrides(config, args.options);

    if (perturb->parsed()) storyeval::cli::cmd_perturb(config, std::cerr);
    if (train->parsed()) storyeval::cli::cmd_train(config, std::cerr);
    if (score->parsed()) storyeval::cli::cmd_score(config, std::cerr);
    if (evaluate->parsed())
      storyeval::cli::cmd_evaluate(config, json_report, std::cerr);
    if (bias->parsed()) storyeval::cli::cmd_bias(config, std::cerr);
    if (ablate->parsed()) storyeval::cli::cmd_ablate(config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
