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

#include "storyeval/cli.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "storyeval/error.hpp"
#include "storyeval/eval.hpp"
#include "storyeval/rng.hpp"

namespace storyeval::cli {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<double> parse_doubles(const std::string& value, std::size_t count,
                                  const std::string& key) {
  std::istringstream in(value);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (out.size() != count)
    throw Error("config key " + key + ": expected " + std::to_string(count) +
                " numbers");
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw Error("config key " + key + ": expected a number, got \"" + value + "\"");
  }
}

long long parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw Error("config key " + key + ": expected an integer, got \"" + value +
                "\"");
  }
}

void ensure_exists(const std::filesystem::path& path, const std::string& what) {
  if (path.empty()) throw Error("config: missing required path for " + what);
  if (!std::filesystem::exists(path))
    throw Error(what + " not found: " + path.string());
}

}  // namespace

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path.string());
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text.front() == '[' && text.back() == ']') {
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    std::string full = section.empty() ? key : section + "." + key;

    if (full == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, full));
    } else if (full == "paths.corpus") {
      cfg.paths.corpus = value;
    } else if (full == "paths.kb") {
      cfg.paths.kb = value;
    } else if (full == "paths.verbs") {
      cfg.paths.verbs = value;
    } else if (full == "paths.pos") {
      cfg.paths.pos = value;
    } else if (full == "paths.names") {
      cfg.paths.names = value;
    } else if (full == "paths.annotations") {
      cfg.paths.annotations = value;
    } else if (full == "paths.stories") {
      cfg.paths.stories = value;
    } else if (full == "paths.pairs") {
      cfg.paths.pairs = value;
    } else if (full == "paths.checkpoint") {
      cfg.paths.checkpoint = value;
    } else if (full == "paths.scores") {
      cfg.paths.scores = value;
    } else if (full == "paths.out_dir") {
      cfg.paths.out_dir = value;
    } else if (full == "corpus.max_words") {
      cfg.corpus_max_words = static_cast<std::size_t>(parse_int(value, full));
    } else if (full == "corpus.min_freq") {
      cfg.vocab_min_freq = static_cast<std::size_t>(parse_int(value, full));
    } else if (full == "mixer.count_distribution") {
      auto v = parse_doubles(value, 4, full);
      std::copy(v.begin(), v.end(), cfg.mixer.count_distribution.begin());
    } else if (full == "mixer.technique_weights") {
      auto v = parse_doubles(value, 4, full);
      std::copy(v.begin(), v.end(), cfg.mixer.technique_weights.begin());
    } else if (full == "mixer.keyword_substitution_rate") {
      cfg.mixer.keyword_substitution_rate = parse_double(value, full);
    } else if (full == "model.hidden") {
      cfg.model.hidden = static_cast<int>(parse_int(value, full));
    } else if (full == "model.layers") {
      cfg.model.layers = static_cast<int>(parse_int(value, full));
    } else if (full == "model.heads") {
      cfg.model.heads = static_cast<int>(parse_int(value, full));
    } else if (full == "model.ffn") {
      cfg.model.ffn = static_cast<int>(parse_int(value, full));
    } else if (full == "model.max_len") {
      cfg.model.max_len = static_cast<int>(parse_int(value, full));
    } else if (full == "model.lambda") {
      cfg.model.lambda = parse_double(value, full);
    } else if (full == "model.dropout") {
      cfg.model.dropout = parse_double(value, full);
    } else if (full == "train.batch") {
      cfg.trainer.batch_size = static_cast<int>(parse_int(value, full));
    } else if (full == "train.learning_rate") {
      cfg.trainer.learning_rate = parse_double(value, full);
    } else if (full == "train.beta1") {
      cfg.trainer.beta1 = parse_double(value, full);
    } else if (full == "train.beta2") {
      cfg.trainer.beta2 = parse_double(value, full);
    } else if (full == "train.epsilon") {
      cfg.trainer.epsilon = parse_double(value, full);
    } else if (full == "train.epochs") {
      cfg.trainer.epochs = static_cast<int>(parse_int(value, full));
    } else if (full == "train.clip_norm") {
      cfg.trainer.clip_norm = parse_double(value, full);
    } else {
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": unknown config key \"" + full + "\"");
    }
  }
  cfg.mixer.validate();
  return cfg;
}

void apply_overrides(RunConfig& config, const CommandOptions& options) {
  if (options.seed) config.seed = *options.seed;
  if (options.lambda) config.model.lambda = *options.lambda;
  if (options.out_dir) config.paths.out_dir = *options.out_dir;
}

// File locations stay out of the canonical form: the hash identifies the
// run recipe, and moving inputs or outputs must not change provenance.
std::string RunConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "seed=" << seed << "\n";
  out << "corpus.max_words=" << corpus_max_words << "\n";
  out << "corpus.min_freq=" << vocab_min_freq << "\n";
  out << "mixer.count=";
  for (double v : mixer.count_distribution) out << v << " ";
  out << "\nmixer.weights=";
  for (double v : mixer.technique_weights) out << v << " ";
  out << "\nmixer.rate=" << mixer.keyword_substitution_rate << "\n";
  out << "model=" << model.hidden << "," << model.layers << "," << model.heads
      << "," << model.ffn << "," << model.max_len << "," << model.lambda << ","
      << model.dropout << "\n";
  out << "train=" << trainer.batch_size << "," << trainer.learning_rate << ","
      << trainer.beta1 << "," << trainer.beta2 << "," << trainer.epsilon << ","
      << trainer.epochs << "," << trainer.clip_norm << "\n";
  return out.str();
}

std::string RunConfig::config_hash() const {
  std::string text = canonical();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

struct LoadedWorld {
  std::vector<Story> corpus;
  KnowledgeBase kb;
  VerbLexicon verbs;
  PosLexicon pos;
  FrequencyTable freq;
};

LoadedWorld load_world(const RunConfig& cfg, std::ostream& log) {
  ensure_exists(cfg.paths.corpus, "corpus");
  ensure_exists(cfg.paths.kb, "knowledge base");
  ensure_exists(cfg.paths.verbs, "verb lexicon");
  ensure_exists(cfg.paths.pos, "POS lexicon");
  LoadedWorld world;
  world.corpus = load_corpus(cfg.paths.corpus);
  if (!cfg.paths.names.empty()) {
    ensure_exists(cfg.paths.names, "name lexicon");
    NameLexicon names = NameLexicon::load(cfg.paths.names);
    for (auto& s : world.corpus) s = delexicalize(s, names);
  }
  for (auto& s : world.corpus) s = truncate_words(s, cfg.corpus_max_words);
  std::vector<std::string> warnings;
  world.kb = KnowledgeBase::load(cfg.paths.kb, &warnings);
  for (const auto& w : warnings) log << "kb: " << w << "\n";
  world.verbs = VerbLexicon::load(cfg.paths.verbs);
  world.pos = PosLexicon::load(cfg.paths.pos);
  world.freq = mention_frequency(world.corpus, world.kb, world.pos);
  return world;
}

std::filesystem::path resolved(const std::filesystem::path& explicit_path,
                               const std::filesystem::path& out_dir,
                               const char* default_name) {
  return explicit_path.empty() ? out_dir / default_name : explicit_path;
}

void make_out_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.paths.out_dir);
}

json report_to_json(const CorrelationReport& r) {
  return json{{"n", r.n},
              {"pearson", {{"r", r.pearson.coefficient}, {"p", r.pearson.p_value}}},
              {"spearman", {{"rho", r.spearman.coefficient}, {"p", r.spearman.p_value}}},
              {"kendall", {{"tau", r.kendall.coefficient}, {"p", r.kendall.p_value}}}};
}

}  // namespace

void cmd_perturb(const RunConfig& cfg, std::ostream& log) {
  LoadedWorld world = load_world(cfg, log);
  PerturbContext ctx{&world.kb, &world.freq, &world.pos, &world.verbs,
                     world.corpus};
  TrainingSet ts = build_training_set(world.corpus, ctx, cfg.mixer, cfg.seed);

  make_out_dir(cfg);
  auto out_path = resolved(cfg.paths.pairs, cfg.paths.out_dir, "pairs.jsonl");
  save_pairs(ts.pairs, out_path, cfg.header());

  std::array<std::size_t, 4> technique_counts{};
  std::array<std::size_t, 4> n_counts{};
  std::size_t positives = 0, negatives = 0;
  for (const auto& p : ts.pairs) {
    if (p.y == 1) {
      ++positives;
      continue;
    }
    ++negatives;
    std::array<bool, 4> seen{};
    for (const auto& e : p.edits) seen[static_cast<std::size_t>(e.technique)] = true;
    std::size_t distinct = 0;
    for (std::size_t t = 0; t < 4; ++t)
      if (seen[t]) {
        ++technique_counts[t];
        ++distinct;
      }
    if (distinct >= 1 && distinct <= 4) ++n_counts[distinct - 1];
  }
  for (const auto& w : ts.warnings) log << "warning: " << w << "\n";
  log << "perturb: " << world.corpus.size() << " stories -> " << ts.pairs.size()
      << " pairs (" << positives << " positive, " << negatives << " negative)\n";
  log << "  techniques:";
  for (std::size_t t = 0; t < 4; ++t)
    log << " " << technique_name(kTechniques[t]) << "=" << technique_counts[t];
  log << "\n  n:";
  for (std::size_t i = 0; i < 4; ++i) log << " " << (i + 1) << "=" << n_counts[i];
  log << "\n  wrote " << out_path.string() << "\n";
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  auto pairs_path = resolved(cfg.paths.pairs, cfg.paths.out_dir, "pairs.jsonl");
  ensure_exists(pairs_path, "training pairs");
  std::vector<TrainingPair> pairs = load_pairs(pairs_path);
  Vocab vocab = vocab_from_pairs(pairs, cfg.vocab_min_freq);

  TrainConfig tcfg = cfg.trainer;
  tcfg.seed = derive_seed(cfg.seed, "train");
  TrainResult result = train(pairs, vocab, cfg.model, tcfg);

  make_out_dir(cfg);
  auto ckpt_path = resolved(cfg.paths.checkpoint, cfg.paths.out_dir, "model.ckpt");
  save_model(result.model, ckpt_path, cfg.header());

  std::ofstream loss_log(cfg.paths.out_dir / "train_log.jsonl");
  if (!loss_log)
    throw Error("cannot write " + (cfg.paths.out_dir / "train_log.jsonl").string());
  json header;
  header["_header"] = {{"config_hash", cfg.config_hash()}, {"seed", cfg.seed}};
  loss_log << header.dump() << "\n";
  for (std::size_t e = 0; e < result.epoch_mean_loss.size(); ++e)
    loss_log << json{{"epoch", e}, {"loss", result.epoch_mean_loss[e]}}.dump()
             << "\n";

  log << "train: " << pairs.size() << " pairs, vocab " << vocab.size()
      << ", epochs " << result.epoch_mean_loss.size() << ", final loss "
      << (result.epoch_mean_loss.empty() ? 0.0 : result.epoch_mean_loss.back())
      << "\n  wrote " << ckpt_path.string() << "\n";
}

void cmd_score(const RunConfig& cfg, std::ostream& log) {
  auto ckpt_path = resolved(cfg.paths.checkpoint, cfg.paths.out_dir, "model.ckpt");
  ensure_exists(ckpt_path, "checkpoint");
  ensure_exists(cfg.paths.stories, "stories to score");
  ScorerModel model = load_model(ckpt_path);
  std::vector<Story> stories = load_corpus(cfg.paths.stories);

  std::vector<std::pair<std::string, double>> scores;
  scores.reserve(stories.size());
  for (const auto& s : stories) scores.emplace_back(s.id, score_story(model, s));

  make_out_dir(cfg);
  auto out_path = resolved(cfg.paths.scores, cfg.paths.out_dir, "scores.jsonl");
  save_scores(scores, out_path, cfg.header());
  log << "score: " << stories.size() << " stories\n  wrote " << out_path.string()
      << "\n";
}

void cmd_evaluate(const RunConfig& cfg, bool json_format, std::ostream& log) {
  auto scores_path = resolved(cfg.paths.scores, cfg.paths.out_dir, "scores.jsonl");
  ensure_exists(scores_path, "scores");
  ensure_exists(cfg.paths.annotations, "annotations");
  auto score_list = load_scores(scores_path);
  std::map<std::string, double> scores(score_list.begin(), score_list.end());
  auto annotations = load_annotations(cfg.paths.annotations);
  CorrelationReport report = evaluate_metric(scores, annotations);

  make_out_dir(cfg);
  std::filesystem::path out_path =
      cfg.paths.out_dir / (json_format ? "report.json" : "report.txt");
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path.string());
  if (json_format) {
    json j = report_to_json(report);
    j["config_hash"] = cfg.config_hash();
    j["seed"] = cfg.seed;
    out << j.dump(2) << "\n";
  } else {
    out << "# config_hash=" << cfg.config_hash() << " seed=" << cfg.seed << "\n";
    out << "n        " << report.n << "\n";
    out << std::fixed << std::setprecision(6);
    out << "pearson  r=" << report.pearson.coefficient
        << "  p=" << report.pearson.p_value << "\n";
    out << "spearman rho=" << report.spearman.coefficient
        << "  p=" << report.spearman.p_value << "\n";
    out << "kendall  tau=" << report.kendall.coefficient
        << "  p=" << report.kendall.p_value << "\n";
  }
  log << "evaluate: n=" << report.n << " pearson=" << report.pearson.coefficient
      << " spearman=" << report.spearman.coefficient
      << " kendall=" << report.kendall.coefficient << "\n  wrote "
      << out_path.string() << "\n";
}

void cmd_bias(const RunConfig& cfg, std::ostream& log) {
  ensure_exists(cfg.paths.annotations, "annotations");
  auto scores_path = resolved(cfg.paths.scores, cfg.paths.out_dir, "scores.jsonl");
  ensure_exists(scores_path, "scores");
  auto annotations = load_annotations(cfg.paths.annotations);
  auto score_list = load_scores(scores_path);
  std::map<std::string, double> scores(score_list.begin(), score_list.end());

  make_out_dir(cfg);
  json sets_report = json::array();
  for (int set_index = 1; set_index <= 8; ++set_index) {
    auto subset = biased_set(annotations, set_index, cfg.seed);
    auto path = cfg.paths.out_dir /
                ("bias_set_" + std::to_string(set_index) + ".jsonl");
    save_annotations(subset, path, cfg.header());
    json entry;
    entry["set"] = set_index;
    entry["size"] = subset.size();
    try {
      entry["report"] = report_to_json(evaluate_metric(scores, subset));
    } catch (const Error& e) {
      entry["note"] = e.what();
    }
    sets_report.push_back(std::move(entry));
    log << "bias: set " << set_index << " -> " << subset.size() << " stories ("
        << path.string() << ")\n";
  }
  json j;
  j["config_hash"] = cfg.config_hash();
  j["seed"] = cfg.seed;
  j["sets"] = std::move(sets_report);
  std::ofstream out(cfg.paths.out_dir / "bias_report.json");
  if (!out)
    throw Error("cannot write " + (cfg.paths.out_dir / "bias_report.json").string());
  out << j.dump(2) << "\n";
  log << "  wrote " << (cfg.paths.out_dir / "bias_report.json").string() << "\n";
}

void cmd_ablate(const RunConfig& cfg, std::ostream& log) {
  LoadedWorld world = load_world(cfg, log);
  ensure_exists(cfg.paths.annotations, "annotations");
  auto annotations = load_annotations(cfg.paths.annotations);

  PerturbContext ctx{&world.kb, &world.freq, &world.pos, &world.verbs,
                     world.corpus};
  AblationInputs inputs{world.corpus, annotations, ctx,
                        cfg.mixer,    cfg.model,   cfg.trainer,
                        cfg.vocab_min_freq};
  std::vector<AblationResult> table = ablation_table(inputs, cfg.seed);

  make_out_dir(cfg);
  json rows = json::array();
  for (const auto& row : table) {
    json r;
    r["removed"] = row.removed ? technique_name(*row.removed) : "none";
    r["pearson"] = row.pearson_by_set;
    r["relative_change"] = row.relative_change;
    rows.push_back(std::move(r));
  }
  json j;
  j["config_hash"] = cfg.config_hash();
  j["seed"] = cfg.seed;
  j["rows"] = std::move(rows);
  std::ofstream out(cfg.paths.out_dir / "ablation.json");
  if (!out)
    throw Error("cannot write " + (cfg.paths.out_dir / "ablation.json").string());
  out << j.dump(2) << "\n";

  std::ostringstream text;
  text << std::left << std::setw(16) << "removed";
  for (const char* set : kAblationSets) text << std::setw(18) << set;
  text << "\n";
  for (const auto& row : table) {
    text << std::setw(16)
         << (row.removed ? technique_name(*row.removed) : "(none)");
    for (const char* set : kAblationSets) {
      std::ostringstream cell;
      auto it = row.pearson_by_set.find(set);
      if (it == row.pearson_by_set.end()) {
        cell << "-";
      } else {
        cell << std::fixed << std::setprecision(4) << it->second;
        auto rc = row.relative_change.find(set);
        if (rc != row.relative_change.end())
          cell << " (" << (rc->second >= 0 ? "+" : "")
               << std::setprecision(0) << rc->second * 100.0 << "%)";
      }
      text << std::setw(18) << cell.str();
    }
    text << "\n";
  }
  std::ofstream table_out(cfg.paths.out_dir / "ablation.txt");
  if (!table_out)
    throw Error("cannot write " + (cfg.paths.out_dir / "ablation.txt").string());
  table_out << text.str();
  log << text.str();
  log << "  wrote " << (cfg.paths.out_dir / "ablation.json").string() << "\n";
}

}  // namespace storyeval::cli
