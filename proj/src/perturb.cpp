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

#include "storyeval/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "storyeval/error.hpp"

namespace storyeval {

using nlohmann::json;

const char* technique_name(Technique t) {
  switch (t) {
    case Technique::Repetition: return "repetition";
    case Technique::Substitution: return "substitution";
    case Technique::Reordering: return "reordering";
    case Technique::Negation: return "negation";
  }
  return "repetition";
}

Technique technique_from_name(std::string_view name) {
  for (Technique t : kTechniques)
    if (name == technique_name(t)) return t;
  throw Error("unknown technique: " + std::string(name));
}

void MixerConfig::validate() const {
  auto check_dist = [](std::span<const double> d, const char* what) {
    double sum = 0.0;
    for (double w : d) {
      if (w < 0.0) throw Error(std::string(what) + ": negative entry");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(std::string(what) + ": must sum to 1");
  };
  check_dist(count_distribution, "count_distribution");
  check_dist(technique_weights, "technique_weights");
  if (!(keyword_substitution_rate > 0.0) || keyword_substitution_rate > 1.0)
    throw Error("keyword_substitution_rate must be in (0, 1]");
}

namespace {

std::string span_text(const Tokens& toks, int begin, int end) {
  Tokens slice(toks.begin() + begin, toks.begin() + end);
  return join_tokens(slice);
}

TechniqueResult repeat_ngram(const Story& story, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < story.body.size(); ++i)
    if (!story.body[i].empty()) eligible.push_back(i);
  if (eligible.empty()) return std::nullopt;
  std::size_t si = eligible[rng.uniform_index(eligible.size())];
  const Tokens& sent = story.body[si];
  std::size_t n = 1 + rng.uniform_index(std::min<std::size_t>(4, sent.size()));
  std::size_t start = rng.uniform_index(sent.size() - n + 1);

  Story out = story;
  Tokens& target = out.body[si];
  target.insert(target.begin() + start + n, sent.begin() + start,
                sent.begin() + start + n);
  Edit edit{Technique::Repetition,
            "ngram",
            static_cast<int>(si),
            {static_cast<int>(start), static_cast<int>(start + n)},
            span_text(sent, start, start + n),
            span_text(target, start, start + 2 * n)};
  return std::pair{std::move(out), std::vector<Edit>{std::move(edit)}};
}

TechniqueResult repeat_sentence(const Story& story, Rng& rng) {
  if (story.body.size() < 2) return std::nullopt;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i + 1 < story.body.size(); ++i)
    if (story.body[i] != story.body[i + 1]) eligible.push_back(i);
  if (eligible.empty()) return std::nullopt;
  std::size_t i = eligible[rng.uniform_index(eligible.size())];

  Story out = story;
  Edit edit{Technique::Repetition,
            "sentence",
            static_cast<int>(i + 1),
            {0, static_cast<int>(story.body[i + 1].size())},
            join_tokens(story.body[i + 1]),
            join_tokens(story.body[i])};
  out.body[i + 1] = story.body[i];
  return std::pair{std::move(out), std::vector<Edit>{std::move(edit)}};
}

TechniqueResult substitute_words(const Story& story, const PerturbContext& ctx,
                                 double rate, Rng& rng) {
  struct Site {
    std::size_t sentence, index;
  };
  std::vector<Site> sites;
  for (std::size_t si = 0; si < story.body.size(); ++si)
    for (std::size_t ti = 0; ti < story.body[si].size(); ++ti)
      if (ctx.kb->is_keyword(story.body[si][ti])) sites.push_back({si, ti});
  if (sites.empty()) return std::nullopt;

  // Token-level 15% rule: round half up, floor at one replacement.
  std::size_t want = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(rate * sites.size() + 0.5)));
  want = std::min(want, sites.size());
  rng.shuffle(std::span<Site>(sites));
  std::vector<Site> chosen(sites.begin(), sites.begin() + want);
  std::sort(chosen.begin(), chosen.end(), [](const Site& a, const Site& b) {
    return a.sentence != b.sentence ? a.sentence < b.sentence
                                    : a.index < b.index;
  });

  Story out = story;
  std::vector<Edit> edits;
  for (const Site& site : chosen) {
    std::string& token = out.body[site.sentence][site.index];
    const std::string original = token;
    std::string replacement;
    const auto& antonyms = ctx.kb->antonyms(original);
    std::vector<std::string> candidates(antonyms.begin(), antonyms.end());
    std::erase(candidates, original);
    if (!candidates.empty()) {
      replacement = candidates[rng.uniform_index(candidates.size())];
    } else {
      Pos pos = ctx.pos->tag(original);
      for (int attempt = 0; attempt < 32 && replacement.empty(); ++attempt) {
        auto drawn = ctx.freq->sample(pos, rng);
        if (!drawn) break;
        if (*drawn != original) replacement = *drawn;
      }
      if (replacement.empty()) continue;  // keyword with no usable donor
    }
    token = replacement;
    edits.push_back(Edit{Technique::Substitution,
                         "word",
                         static_cast<int>(site.sentence),
                         {static_cast<int>(site.index),
                          static_cast<int>(site.index + 1)},
                         original,
                         replacement});
  }
  if (edits.empty()) return std::nullopt;
  return std::pair{std::move(out), std::move(edits)};
}

TechniqueResult substitute_sentence(const Story& story,
                                    const PerturbContext& ctx, Rng& rng) {
  std::vector<const Story*> donors;
  for (const Story& other : ctx.pool)
    if (other.id != story.id && !other.body.empty())
      donors.push_back(&other);
  if (donors.empty() || story.body.empty()) return std::nullopt;

  std::size_t target = rng.uniform_index(story.body.size());
  for (int attempt = 0; attempt < 32; ++attempt) {
    const Story* donor = donors[rng.uniform_index(donors.size())];
    const Tokens& incoming = donor->body[rng.uniform_index(donor->body.size())];
    if (incoming == story.body[target]) continue;
    Story out = story;
    Edit edit{Technique::Substitution,
              "sentence",
              static_cast<int>(target),
              {0, static_cast<int>(story.body[target].size())},
              join_tokens(story.body[target]),
              join_tokens(incoming)};
    out.body[target] = incoming;
    return std::pair{std::move(out), std::vector<Edit>{std::move(edit)}};
  }
  return std::nullopt;
}

std::string index_list(std::span<const std::size_t> indices) {
  std::string s;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) s.push_back(' ');
    s += std::to_string(indices[i]);
  }
  return s;
}

}  // namespace

TechniqueResult repetition(const Story& story, Rng& rng) {
  bool ngram_first = rng.bernoulli(0.5);
  if (auto r = ngram_first ? repeat_ngram(story, rng) : repeat_sentence(story, rng))
    return r;
  return ngram_first ? repeat_sentence(story, rng) : repeat_ngram(story, rng);
}

TechniqueResult substitute(const Story& story, const PerturbContext& ctx,
                           double keyword_rate, SubstitutionMode mode,
                           Rng& rng) {
  if (mode == SubstitutionMode::Word)
    return substitute_words(story, ctx, keyword_rate, rng);
  return substitute_sentence(story, ctx, rng);
}

TechniqueResult reorder(const Story& story, Rng& rng) {
  const std::size_t n = story.body.size();
  if (n < 2) return std::nullopt;
  bool all_equal = std::all_of(
      story.body.begin() + 1, story.body.end(),
      [&](const Tokens& s) { return s == story.body.front(); });
  if (all_equal) return std::nullopt;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> identity = perm;
  auto changes_story = [&](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < n; ++i)
      if (story.body[p[i]] != story.body[i]) return true;
    return false;
  };
  bool found = false;
  for (int attempt = 0; attempt < 64 && !found; ++attempt) {
    rng.shuffle(std::span<std::size_t>(perm));
    found = perm != identity && changes_story(perm);
  }
  if (!found) {
    // Duplicate-heavy bodies can dodge 64 uniform draws; swap the first
    // differing pair instead.
    perm = identity;
    for (std::size_t i = 0; i < n && !found; ++i)
      for (std::size_t j = i + 1; j < n && !found; ++j)
        if (story.body[i] != story.body[j]) {
          std::swap(perm[i], perm[j]);
          found = true;
        }
  }
  if (!found) return std::nullopt;

  Story out = story;
  for (std::size_t i = 0; i < n; ++i) out.body[i] = story.body[perm[i]];
  Edit edit{Technique::Reordering,
            "",
            -1,
            {0, static_cast<int>(n)},
            index_list(identity),
            index_list(perm)};
  return std::pair{std::move(out), std::vector<Edit>{std::move(edit)}};
}

TechniqueResult alter_negation(const Story& story, const VerbLexicon& verbs,
                               Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < story.body.size(); ++i)
    if (has_negation(story.body[i]) || can_add_negation(story.body[i], verbs))
      eligible.push_back(i);
  if (eligible.empty()) return std::nullopt;
  std::size_t i = eligible[rng.uniform_index(eligible.size())];

  const Tokens& sentence = story.body[i];
  std::optional<Tokens> altered;
  const char* sub_mode;
  if (has_negation(sentence)) {
    altered = remove_negation(sentence, verbs);
    sub_mode = "remove";
  } else {
    altered = add_negation(sentence, verbs, rng);
    sub_mode = "add";
  }
  if (!altered) return std::nullopt;

  Story out = story;
  Edit edit{Technique::Negation,
            sub_mode,
            static_cast<int>(i),
            {0, static_cast<int>(sentence.size())},
            join_tokens(sentence),
            join_tokens(*altered)};
  out.body[i] = std::move(*altered);
  return std::pair{std::move(out), std::vector<Edit>{std::move(edit)}};
}

namespace {

TechniqueResult apply_technique(Technique t, const Story& story,
                                const PerturbContext& ctx,
                                const MixerConfig& cfg, Rng& rng) {
  switch (t) {
    case Technique::Repetition:
      return repetition(story, rng);
    case Technique::Substitution: {
      SubstitutionMode first = rng.bernoulli(0.5) ? SubstitutionMode::Word
                                                  : SubstitutionMode::Sentence;
      SubstitutionMode second = first == SubstitutionMode::Word
                                    ? SubstitutionMode::Sentence
                                    : SubstitutionMode::Word;
      if (auto r = substitute(story, ctx, cfg.keyword_substitution_rate, first, rng))
        return r;
      return substitute(story, ctx, cfg.keyword_substitution_rate, second, rng);
    }
    case Technique::Reordering:
      return reorder(story, rng);
    case Technique::Negation:
      return alter_negation(story, *ctx.verbs, rng);
  }
  return std::nullopt;
}

}  // namespace

std::optional<TrainingPair> make_negative(const Story& story,
                                          const PerturbContext& ctx,
                                          const MixerConfig& cfg, Rng& rng) {
  cfg.validate();
  std::size_t want = 1 + rng.categorical(cfg.count_distribution);

  std::array<double, 4> weights = cfg.technique_weights;
  Story current = story;
  std::vector<Edit> edits;
  std::size_t applied = 0;
  while (applied < want) {
    double remaining = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (remaining <= 0.0) break;
    std::size_t drawn = rng.categorical(weights);
    weights[drawn] = 0.0;
    if (auto result = apply_technique(kTechniques[drawn], current, ctx, cfg, rng)) {
      current = std::move(result->first);
      for (auto& e : result->second) edits.push_back(std::move(e));
      ++applied;
    }
  }
  if (applied == 0) return std::nullopt;

  TrainingPair pair;
  pair.id = story.id;
  pair.s = std::move(current);
  pair.r = story;
  pair.y = 0;
  pair.edits = std::move(edits);
  return pair;
}

TrainingSet build_training_set(std::span<const Story> corpus,
                               const PerturbContext& ctx,
                               const MixerConfig& cfg, std::uint64_t seed) {
  if (corpus.empty()) throw Error("build_training_set: empty corpus");
  TrainingSet out;
  out.pairs.reserve(corpus.size() * 2);
  for (const Story& story : corpus) {
    TrainingPair positive;
    positive.id = story.id;
    positive.s = story;
    positive.r = story;
    positive.y = 1;
    out.pairs.push_back(std::move(positive));

    Rng rng(derive_seed(seed, "perturb/" + story.id));
    if (auto negative = make_negative(story, ctx, cfg, rng)) {
      out.pairs.push_back(std::move(*negative));
    } else {
      out.warnings.push_back("story " + story.id +
                             ": unperturbable, negative sample skipped");
    }
  }
  return out;
}

namespace {

json story_to_json(const Story& story) {
  json j;
  j["context"] = join_tokens(story.context);
  json body = json::array();
  for (const auto& s : story.body) body.push_back(join_tokens(s));
  j["body"] = std::move(body);
  return j;
}

Story story_from_json(const std::string& id, const json& j) {
  Story s;
  s.id = id;
  s.context = tokenize(j.at("context").get<std::string>());
  for (const auto& sent : j.at("body"))
    s.body.push_back(tokenize(sent.get<std::string>()));
  return s;
}

}  // namespace

void save_pairs(const std::vector<TrainingPair>& pairs,
                const std::filesystem::path& path,
                const std::optional<FileHeader>& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  if (header) {
    json h;
    h["_header"] = {{"config_hash", header->config_hash}, {"seed", header->seed}};
    out << h.dump() << "\n";
  }
  for (const auto& p : pairs) {
    json j;
    j["id"] = p.id;
    j["y"] = p.y;
    j["s"] = story_to_json(p.s);
    j["r"] = story_to_json(p.r);
    json edits = json::array();
    for (const auto& e : p.edits) {
      json ej;
      ej["technique"] = technique_name(e.technique);
      ej["sub_mode"] = e.sub_mode;
      ej["sentence"] = e.sentence;
      ej["span"] = {e.span.first, e.span.second};
      ej["before"] = e.before;
      ej["after"] = e.after;
      edits.push_back(std::move(ej));
    }
    j["edits"] = std::move(edits);
    out << j.dump() << "\n";
  }
}

std::vector<TrainingPair> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<TrainingPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": malformed JSON record");
    if (lineno == 1 && j.contains("_header")) continue;
    try {
      TrainingPair p;
      p.id = j.at("id").get<std::string>();
      p.y = j.at("y").get<int>();
      p.s = story_from_json(p.id, j.at("s"));
      p.r = story_from_json(p.id, j.at("r"));
      for (const auto& ej : j.at("edits")) {
        Edit e;
        e.technique = technique_from_name(ej.at("technique").get<std::string>());
        e.sub_mode = ej.at("sub_mode").get<std::string>();
        e.sentence = ej.at("sentence").get<int>();
        e.span = {ej.at("span")[0].get<int>(), ej.at("span")[1].get<int>()};
        e.before = ej.at("before").get<std::string>();
        e.after = ej.at("after").get<std::string>();
        p.edits.push_back(std::move(e));
      }
      if (p.y != 0 && p.y != 1)
        throw Error("y must be 0 or 1");
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace storyeval
