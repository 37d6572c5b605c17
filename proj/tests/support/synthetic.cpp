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

#include "support/synthetic.hpp"

#include <array>
#include <fstream>
#include <set>
#include <stdexcept>

#include "storyeval/corpus_io.hpp"
#include "storyeval/rng.hpp"

namespace storyeval::testsupport {

namespace {

constexpr std::size_t kTopics = 6;
constexpr std::size_t kNouns = 22;
constexpr std::size_t kAdjs = 17;
constexpr std::size_t kVerbs = 30;
constexpr std::size_t kVerbsPerTopic = kVerbs / kTopics;

const char* kTopicNames[kTopics] = {"harborlife", "orchardlife", "workshoplife",
                                    "librarylife", "mountainlife", "kitchenlife"};

const char* kNounLists[kTopics][kNouns] = {
    {"sailor", "boat", "anchor", "dock", "gull", "wave", "net", "rope",
     "mast", "cargo", "tide", "lighthouse", "ferry", "fisherman", "harbor",
     "pier", "buoy", "sail", "deck", "captain", "chart", "lantern"},
    {"farmer", "apple", "pear", "plum", "ladder", "basket", "branch",
     "blossom", "bee", "orchard", "fence", "cider", "crate", "seed", "root",
     "trunk", "leaf", "harvest", "meadow", "scarecrow", "barrel", "grove"},
    {"carpenter", "hammer", "nail", "plank", "bench", "chisel", "lathe",
     "sawdust", "varnish", "toolbox", "blueprint", "vise", "mallet", "drawer",
     "workshop", "glue", "clamp", "hinge", "dowel", "sander", "apron",
     "timber"},
    {"librarian", "book", "shelf", "page", "candle", "scroll", "archive",
     "index", "volume", "reader", "desk", "ink", "quill", "manuscript",
     "catalog", "atlas", "margin", "chapter", "footnote", "binding", "ledger",
     "alcove"},
    {"climber", "peak", "ridge", "glacier", "summit", "trail", "cliff",
     "boulder", "cave", "valley", "pine", "eagle", "snow", "ice", "ledge",
     "slope", "pass", "camp", "avalanche", "horizon", "cairn", "marmot"},
    {"cook", "oven", "kettle", "spoon", "flour", "dough", "bread", "soup",
     "pantry", "stove", "skillet", "platter", "onion", "herb", "broth",
     "ladle", "teapot", "saucer", "pepper", "butter", "raisin", "cinnamon"}};

const char* kAdjLists[kTopics][kAdjs] = {
    {"salty", "misty", "windy", "rusty", "tidal", "foggy", "briny",
     "weathered", "seaworthy", "anchored", "coastal", "stormy", "drifting",
     "moored", "barnacled", "windswept", "nautical"},
    {"ripe", "sweet", "sunny", "fragrant", "golden", "mellow", "juicy",
     "tender", "crisp", "tart", "leafy", "shady", "fruitful", "abundant",
     "pastoral", "verdant", "fertile"},
    {"sturdy", "wooden", "dusty", "precise", "solid", "rough", "smooth",
     "square", "level", "narrow", "heavy", "compact", "durable", "handmade",
     "practical", "worn", "skilled"},
    {"quiet", "ancient", "hushed", "scholarly", "faded", "brittle", "rare",
     "learned", "ordered", "silent", "vast", "dim", "solemn", "careful",
     "thorough", "curious", "patient"},
    {"steep", "frozen", "jagged", "alpine", "remote", "icy", "rocky",
     "barren", "bleak", "rugged", "lofty", "sheer", "frigid", "windless",
     "treacherous", "hardy", "brisk"},
    {"warm", "savory", "fresh", "buttery", "spicy", "tangy", "creamy",
     "hearty", "zesty", "fluffy", "aromatic", "velvety", "rich", "mild",
     "peppery", "delicate", "crusty"}};

const char* kVerbList[kVerbs] = {
    "walk", "jump", "clean", "paint", "visit", "carry", "push", "pull",
    "lift", "drop", "gather", "stack", "wash", "fold", "wrap", "tie",
    "mix", "pour", "slice", "taste", "climb", "wander", "rest", "watch",
    "call", "wait", "help", "laugh", "shout", "dance"};

std::size_t topic_of(const SyntheticWorld&, Rng& rng) {
  return rng.uniform_index(kTopics);
}

const char* pick(const char* const* list, std::size_t n, Rng& rng) {
  return list[rng.uniform_index(n)];
}

}  // namespace

Story make_story(const SyntheticWorld& world, const std::string& id, Rng& rng) {
  std::size_t t = topic_of(world, rng);
  const char* const* nouns = kNounLists[t];
  const char* const* adjs = kAdjLists[t];
  auto noun = [&] { return std::string(pick(nouns, kNouns, rng)); };
  auto adj = [&] { return std::string(pick(adjs, kAdjs, rng)); };
  auto vrow = [&]() -> const VerbRow& {
    std::size_t v = t * kVerbsPerTopic + rng.uniform_index(kVerbsPerTopic);
    return world.verb_rows[v];
  };

  Story s;
  s.id = id;
  s.context = {"the", adj(), noun(), "near", "the", noun(), "."};
  s.body = {
      {"first", "the", adj(), noun(), vrow().past, "the", noun(), "."},
      {"then", "the", noun(), "was", vrow().gerund, "near", "the", noun(), "."},
      {"the", noun(), "was", adj(), "."},
      {"later", "the", adj(), noun(), vrow().past, "a", noun(), "."},
      {"finally", "the", noun(), vrow().past, "the", adj(), noun(), "."}};
  return s;
}

SyntheticWorld make_world(std::size_t story_count, std::uint64_t seed) {
  SyntheticWorld world;

  for (const char* base : kVerbList)
    world.verb_rows.push_back(
        {base, VerbLexicon::regular_inflect(base, VerbClass::ThirdSg),
         VerbLexicon::regular_inflect(base, VerbClass::Past),
         VerbLexicon::regular_inflect(base, VerbClass::PastPart),
         VerbLexicon::regular_inflect(base, VerbClass::Gerund)});
  world.verbs = VerbLexicon::from_rows(world.verb_rows);

  std::set<std::string> unique_check;
  auto add_unique = [&](const std::string& word) {
    if (!unique_check.insert(word).second)
      throw std::logic_error("synthetic word list collision: " + word);
  };

  for (std::size_t t = 0; t < kTopics; ++t) {
    for (std::size_t i = 0; i < kNouns; ++i) {
      add_unique(kNounLists[t][i]);
      world.triples.push_back({kNounLists[t][i], "relatedto", kTopicNames[t]});
      world.pos_entries.emplace_back(kNounLists[t][i], Pos::Noun);
    }
    for (std::size_t i = 0; i < kAdjs; ++i) {
      add_unique(kAdjLists[t][i]);
      world.triples.push_back({kAdjLists[t][i], "relatedto", kTopicNames[t]});
      world.pos_entries.emplace_back(kAdjLists[t][i], Pos::Adj);
    }
  }
  for (const auto& row : world.verb_rows) {
    add_unique(row.past);
    world.triples.push_back({row.past, "relatedto", "motionword"});
    world.pos_entries.emplace_back(row.past, Pos::Verb);
    world.triples.push_back({row.gerund, "relatedto", "motionword"});
    world.pos_entries.emplace_back(row.gerund, Pos::Verb);
  }

  // 50 antonym pairs: adjectives of paired topics (0,1), (2,3), (4,5),
  // matched by index; the very last slot is left unpaired.
  std::size_t pairs = 0;
  for (std::size_t tp = 0; tp < kTopics; tp += 2) {
    for (std::size_t i = 0; i < kAdjs && pairs < 50; ++i, ++pairs)
      world.triples.push_back({kAdjLists[tp][i], "antonym", kAdjLists[tp + 1][i]});
  }

  world.kb = KnowledgeBase::from_triples(world.triples);
  world.pos = PosLexicon::from_entries(world.pos_entries);

  world.stories.reserve(story_count);
  for (std::size_t i = 0; i < story_count; ++i) {
    std::string id = "syn-" + std::to_string(i);
    Rng rng(derive_seed(seed, "story/" + id));
    world.stories.push_back(make_story(world, id, rng));
  }
  world.freq = mention_frequency(world.stories, world.kb, world.pos);
  return world;
}

void SyntheticWorld::write_files(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  save_corpus(stories, dir / "corpus.jsonl");
  std::ofstream kb_out(dir / "kb.tsv");
  for (const auto& t : triples)
    kb_out << t.head << "\t" << t.relation << "\t" << t.tail << "\n";
  std::ofstream verbs_out(dir / "verbs.tsv");
  for (const auto& r : verb_rows)
    verbs_out << r.base << "\t" << r.third_sg << "\t" << r.past << "\t"
              << r.past_part << "\t" << r.gerund << "\n";
  std::ofstream pos_out(dir / "pos.tsv");
  for (const auto& [word, tag] : pos_entries)
    pos_out << word << "\t" << pos_name(tag) << "\n";
}

Story perturb_single(const SyntheticWorld& world, const Story& story,
                     Technique technique, std::uint64_t seed) {
  MixerConfig cfg;
  cfg.count_distribution = {1.0, 0.0, 0.0, 0.0};
  cfg.technique_weights = {0.0, 0.0, 0.0, 0.0};
  cfg.technique_weights[static_cast<std::size_t>(technique)] = 1.0;
  Rng rng(derive_seed(seed, "single/" + story.id));
  auto negative = make_negative(story, world.context(), cfg, rng);
  if (!negative)
    throw std::logic_error("synthetic story resisted technique " +
                           std::string(technique_name(technique)));
  return negative->s;
}

std::vector<AnnotatedStory> make_annotations(
    const SyntheticWorld& world, std::size_t count, std::uint64_t seed,
    std::map<std::string, int>* truth) {
  const char* flag_for[4] = {"repe", "cohe", "conf", "conf"};
  std::vector<AnnotatedStory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string id = "ann-" + std::to_string(i);
    Rng rng(derive_seed(seed, "ann/" + id));
    Story story = make_story(world, id, rng);

    int k = static_cast<int>(rng.uniform_index(8));
    AnnotatedStory a;
    std::set<std::string> applied_flags;
    if (k == 7) {
      a.story = story;
    } else {
      int techniques = k >= 5 ? 1 : (k >= 2 ? 2 : 3);
      MixerConfig cfg;
      cfg.count_distribution = {0.0, 0.0, 0.0, 0.0};
      cfg.count_distribution[techniques - 1] = 1.0;
      auto negative = make_negative(story, world.context(), cfg, rng);
      if (!negative) throw std::logic_error("unperturbable synthetic story");
      a.story = negative->s;
      std::set<Technique> distinct;
      for (const auto& e : negative->edits) distinct.insert(e.technique);
      for (Technique t : distinct)
        applied_flags.insert(flag_for[static_cast<std::size_t>(t)]);
      if (distinct.size() >= 3) applied_flags.insert("chao");
    }
    a.story.id = id;

    std::array<int, 7> slots{0, 1, 2, 3, 4, 5, 6};
    rng.shuffle(std::span<int>(slots));
    for (int j = 0; j < k; ++j) a.labels[slots[j]] = 1;
    for (int j = k; j < 7; ++j) a.labels[slots[j]] = 0;
    for (int ann = 0; ann < 7; ++ann) {
      if (a.labels[ann] == 1) continue;
      for (const auto& flag : applied_flags)
        if (rng.bernoulli(0.8)) a.error_flags[ann].insert(flag);
      if (a.error_flags[ann].empty())
        a.error_flags[ann].insert(applied_flags.empty() ? "others"
                                                        : *applied_flags.begin());
    }
    if (truth) (*truth)[id] = k == 7 ? 1 : 0;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace storyeval::testsupport
