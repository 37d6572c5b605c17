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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "storyeval/corpus_io.hpp"
#include "storyeval/error.hpp"
#include "storyeval/rng.hpp"
#include "storyeval/story.hpp"
#include "storyeval/vocab.hpp"
#include "support/tempdir.hpp"

using namespace storyeval;
using storyeval::testsupport::TempDir;

namespace {

Story story_of(const std::string& id, const std::string& context,
               std::vector<std::string> sentences) {
  Story s;
  s.id = id;
  s.context = tokenize(context);
  for (const auto& sent : sentences) s.body.push_back(tokenize(sent));
  return s;
}

NameLexicon tiny_names() {
  return NameLexicon::from_entries(
      {{"jack", 'M'}, {"ken", 'M'}, {"mary", 'F'}, {"taylor", 'N'}});
}

}  // namespace

TEST_CASE("delexicalize masks names by gender") {
  Story s = story_of("s1", "Jack was at the bar.", {"Mary waved."});
  Story out = delexicalize(s, tiny_names());
  CHECK(out.context == Tokens{"[MALE]", "was", "at", "the", "bar", "."});
  CHECK(out.body[0] == Tokens{"[FEMALE]", "waved", "."});
}

TEST_CASE("delexicalize is idempotent and a fixpoint without names") {
  Story plain = story_of("s2", "the bar was loud.", {"nobody spoke."});
  CHECK(delexicalize(plain, tiny_names()) == plain);

  Story masked = story_of("s3", "[FEMALE] met [FEMALE].", {"Taylor left."});
  Story once = delexicalize(masked, tiny_names());
  CHECK(delexicalize(once, tiny_names()) == once);
  CHECK(once.body[0] == Tokens{"[NEUTRAL]", "left", "."});
}

TEST_CASE("truncate_words keeps whole-sentence prefixes") {
  Story s;
  s.id = "t";
  s.context = {"ctx"};
  s.body = {Tokens(80, "a"), Tokens(80, "b"), Tokens(80, "c")};
  Story out = truncate_words(s, 200);
  REQUIRE(out.body.size() == 2);
  CHECK(out.body[0] == s.body[0]);
  CHECK(out.body[1] == s.body[1]);

  Story under = story_of("u", "c.", {"one two.", "three four five."});
  CHECK(truncate_words(under, 200) == under);

  Story giant;
  giant.id = "g";
  giant.context = {"c"};
  giant.body = {Tokens(300, "x"), Tokens(2, "y")};
  Story g = truncate_words(giant, 200);
  REQUIRE(g.body.size() == 1);
  CHECK(g.body[0].size() == 300);
}

TEST_CASE("truncate_words prefix property") {
  Rng rng(11);
  for (int round = 0; round < 100; ++round) {
    Story s;
    s.id = "p";
    s.context = {"c"};
    std::size_t sentences = 1 + rng.uniform_index(6);
    for (std::size_t i = 0; i < sentences; ++i)
      s.body.push_back(Tokens(1 + rng.uniform_index(12), "w"));
    std::size_t max_words = 1 + rng.uniform_index(30);
    Story out = truncate_words(s, max_words);
    REQUIRE(!out.body.empty());
    REQUIRE(out.body.size() <= s.body.size());
    for (std::size_t i = 0; i < out.body.size(); ++i)
      CHECK(out.body[i] == s.body[i]);
    CHECK(out.body_token_count() <=
          std::max(max_words, s.body[0].size()));
  }
}

TEST_CASE("corpus jsonl round trip preserves order and content") {
  TempDir dir;
  std::vector<Story> stories = {
      story_of("a", "Jack was at the bar.", {"He left.", "He came back."}),
      story_of("b", "[MALE] sat down.", {"Nothing happened."})};
  save_corpus(stories, dir.path / "corpus.jsonl");
  auto loaded = load_corpus(dir.path / "corpus.jsonl");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == stories[0]);
  CHECK(loaded[1] == stories[1]);
}

TEST_CASE("empty corpus file loads as empty list") {
  TempDir dir;
  std::ofstream(dir.path / "empty.jsonl").close();
  CHECK(load_corpus(dir.path / "empty.jsonl").empty());
}

TEST_CASE("malformed corpus line reports its line number") {
  TempDir dir;
  std::ofstream out(dir.path / "bad.jsonl");
  out << R"({"id": "ok", "context": "a.", "body": ["b."]})" << "\n";
  out << "{not json}\n";
  out.close();
  CHECK_THROWS_WITH_AS(load_corpus(dir.path / "bad.jsonl"),
                       doctest::Contains(":2:"), Error);
}

TEST_CASE("annotation loader enforces the 7-label schema") {
  TempDir dir;
  auto write = [&](const std::string& labels, const std::string& errors) {
    std::ofstream out(dir.path / "ann.jsonl");
    out << R"({"id": "x", "context": "c.", "body": ["b."], "labels": )"
        << labels << R"(, "error_types": )" << errors << "}\n";
  };

  write("[1,1,1,1,1,1,1]", R"([[],[],[],[],[],[],[]])");
  auto ok = load_annotations(dir.path / "ann.jsonl");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].label_sum() == 7);
  CHECK(ok[0].mean_label() == doctest::Approx(1.0));

  write("[1,1,1,1,1,1]", R"([[],[],[],[],[],[]])");
  CHECK_THROWS_AS(load_annotations(dir.path / "ann.jsonl"), Error);

  write("[0,1,1,1,1,1,1]", R"([[],[],[],[],[],[],[]])");
  CHECK_THROWS_AS(load_annotations(dir.path / "ann.jsonl"), Error);  // 0 needs a flag

  write("[0,1,1,1,1,1,1]", R"([["repe"],[],[],[],[],[],[]])");
  auto flagged = load_annotations(dir.path / "ann.jsonl");
  CHECK(flagged[0].error_flags[0].count("repe") == 1);

  write("[0,1,1,1,1,1,1]", R"([["bogus"],[],[],[],[],[],[]])");
  CHECK_THROWS_AS(load_annotations(dir.path / "ann.jsonl"), Error);
}

TEST_CASE("mean annotation score is always a multiple of 1/7") {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    AnnotatedStory a;
    for (auto& l : a.labels) l = rng.bernoulli(0.5) ? 1 : 0;
    double mean = a.mean_label();
    double scaled = mean * 7.0;
    CHECK(scaled == doctest::Approx(std::round(scaled)));
    CHECK(mean >= 0.0);
    CHECK(mean <= 1.0);
  }
}

TEST_CASE("scores jsonl round trip with provenance header") {
  TempDir dir;
  std::vector<std::pair<std::string, double>> scores = {{"a", 0.25},
                                                        {"b", 0.75}};
  save_scores(scores, dir.path / "scores.jsonl", FileHeader{"deadbeef", 42});
  auto loaded = load_scores(dir.path / "scores.jsonl");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].first == "a");
  CHECK(loaded[1].second == doctest::Approx(0.75));
}

TEST_CASE("build_vocab frequency ordering and min_freq") {
  std::vector<Story> corpus = {story_of("a", "a a b.", {"a b c."})};
  Vocab v2 = build_vocab(corpus, 2);
  // Non-reserved tokens with frequency >= 2: "a" (x3), "b" (x2), "." (x2).
  CHECK(v2.size() == Vocab::kReserved + 3);
  CHECK(v2.token(Vocab::kReserved) == "a");
  CHECK(v2.contains("b"));
  CHECK(!v2.contains("c"));

  Vocab v1 = build_vocab(corpus, 1);
  CHECK(v1.contains("c"));
  CHECK(v1.lookup("zzz") == Vocab::kUnk);

  Vocab empty = build_vocab(std::vector<Story>{}, 1);
  CHECK(empty.size() == Vocab::kReserved);
}

TEST_CASE("build_vocab covers every frequent token") {
  Rng rng(5);
  std::vector<Story> corpus;
  for (int i = 0; i < 2000; ++i) {
    Story s;
    s.id = std::to_string(i);
    s.context = {"w" + std::to_string(rng.uniform_index(30))};
    s.body.push_back({"w" + std::to_string(rng.uniform_index(30)),
                      "w" + std::to_string(rng.uniform_index(5))});
    corpus.push_back(std::move(s));
  }
  std::unordered_map<std::string, int> freq;
  for (const auto& s : corpus)
    for (const auto& t : s.flatten()) ++freq[t];
  Vocab v = build_vocab(corpus, 2);
  for (const auto& [tok, n] : freq) {
    CAPTURE(tok);
    CHECK(v.contains(tok) == (n >= 2));
  }
}
