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
#include <map>

#include "storyeval/error.hpp"
#include "storyeval/frequency.hpp"
#include "storyeval/knowledge.hpp"
#include "storyeval/postag.hpp"
#include "storyeval/stats.hpp"
#include "storyeval/verbs.hpp"
#include "support/tempdir.hpp"

using namespace storyeval;
using storyeval::testsupport::TempDir;

TEST_CASE("knowledge base keywords and antonyms") {
  KnowledgeBase kb = KnowledgeBase::from_triples({
      {"evaluation", "IsA", "judgment"},
      {"deny", "Antonym", "confirm"},
      {"walk", "NotDesires", "fall"},
  });
  CHECK(kb.is_keyword("evaluation"));
  CHECK(kb.is_keyword("judgment"));
  CHECK(kb.antonyms("evaluation").empty());
  CHECK(kb.antonyms("deny").count("confirm") == 1);
  CHECK(kb.antonyms("confirm").count("deny") == 1);  // bidirectional
  CHECK(kb.antonyms("walk").count("fall") == 1);
  CHECK(kb.antonyms("nonexistent").empty());
}

TEST_CASE("antonym symmetry holds for every keyword") {
  KnowledgeBase kb = KnowledgeBase::from_triples({
      {"hot", "Antonym", "cold"},
      {"cold", "Antonym", "warm"},
      {"light", "NotHasProperty", "heavy"},
      {"rise", "NotCapableOf", "sink"},
      {"hot", "RelatedTo", "sun"},
  });
  for (const auto& a : kb.keywords())
    for (const auto& b : kb.antonyms(a)) CHECK(kb.antonyms(b).count(a) == 1);
}

TEST_CASE("keyword with two antonym rows yields a two-element set") {
  // Brute-force oracle: scan the triple list directly.
  std::vector<Triple> triples = {{"cold", "Antonym", "hot"},
                                 {"cold", "Antonym", "warm"},
                                 {"cold", "IsA", "temperature"}};
  std::set<std::string> expected;
  for (const auto& t : triples)
    if (t.relation == "Antonym" && t.head == "cold") expected.insert(t.tail);
  KnowledgeBase kb = KnowledgeBase::from_triples(triples);
  CHECK(kb.antonyms("cold") == expected);
  CHECK(kb.antonyms("cold").size() == 2);
}

TEST_CASE("kb loader handles files, dedup and multi-word drops") {
  TempDir dir;
  {
    std::ofstream out(dir.path / "kb.tsv");
    out << "deny\tAntonym\tconfirm\n";
    out << "deny\tAntonym\tconfirm\n";            // duplicate
    out << "ice cream\tIsA\tfood\n";              // multi-word, dropped
    out << "evaluation\tIsA\tjudgment\n";
  }
  std::vector<std::string> warnings;
  KnowledgeBase kb = KnowledgeBase::load(dir.path / "kb.tsv", &warnings);
  CHECK(kb.triple_count() == 2);
  CHECK(warnings.size() == 1);
  CHECK(!kb.is_keyword("ice cream"));

  std::ofstream(dir.path / "empty.tsv").close();
  KnowledgeBase empty = KnowledgeBase::load(dir.path / "empty.tsv");
  CHECK(empty.triple_count() == 0);
  CHECK(empty.keyword_count() == 0);

  {
    std::ofstream out(dir.path / "bad.tsv");
    out << "only-two\tfields\n";
  }
  CHECK_THROWS_WITH_AS(KnowledgeBase::load(dir.path / "bad.tsv"),
                       doctest::Contains(":1:"), Error);
}

TEST_CASE("pos tagging: closed class, lexicon, suffixes, default") {
  PosLexicon lex = PosLexicon::from_entries({{"jogging", Pos::Verb}});
  CHECK(pos_tag({"the"}, lex) == std::vector<Pos>{Pos::Other});
  CHECK(pos_tag({"quickly"}, lex) == std::vector<Pos>{Pos::Adv});
  CHECK(pos_tag({"jogging"}, lex) == std::vector<Pos>{Pos::Verb});
  CHECK(pos_tag({"walked"}, lex) == std::vector<Pos>{Pos::Verb});
  CHECK(pos_tag({"joyful"}, lex) == std::vector<Pos>{Pos::Adj});
  CHECK(pos_tag({"comfortable"}, lex) == std::vector<Pos>{Pos::Adj});
  CHECK(pos_tag({"sailor"}, lex) == std::vector<Pos>{Pos::Noun});
  CHECK(pos_tag({"."}, lex) == std::vector<Pos>{Pos::Other});
}

TEST_CASE("pos_tag emits one tag per token") {
  PosLexicon lex = PosLexicon::from_entries({});
  Tokens toks = {"the", "salty", "sailor", "walked", "quickly", "."};
  CHECK(pos_tag(toks, lex).size() == toks.size());
  CHECK(pos_tag({}, lex).empty());
}

TEST_CASE("verb classification follows the rule-table taxonomy") {
  VerbLexicon lex = VerbLexicon::from_rows(
      {{"go", "goes", "went", "gone", "going"},
       {"put", "puts", "put", "put", "putting"}});
  CHECK(lex.classify("was") == VerbClass::Be);
  CHECK(lex.classify("been") == VerbClass::Be);
  CHECK(lex.classify("must") == VerbClass::Modal);
  CHECK(lex.classify("go") == VerbClass::Base);
  CHECK(lex.classify("goes") == VerbClass::ThirdSg);
  CHECK(lex.classify("went") == VerbClass::Past);
  CHECK(lex.classify("gone") == VerbClass::PastPart);
  CHECK(lex.classify("going") == VerbClass::Gerund);
  CHECK(lex.classify("table") == VerbClass::NotVerb);
  // Ambiguous surface form: earlier slot (base) wins.
  CHECK(lex.classify("put") == VerbClass::Base);
}

TEST_CASE("inflection round trip over every lexicon form") {
  VerbLexicon lex = VerbLexicon::from_rows(
      {{"go", "goes", "went", "gone", "going"},
       {"walk", "walks", "walked", "walked", "walking"},
       {"carry", "carries", "carried", "carried", "carrying"},
       {"stop", "stops", "stopped", "stopped", "stopping"},
       {"have", "has", "had", "had", "having"}});
  for (const VerbRow& row : lex.rows()) {
    for (VerbClass slot : {VerbClass::Base, VerbClass::ThirdSg, VerbClass::Past,
                           VerbClass::PastPart, VerbClass::Gerund}) {
      const std::string& form = row.form(slot);
      const VerbRow* found = lex.row_for(form);
      REQUIRE(found != nullptr);
      VerbClass cls = lex.classify(form);
      CHECK(lex.inflect(found->base, cls) == form);
    }
  }
}

TEST_CASE("regular inflection fallback rules") {
  CHECK(VerbLexicon::regular_inflect("walk", VerbClass::ThirdSg) == "walks");
  CHECK(VerbLexicon::regular_inflect("wash", VerbClass::ThirdSg) == "washes");
  CHECK(VerbLexicon::regular_inflect("carry", VerbClass::ThirdSg) == "carries");
  CHECK(VerbLexicon::regular_inflect("dance", VerbClass::Past) == "danced");
  CHECK(VerbLexicon::regular_inflect("drop", VerbClass::Past) == "dropped");
  CHECK(VerbLexicon::regular_inflect("carry", VerbClass::Past) == "carried");
  CHECK(VerbLexicon::regular_inflect("tie", VerbClass::Gerund) == "tying");
  CHECK(VerbLexicon::regular_inflect("dance", VerbClass::Gerund) == "dancing");
  CHECK(VerbLexicon::regular_inflect("drop", VerbClass::Gerund) == "dropping");
  CHECK(VerbLexicon::regular_inflect("wait", VerbClass::Past) == "waited");
}

TEST_CASE("contractions and expansions") {
  VerbLexicon lex = VerbLexicon::from_rows({});
  CHECK(lex.contraction("was").value() == "wasn't");
  CHECK(lex.contraction("will").value() == "won't");
  CHECK(lex.contraction("can").value() == "can't");
  CHECK(!lex.contraction("gone").has_value());
  CHECK(lex.expand_contraction("won't").value() == Tokens{"will", "not"});
  CHECK(lex.expand_contraction("needn't").value() == Tokens{"need", "not"});
  CHECK(!lex.expand_contraction("plain").has_value());
}

TEST_CASE("mention frequency counts keywords by POS bucket") {
  KnowledgeBase kb = KnowledgeBase::from_triples({{"bar", "IsA", "place"},
                                                  {"park", "IsA", "place"}});
  PosLexicon lex = PosLexicon::from_entries({{"bar", Pos::Noun},
                                             {"park", Pos::Noun}});
  Story s;
  s.id = "f";
  s.context = {"bar"};
  s.body = {{"bar", "park"}};
  FrequencyTable ft = mention_frequency(std::vector<Story>{s}, kb, lex);
  CHECK(ft.count("bar") == 2);
  CHECK(ft.count("park") == 1);
  CHECK(ft.count("place") == 0);  // keyword but never mentioned
  CHECK(ft.pos_total(Pos::Noun) == 3);

  FrequencyTable empty = mention_frequency(std::vector<Story>{}, kb, lex);
  CHECK(empty.keyword_count() == 0);
}

TEST_CASE("mention frequency matches a hash-map oracle on random corpora") {
  std::vector<Triple> triples;
  for (int i = 0; i < 20; ++i)
    triples.push_back({"kw" + std::to_string(i), "IsA", "thing"});
  KnowledgeBase kb = KnowledgeBase::from_triples(triples);
  PosLexicon lex = PosLexicon::from_entries({});

  Rng rng(42);
  std::vector<Story> corpus;
  std::map<std::string, std::uint64_t> oracle;
  for (int i = 0; i < 2000; ++i) {
    Story s;
    s.id = std::to_string(i);
    s.context = {};
    Tokens sent;
    for (int w = 0; w < 8; ++w) {
      std::string tok = rng.bernoulli(0.7)
                            ? "kw" + std::to_string(rng.uniform_index(20))
                            : "filler" + std::to_string(rng.uniform_index(5));
      if (kb.is_keyword(tok)) ++oracle[tok];
      sent.push_back(tok);
    }
    s.context = {"c"};
    s.body = {sent};
    corpus.push_back(std::move(s));
  }
  FrequencyTable ft = mention_frequency(corpus, kb, lex);
  CHECK(ft.keyword_count() == oracle.size());
  for (const auto& [tok, n] : oracle) CHECK(ft.count(tok) == n);
}

TEST_CASE("sample_keyword draws proportionally to counts") {
  FrequencyTable ft;
  ft.add("a", Pos::Noun, 3);
  ft.add("b", Pos::Noun, 1);
  ft.finalize();
  Rng rng(123);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (ft.sample(Pos::Noun, rng).value() == "a") ++hits;
  double freq = static_cast<double>(hits) / draws;
  CHECK(freq == doctest::Approx(0.75).epsilon(0.015));

  // Chi-squared goodness of fit at p > 0.01.
  double expected_a = draws * 0.75, expected_b = draws * 0.25;
  double chi2 = (hits - expected_a) * (hits - expected_a) / expected_a +
                (draws - hits - expected_b) * (draws - hits - expected_b) /
                    expected_b;
  CHECK(special::chi_square_sf(chi2, 1) > 0.01);
}

TEST_CASE("sample_keyword edge cases") {
  FrequencyTable ft;
  ft.add("only", Pos::Verb, 5);
  ft.finalize();
  Rng rng(7);
  for (int i = 0; i < 10; ++i)
    CHECK(ft.sample(Pos::Verb, rng).value() == "only");
  CHECK(!ft.sample(Pos::Adj, rng).has_value());
}
