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

#include "storyeval/negation.hpp"
#include "storyeval/text.hpp"

using namespace storyeval;

namespace {

VerbLexicon table_lexicon() {
  return VerbLexicon::from_rows({
      {"go", "goes", "went", "gone", "going"},
      {"walk", "walks", "walked", "walked", "walking"},
      {"end", "ends", "ended", "ended", "ending"},
      {"have", "has", "had", "had", "having"},
      {"do", "does", "did", "done", "doing"},
      {"keep", "keeps", "kept", "kept", "keeping"},
  });
}

Tokens add_neg(const std::string& sentence, double contraction_prob = 0.0,
           std::uint64_t seed = 1) {
  VerbLexicon lex = table_lexicon();
  Rng rng(seed);
  auto out = add_negation(tokenize(sentence), lex, rng, contraction_prob);
  REQUIRE(out.has_value());
  return *out;
}

Tokens remove_neg(const std::string& sentence) {
  VerbLexicon lex = table_lexicon();
  auto out = remove_negation(tokenize(sentence), lex);
  REQUIRE(out.has_value());
  return *out;
}

}  // namespace

TEST_CASE("negation addition follows the verb-type rules") {
  CHECK(add_neg("failure was an option.") == tokenize("failure was not an option."));
  CHECK(add_neg("i can walk well.") == tokenize("i can not walk well."));
  CHECK(add_neg("i go through the park.") == tokenize("i do not go through the park."));
  CHECK(add_neg("he goes through the park.") ==
        tokenize("he does not go through the park."));
  CHECK(add_neg("he went through the park.") ==
        tokenize("he did not go through the park."));
  CHECK(add_neg("his insurance rate had gone up.") ==
        tokenize("his insurance rate had not gone up."));
  CHECK(add_neg("she ended up going elsewhere.") ==
        tokenize("she ended up not going elsewhere."));
}

TEST_CASE("negation removal inverts the rules") {
  CHECK(remove_neg("failure was not an option.") == tokenize("failure was an option."));
  CHECK(remove_neg("i can not walk well.") == tokenize("i can walk well."));
  CHECK(remove_neg("i do not go through the park.") ==
        tokenize("i go through the park."));
  CHECK(remove_neg("he does not go through the park.") ==
        tokenize("he goes through the park."));
  CHECK(remove_neg("he did not go through the park.") ==
        tokenize("he went through the park."));
  CHECK(remove_neg("his insurance rate had not gone up.") ==
        tokenize("his insurance rate had gone up."));
  CHECK(remove_neg("she ended up not going elsewhere.") ==
        tokenize("she ended up going elsewhere."));
}

TEST_CASE("contractions expand before removal") {
  CHECK(remove_neg("he didn't go.") == tokenize("he went."));
  CHECK(remove_neg("it wasn't an option.") == tokenize("it was an option."));
  CHECK(remove_neg("she won't walk.") == tokenize("she will walk."));
}

TEST_CASE("contraction is applied when the coin says so") {
  VerbLexicon lex = table_lexicon();
  // With probability 1 the "was not" pair must contract.
  Rng rng(9);
  auto contracted = add_negation(tokenize("failure was an option."), lex, rng, 1.0);
  REQUIRE(contracted.has_value());
  CHECK(*contracted == tokenize("failure wasn't an option."));

  // Preposed "not" has no auxiliary to contract with.
  Rng rng2(9);
  auto preposed =
      add_negation(tokenize("she ended up going elsewhere."), lex, rng2, 1.0);
  REQUIRE(preposed.has_value());
  CHECK(*preposed == tokenize("she ended up not going elsewhere."));
}

TEST_CASE("inapplicable sentences are signaled") {
  VerbLexicon lex = table_lexicon();
  Rng rng(3);
  CHECK(!add_negation(tokenize("the green table."), lex, rng).has_value());
  CHECK(!add_negation(tokenize("he did not go."), lex, rng).has_value());
  CHECK(!remove_negation(tokenize("he went home."), lex).has_value());
}

TEST_CASE("add/remove round trip is the identity with contractions off") {
  VerbLexicon lex = table_lexicon();
  const char* sentences[] = {
      "failure was an option.",     "the results were good.",
      "i am ready.",                "i can walk well.",
      "he must walk home.",         "they would keep it.",
      "i go through the park.",     "they walk every day.",
      "he goes through the park.",  "she walks to work.",
      "he went through the park.",  "she walked away.",
      "his insurance rate had gone up.",
      "they had walked before.",
      "she ended up going elsewhere.",
      "they kept walking all day.",
  };
  for (const char* s : sentences) {
    CAPTURE(s);
    Tokens original = tokenize(s);
    Rng rng(17);
    auto negated = add_negation(original, lex, rng, 0.0);
    REQUIRE(negated.has_value());
    auto restored = remove_negation(*negated, lex);
    REQUIRE(restored.has_value());
    CHECK(*restored == original);
  }
}
