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

#include "storyeval/text.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace storyeval {

namespace {

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}
inline bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}
inline bool is_letter(char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 sequences; treat them as
  // letter-like so non-ASCII words stay in one piece.
  return std::isalpha(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;
}
inline bool is_word_char(char c) { return is_letter(c) || is_digit(c); }
inline char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(lower(c));
  return out;
}

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> abbr = {
      "mr.",  "mrs.", "ms.",  "dr.",   "prof.", "st.",  "mt.",  "sr.",
      "jr.",  "etc.", "vs.",  "e.g.",  "i.e.",  "gen.", "col.", "sgt.",
      "capt.", "lt.", "rev.", "hon.",  "no.",   "inc.", "ltd.", "co.",
      "jan.", "feb.", "mar.", "apr.",  "jun.",  "jul.", "aug.", "sep.",
      "sept.", "oct.", "nov.", "dec.", "a.m.",  "p.m."};
  return abbr;
}

}  // namespace

bool is_placeholder_token(std::string_view token) {
  return token == "[MALE]" || token == "[FEMALE]" || token == "[NEUTRAL]";
}

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    // Bracketed placeholder: [word]
    if (c == '[') {
      std::size_t j = i + 1;
      while (j < n && is_word_char(text[j])) ++j;
      if (j < n && text[j] == ']' && j > i + 1) {
        std::string tok = to_lower(text.substr(i, j - i + 1));
        if (tok == "[male]")
          out.push_back("[MALE]");
        else if (tok == "[female]")
          out.push_back("[FEMALE]");
        else if (tok == "[neutral]")
          out.push_back("[NEUTRAL]");
        else
          out.push_back(std::move(tok));
        i = j + 1;
        continue;
      }
    }
    if (is_word_char(c)) {
      std::string tok;
      while (i < n) {
        char w = text[i];
        if (is_word_char(w)) {
          tok.push_back(lower(w));
          ++i;
          continue;
        }
        // Decimal point inside a number.
        if (w == '.' && i + 1 < n && !tok.empty() && is_digit(tok.back()) &&
            is_digit(text[i + 1])) {
          tok.push_back('.');
          ++i;
          continue;
        }
        // "n't" stays attached: don't, can't, didn't...
        if (w == '\'' && !tok.empty() && tok.back() == 'n' && i + 1 < n &&
            lower(text[i + 1]) == 't' &&
            (i + 2 >= n || !is_word_char(text[i + 2]))) {
          tok.push_back('\'');
          tok.push_back('t');
          i += 2;
          continue;
        }
        break;
      }
      out.push_back(std::move(tok));
      continue;
    }
    // Apostrophe clitic: 's, 'll, 're, ... becomes its own token.
    if (c == '\'' && i + 1 < n && is_letter(text[i + 1])) {
      std::string tok = "'";
      ++i;
      while (i < n && is_letter(text[i])) {
        tok.push_back(lower(text[i]));
        ++i;
      }
      out.push_back(std::move(tok));
      continue;
    }
    // Any other visible character is a single-character token.
    out.push_back(std::string(1, c));
    ++i;
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    std::size_t b = start;
    while (b < end && is_space(text[b])) ++b;
    std::size_t e = end;
    while (e > b && is_space(text[e - 1])) --e;
    if (e > b) out.push_back(std::string(text.substr(b, e - b)));
    start = end;
  };
  while (i < n) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i;
      while (j + 1 < n &&
             (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?'))
        ++j;
      bool at_end = (j + 1 >= n);
      bool before_space = (j + 1 < n && is_space(text[j + 1]));
      bool boundary = at_end || before_space;
      if (boundary && c == '.' && i == j) {
        // Check the word ending at this period against the abbreviation list.
        std::size_t b = i;
        while (b > start && (is_word_char(text[b - 1]) || text[b - 1] == '.'))
          --b;
        std::string word = to_lower(text.substr(b, i - b + 1));
        if (abbreviations().count(word)) boundary = false;
      }
      if (boundary) {
        flush(j + 1);
        i = j + 1;
        continue;
      }
      i = j + 1;
      continue;
    }
    ++i;
  }
  flush(n);
  return out;
}

std::string join_tokens(const Tokens& tokens) {
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s.push_back(' ');
    s += tokens[i];
  }
  return s;
}

}  // namespace storyeval
