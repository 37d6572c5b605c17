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

#include "storyeval/corpus_io.hpp"

#include <fstream>

#include <json.hpp>

#include "storyeval/error.hpp"

namespace storyeval {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t lineno,
                       const std::string& what) {
  throw Error(path.string() + ":" + std::to_string(lineno) + ": " + what);
}

json parse_line(const std::filesystem::path& path, std::size_t lineno,
                const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(path, lineno, "malformed JSON record");
  return j;
}

bool is_header_line(const json& j) { return j.contains("_header"); }

Story story_from_json(const std::filesystem::path& path, std::size_t lineno,
                      const json& j) {
  if (!j.contains("id") || !j["id"].is_string())
    fail(path, lineno, "missing string field \"id\"");
  if (!j.contains("context") || !j["context"].is_string())
    fail(path, lineno, "missing string field \"context\"");
  if (!j.contains("body") || !j["body"].is_array() || j["body"].empty())
    fail(path, lineno, "\"body\" must be a non-empty array of sentences");
  Story story;
  story.id = j["id"].get<std::string>();
  story.context = tokenize(j["context"].get<std::string>());
  for (const auto& s : j["body"]) {
    if (!s.is_string()) fail(path, lineno, "body sentences must be strings");
    Tokens toks = tokenize(s.get<std::string>());
    if (toks.empty()) fail(path, lineno, "empty body sentence");
    story.body.push_back(std::move(toks));
  }
  return story;
}

template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(path, lineno, line);
    if (lineno == 1 && is_header_line(j)) continue;
    fn(lineno, j);
  }
}

void write_header(std::ofstream& out, const std::optional<FileHeader>& header) {
  if (!header) return;
  json j;
  j["_header"] = {{"config_hash", header->config_hash}, {"seed", header->seed}};
  out << j.dump() << "\n";
}

json story_to_json(const Story& story) {
  json j;
  j["id"] = story.id;
  j["context"] = join_tokens(story.context);
  json body = json::array();
  for (const auto& s : story.body) body.push_back(join_tokens(s));
  j["body"] = std::move(body);
  return j;
}

}  // namespace

std::vector<Story> load_corpus(const std::filesystem::path& path) {
  std::vector<Story> out;
  for_each_record(path, [&](std::size_t lineno, const json& j) {
    out.push_back(story_from_json(path, lineno, j));
  });
  return out;
}

std::vector<AnnotatedStory> load_annotations(const std::filesystem::path& path) {
  std::vector<AnnotatedStory> out;
  for_each_record(path, [&](std::size_t lineno, const json& j) {
    AnnotatedStory a;
    a.story = story_from_json(path, lineno, j);
    if (!j.contains("labels") || !j["labels"].is_array() ||
        j["labels"].size() != 7)
      fail(path, lineno, "\"labels\" must hold exactly 7 entries");
    for (std::size_t i = 0; i < 7; ++i) {
      int v = -1;
      if (j["labels"][i].is_number_integer()) v = j["labels"][i].get<int>();
      if (v != 0 && v != 1) fail(path, lineno, "labels must be 0 or 1");
      a.labels[i] = v;
    }
    if (!j.contains("error_types") || !j["error_types"].is_array() ||
        j["error_types"].size() != 7)
      fail(path, lineno, "\"error_types\" must hold exactly 7 entries");
    for (std::size_t i = 0; i < 7; ++i) {
      const auto& flags = j["error_types"][i];
      if (!flags.is_array()) fail(path, lineno, "error_types entries must be arrays");
      for (const auto& f : flags) {
        if (!f.is_string() || !is_error_type(f.get<std::string>()))
          fail(path, lineno, "unknown error type");
        a.error_flags[i].insert(f.get<std::string>());
      }
      if (a.labels[i] == 1 && !a.error_flags[i].empty())
        fail(path, lineno, "annotator labeled 1 but flagged errors");
      if (a.labels[i] == 0 && a.error_flags[i].empty())
        fail(path, lineno, "annotator labeled 0 without an error flag");
    }
    out.push_back(std::move(a));
  });
  return out;
}

std::vector<std::pair<std::string, double>> load_scores(
    const std::filesystem::path& path) {
  std::vector<std::pair<std::string, double>> out;
  for_each_record(path, [&](std::size_t lineno, const json& j) {
    if (!j.contains("id") || !j["id"].is_string() || !j.contains("score") ||
        !j["score"].is_number())
      fail(path, lineno, "expected {\"id\": str, \"score\": number}");
    out.emplace_back(j["id"].get<std::string>(), j["score"].get<double>());
  });
  return out;
}

void save_corpus(const std::vector<Story>& stories,
                 const std::filesystem::path& path,
                 const std::optional<FileHeader>& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, header);
  for (const auto& s : stories) out << story_to_json(s).dump() << "\n";
}

void save_annotations(const std::vector<AnnotatedStory>& annotations,
                      const std::filesystem::path& path,
                      const std::optional<FileHeader>& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, header);
  for (const auto& a : annotations) {
    json j = story_to_json(a.story);
    j["labels"] = a.labels;
    json flags = json::array();
    for (const auto& set : a.error_flags) {
      json one = json::array();
      for (const auto& f : set) one.push_back(f);
      flags.push_back(std::move(one));
    }
    j["error_types"] = std::move(flags);
    out << j.dump() << "\n";
  }
}

void save_scores(const std::vector<std::pair<std::string, double>>& scores,
                 const std::filesystem::path& path,
                 const std::optional<FileHeader>& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, header);
  for (const auto& [id, score] : scores) {
    json j;
    j["id"] = id;
    j["score"] = score;
    out << j.dump() << "\n";
  }
}

}  // namespace storyeval
