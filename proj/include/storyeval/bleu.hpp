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

#pragma once

#include "storyeval/text.hpp"

namespace storyeval {

/// Sentence BLEU: geometric mean of modified 1- to 4-gram precisions times
/// the brevity penalty min(1, exp(1 - |ref|/|cand|)). Orders longer than the
/// candidate are skipped (so bleu(c, c) == 1 for any non-empty c); a zero
/// match count is smoothed to 1e-9. Empty candidate scores 0; the reference
/// must be non-empty.
double sentence_bleu(const Tokens& candidate, const Tokens& reference);

}  // namespace storyeval
