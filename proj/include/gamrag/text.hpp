// Copyright 2026 The GamRag Authors.
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

#include <string>
#include <string_view>
#include <vector>

namespace gamrag::text {

// ASCII lowercase; bytes outside ASCII pass through untouched.
std::string lower(std::string_view s);

// Collapse runs of whitespace into one space and trim both ends.
std::string collapse_whitespace(std::string_view s);

// Strip ASCII punctuation from both ends (internal punctuation is kept).
std::string_view strip_edge_punct(std::string_view s);

// Entity canonical form: lowercase, whitespace collapse, edge punctuation strip.
std::string canonical_entity(std::string_view surface);

// Whitespace-separated tokens.
std::vector<std::string_view> split_ws(std::string_view s);

// Lowercased alphanumeric word tokens (punctuation acts as a separator).
std::vector<std::string> words(std::string_view s);

bool is_space(char c);
bool is_punct(char c);

}  // namespace gamrag::text
