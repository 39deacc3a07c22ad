// Copyright 2026 The honest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include "honest/program.hpp"
#include "honest/syntax_tree.hpp"

namespace honest {

namespace detail {

// Literal kinds emitted as one token even though the grammar gives them
// internal structure (string_start/string_content/interpolation...).
inline bool is_atomic_literal(Language language, std::string_view kind) {
  if (language == Language::kPython) return kind == "string";
  return kind == "string_literal" || kind == "character_literal" || kind == "text_block";
}

inline void collect_tokens(const SyntaxNode& node, Language language,
                           std::vector<std::string>& out) {
  if (node.is_comment()) return;
  if (node.child_count() == 0 || is_atomic_literal(language, node.kind())) {
    if (node.is_missing()) return;
    auto text = node.text();
    if (!text.empty()) out.emplace_back(text);
    return;
  }
  for (std::uint32_t i = 0; i < node.child_count(); ++i) {
    collect_tokens(node.child(i), language, out);
  }
}

}  // namespace detail

/// Lexical tokens of a parsed tree: the CST leaves in source order, minus
/// comments and parser-inserted MISSING tokens. String literals stay whole.
inline TokenSequence tokenize(const SyntaxTree& tree) {
  TokenSequence sequence;
  detail::collect_tokens(tree.root(), tree.language(), sequence.tokens);
  return sequence;
}

inline TokenSequence tokenize(const Program& program) {
  if (program.source.empty()) return {};
  return tokenize(parse_cst(program));
}

}  // namespace honest
