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

#include <cstddef>
#include <map>
#include <string>

#include "honest/error.hpp"
#include "honest/syntax_tree.hpp"

namespace honest {

inline constexpr int kDefaultSubtreeHeight = 2;

/// Multiset of subtree fingerprints, stored as fingerprint -> multiplicity.
struct SubtreeBag {
  std::map<std::string, std::size_t> entries;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, count] : entries) n += count;
    return n;
  }
  bool empty() const { return entries.empty(); }
  bool operator==(const SubtreeBag&) const = default;
};

namespace detail {

inline bool has_structural_children(const SyntaxNode& node) {
  for (std::uint32_t i = 0; i < node.child_count(); ++i) {
    if (!node.child(i).is_comment()) return true;
  }
  return false;
}

// Named kinds are bare identifiers; anonymous kinds are token spellings such
// as "(" and get quoted so the serialization stays unambiguous.
inline void append_kind(const SyntaxNode& node, std::string& out) {
  if (node.is_named()) {
    out += node.kind();
    return;
  }
  out += '"';
  for (char c : node.kind()) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

inline void serialize_shape(const SyntaxNode& node, int height, std::string& out) {
  if (height == 0 || !has_structural_children(node)) {
    append_kind(node, out);
    return;
  }
  out += '(';
  append_kind(node, out);
  for (std::uint32_t i = 0; i < node.child_count(); ++i) {
    const auto child = node.child(i);
    if (child.is_comment()) continue;
    out += ' ';
    serialize_shape(child, height - 1, out);
  }
  out += ')';
}

inline void collect_subtrees(const SyntaxNode& node, int height, SubtreeBag& bag) {
  if (node.is_comment() || !has_structural_children(node)) return;
  std::string fingerprint;
  serialize_shape(node, height, fingerprint);
  ++bag.entries[fingerprint];
  for (std::uint32_t i = 0; i < node.child_count(); ++i) {
    collect_subtrees(node.child(i), height, bag);
  }
}

}  // namespace detail

/// One fingerprint per internal node: the node kind and the kinds of its
/// descendants down to `height` levels, serialized as an s-expression.
/// Byte offsets and identifier spellings never enter a fingerprint.
inline SubtreeBag extract_subtrees(const SyntaxTree& tree, int height = kDefaultSubtreeHeight) {
  if (height < 1) throw Error(ErrorCode::kInvalidArgument, "subtree height must be >= 1");
  SubtreeBag bag;
  detail::collect_subtrees(tree.root(), height, bag);
  return bag;
}

}  // namespace honest
