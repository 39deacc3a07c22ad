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

// Thin RAII layer over the tree-sitter C API. Parsers are thread-local, so
// each worker thread owns its own parser instance.

#pragma once

#include <tree_sitter/api.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "honest/error.hpp"
#include "honest/program.hpp"

extern "C" {
const TSLanguage* tree_sitter_python(void);
const TSLanguage* tree_sitter_java(void);
}

namespace honest {

inline const TSLanguage* grammar_for(Language language) {
  switch (language) {
    case Language::kPython: return tree_sitter_python();
    case Language::kJava: return tree_sitter_java();
  }
  throw Error(ErrorCode::kUnsupportedLanguage, "no grammar for language");
}

/// Non-owning view of a node. Valid only while the owning SyntaxTree lives.
class SyntaxNode {
 public:
  SyntaxNode(TSNode node, const std::string* source) : node_(node), source_(source) {}

  bool is_null() const { return ts_node_is_null(node_); }
  std::string_view kind() const { return ts_node_type(node_); }
  bool is_named() const { return ts_node_is_named(node_); }
  bool is_error() const { return ts_node_is_error(node_); }
  bool is_missing() const { return ts_node_is_missing(node_); }
  bool is_comment() const {
    const auto k = kind();
    return k == "comment" || k == "line_comment" || k == "block_comment";
  }

  std::uint32_t child_count() const { return ts_node_child_count(node_); }
  std::uint32_t named_child_count() const { return ts_node_named_child_count(node_); }
  SyntaxNode child(std::uint32_t index) const { return {ts_node_child(node_, index), source_}; }
  SyntaxNode named_child(std::uint32_t index) const {
    return {ts_node_named_child(node_, index), source_};
  }

  /// Field name of the index-th child, or empty when the child has none.
  std::string_view field_name_for_child(std::uint32_t index) const {
    const char* name = ts_node_field_name_for_child(node_, index);
    return name ? std::string_view(name) : std::string_view();
  }

  SyntaxNode child_by_field(std::string_view field) const {
    return {ts_node_child_by_field_name(node_, field.data(),
                                        static_cast<std::uint32_t>(field.size())),
            source_};
  }

  std::string_view text() const {
    const auto begin = ts_node_start_byte(node_);
    const auto end = ts_node_end_byte(node_);
    if (end <= begin || end > source_->size()) return {};
    return std::string_view(*source_).substr(begin, end - begin);
  }

  std::uint32_t start_byte() const { return ts_node_start_byte(node_); }
  bool operator==(const SyntaxNode& other) const { return ts_node_eq(node_, other.node_); }

  TSNode raw() const { return node_; }

 private:
  TSNode node_;
  const std::string* source_;
};

/// Owns a parsed tree together with the source bytes it points into.
class SyntaxTree {
 public:
  SyntaxTree(TSTree* tree, std::string source, Language language)
      : tree_(tree, &ts_tree_delete),
        source_(std::make_unique<std::string>(std::move(source))),
        language_(language) {}

  SyntaxNode root() const { return {ts_tree_root_node(tree_.get()), source_.get()}; }
  const std::string& source() const { return *source_; }
  Language language() const { return language_; }
  bool has_errors() const { return ts_node_has_error(ts_tree_root_node(tree_.get())); }

 private:
  std::unique_ptr<TSTree, decltype(&ts_tree_delete)> tree_;
  std::unique_ptr<std::string> source_;
  Language language_;
};

namespace detail {

class ParserHandle {
 public:
  explicit ParserHandle(Language language) : parser_(ts_parser_new(), &ts_parser_delete) {
    if (!parser_ || !ts_parser_set_language(parser_.get(), grammar_for(language))) {
      throw Error(ErrorCode::kCatastrophicParseFailure, "grammar version incompatible with runtime");
    }
  }
  TSParser* get() const { return parser_.get(); }

 private:
  std::unique_ptr<TSParser, decltype(&ts_parser_delete)> parser_;
};

inline TSParser* thread_parser(Language language) {
  thread_local ParserHandle python(Language::kPython);
  thread_local ParserHandle java(Language::kJava);
  return language == Language::kPython ? python.get() : java.get();
}

}  // namespace detail

/// Full-fidelity concrete syntax tree. Malformed input yields a tree with
/// ERROR/MISSING nodes; only a parser that produces nothing at all throws.
inline SyntaxTree parse_cst(const Program& program) {
  TSParser* parser = detail::thread_parser(program.language);
  ts_parser_reset(parser);
  TSTree* tree = ts_parser_parse_string(parser, nullptr, program.source.data(),
                                        static_cast<std::uint32_t>(program.source.size()));
  if (tree == nullptr) {
    throw Error(ErrorCode::kCatastrophicParseFailure, "parser produced no tree");
  }
  return SyntaxTree(tree, program.source, program.language);
}

/// Root node kind the grammar uses for a whole file.
inline constexpr std::string_view root_kind(Language language) {
  return language == Language::kPython ? "module" : "program";
}

}  // namespace honest
