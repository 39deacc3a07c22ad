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

// Flow-insensitive, intraprocedural def-use edges. Statements are visited in
// source order with branches and loops linearized. At every definition site
// each distinct variable read on the value side yields one edge
// (read -> defined) per defined variable. Variables are identified by name;
// attribute/field chains such as `self.x` or `this.count` count as one name.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "honest/program.hpp"
#include "honest/syntax_tree.hpp"

namespace honest {

/// Multiset of directed (source, target) name pairs: the value of `target`
/// comes from `source`.
struct DataflowGraph {
  using Edge = std::pair<std::string, std::string>;
  std::map<Edge, std::size_t> edges;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, count] : edges) n += count;
    return n;
  }
  bool empty() const { return edges.empty(); }
  bool operator==(const DataflowGraph&) const = default;
};

namespace detail {

class DataflowExtractor {
 public:
  explicit DataflowExtractor(Language language) : language_(language) {}

  DataflowGraph run(const SyntaxNode& root) {
    visit(root);
    return std::move(graph_);
  }

 private:
  using Names = std::vector<std::string>;

  static void add_unique(Names& names, std::string name) {
    for (const auto& n : names) {
      if (n == name) return;
    }
    names.push_back(std::move(name));
  }

  void emit(const Names& reads, const Names& targets) {
    for (const auto& target : targets) {
      for (const auto& read : reads) ++graph_.edges[{read, target}];
    }
  }

  // "a.b.c" when the node is an attribute/field chain rooted at a plain
  // identifier (or `this` in Java); empty otherwise.
  std::string dotted_name(const SyntaxNode& node) const {
    const auto kind = node.kind();
    if (kind == "identifier") return std::string(node.text());
    if (language_ == Language::kJava && kind == "this") return "this";
    const bool is_chain = language_ == Language::kPython ? kind == "attribute"
                                                         : kind == "field_access";
    if (!is_chain) return {};
    const auto object = node.child_by_field("object");
    const auto member = node.child_by_field(language_ == Language::kPython ? "attribute" : "field");
    if (object.is_null() || member.is_null()) return {};
    auto prefix = dotted_name(object);
    if (prefix.empty()) return {};
    return prefix + "." + std::string(member.text());
  }

  void collect_reads(const SyntaxNode& node, Names& reads) const {
    if (node.is_null() || node.is_comment() || node.is_missing()) return;
    const auto kind = node.kind();
    if (kind == "identifier") {
      add_unique(reads, std::string(node.text()));
      return;
    }
    if (language_ == Language::kPython) {
      if (kind == "attribute") {
        if (auto name = dotted_name(node); !name.empty()) {
          add_unique(reads, std::move(name));
        } else {
          collect_reads(node.child_by_field("object"), reads);
        }
        return;
      }
      if (kind == "call") {
        const auto function = node.child_by_field("function");
        if (!function.is_null() && function.kind() == "attribute") {
          read_callee_object(function.child_by_field("object"), reads);
        } else if (!function.is_null() && function.kind() != "identifier") {
          collect_reads(function, reads);
        }
        collect_reads(node.child_by_field("arguments"), reads);
        return;
      }
      if (kind == "keyword_argument") {
        collect_reads(node.child_by_field("value"), reads);
        return;
      }
      if (kind == "assignment" || kind == "augmented_assignment") {
        collect_reads(node.child_by_field("right"), reads);
        return;
      }
      if (kind == "named_expression") {
        collect_reads(node.child_by_field("name"), reads);
        return;
      }
      if (kind == "lambda") return;
    } else {
      if (kind == "field_access") {
        if (auto name = dotted_name(node); !name.empty()) {
          add_unique(reads, std::move(name));
        } else {
          collect_reads(node.child_by_field("object"), reads);
        }
        return;
      }
      if (kind == "method_invocation") {
        read_callee_object(node.child_by_field("object"), reads);
        collect_reads(node.child_by_field("arguments"), reads);
        return;
      }
      if (kind == "assignment_expression") {
        collect_reads(node.child_by_field("right"), reads);
        return;
      }
      if (kind == "lambda_expression") return;
    }
    for (std::uint32_t i = 0; i < node.named_child_count(); ++i) {
      collect_reads(node.named_child(i), reads);
    }
  }

  void read_callee_object(const SyntaxNode& object, Names& reads) const {
    if (object.is_null()) return;
    if (auto name = dotted_name(object); !name.empty()) {
      if (name != "this") add_unique(reads, std::move(name));
    } else {
      collect_reads(object, reads);
    }
  }

  void collect_targets(const SyntaxNode& node, Names& targets) const {
    if (node.is_null() || node.is_comment() || node.is_missing()) return;
    const auto kind = node.kind();
    if (auto name = dotted_name(node); !name.empty()) {
      if (name != "this") add_unique(targets, std::move(name));
      return;
    }
    if (kind == "subscript") {
      collect_targets(node.child_by_field("value"), targets);
      return;
    }
    if (kind == "array_access") {
      collect_targets(node.child_by_field("array"), targets);
      return;
    }
    if (language_ == Language::kPython &&
        (kind == "pattern_list" || kind == "tuple_pattern" || kind == "list_pattern" ||
         kind == "tuple" || kind == "list" || kind == "parenthesized_expression" ||
         kind == "list_splat_pattern" || kind == "expression_list" ||
         kind == "as_pattern_target")) {
      for (std::uint32_t i = 0; i < node.named_child_count(); ++i) {
        collect_targets(node.named_child(i), targets);
      }
    }
  }

  void definition(const SyntaxNode& target, const SyntaxNode& value, bool target_is_read) {
    Names targets;
    collect_targets(target, targets);
    if (targets.empty()) return;
    Names reads;
    collect_reads(value, reads);
    if (target_is_read) collect_reads(target, reads);
    emit(reads, targets);
  }

  void visit_python(const SyntaxNode& node) {
    const auto kind = node.kind();
    if (kind == "assignment") {
      // `x: int` has no value and defines nothing observable.
      const auto right = node.child_by_field("right");
      if (!right.is_null()) definition(node.child_by_field("left"), right, false);
    } else if (kind == "augmented_assignment") {
      definition(node.child_by_field("left"), node.child_by_field("right"), true);
    } else if (kind == "for_statement" || kind == "for_in_clause") {
      definition(node.child_by_field("left"), node.child_by_field("right"), false);
    } else if (kind == "named_expression") {
      definition(node.child_by_field("name"), node.child_by_field("value"), false);
    } else if (kind == "as_pattern") {
      if (node.named_child_count() > 0) {
        definition(node.child_by_field("alias"), node.named_child(0), false);
      }
    }
  }

  void visit_java(const SyntaxNode& node) {
    const auto kind = node.kind();
    if (kind == "variable_declarator") {
      const auto value = node.child_by_field("value");
      if (!value.is_null()) definition(node.child_by_field("name"), value, false);
    } else if (kind == "assignment_expression") {
      const auto op = node.child_by_field("operator");
      const bool compound = !op.is_null() && op.kind() != "=";
      definition(node.child_by_field("left"), node.child_by_field("right"), compound);
    } else if (kind == "update_expression") {
      for (std::uint32_t i = 0; i < node.named_child_count(); ++i) {
        const auto operand = node.named_child(i);
        definition(operand, operand, false);
      }
    } else if (kind == "enhanced_for_statement") {
      definition(node.child_by_field("name"), node.child_by_field("value"), false);
    }
  }

  void visit(const SyntaxNode& node) {
    if (node.is_comment()) return;
    if (language_ == Language::kPython) {
      visit_python(node);
    } else {
      visit_java(node);
    }
    for (std::uint32_t i = 0; i < node.child_count(); ++i) visit(node.child(i));
  }

  Language language_;
  DataflowGraph graph_;
};

}  // namespace detail

inline DataflowGraph extract_dataflow(const SyntaxTree& tree) {
  return detail::DataflowExtractor(tree.language()).run(tree.root());
}

inline DataflowGraph extract_dataflow(const Program& program) {
  return extract_dataflow(parse_cst(program));
}

}  // namespace honest
