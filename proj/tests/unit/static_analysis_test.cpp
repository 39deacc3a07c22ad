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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "honest/dataflow.hpp"
#include "honest/subtrees.hpp"
#include "honest/syntax_tree.hpp"

namespace honest {
namespace {

Program python(std::string source) { return {std::move(source), Language::kPython, std::nullopt}; }
Program java(std::string source) { return {std::move(source), Language::kJava, std::nullopt}; }

bool contains_kind(const SyntaxNode& node, std::string_view kind) {
  if (node.kind() == kind) return true;
  for (std::uint32_t i = 0; i < node.child_count(); ++i) {
    if (contains_kind(node.child(i), kind)) return true;
  }
  return false;
}

TEST(ParseCstTest, PythonRootIsModule) {
  const auto tree = parse_cst(python("x = 1"));
  EXPECT_EQ(tree.root().kind(), "module");
  EXPECT_EQ(tree.root().kind(), root_kind(Language::kPython));
  EXPECT_FALSE(tree.has_errors());
}

TEST(ParseCstTest, EmptySourceHasNoNamedChildren) {
  EXPECT_EQ(parse_cst(python("")).root().named_child_count(), 0u);
  EXPECT_EQ(parse_cst(java("")).root().named_child_count(), 0u);
}

TEST(ParseCstTest, JavaClassDeclaration) {
  const auto tree = parse_cst(java("class A {}"));
  EXPECT_EQ(tree.root().kind(), "program");
  EXPECT_TRUE(contains_kind(tree.root(), "class_declaration"));
}

TEST(ParseCstTest, MalformedInputYieldsErrorNodes) {
  const auto tree = parse_cst(python("def f(:\n  return )"));
  EXPECT_TRUE(tree.has_errors());
  EXPECT_EQ(tree.root().kind(), "module");
}

TEST(ExtractSubtreesTest, HeightTwoFingerprintsOfAssignment) {
  // Hand-derived from the grammar's tree for `x = 1`:
  // module > expression_statement > assignment > (identifier "=" integer).
  const auto bag = extract_subtrees(parse_cst(python("x = 1")), 2);
  const std::map<std::string, std::size_t> expected{
      {"(module (expression_statement assignment))", 1},
      {"(expression_statement (assignment identifier \"=\" integer))", 1},
      {"(assignment identifier \"=\" integer)", 1},
  };
  EXPECT_EQ(bag.entries, expected);
}

TEST(ExtractSubtreesTest, HeightOneKeepsOnlyChildren) {
  const auto bag = extract_subtrees(parse_cst(python("x = 1")), 1);
  EXPECT_EQ(bag.entries.count("(module expression_statement)"), 1u);
  EXPECT_EQ(bag.entries.count("(assignment identifier \"=\" integer)"), 1u);
  EXPECT_EQ(bag.total(), 3u);
}

TEST(ExtractSubtreesTest, LiteralValuesDoNotChangeFingerprints) {
  // The grammar labels both literals `integer`, so the bags coincide.
  EXPECT_EQ(extract_subtrees(parse_cst(python("x = 1")), 1), extract_subtrees(parse_cst(python("x = 2")), 1));
  // A string literal is a different kind.
  EXPECT_NE(extract_subtrees(parse_cst(python("x = 1")), 1), extract_subtrees(parse_cst(python("x = 'a'")), 1));
}

TEST(ExtractSubtreesTest, PositionAndSpellingIndependent) {
  EXPECT_EQ(extract_subtrees(parse_cst(python("alpha = beta + 1"))),
            extract_subtrees(parse_cst(python("\n\n   \nz = w + 7"))));
}

TEST(ExtractSubtreesTest, CommentsAreIgnored) {
  EXPECT_EQ(extract_subtrees(parse_cst(python("x = 1  # trailing\n"))), extract_subtrees(parse_cst(python("x = 1\n"))));
}

TEST(ExtractSubtreesTest, EmptyProgramGivesEmptyBag) {
  EXPECT_TRUE(extract_subtrees(parse_cst(python(""))).empty());
}

TEST(ExtractSubtreesTest, NonEmptyProgramGivesNonEmptyBag) {
  EXPECT_GE(extract_subtrees(parse_cst(python("pass"))).total(), 1u);
  EXPECT_GE(extract_subtrees(parse_cst(java("class A {}"))).total(), 1u);
}

TEST(ExtractSubtreesTest, RejectsZeroHeight) {
  EXPECT_THROW(extract_subtrees(parse_cst(python("x = 1")), 0), Error);
}

using Edges = std::map<std::pair<std::string, std::string>, std::size_t>;

struct DataflowCase {
  const char* name;
  Language language;
  const char* source;
  Edges expected;
};

// Expected edge multisets enumerated by hand from the def-use rule: at each
// definition, every distinct variable read on the value side flows into every
// defined variable.
const std::vector<DataflowCase>& dataflow_corpus() {
  static const std::vector<DataflowCase> cases = {
      {"chain", Language::kPython, "a = 1\nb = a\n", {{{"a", "b"}, 1}}},
      {"pass", Language::kPython, "pass\n", {}},
      {"fan_out", Language::kPython, "a = 1\nb = a\nc = a\n", {{{"a", "b"}, 1}, {{"a", "c"}, 1}}},
      {"distinct_reads", Language::kPython, "x = y + z * y\n", {{{"y", "x"}, 1}, {{"z", "x"}, 1}}},
      {"loop_accumulate", Language::kPython, "s = 0\nfor v in xs:\n    s += v\n",
       {{{"xs", "v"}, 1}, {{"v", "s"}, 1}, {{"s", "s"}, 1}}},
      {"swap", Language::kPython, "a, b = b, a\n",
       {{{"a", "a"}, 1}, {{"a", "b"}, 1}, {{"b", "a"}, 1}, {{"b", "b"}, 1}}},
      {"call_argument", Language::kPython, "n = len(items)\n", {{{"items", "n"}, 1}}},
      {"method_receiver", Language::kPython, "u = s.upper()\n", {{{"s", "u"}, 1}}},
      {"attribute_chain", Language::kPython, "self.total = self.total + step\n",
       {{{"self.total", "self.total"}, 1}, {{"step", "self.total"}, 1}}},
      {"comprehension", Language::kPython, "r = [x * k for x in xs]\n",
       {{{"x", "r"}, 1}, {{"k", "r"}, 1}, {{"xs", "r"}, 1}, {{"xs", "x"}, 1}}},
      {"walrus", Language::kPython, "if (m := f(a)) > 0:\n    b = m\n", {{{"a", "m"}, 1}, {{"m", "b"}, 1}}},
      {"with_alias", Language::kPython, "with open(p) as fh:\n    data = fh.read()\n",
       {{{"p", "fh"}, 1}, {{"fh", "data"}, 1}}},
      {"chained_assignment", Language::kPython, "a = b = c\n", {{{"c", "a"}, 1}, {{"c", "b"}, 1}}},
      {"subscript_target", Language::kPython, "d[k] = v\n", {{{"v", "d"}, 1}}},
      {"parameters_only", Language::kPython, "def f(a, b=2):\n    return a\n", {}},
      {"repeated_statement", Language::kPython, "c = a\nc = a\n", {{{"a", "c"}, 2}}},
      {"java_fan_out", Language::kJava, "class A { void f() { int a = 1; int b = a; int c = a; } }",
       {{{"a", "b"}, 1}, {{"a", "c"}, 1}}},
      {"java_loop", Language::kJava,
       "class A { int f(int n) { int s = 0; for (int i = 0; i < n; i++) { s += i; } return s; } }",
       {{{"i", "i"}, 1}, {{"i", "s"}, 1}, {{"s", "s"}, 1}}},
      {"java_foreach", Language::kJava,
       "class A { void f(java.util.List<String> xs) { for (String t : xs) { int n = t.length(); } } }",
       {{{"xs", "t"}, 1}, {{"t", "n"}, 1}}},
      {"java_field", Language::kJava, "class A { int x; void f(int v) { this.x = v * 2; } }",
       {{{"v", "this.x"}, 1}}},
      {"java_array_store", Language::kJava, "class A { void f(int[] arr, int i, int v) { arr[i] = v; } }",
       {{{"v", "arr"}, 1}}},
  };
  return cases;
}

TEST(ExtractDataflowTest, MatchesHandEnumeratedCorpus) {
  for (const auto& c : dataflow_corpus()) {
    const auto graph = extract_dataflow(Program{c.source, c.language, std::nullopt});
    EXPECT_EQ(graph.edges, c.expected) << c.name;
  }
}

TEST(ExtractDataflowTest, RenamingChangesEdgeNames) {
  const auto original = extract_dataflow(python("a = 1\nb = a\n"));
  const auto renamed = extract_dataflow(python("q = 1\nb = q\n"));
  EXPECT_NE(original, renamed);
  EXPECT_EQ(renamed.edges.count({"q", "b"}), 1u);
}

TEST(ExtractDataflowTest, Deterministic) {
  const auto p = python("a = 1\nfor i in range(a):\n    a += i\nb = a\n");
  EXPECT_EQ(extract_dataflow(p), extract_dataflow(p));
}

TEST(ExtractDataflowTest, MalformedProgramIsAnalyzedBestEffort) {
  const auto graph = extract_dataflow(python("a = 1\nb = a\ndef broken(:\n"));
  EXPECT_EQ(graph.edges.count({"a", "b"}), 1u);
}

}  // namespace
}  // namespace honest
