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

#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "honest/program.hpp"
#include "honest/tokenize.hpp"

namespace honest {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program python(std::string source) { return {std::move(source), Language::kPython, std::nullopt}; }

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, SimpleAssignment) {
  EXPECT_EQ(tokenize(python("x = 1")).tokens, (Tokens{"x", "=", "1"}));
}

TEST(TokenizeTest, EmptySourceHasNoTokens) { EXPECT_TRUE(tokenize(python("")).empty()); }

TEST(TokenizeTest, TrailingCommentIsDropped) {
  EXPECT_EQ(tokenize(python("x = 1  # note")).tokens, (Tokens{"x", "=", "1"}));
}

TEST(TokenizeTest, StringLiteralsStayWhole) {
  EXPECT_EQ(tokenize(python("s = f\"a {b} c\"")).tokens, (Tokens{"s", "=", "f\"a {b} c\""}));
  Program java{"class A { String s = \"x y\"; char c = 'q'; }", Language::kJava, std::nullopt};
  const auto tokens = tokenize(java).tokens;
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), "\"x y\""), tokens.end());
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), "'q'"), tokens.end());
}

TEST(TokenizeTest, MalformedInputStillTokenizes) {
  const auto tokens = tokenize(python("def f(:\n    return")).tokens;
  EXPECT_FALSE(tokens.empty());
  EXPECT_EQ(tokens.front(), "def");
}

// Golden corpus: expected tokens come from the Python standard library's
// tokenize module and javalang (see data/golden/make_golden_tokens.py).
TEST(TokenizeTest, MatchesReferenceLexersOnGoldenCorpus) {
  const std::string root = std::string(HONEST_TEST_DATA_DIR) + "/golden/";
  const auto golden = nlohmann::json::parse(read_file(root + "tokens.json"));
  int python_files = 0;
  for (const auto& [name, expected] : golden.items()) {
    const bool is_python = name.rfind("python/", 0) == 0;
    python_files += is_python;
    Program program{read_file(root + name), is_python ? Language::kPython : Language::kJava, std::nullopt};
    const auto tokens = tokenize(program).tokens;
    EXPECT_EQ(tokens, expected.get<Tokens>()) << name;
    for (const auto& t : tokens) {
      EXPECT_FALSE(t.empty()) << name;
      const bool comment = is_python ? t.front() == '#' : t.rfind("//", 0) == 0 || t.rfind("/*", 0) == 0;
      EXPECT_FALSE(comment) << name << " leaked a comment: " << t;
    }
  }
  EXPECT_EQ(python_files, 20);
}

TEST(TokenizeTest, JavaShiftOperatorsAreSingleTokens) {
  Program java{"class A { int f(int a) { return a >>> 2 >> 1; } }", Language::kJava, std::nullopt};
  const auto tokens = tokenize(java).tokens;
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), ">>>"), tokens.end());
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), ">>"), tokens.end());
}

TEST(TokenizeTest, IsDeterministic) {
  const auto p = python("def f(a):\n    return [a * i for i in range(3)]\n");
  EXPECT_EQ(tokenize(p), tokenize(p));
}

TEST(ProgramModelTest, ParsesLanguageNames) {
  EXPECT_EQ(parse_language("Python"), Language::kPython);
  EXPECT_EQ(parse_language("java"), Language::kJava);
  EXPECT_THROW(parse_language("rust"), Error);
  try {
    parse_language("cobol");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLanguage);
  }
}

TEST(ProgramModelTest, EstimationPreconditions) {
  SampleSet one{"r", "req", {python("x = 1")}};
  try {
    validate_for_estimation(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
  SampleSet mixed{"r", "req", {python("x = 1"), Program{"class A {}", Language::kJava, std::nullopt}}};
  EXPECT_THROW(validate_for_estimation(mixed), Error);

  ProgramOrigin origin;
  origin.token_probs = std::vector<double>{0.5, 1.5};
  SampleSet bad_probs{"r", "req", {python("x = 1"), Program{"y = 2", Language::kPython, origin}}};
  EXPECT_THROW(validate_for_estimation(bad_probs), Error);
}

}  // namespace
}  // namespace honest
