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

// Synthetic sample sets: "passed" sets are one seed program plus light
// mutations of it, "failed" sets are unrelated programs.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "honest/confidence.hpp"
#include "honest/dataset_io.hpp"
#include "honest/program.hpp"

namespace honest::synthetic {

struct CorpusProgram {
  std::vector<std::string> lines;
  std::vector<std::string> names;  // identifiers safe to rename
};

inline const std::vector<CorpusProgram>& python_corpus() {
  static const std::vector<CorpusProgram> corpus = {
      {{"def total(values):", "    acc = 0", "    count = 0", "    for v in values:", "        acc += v",
        "        count += 1", "    return acc"},
       {"acc", "count", "values"}},
      {{"import math", "def area(radius):", "    scale = 2", "    unit = math.pi", "    return unit * radius ** scale"},
       {"radius", "scale", "unit"}},
      {{"class Stack:", "    def __init__(self):", "        self.items = []", "        self.size = 0",
        "    def push(self, item):", "        self.items.append(item)", "        self.size += 1"},
       {"item"}},
      {{"def is_palindrome(text):", "    cleaned = text.lower()", "    reversed_text = cleaned[::-1]",
        "    return cleaned == reversed_text"},
       {"text", "cleaned", "reversed_text"}},
      {{"def fib(n):", "    a, b = 0, 1", "    for _ in range(n):", "        a, b = b, a + b", "    return a"},
       {"n"}},
      {{"words = input().split()", "seen = set()", "dupes = []", "for w in words:", "    if w in seen:",
        "        dupes.append(w)", "    seen.add(w)", "print(len(dupes))"},
       {"words", "seen", "dupes", "w"}},
      {{"def clamp(x, low, high):", "    if x < low:", "        return low", "    if x > high:", "        return high",
        "    return x"},
       {"x", "low", "high"}},
      {{"import json", "def load(path):", "    handle = open(path)", "    data = json.load(handle)",
        "    handle.close()", "    return data"},
       {"path", "handle", "data"}},
      {{"def gcd(p, q):", "    while q:", "        p, q = q, p % q", "    return p"}, {"p", "q"}},
      {{"matrix = [[1, 2], [3, 4]]", "rows = len(matrix)", "cols = len(matrix[0])",
        "flat = [matrix[r][c] for r in range(rows) for c in range(cols)]", "print(sum(flat))"},
       {"matrix", "rows", "cols", "flat"}},
      {{"def count_vowels(s):", "    vowels = 'aeiou'", "    hits = 0", "    for ch in s:", "        if ch in vowels:",
        "            hits += 1", "    return hits"},
       {"s", "vowels", "hits", "ch"}},
      {{"try:", "    value = int(input())", "except ValueError:", "    value = -1", "finally:", "    print('done')",
        "print(value * 2)"},
       {"value"}},
      {{"def merge(left, right):", "    out = []", "    i = j = 0", "    while i < len(left) and j < len(right):",
        "        if left[i] <= right[j]:", "            out.append(left[i])", "            i += 1", "        else:",
        "            out.append(right[j])", "            j += 1", "    return out + left[i:] + right[j:]"},
       {"left", "right", "out"}},
      {{"from collections import Counter", "def top(items, k):", "    counts = Counter(items)",
        "    ranked = counts.most_common(k)", "    return [name for name, _ in ranked]"},
       {"items", "k", "counts", "ranked"}},
      {{"def to_binary(number):", "    digits = []", "    while number > 0:", "        digits.append(str(number % 2))",
        "        number //= 2", "    return ''.join(reversed(digits)) or '0'"},
       {"number", "digits"}},
      {{"lines = open('data.txt').read().splitlines()", "header = lines[0]", "body = lines[1:]",
        "widths = [len(line) for line in body]", "print(header, max(widths))"},
       {"lines", "header", "body", "widths"}},
      {{"def transpose(grid):", "    height = len(grid)", "    width = len(grid[0])",
        "    return [[grid[y][x] for y in range(height)] for x in range(width)]"},
       {"grid", "height", "width"}},
      {{"class Point:", "    def __init__(self, x, y):", "        self.x = x", "        self.y = y",
        "    def norm(self):", "        return (self.x ** 2 + self.y ** 2) ** 0.5"},
       {}},
      {{"def primes(limit):", "    sieve = [True] * (limit + 1)", "    found = []", "    for k in range(2, limit + 1):",
        "        if sieve[k]:", "            found.append(k)", "            for m in range(k * k, limit + 1, k):",
        "                sieve[m] = False", "    return found"},
       {"limit", "sieve", "found"}},
      {{"import random", "deck = list(range(52))", "random.shuffle(deck)", "hand = deck[:5]", "rest = deck[5:]",
        "print(sorted(hand), len(rest))"},
       {"deck", "hand", "rest"}},
      {{"def flatten(nested):", "    result = []", "    for part in nested:", "        if isinstance(part, list):",
        "            result.extend(flatten(part))", "        else:", "            result.append(part)", "    return result"},
       {"nested", "result", "part"}},
      {{"def caesar(message, shift):", "    alphabet = 'abcdefghijklmnopqrstuvwxyz'",
        "    table = str.maketrans(alphabet, alphabet[shift:] + alphabet[:shift])",
        "    return message.translate(table)"},
       {"message", "shift", "alphabet", "table"}},
      {{"with open('log.txt') as f:", "    errors = [l for l in f if 'ERROR' in l]", "print(len(errors))"},
       {"errors", "f"}},
      {{"def binary_search(arr, target):", "    lo, hi = 0, len(arr) - 1", "    while lo <= hi:",
        "        mid = (lo + hi) // 2", "        if arr[mid] == target:", "            return mid",
        "        if arr[mid] < target:", "            lo = mid + 1", "        else:", "            hi = mid - 1",
        "    return -1"},
       {"arr", "target", "mid"}},
      {{"temps = {'mon': 21, 'tue': 25, 'wed': 19}", "warmest = max(temps, key=temps.get)",
        "average = sum(temps.values()) / len(temps)", "print(warmest, round(average, 1))"},
       {"temps", "warmest", "average"}},
      {{"def factorial(m):", "    if m <= 1:", "        return 1", "    return m * factorial(m - 1)"}, {"m"}},
      {{"import re", "pattern = re.compile(r'\\d+')", "text = 'a1b22c333'", "numbers = pattern.findall(text)",
        "total = sum(int(n) for n in numbers)", "print(total)"},
       {"pattern", "text", "numbers", "total"}},
      {{"def rotate(seq, steps):", "    steps %= len(seq)", "    head = seq[-steps:]", "    tail = seq[:-steps]",
        "    return head + tail"},
       {"seq", "steps", "head", "tail"}},
      {{"queue = [1]", "visited = {1}", "graph = {1: [2, 3], 2: [4], 3: [4], 4: []}", "while queue:",
        "    node = queue.pop(0)", "    for nxt in graph[node]:", "        if nxt not in visited:",
        "            visited.add(nxt)", "            queue.append(nxt)", "print(sorted(visited))"},
       {"queue", "visited", "graph", "node", "nxt"}},
      {{"def dot(u, v):", "    return sum(a * b for a, b in zip(u, v))", "def length(u):",
        "    return dot(u, u) ** 0.5"},
       {"u", "v"}},
  };
  return corpus;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) out += line + "\n";
  return out;
}

inline std::size_t indent_of(const std::string& line) { return line.find_first_not_of(' '); }

/// One identifier rename plus one swap of two adjacent simple statements at
/// the same indentation.
inline std::string mutate(const CorpusProgram& program, std::mt19937_64& rng, int variant) {
  auto lines = program.lines;
  if (!program.names.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, program.names.size() - 1);
    const std::string& name = program.names[pick(rng)];
    const std::regex word("\\b" + name + "\\b");
    const std::string renamed = name + "_" + std::to_string(variant);
    for (auto& line : lines) line = std::regex_replace(line, word, renamed);
  }
  std::vector<std::size_t> swappable;
  for (std::size_t k = 0; k + 1 < lines.size(); ++k) {
    const auto& a = lines[k];
    const auto& b = lines[k + 1];
    const bool simple = a.back() != ':' && b.back() != ':';
    const bool same_block = indent_of(a) == indent_of(b);
    const bool ends_block = k + 2 >= lines.size() || indent_of(lines[k + 2]) <= indent_of(b);
    const bool is_return = b.find("return") != std::string::npos || a.find("return") != std::string::npos;
    if (simple && same_block && ends_block && !is_return) swappable.push_back(k);
  }
  if (!swappable.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, swappable.size() - 1);
    const std::size_t k = swappable[pick(rng)];
    std::swap(lines[k], lines[k + 1]);
  }
  return join_lines(lines);
}

inline Program python(std::string source) { return {std::move(source), Language::kPython, std::nullopt}; }

inline SampleSet passed_set(std::string id, std::size_t n, std::mt19937_64& rng) {
  const auto& corpus = python_corpus();
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  const auto& seed = corpus[pick(rng)];
  SampleSet set{std::move(id), "synthetic requirement", {}};
  set.programs.push_back(python(join_lines(seed.lines)));
  for (std::size_t k = 1; k < n; ++k) set.programs.push_back(python(mutate(seed, rng, static_cast<int>(k))));
  return set;
}

inline SampleSet failed_set(std::string id, std::size_t n, std::mt19937_64& rng) {
  auto indices = std::vector<std::size_t>(python_corpus().size());
  for (std::size_t k = 0; k < indices.size(); ++k) indices[k] = k;
  std::shuffle(indices.begin(), indices.end(), rng);
  SampleSet set{std::move(id), "synthetic requirement", {}};
  for (std::size_t k = 0; k < n; ++k) {
    set.programs.push_back(python(join_lines(python_corpus()[indices[k % indices.size()]].lines)));
  }
  return set;
}

struct LabeledSet {
  SampleSet samples;
  Outcome label;
};

/// `per_class` passed sets followed by `per_class` failed sets.
inline std::vector<LabeledSet> separable_dataset(std::size_t per_class, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledSet> out;
  for (std::size_t k = 0; k < per_class; ++k) {
    out.push_back({passed_set("pass-" + std::to_string(k), n, rng), Outcome::kPassed});
  }
  for (std::size_t k = 0; k < per_class; ++k) {
    out.push_back({failed_set("fail-" + std::to_string(k), n, rng), Outcome::kFailed});
  }
  return out;
}

/// Per-modality means where only `signal` (0 text .. 3 embedding) separates
/// the classes, by a small margin, and the other three are uniform noise.
inline std::vector<LabeledModalities> one_modality_dataset(int signal, std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(0.0, 0.01);
  std::vector<LabeledModalities> out;
  for (std::size_t k = 0; k < 2 * per_class; ++k) {
    const bool passed = k % 2 == 0;
    double values[4] = {noise(rng), noise(rng), noise(rng), noise(rng)};
    values[signal] = (passed ? 0.52 : 0.48) + jitter(rng) - 0.005;
    out.push_back({"s" + std::to_string(k), {values[0], values[1], values[2], values[3]},
                   passed ? Outcome::kPassed : Outcome::kFailed});
  }
  return out;
}

inline double weight_of(const SimilarityWeights& w, int modality) {
  const double values[4] = {w.alpha, w.beta, w.gamma, w.delta};
  return values[modality];
}

/// Benchmark plus archive on disk: `per_class` passed and failed
/// requirements, alternately, with per-program verdicts and flat token
/// probabilities.
struct Fixture {
  std::filesystem::path benchmark;
  std::filesystem::path samples;
};

inline Fixture write_fixture(const std::filesystem::path& dir, std::size_t per_class, std::size_t n,
                             std::uint64_t seed, const std::string& model = "m1") {
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(seed);
  std::vector<BenchmarkSample> benchmark;
  std::vector<SampleArchiveEntry> archive;
  for (std::size_t k = 0; k < 2 * per_class; ++k) {
    const bool passed = k % 2 == 0;
    const std::string id = "syn-" + std::to_string(k);
    const auto set = passed ? passed_set(id, n, rng) : failed_set(id, n, rng);
    BenchmarkSample sample{id, Language::kPython, "Synthetic requirement number " + std::to_string(k), {}, {}};
    sample.labels[model] = passed ? Outcome::kPassed : Outcome::kFailed;
    sample.split = k % 4 < 2 ? Split::kTrain : Split::kTest;
    benchmark.push_back(sample);
    SampleArchiveEntry entry{id, model, Language::kPython, sample.requirement, "zero-shot-v1", {}};
    for (const auto& program : set.programs) {
      entry.programs.push_back({program.source, 1.0, std::vector<double>{0.9, 0.9, 0.9}, passed, false});
    }
    archive.push_back(std::move(entry));
  }
  Fixture fixture{dir / "benchmark.jsonl", dir / "samples.jsonl"};
  save_benchmark(fixture.benchmark, benchmark);
  save_samples(fixture.samples, archive);
  return fixture;
}

/// Deterministic stand-in for a model: the program returned for request
/// `request_seed` of requirement `index`. Even indices get mutations of one
/// seed program, odd indices unrelated programs.
inline std::string mock_completion(std::size_t index, std::int64_t request_seed) {
  const auto& corpus = python_corpus();
  std::mt19937_64 rng(index * 1000003ULL + static_cast<std::uint64_t>(request_seed));
  std::string code;
  if (index % 2 == 0) {
    const auto& seed_program = corpus[index % corpus.size()];
    code = request_seed % 7 == 0 ? join_lines(seed_program.lines)
                                 : mutate(seed_program, rng, static_cast<int>(request_seed % 97));
  } else {
    code = join_lines(corpus[rng() % corpus.size()].lines);
  }
  return "```python\n" + code + "```";
}

inline const std::vector<std::string>& java_corpus() {
  static const std::vector<std::string> corpus = {
      "class Sum {\n  static int sum(int[] xs) {\n    int total = 0;\n    for (int x : xs) {\n      total += x;\n"
      "    }\n    return total;\n  }\n}\n",
      "public class Greeter {\n  private final String name;\n  Greeter(String name) { this.name = name; }\n"
      "  String greet() { return \"Hello, \" + name; }\n}\n",
      "import java.util.*;\nclass Dedup {\n  static List<Integer> dedup(List<Integer> in) {\n"
      "    Set<Integer> seen = new LinkedHashSet<>(in);\n    return new ArrayList<>(seen);\n  }\n}\n",
  };
  return corpus;
}

}  // namespace honest::synthetic
