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

// JSON Lines readers/writers for benchmarks, sample archives, confidence
// reports and tuned weights. Paths ending in ".gz" are gzip-compressed.
// Writes go to a temporary sibling first and are renamed into place.

#pragma once

#include <zlib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "honest/confidence.hpp"
#include "honest/error.hpp"
#include "honest/program.hpp"
#include "honest/similarity.hpp"

namespace honest {

using json = nlohmann::json;

enum class Split { kTrain, kTest };

inline constexpr std::string_view to_string(Split split) { return split == Split::kTrain ? "train" : "test"; }

struct BenchmarkSample {
  std::string id;
  Language language = Language::kPython;
  std::string requirement;
  std::map<std::string, Outcome> labels;  // model name -> verdict
  std::optional<Split> split;

  bool operator==(const BenchmarkSample&) const = default;
};

struct ArchivedProgram {
  std::string source;
  double temperature = 1.0;
  std::optional<std::vector<double>> token_probs;
  /// Test verdict for this single program, when known.
  std::optional<bool> passed;
  bool unfenced = false;

  bool operator==(const ArchivedProgram&) const = default;
};

struct SampleArchiveEntry {
  std::string id;
  std::string model;
  std::optional<Language> language;
  std::optional<std::string> requirement;
  std::optional<std::string> prompt_version;
  std::vector<ArchivedProgram> programs;

  bool operator==(const SampleArchiveEntry&) const = default;

  /// Materializes the entry as a SampleSet in `fallback` language unless the
  /// entry names its own.
  SampleSet to_sample_set(Language fallback = Language::kPython) const {
    SampleSet set{id, requirement.value_or(""), {}};
    const Language lang = language.value_or(fallback);
    for (std::size_t k = 0; k < programs.size(); ++k) {
      const auto& p = programs[k];
      ProgramOrigin origin;
      origin.sample_index = static_cast<int>(k);
      origin.temperature = p.temperature;
      origin.token_probs = p.token_probs;
      origin.unfenced = p.unfenced;
      set.programs.push_back({p.source, lang, origin});
    }
    return set;
  }

  std::optional<int> programs_correct() const {
    int correct = 0;
    for (const auto& p : programs) {
      if (!p.passed) return std::nullopt;
      if (*p.passed) ++correct;
    }
    return correct;
  }
};

using WarningSink = std::function<void(const std::string&)>;

inline WarningSink stderr_warnings() {
  return [](const std::string& message) { std::cerr << "[honest] warning: " << message << '\n'; };
}

// ---------------------------------------------------------------------------
// Line-oriented file access

inline bool is_gzip_path(const std::filesystem::path& path) { return path.extension() == ".gz"; }

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::unique_ptr<gzFile_s, decltype(&gzclose)> guard(file, &gzclose);
  std::vector<std::string> lines;
  std::string current;
  char buffer[1 << 16];
  for (;;) {
    const int got = gzread(file, buffer, sizeof buffer);
    if (got < 0) throw Error(ErrorCode::kIoError, "read failure in " + path.string());
    if (got == 0) break;
    for (int i = 0; i < got; ++i) {
      if (buffer[i] == '\n') {
        lines.push_back(std::exchange(current, {}));
      } else {
        current += buffer[i];
      }
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  return lines;
}

/// Writes `content` to `path` via a temporary file and rename.
inline void write_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  if (is_gzip_path(path)) {
    gzFile file = gzopen(tmp.c_str(), "wb");
    if (file == nullptr) throw Error(ErrorCode::kIoError, "cannot create " + tmp.string());
    const bool ok = content.empty() ||
                    gzwrite(file, content.data(), static_cast<unsigned>(content.size())) ==
                        static_cast<int>(content.size());
    if (gzclose(file) != Z_OK || !ok) throw Error(ErrorCode::kIoError, "write failure in " + tmp.string());
  } else {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error(ErrorCode::kIoError, "write failure in " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline void write_json_lines(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::string content;
  for (const auto& row : rows) {
    content += row.dump();
    content += '\n';
  }
  write_atomically(path, content);
}

namespace detail {

[[noreturn]] inline void malformed(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kMalformedLine, path.string() + ":" + std::to_string(line) + ": " + why);
}

inline void warn_unknown_fields(const json& row, std::initializer_list<std::string_view> known,
                                const std::filesystem::path& path, std::size_t line, const WarningSink& warn) {
  if (!warn) return;
  for (const auto& [key, _] : row.items()) {
    bool found = false;
    for (auto k : known) found = found || k == key;
    if (!found) warn(path.string() + ":" + std::to_string(line) + ": ignoring unknown field '" + key + "'");
  }
}

inline Outcome parse_outcome(const json& value, const std::filesystem::path& path, std::size_t line) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "passed") return Outcome::kPassed;
    if (s == "failed") return Outcome::kFailed;
  }
  malformed(path, line, "label must be \"passed\" or \"failed\", got " + value.dump());
}

template <typename Fn>
void for_each_row(const std::filesystem::path& path, Fn&& fn) {
  const auto lines = read_lines(path);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    if (lines[k].find_first_not_of(" \t") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(lines[k]);
    } catch (const json::parse_error& e) {
      malformed(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!row.is_object()) malformed(path, line_no, "expected a JSON object");
    try {
      fn(row, line_no);
    } catch (const json::exception& e) {
      malformed(path, line_no, e.what());
    }
  }
}

inline std::string require_string(const json& row, const char* key, const std::filesystem::path& path,
                                  std::size_t line) {
  if (!row.contains(key) || !row[key].is_string()) malformed(path, line, std::string("missing string field '") + key + "'");
  return row[key].get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Benchmark

inline json to_json(const BenchmarkSample& sample) {
  json labels = json::object();
  for (const auto& [model, outcome] : sample.labels) labels[model] = to_string(outcome);
  json row = {{"id", sample.id},
              {"language", to_string(sample.language)},
              {"requirement", sample.requirement},
              {"labels", labels}};
  if (sample.split) row["split"] = to_string(*sample.split);
  return row;
}

inline std::vector<BenchmarkSample> load_benchmark(const std::filesystem::path& path,
                                                   const WarningSink& warn = stderr_warnings()) {
  std::vector<BenchmarkSample> samples;
  std::set<std::string> seen;
  detail::for_each_row(path, [&](const json& row, std::size_t line) {
    detail::warn_unknown_fields(row, {"id", "language", "requirement", "labels", "split"}, path, line, warn);
    BenchmarkSample sample;
    sample.id = detail::require_string(row, "id", path, line);
    sample.language = parse_language(detail::require_string(row, "language", path, line));
    sample.requirement = detail::require_string(row, "requirement", path, line);
    if (!row.contains("labels") || !row["labels"].is_object()) detail::malformed(path, line, "missing object 'labels'");
    for (const auto& [model, value] : row["labels"].items()) {
      sample.labels[model] = detail::parse_outcome(value, path, line);
    }
    if (row.contains("split") && !row["split"].is_null()) {
      const auto split = row["split"].is_string() ? row["split"].get<std::string>() : std::string();
      if (split == "train") {
        sample.split = Split::kTrain;
      } else if (split == "test") {
        sample.split = Split::kTest;
      } else {
        detail::malformed(path, line, "split must be \"train\" or \"test\"");
      }
    }
    if (!seen.insert(sample.id).second) {
      throw Error(ErrorCode::kDuplicateId, path.string() + ":" + std::to_string(line) + ": id '" + sample.id + "'");
    }
    samples.push_back(std::move(sample));
  });
  return samples;
}

inline void save_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkSample>& samples) {
  std::vector<json> rows;
  for (const auto& s : samples) rows.push_back(to_json(s));
  write_json_lines(path, rows);
}

/// splitmix64; fixed so that splits are reproducible across platforms and
/// standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r < limit) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Seeded Fisher-Yates shuffle, then the first floor(ratio * n) samples form
/// the training part.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_benchmark(std::vector<T> samples, double ratio, std::uint64_t seed) {
  if (samples.size() < 2) throw Error(ErrorCode::kTooFewSamples, "splitting needs at least 2 samples");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::kInvalidArgument, "split ratio must lie in (0, 1)");
  SplitMix64 rng(seed);
  for (std::size_t i = samples.size() - 1; i > 0; --i) {
    std::swap(samples[i], samples[rng.below(i + 1)]);
  }
  const auto cut = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(samples.size())));
  std::vector<T> train(std::make_move_iterator(samples.begin()),
                       std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(cut)));
  std::vector<T> test(std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(cut)),
                      std::make_move_iterator(samples.end()));
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Sample archives

inline json to_json(const SampleArchiveEntry& entry) {
  json programs = json::array();
  for (const auto& p : entry.programs) {
    json row = {{"source", p.source}, {"temperature", p.temperature}};
    if (p.token_probs) row["token_probs"] = *p.token_probs;
    if (p.passed) row["passed"] = *p.passed;
    if (p.unfenced) row["unfenced"] = true;
    programs.push_back(std::move(row));
  }
  json row = {{"id", entry.id}, {"model", entry.model}};
  if (entry.language) row["language"] = to_string(*entry.language);
  if (entry.requirement) row["requirement"] = *entry.requirement;
  if (entry.prompt_version) row["prompt_version"] = *entry.prompt_version;
  row["programs"] = std::move(programs);
  return row;
}

/// Join-key validation (does the id exist in the benchmark?) is left to the
/// caller; see join_archive.
inline std::vector<SampleArchiveEntry> load_samples(const std::filesystem::path& path,
                                                    const WarningSink& warn = stderr_warnings()) {
  std::vector<SampleArchiveEntry> entries;
  detail::for_each_row(path, [&](const json& row, std::size_t line) {
    detail::warn_unknown_fields(row, {"id", "model", "language", "requirement", "prompt_version", "programs"},
                                path, line, warn);
    SampleArchiveEntry entry;
    entry.id = detail::require_string(row, "id", path, line);
    entry.model = row.contains("model") && row["model"].is_string() ? row["model"].get<std::string>() : "";
    if (row.contains("language") && row["language"].is_string()) {
      entry.language = parse_language(row["language"].get<std::string>());
    }
    if (row.contains("requirement") && row["requirement"].is_string()) {
      entry.requirement = row["requirement"].get<std::string>();
    }
    if (row.contains("prompt_version") && row["prompt_version"].is_string()) {
      entry.prompt_version = row["prompt_version"].get<std::string>();
    }
    if (!row.contains("programs") || !row["programs"].is_array() || row["programs"].empty()) {
      detail::malformed(path, line, "'programs' must be a non-empty array");
    }
    for (const auto& p : row["programs"]) {
      ArchivedProgram program;
      if (p.is_string()) {
        program.source = p.get<std::string>();
      } else {
        program.source = detail::require_string(p, "source", path, line);
        program.temperature = p.value("temperature", 1.0);
        if (p.contains("token_probs") && !p["token_probs"].is_null()) {
          program.token_probs = p["token_probs"].get<std::vector<double>>();
          if (program.token_probs->empty()) detail::malformed(path, line, "'token_probs' must be non-empty");
          for (double v : *program.token_probs) {
            if (!(v > 0.0 && v <= 1.0)) detail::malformed(path, line, "token probability outside (0, 1]");
          }
        }
        if (p.contains("passed") && !p["passed"].is_null()) program.passed = p["passed"].get<bool>();
        program.unfenced = p.value("unfenced", false);
      }
      if (!(program.temperature >= 0.0 && program.temperature <= 2.0)) {
        detail::malformed(path, line, "temperature outside [0, 2]");
      }
      entry.programs.push_back(std::move(program));
    }
    entries.push_back(std::move(entry));
  });
  return entries;
}

inline void save_samples(const std::filesystem::path& path, const std::vector<SampleArchiveEntry>& entries) {
  std::vector<json> rows;
  for (const auto& e : entries) rows.push_back(to_json(e));
  write_json_lines(path, rows);
}

/// Archive entries for `model` keyed by id; throws JoinError for ids the
/// benchmark does not know.
inline std::map<std::string, const SampleArchiveEntry*> join_archive(
    const std::vector<BenchmarkSample>& benchmark, const std::vector<SampleArchiveEntry>& entries,
    const std::string& model) {
  std::set<std::string> known;
  for (const auto& s : benchmark) known.insert(s.id);
  std::map<std::string, const SampleArchiveEntry*> joined;
  for (const auto& e : entries) {
    if (!model.empty() && !e.model.empty() && e.model != model) continue;
    if (!known.count(e.id)) throw Error(ErrorCode::kJoinError, "archive id '" + e.id + "' is not in the benchmark");
    joined[e.id] = &e;
  }
  return joined;
}

// ---------------------------------------------------------------------------
// Confidence reports and weights

inline json to_json(const SimilarityWeights& w) {
  return {{"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}, {"delta", w.delta}};
}

inline json to_json(const ConfidenceReport& report, const std::string& model = "") {
  json pairs = json::array();
  for (std::size_t i = 0; i < report.n; ++i) {
    for (std::size_t j = 0; j < report.n; ++j) {
      if (i == j) continue;
      const auto& cell = report.at(i, j);
      pairs.push_back({{"i", i},
                       {"j", j},
                       {"text", cell.scores.text},
                       {"syntax", cell.scores.syntax},
                       {"dataflow", cell.scores.dataflow},
                       {"embedding", cell.scores.embedding},
                       {"hybrid", cell.hybrid}});
    }
  }
  json row = {{"requirement_id", report.requirement_id},
              {"n", report.n},
              {"confidence", report.confidence},
              {"weights", to_json(report.weights)},
              {"pairs", std::move(pairs)}};
  if (!model.empty()) row["model"] = model;
  return row;
}

inline SimilarityWeights weights_from_json(const json& row) {
  SimilarityWeights w{row.at("alpha").get<double>(), row.at("beta").get<double>(),
                      row.at("gamma").get<double>(), row.at("delta").get<double>()};
  w.validate();
  return w;
}

inline ConfidenceReport report_from_json(const json& row) {
  ConfidenceReport report;
  report.requirement_id = row.at("requirement_id").get<std::string>();
  report.n = row.at("n").get<std::size_t>();
  report.confidence = row.at("confidence").get<double>();
  report.weights = weights_from_json(row.at("weights"));
  report.pair_sims.resize(report.n * report.n);
  for (std::size_t i = 0; i < report.n; ++i) {
    for (std::size_t j = 0; j < report.n; ++j) report.pair_sims[i * report.n + j] = {i, j, {}, 0.0};
  }
  for (const auto& p : row.at("pairs")) {
    const auto i = p.at("i").get<std::size_t>();
    const auto j = p.at("j").get<std::size_t>();
    if (i >= report.n || j >= report.n) throw Error(ErrorCode::kMalformedLine, "pair index out of range");
    auto& cell = report.pair_sims[i * report.n + j];
    cell.scores = {p.at("text").get<double>(), p.at("syntax").get<double>(), p.at("dataflow").get<double>(),
                   p.at("embedding").get<double>()};
    cell.hybrid = p.at("hybrid").get<double>();
  }
  return report;
}

inline std::vector<ConfidenceReport> load_reports(const std::filesystem::path& path) {
  std::vector<ConfidenceReport> reports;
  detail::for_each_row(path, [&](const json& row, std::size_t) { reports.push_back(report_from_json(row)); });
  return reports;
}

inline void save_weights(const std::filesystem::path& path, const TuningResult& result) {
  json row = to_json(result.weights);
  row["train_auroc"] = result.train_auroc;
  row["grid_points_evaluated"] = result.grid_points_evaluated;
  write_atomically(path, row.dump(2) + "\n");
}

inline SimilarityWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return weights_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedLine, path.string() + ": " + e.what());
  }
}

}  // namespace honest
