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

// The `honest` command line: sample, estimate, gate, eval and tune.
//
// Settings resolve as flags > environment (HONEST_<KEY>) > config file
// (key = value lines) > built-in defaults.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "honest/baselines.hpp"
#include "honest/confidence.hpp"
#include "honest/dataset_io.hpp"
#include "honest/embeddings.hpp"
#include "honest/error.hpp"
#include "honest/evaluation.hpp"
#include "honest/gate.hpp"
#include "honest/llm_client.hpp"
#include "honest/parallel.hpp"
#include "honest/prompts.hpp"

namespace honest::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline const std::vector<std::string>& evaluation_methods() {
  static const std::vector<std::string> methods = {"honest",        "avg-prob", "product-prob", "self-ask-code",
                                                   "self-ask-req",  "knn-bm25", "knn-embed",    "code-classifier",
                                                   "requirement-classifier"};
  return methods;
}

/// Every setting that may come from a flag, the environment or the config file.
struct RunConfig {
  std::string endpoint;
  std::string api_key;
  std::string model;
  std::string embedding = "local";
  std::string embedding_model;
  std::string embedding_endpoint;
  int embedding_dim = 256;
  std::uint64_t seed = 42;
  int workers = default_workers();
  int parallelism = 4;
  int n = kDefaultSampleCount;
  double temperature = 1.0;
  std::string preset = "none";
  int max_tokens = 1024;
  int max_retries = 2;
  double threshold = 0.5;
  int top = 0;
  std::string message = kDefaultRefusal;
  std::string weights;
  std::string method = "honest";
  int k = 0;
  std::string pr_mode = "average-precision";
  double split_ratio = 0.5;
  int points = 100;
  std::string audit_log;
};

namespace detail {

inline std::string trim_copy(std::string_view s) { return std::string(honest::detail::trim(s)); }

inline std::string env_name(const std::string& key) {
  std::string name = "HONEST_";
  for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

template <typename T>
std::string show(const T& value) {
  std::ostringstream out;
  if constexpr (std::is_floating_point_v<T>) out << std::setprecision(17);
  out << value;
  return out.str();
}

struct Setting {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const std::string&)> assign;
  std::function<std::string()> current;
  bool secret = false;
  std::string source = "default";
};

class Settings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App& app, const std::string& key, T& field, const std::string& help, bool secret = false) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    auto* option = app.add_option(flag, field, help + " [env " + env_name(key) + "]");
    if (!secret) option->capture_default_str();
    Setting s;
    s.key = key;
    s.option = option;
    s.secret = secret;
    s.assign = [&field, key](const std::string& text) {
      T parsed{};
      if (!CLI::detail::lexical_cast(text, parsed)) {
        throw Error(ErrorCode::kInvalidArgument, "invalid value '" + text + "' for " + key);
      }
      field = parsed;
    };
    s.current = [&field] { return show(field); };
    settings_.push_back(std::move(s));
    return option;
  }

  /// Fills every setting not given as a flag from the environment, then
  /// from the config file.
  void resolve(const std::optional<fs::path>& config_file) {
    std::map<std::string, std::string> file_values;
    if (config_file) file_values = read_config(*config_file);
    for (auto& s : settings_) {
      if (s.option->count() > 0) {
        s.source = "flag";
        continue;
      }
      const std::string env = http::env_or_empty(env_name(s.key).c_str());
      if (!env.empty()) {
        s.assign(env);
        s.source = "env";
      } else if (auto it = file_values.find(s.key); it != file_values.end()) {
        s.assign(it->second);
        s.source = "file";
      }
    }
  }

  void print(std::ostream& out) const {
    for (const auto& s : settings_) {
      std::string value = s.current();
      if (s.secret) value = value.empty() ? "" : "<redacted>";
      out << s.key << " = " << value << "  # " << s.source << '\n';
    }
  }

  std::map<std::string, std::string> read_config(const fs::path& path) const {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open config file " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      const std::string text = trim_copy(line);
      if (text.empty() || text[0] == '#' || text[0] == ';') continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument,
                    path.string() + ":" + std::to_string(number) + ": expected 'key = value'");
      }
      std::string key = trim_copy(std::string_view(text).substr(0, eq));
      std::replace(key.begin(), key.end(), '-', '_');
      std::string value = trim_copy(std::string_view(text).substr(eq + 1));
      if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
      }
      const bool known = std::any_of(settings_.begin(), settings_.end(), [&](const auto& s) { return s.key == key; });
      if (!known) {
        throw Error(ErrorCode::kInvalidArgument,
                    path.string() + ":" + std::to_string(number) + ": unknown setting '" + key + "'");
      }
      values[key] = value;
    }
    return values;
  }

 private:
  std::vector<Setting> settings_;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;

  void warn(const std::string& message) const { err << "honest: warning: " << message << '\n'; }
  WarningSink warnings() const {
    return [this](const std::string& m) { warn(m); };
  }
};

inline std::string fixed(double value, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

inline SimilarityWeights resolve_weights(const RunConfig& config, const Streams& io) {
  if (config.weights.empty()) {
    io.warn("no weights file given; using uniform weights (0.25 each)");
    return SimilarityWeights::uniform();
  }
  if (!fs::exists(config.weights)) {
    io.warn("weights file " + config.weights + " not found; using uniform weights (0.25 each)");
    return SimilarityWeights::uniform();
  }
  return load_weights(config.weights);
}

inline EmbeddingProviderConfig provider_config(const RunConfig& config) {
  if (config.embedding == "local") return EmbeddingProviderConfig::local(config.embedding_dim);
  if (config.embedding != "remote") {
    throw Error(ErrorCode::kInvalidArgument, "embedding must be 'local' or 'remote', got '" + config.embedding + "'");
  }
  EmbeddingProviderConfig provider;
  provider.kind = ProviderKind::kRemote;
  provider.endpoint = config.embedding_endpoint.empty() ? config.endpoint : config.embedding_endpoint;
  provider.model_name = config.embedding_model;
  provider.api_key = config.api_key;
  provider.max_in_flight = config.parallelism;
  provider.retry.max_retries = config.max_retries;
  return provider;
}

inline SamplingConfig sampling_config(const RunConfig& config) {
  SamplingConfig sampling;
  sampling.endpoint = config.endpoint;
  sampling.model = config.model;
  sampling.n = config.n;
  sampling.temperature = config.temperature;
  sampling.max_tokens = config.max_tokens;
  sampling.parallelism = config.parallelism;
  sampling.api_key = config.api_key;
  sampling.retry.max_retries = config.max_retries;
  sampling.seed = static_cast<std::int64_t>(config.seed);
  if (!config.audit_log.empty()) sampling.audit_log = config.audit_log;
  if (config.preset == "paper-five") {
    sampling.use_five_temperature_preset();
  } else if (config.preset != "none") {
    throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + config.preset + "' (expected none or paper-five)");
  }
  if (sampling.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "an endpoint is required (--endpoint or HONEST_ENDPOINT)");
  }
  if (sampling.model.empty()) throw Error(ErrorCode::kInvalidArgument, "a model is required (--model)");
  return sampling;
}

inline LlmClient::Logger logger_for(const Streams& io) {
  return [&io](const std::string& line) { io.err << "honest: " << line << '\n'; };
}

/// Model whose labels are evaluated: --model, or the only label key present.
inline std::string label_model(const RunConfig& config, const std::vector<BenchmarkSample>& benchmark) {
  if (!config.model.empty()) return config.model;
  std::set<std::string> models;
  for (const auto& s : benchmark) {
    for (const auto& [m, _] : s.labels) models.insert(m);
  }
  if (models.size() == 1) return *models.begin();
  throw Error(ErrorCode::kInvalidArgument, "the benchmark labels several models; choose one with --model");
}

/// Samples of one split. Benchmarks without split fields are split here by
/// seed and ratio.
inline std::vector<BenchmarkSample> select_split(const std::vector<BenchmarkSample>& benchmark,
                                                 const std::string& which, const RunConfig& config) {
  if (which == "all") return benchmark;
  if (which != "train" && which != "test") {
    throw Error(ErrorCode::kInvalidArgument, "split must be train, test or all");
  }
  const Split wanted = which == "train" ? Split::kTrain : Split::kTest;
  const bool has_splits = std::any_of(benchmark.begin(), benchmark.end(), [](const auto& s) { return s.split; });
  if (has_splits) {
    std::vector<BenchmarkSample> out;
    for (const auto& s : benchmark) {
      if (s.split == wanted) out.push_back(s);
    }
    return out;
  }
  auto [train, test] = split_benchmark(benchmark, config.split_ratio, config.seed);
  auto& chosen = wanted == Split::kTrain ? train : test;
  std::map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < benchmark.size(); ++k) position[benchmark[k].id] = k;
  std::sort(chosen.begin(), chosen.end(),
            [&](const auto& a, const auto& b) { return position.at(a.id) < position.at(b.id); });
  return chosen;
}

inline Outcome label_of(const BenchmarkSample& sample, const std::string& model) {
  auto it = sample.labels.find(model);
  if (it == sample.labels.end()) {
    throw Error(ErrorCode::kJoinError, "sample '" + sample.id + "' has no label for model '" + model + "'");
  }
  return it->second;
}

inline const SampleArchiveEntry& entry_for(const std::map<std::string, const SampleArchiveEntry*>& joined,
                                           const std::string& id) {
  auto it = joined.find(id);
  if (it == joined.end()) throw Error(ErrorCode::kJoinError, "no archived programs for '" + id + "'");
  return *it->second;
}

inline void require_path(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(flag) + " is required");
}

// ---------------------------------------------------------------------------
// Commands

struct SampleArgs {
  std::string benchmark;
  std::string split = "all";
  std::string requirement;
  std::string id = "req-1";
  std::string language = "python";
  std::string out;
};

inline int cmd_sample(const RunConfig& config, const SampleArgs& args, const Streams& io) {
  require_path(args.out, "--out");
  const auto sampling = sampling_config(config);
  std::vector<BenchmarkSample> requests;
  if (!args.benchmark.empty()) {
    requests = select_split(load_benchmark(args.benchmark, io.warnings()), args.split, config);
  } else if (!args.requirement.empty()) {
    requests.push_back({args.id, parse_language(args.language), args.requirement, {}, std::nullopt});
  } else {
    throw Error(ErrorCode::kInvalidArgument, "give --requirement or --benchmark");
  }
  LlmClient client(sampling, logger_for(io));
  std::vector<SampleArchiveEntry> entries;
  for (const auto& request : requests) {
    const auto records = client.sample_records(request.requirement, request.language);
    SampleArchiveEntry entry;
    entry.id = request.id;
    entry.model = config.model;
    entry.language = request.language;
    entry.requirement = request.requirement;
    entry.prompt_version = std::string(prompts::kPromptTemplateVersion);
    for (const auto& record : records) {
      ArchivedProgram program;
      program.source = record.program.source;
      program.temperature = record.program.origin->temperature;
      if (!record.token_probs.empty()) program.token_probs = record.token_probs;
      program.unfenced = record.program.origin->unfenced;
      entry.programs.push_back(std::move(program));
    }
    io.err << "honest: sampled " << entry.programs.size() << " program(s) for " << entry.id << '\n';
    entries.push_back(std::move(entry));
  }
  save_samples(args.out, entries);
  io.out << "wrote " << entries.size() << " archive entr" << (entries.size() == 1 ? "y" : "ies") << " to "
         << args.out << '\n';
  return kExitOk;
}

struct EstimateArgs {
  std::string samples;
  std::string benchmark;
  std::string language = "python";
  std::string out;
};

inline int cmd_estimate(const RunConfig& config, const EstimateArgs& args, const Streams& io) {
  require_path(args.samples, "--samples");
  require_path(args.out, "--out");
  const auto weights = resolve_weights(config, io);
  const auto entries = load_samples(args.samples, io.warnings());
  std::map<std::string, Language> languages;
  if (!args.benchmark.empty()) {
    for (const auto& s : load_benchmark(args.benchmark, io.warnings())) languages[s.id] = s.language;
  }
  const Language fallback = parse_language(args.language);
  auto provider = make_provider(provider_config(config));
  EstimateOptions options;
  options.workers = config.workers;
  std::vector<json> rows;
  for (const auto& entry : entries) {
    auto it = languages.find(entry.id);
    const auto set = entry.to_sample_set(it != languages.end() ? it->second : fallback);
    const auto report = estimate_confidence(set, weights, *provider, options);
    io.out << entry.id << '\t' << fixed(report.confidence) << '\n';
    rows.push_back(to_json(report, entry.model));
  }
  write_json_lines(args.out, rows);
  return kExitOk;
}

struct GateArgs {
  std::string reports;
  std::string samples;
  std::string id;
};

inline int cmd_gate(const RunConfig& config, const GateArgs& args, const Streams& io) {
  require_path(args.reports, "--reports");
  require_path(args.samples, "--samples");
  std::map<std::string, const SampleArchiveEntry*> by_id;
  const auto entries = load_samples(args.samples, io.warnings());
  for (const auto& e : entries) by_id[e.id] = &e;
  GateOptions options;
  options.refusal_message = config.message;
  if (config.top > 0) options.top = static_cast<std::size_t>(config.top);
  std::size_t decided = 0;
  for (const auto& report : load_reports(args.reports)) {
    if (!args.id.empty() && report.requirement_id != args.id) continue;
    auto it = by_id.find(report.requirement_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kIdMismatch, "report '" + report.requirement_id + "' has no archived programs");
    }
    const auto decision = decide(report, it->second->to_sample_set(), config.threshold, options);
    io.out << to_json(decision).dump() << '\n';
    ++decided;
  }
  if (!args.id.empty() && decided == 0) throw Error(ErrorCode::kIdMismatch, "no report for '" + args.id + "'");
  return kExitOk;
}

struct EvalArgs {
  std::string benchmark;
  std::string samples;
  std::string split = "test";
  std::string out;
  std::string curves;
};

struct MethodScores {
  std::vector<ScoredSample> scored;
  json extra = json::object();
};

inline std::optional<int> chosen_k(const RunConfig& config) {
  if (config.k < 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1 (0 tunes it)");
  return config.k > 0 ? std::optional<int>(config.k) : std::nullopt;
}

/// k-NN scores for `queries` against a labeled training corpus. `similarity`
/// returns the corpus-document scores for query text.
inline MethodScores knn_scores(const RunConfig& config, const std::vector<BenchmarkSample>& train,
                               const std::vector<BenchmarkSample>& queries, const std::string& model,
                               const std::function<std::vector<double>(const std::string&)>& similarity,
                               const Streams& io) {
  std::vector<Outcome> labels;
  for (const auto& s : train) labels.push_back(label_of(s, model));
  if (labels.empty()) throw Error(ErrorCode::kEmptyCorpus, "the training split is empty");
  MethodScores result;
  int k = 0;
  if (auto fixed_k = chosen_k(config)) {
    k = *fixed_k;
    result.extra["k_source"] = "flag";
  } else {
    std::vector<std::vector<double>> pairwise;
    for (const auto& s : train) pairwise.push_back(similarity(s.requirement));
    const auto tuned = tune_knn_k(pairwise, labels);
    k = tuned.k;
    result.extra["k_source"] = "tuned";
    result.extra["k_train_auroc"] = tuned.train_auroc;
  }
  result.extra["k"] = k;
  io.err << "honest: k-NN uses k = " << k << '\n';
  std::map<std::string, std::size_t> train_index;
  for (std::size_t d = 0; d < train.size(); ++d) train_index[train[d].id] = d;
  for (const auto& q : queries) {
    const auto scores = similarity(q.requirement);
    std::optional<std::size_t> exclude;
    if (auto it = train_index.find(q.id); it != train_index.end()) exclude = it->second;
    result.scored.push_back({q.id, knn_vote(scores, labels, k, exclude), label_of(q, model), {}, {}});
  }
  return result;
}

inline MethodScores method_scores(const RunConfig& config, const std::vector<BenchmarkSample>& benchmark,
                                  const std::vector<BenchmarkSample>& queries,
                                  const std::map<std::string, const SampleArchiveEntry*>& joined,
                                  const std::string& model, const Streams& io) {
  const std::string& method = config.method;
  if (method == "code-classifier" || method == "requirement-classifier") {
    throw Error(ErrorCode::kUnimplemented, "unimplemented baseline: " + method);
  }
  MethodScores result;
  const auto sets = [&](const BenchmarkSample& s) { return entry_for(joined, s.id).to_sample_set(s.language); };
  if (method == "knn-bm25" || method == "knn-embed") {
    const auto train = select_split(benchmark, "train", config);
    if (method == "knn-bm25") {
      Bm25Index index;
      for (const auto& s : train) index.add(s.id, requirement_terms(s.requirement), label_of(s, model));
      return knn_scores(config, train, queries, model,
                        [&](const std::string& text) { return bm25_scores(index, requirement_terms(text)); }, io);
    }
    auto provider = make_provider(provider_config(config));
    EmbeddingCorpus corpus;
    for (const auto& s : train) corpus.add(s.id, provider->embed_text(s.requirement), label_of(s, model));
    return knn_scores(config, train, queries, model,
                      [&](const std::string& text) { return embedding_scores(corpus, provider->embed_text(text)); },
                      io);
  }
  if (method == "honest") {
    const auto weights = resolve_weights(config, io);
    result.extra["weights"] = to_json(weights);
    auto provider = make_provider(provider_config(config));
    EstimateOptions options;
    options.workers = config.workers;
    for (const auto& q : queries) {
      const auto report = estimate_confidence(sets(q), weights, *provider, options);
      result.scored.push_back({q.id, report.confidence, label_of(q, model), {}, {}});
    }
  } else if (method == "avg-prob" || method == "product-prob") {
    for (const auto& q : queries) {
      const auto set = sets(q);
      const auto probs = token_probs_of(std::span<const Program>(set.programs));
      const double score = method == "avg-prob" ? avg_prob(probs) : product_prob(probs);
      result.scored.push_back({q.id, score, label_of(q, model), {}, {}});
    }
  } else if (method == "self-ask-code" || method == "self-ask-req") {
    LlmClient client(sampling_config(config), logger_for(io));
    for (const auto& q : queries) {
      double score = 0.0;
      if (method == "self-ask-code") {
        const auto set = sets(q);
        score = self_ask_code(client, q.requirement, set.programs);
      } else {
        score = self_ask_requirement(client, q.requirement, q.language);
      }
      result.scored.push_back({q.id, score, label_of(q, model), {}, {}});
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
  }
  return result;
}

inline void write_curves(const fs::path& dir, std::span<const ScoredSample> scored,
                         const std::optional<std::vector<SweepPoint>>& sweep) {
  fs::create_directories(dir);
  std::ostringstream roc;
  roc << "threshold,fpr,tpr\n" << std::setprecision(17);
  for (const auto& p : roc_curve(scored)) roc << p.threshold << ',' << p.fpr << ',' << p.tpr << '\n';
  write_atomically(dir / "roc.csv", roc.str());
  std::ostringstream pr;
  pr << "threshold,recall,precision\n" << std::setprecision(17);
  for (const auto& p : pr_curve(scored)) pr << p.threshold << ',' << p.recall << ',' << p.precision << '\n';
  write_atomically(dir / "pr.csv", pr.str());
  if (sweep) {
    std::ostringstream csv;
    csv << "threshold,shown_correct,shown_erroneous\n" << std::setprecision(17);
    for (const auto& p : *sweep) csv << p.threshold << ',' << p.shown_correct << ',' << p.shown_erroneous << '\n';
    write_atomically(dir / "sweep.csv", csv.str());
  }
}

inline int cmd_eval(const RunConfig& config, const EvalArgs& args, const Streams& io) {
  if (config.method == "code-classifier" || config.method == "requirement-classifier") {
    throw Error(ErrorCode::kUnimplemented, "unimplemented baseline: " + config.method);
  }
  require_path(args.benchmark, "--benchmark");
  if (config.pr_mode != "average-precision" && config.pr_mode != "trapezoid") {
    throw Error(ErrorCode::kInvalidArgument, "pr-mode must be average-precision or trapezoid");
  }
  const auto benchmark = load_benchmark(args.benchmark, io.warnings());
  const std::string model = label_model(config, benchmark);
  const auto queries = select_split(benchmark, args.split, config);
  if (queries.empty()) throw Error(ErrorCode::kEmptyInput, "the " + args.split + " split is empty");
  std::vector<SampleArchiveEntry> entries;
  std::map<std::string, const SampleArchiveEntry*> joined;
  if (!args.samples.empty()) {
    entries = load_samples(args.samples, io.warnings());
    joined = join_archive(benchmark, entries, model);
  }
  const bool needs_archive = config.method == "honest" || config.method == "avg-prob" ||
                             config.method == "product-prob" || config.method == "self-ask-code";
  if (needs_archive && args.samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "method " + config.method + " needs --samples");
  }

  auto result = method_scores(config, benchmark, queries, joined, model, io);
  bool have_counts = !joined.empty();
  for (auto& s : result.scored) {
    auto it = joined.find(s.id);
    const auto correct = it == joined.end() ? std::nullopt : it->second->programs_correct();
    if (!correct) {
      have_counts = false;
      continue;
    }
    s.programs_correct = *correct;
    s.programs_total = static_cast<int>(it->second->programs.size());
  }

  const double auc_roc = auroc(result.scored);
  const double auc_pr = config.pr_mode == "trapezoid" ? aucpr_trapezoid(result.scored) : aucpr(result.scored);
  std::size_t passed = 0;
  for (const auto& s : result.scored) passed += s.label == Outcome::kPassed ? 1 : 0;
  std::optional<std::vector<SweepPoint>> sweep;
  if (have_counts) sweep = threshold_sweep(result.scored, config.points);

  json report = {{"method", config.method},
                 {"model", model},
                 {"split", args.split},
                 {"seed", config.seed},
                 {"samples", result.scored.size()},
                 {"passed", passed},
                 {"failed", result.scored.size() - passed},
                 {"auroc", auc_roc},
                 {"aucpr", auc_pr},
                 {"aucpr_mode", config.pr_mode}};
  report.update(result.extra);
  json scores = json::array();
  for (const auto& s : result.scored) {
    scores.push_back({{"id", s.id}, {"score", s.score}, {"label", std::string(to_string(s.label))}});
  }
  report["scores"] = std::move(scores);
  if (sweep) {
    json points = json::array();
    for (const auto& p : *sweep) {
      points.push_back({{"threshold", p.threshold},
                        {"shown_correct", p.shown_correct},
                        {"shown_erroneous", p.shown_erroneous}});
    }
    report["sweep"] = std::move(points);
  } else {
    report["sweep"] = nullptr;
  }
  if (!args.out.empty()) write_atomically(args.out, report.dump(2) + "\n");
  if (!args.curves.empty()) write_curves(args.curves, result.scored, sweep);

  io.out << std::left << std::setw(10) << "method" << config.method << '\n'
         << std::setw(10) << "model" << model << '\n'
         << std::setw(10) << "split" << args.split << '\n'
         << std::setw(10) << "samples" << result.scored.size() << " (" << passed << " passed / "
         << result.scored.size() - passed << " failed)\n"
         << std::setw(10) << "AUROC" << fixed(auc_roc) << '\n'
         << std::setw(10) << "AUCPR" << fixed(auc_pr) << " (" << config.pr_mode << ")\n";
  if (result.extra.contains("k")) io.out << std::setw(10) << "k" << result.extra["k"].get<int>() << '\n';
  if (sweep) {
    io.out << std::setw(10) << "shown" << "all: " << sweep->front().shown_correct << " correct / "
           << sweep->front().shown_erroneous << " erroneous\n";
  } else {
    io.out << std::setw(10) << "sweep" << "skipped (archive lacks per-program verdicts)\n";
  }
  return kExitOk;
}

struct TuneArgs {
  std::string benchmark;
  std::string samples;
  std::string split = "train";
  std::string out;
};

inline int cmd_tune(const RunConfig& config, const TuneArgs& args, const Streams& io) {
  require_path(args.benchmark, "--benchmark");
  require_path(args.samples, "--samples");
  require_path(args.out, "--out");
  const auto benchmark = load_benchmark(args.benchmark, io.warnings());
  const std::string model = label_model(config, benchmark);
  const auto train = select_split(benchmark, args.split, config);
  const auto entries = load_samples(args.samples, io.warnings());
  const auto joined = join_archive(benchmark, entries, model);
  std::vector<std::pair<SampleSet, Outcome>> data;
  for (const auto& s : train) data.emplace_back(entry_for(joined, s.id).to_sample_set(s.language), label_of(s, model));
  auto provider = make_provider(provider_config(config));
  EstimateOptions options;
  options.workers = config.workers;
  const auto result = tune_weights(data, *provider, options);
  json row = to_json(result.weights);
  row["train_auroc"] = result.train_auroc;
  row["grid_points_evaluated"] = result.grid_points_evaluated;
  row["model"] = model;
  row["seed"] = config.seed;
  row["train_samples"] = data.size();
  write_atomically(args.out, row.dump(2) + "\n");
  io.out << "weights  alpha " << fixed(result.weights.alpha, 2) << "  beta " << fixed(result.weights.beta, 2)
         << "  gamma " << fixed(result.weights.gamma, 2) << "  delta " << fixed(result.weights.delta, 2) << '\n'
         << "train AUROC " << fixed(result.train_auroc) << " over " << result.grid_points_evaluated
         << " grid points\n";
  return kExitOk;
}

}  // namespace detail

/// Runs the command line. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Streams io{out, err};
  RunConfig config;
  detail::Settings settings;
  CLI::App app{"Confidence estimation and gating for LLM-generated code", "honest"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_file;
  bool print_config = false;
  app.add_option("--config", config_file, "key = value settings file [env HONEST_CONFIG]");
  app.add_flag("--print-config", print_config, "Print the resolved settings and exit");

  settings.add(app, "endpoint", config.endpoint, "OpenAI-compatible base URL, e.g. http://host/v1");
  settings.add(app, "api_key", config.api_key, "Bearer token", true);
  settings.add(app, "model", config.model, "Model name (also selects benchmark labels)");
  settings.add(app, "embedding", config.embedding, "Embedding provider: local or remote");
  settings.add(app, "embedding_model", config.embedding_model, "Remote embedding model");
  settings.add(app, "embedding_endpoint", config.embedding_endpoint, "Remote embedding base URL (default: endpoint)");
  settings.add(app, "embedding_dim", config.embedding_dim, "Dimension of the local hashed embedding");
  settings.add(app, "seed", config.seed, "Seed for splits and sampling requests");
  settings.add(app, "workers", config.workers, "Worker threads for similarity computation");
  settings.add(app, "parallelism", config.parallelism, "Maximum requests in flight");
  settings.add(app, "n", config.n, "Programs sampled per requirement");
  settings.add(app, "temperature", config.temperature, "Sampling temperature");
  settings.add(app, "preset", config.preset, "Sampling preset: none or paper-five (temperatures 0, 0.2, 0.6, 0.8, 1)");
  settings.add(app, "max_tokens", config.max_tokens, "Completion token limit");
  settings.add(app, "max_retries", config.max_retries, "Retries for transient request failures");
  settings.add(app, "threshold", config.threshold, "Gate threshold: show iff confidence > threshold");
  settings.add(app, "top", config.top, "Show at most this many programs (0 shows all)");
  settings.add(app, "message", config.message, "Refusal message");
  settings.add(app, "weights", config.weights, "Weights JSON written by `honest tune`");
  settings.add(app, "method", config.method, "Estimator to evaluate")
      ->check(CLI::IsMember(evaluation_methods()));
  settings.add(app, "k", config.k, "k for k-NN baselines (0 tunes k on the training split)");
  settings.add(app, "pr_mode", config.pr_mode, "AUCPR form: average-precision or trapezoid");
  settings.add(app, "split_ratio", config.split_ratio, "Train fraction when the benchmark has no split field");
  settings.add(app, "points", config.points, "Thresholds in the correct/erroneous sweep");
  settings.add(app, "audit_log", config.audit_log, "Append raw request/response pairs (JSON Lines)");

  detail::SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Sample candidate programs from an endpoint into an archive");
  sample->add_option("--benchmark", sample_args.benchmark, "Sample every requirement of this benchmark");
  sample->add_option("--split", sample_args.split, "Benchmark split to sample: train, test or all")
      ->capture_default_str();
  sample->add_option("--requirement", sample_args.requirement, "Single requirement text");
  sample->add_option("--id", sample_args.id, "Id for --requirement")->capture_default_str();
  sample->add_option("--language", sample_args.language, "Language for --requirement")->capture_default_str();
  sample->add_option("--out", sample_args.out, "Archive to write (.jsonl or .jsonl.gz)");

  detail::EstimateArgs estimate_args;
  auto* estimate = app.add_subcommand("estimate", "Compute confidence reports for archived programs");
  estimate->add_option("--samples", estimate_args.samples, "Sample archive");
  estimate->add_option("--benchmark", estimate_args.benchmark, "Benchmark supplying languages by id");
  estimate->add_option("--language", estimate_args.language, "Language when neither archive nor benchmark says")
      ->capture_default_str();
  estimate->add_option("--out", estimate_args.out, "Report file to write (JSON Lines)");

  detail::GateArgs gate_args;
  auto* gate = app.add_subcommand("gate", "Show or refuse each requirement's programs");
  gate->add_option("--reports", gate_args.reports, "Reports written by `honest estimate`");
  gate->add_option("--samples", gate_args.samples, "Sample archive the reports came from");
  gate->add_option("--id", gate_args.id, "Only decide this requirement");

  detail::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "AUROC, AUCPR and threshold sweep of an estimator");
  eval->add_option("--benchmark", eval_args.benchmark, "Labeled benchmark");
  eval->add_option("--samples", eval_args.samples, "Sample archive");
  eval->add_option("--split", eval_args.split, "Split to evaluate: train, test or all")->capture_default_str();
  eval->add_option("--out", eval_args.out, "Metrics JSON to write");
  eval->add_option("--curves", eval_args.curves, "Directory for roc.csv, pr.csv and sweep.csv");

  detail::TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune", "Grid-search similarity weights on the training split");
  tune->add_option("--benchmark", tune_args.benchmark, "Labeled benchmark");
  tune->add_option("--samples", tune_args.samples, "Sample archive");
  tune->add_option("--split", tune_args.split, "Split to tune on")->capture_default_str();
  tune->add_option("--out", tune_args.out, "Weights JSON to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (config_file.empty()) config_file = http::env_or_empty("HONEST_CONFIG");
    settings.resolve(config_file.empty() ? std::nullopt : std::optional<fs::path>(config_file));
    if (std::find(evaluation_methods().begin(), evaluation_methods().end(), config.method) ==
        evaluation_methods().end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown method '" + config.method + "'");
    }
    if (print_config) {
      settings.print(out);
      return kExitOk;
    }
    if (sample->parsed()) return detail::cmd_sample(config, sample_args, io);
    if (estimate->parsed()) return detail::cmd_estimate(config, estimate_args, io);
    if (gate->parsed()) return detail::cmd_gate(config, gate_args, io);
    if (eval->parsed()) return detail::cmd_eval(config, eval_args, io);
    if (tune->parsed()) return detail::cmd_tune(config, tune_args, io);
    err << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "honest: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "honest: error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace honest::cli
