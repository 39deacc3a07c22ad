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

// Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "honest/baselines.hpp"
#include "honest/cli.hpp"
#include "honest/confidence.hpp"
#include "honest/evaluation.hpp"
#include "honest/gate.hpp"
#include "support/mock_server.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace honest;

namespace {

struct Outcomes {
  int failed = 0;
  int passed = 0;
  int skipped = 0;
};

Outcomes results;

/// Runs one criterion. The body returns an empty string on success or a
/// failure reason, and may append details through `note`.
void criterion(const std::string& name, const std::function<std::string(std::string& note)>& body) {
  std::string note;
  std::string failure;
  const auto start = std::chrono::steady_clock::now();
  try {
    failure = body(note);
  } catch (const std::exception& e) {
    failure = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream timing;
  timing.precision(2);
  timing << std::fixed << seconds << "s";
  if (failure == "SKIP") {
    ++results.skipped;
    std::cout << "SKIP " << name << " (" << note << ")\n";
  } else if (failure.empty()) {
    ++results.passed;
    std::cout << "PASS " << name << " [" << timing.str() << "]" << (note.empty() ? "" : " " + note) << "\n";
  } else {
    ++results.failed;
    std::cout << "FAIL " << name << " [" << timing.str() << "] " << failure << "\n";
  }
  std::cout.flush();
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string str(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

SimilarityWeights random_simplex(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  double w[4] = {e(rng), e(rng), e(rng), e(rng)};
  const double s = w[0] + w[1] + w[2] + w[3];
  SimilarityWeights out{w[0] / s, w[1] / s, w[2] / s, 0.0};
  out.delta = std::max(0.0, 1.0 - out.alpha - out.beta - out.gamma);
  return out;
}

struct RandomDataset {
  std::vector<ScoredSample> scored;
  std::vector<double> scores;
  std::vector<bool> positive;
};

std::vector<RandomDataset> random_datasets(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RandomDataset> out;
  while (out.size() < count) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 25)(rng);
    const double bias = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    RandomDataset d;
    for (std::size_t k = 0; k < n; ++k) {
      const bool pos = std::bernoulli_distribution(bias)(rng);
      const int level = std::uniform_int_distribution<int>(0, levels - 1)(rng) + (pos ? levels / 3 : 0);
      const double score = static_cast<double>(level) / (levels + levels / 3);
      d.scores.push_back(score);
      d.positive.push_back(pos);
      d.scored.push_back({"s" + std::to_string(k), score, pos ? Outcome::kPassed : Outcome::kFailed, {}, {}});
    }
    const auto p = std::count(d.positive.begin(), d.positive.end(), true);
    if (p == 0 || p == static_cast<long>(n)) continue;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
  const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::uniform_int_distribution<int> pick(0, alphabet - 1);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < len; ++k) out.push_back(std::string(1, static_cast<char>('a' + pick(rng))));
  return out;
}

// --- Criteria --------------------------------------------------------------

std::string similarity_oracle(std::string& note) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int alphabet = 2 + trial % 4;
    const auto i = random_tokens(rng, 40, alphabet);
    const auto j = random_tokens(rng, 40, alphabet);
    const double got = sim_text(TokenSequence{i}, TokenSequence{j});
    worst = std::max(worst, std::abs(got - oracle::text_similarity(i, j)));
  }
  const double seconds = elapsed_since(start);
  note = "max |diff| = " + str(worst);
  if (worst > 1e-9) return "oracle disagreement " + str(worst);
  if (seconds >= 5.0) return "took " + str(seconds) + " s";
  return {};
}

std::string identity_for(Language language, const std::string& source, std::string& note) {
  LocalHashedProvider provider(256);
  const Program program{source, language, std::nullopt};
  SampleSet set{"identity", "identity", std::vector<Program>(5, program)};
  const auto analyses = analyze_all(set, provider);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) continue;
      const auto s = modality_scores(analyses[i], analyses[j]);
      for (double v : {s.text, s.syntax, s.dataflow, s.embedding, sim_hybrid(s, SimilarityWeights::uniform())}) {
        worst = std::max(worst, std::abs(v - 1.0));
      }
    }
  }
  const auto report = estimate_confidence(set, SimilarityWeights::uniform(), provider);
  worst = std::max(worst, std::abs(report.confidence - 1.0));
  note += std::string(to_string(language)) + " max |1 - v| = " + str(worst) + "; ";
  return worst <= 1e-9 ? "" : std::string(to_string(language)) + " deviates by " + str(worst);
}

std::string identity_suite(std::string& note) {
  for (const auto& program : synthetic::python_corpus()) {
    if (auto f = identity_for(Language::kPython, synthetic::join_lines(program.lines), note); !f.empty()) return f;
    note.clear();
  }
  for (const auto& source : synthetic::java_corpus()) {
    if (auto f = identity_for(Language::kJava, source, note); !f.empty()) return f;
    note.clear();
  }
  note = std::to_string(synthetic::python_corpus().size()) + " python and " +
         std::to_string(synthetic::java_corpus().size()) + " java programs, N = 5";
  return {};
}

std::string range_suite(std::string& note) {
  std::mt19937_64 rng(77);
  LocalHashedProvider provider(256);
  // A pool of programs: corpus programs, their mutations, Java sources and
  // token soup that does not parse cleanly.
  std::vector<Program> pool;
  for (const auto& p : synthetic::python_corpus()) {
    pool.push_back(synthetic::python(synthetic::join_lines(p.lines)));
    for (int v = 1; v <= 4; ++v) pool.push_back(synthetic::python(synthetic::mutate(p, rng, v)));
  }
  for (const auto& s : synthetic::java_corpus()) pool.push_back({s, Language::kJava, std::nullopt});
  const std::vector<std::string> soup = {"(", ")", "x", "=", "+", "1", "def", ":", "\n", " ", "return", "[", "]"};
  for (int k = 0; k < 20; ++k) {
    std::string src;
    const int len = std::uniform_int_distribution<int>(1, 30)(rng);
    for (int t = 0; t < len; ++t) src += soup[rng() % soup.size()];
    pool.push_back(synthetic::python(src));
  }
  std::vector<ProgramAnalysis> analyses;
  for (const auto& p : pool) analyses.push_back(analyze(p, provider));

  std::vector<std::size_t> python_indices;
  std::vector<std::size_t> java_indices;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    (pool[k].language == Language::kPython ? python_indices : java_indices).push_back(k);
  }
  std::size_t checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto& indices = trial % 10 == 0 ? java_indices : python_indices;
    const auto i = indices[rng() % indices.size()];
    const auto j = indices[rng() % indices.size()];
    const auto s = modality_scores(analyses[i], analyses[j]);
    const auto w = random_simplex(rng);
    w.validate();
    for (double v : {s.text, s.syntax, s.dataflow, s.embedding, sim_hybrid(s, w)}) {
      if (!in_unit(v)) return "similarity " + str(v) + " [" + str(s.text) + "," + str(s.syntax) + "," + str(s.dataflow) + "," + str(s.embedding) + "]" + " outside [0, 1] at trial " + std::to_string(trial);
      ++checked;
    }
    if (trial % 20 == 0) {
      const std::size_t n = 2 + rng() % 5;
      std::vector<ProgramAnalysis> set;
      for (std::size_t k = 0; k < n; ++k) set.push_back(analyses[indices[rng() % indices.size()]]);
      const double c = estimate_confidence(set, "range", w).confidence;
      if (!in_unit(c)) return "confidence " + str(c) + " outside [0, 1]";
      ++checked;
    }
  }
  note = std::to_string(checked) + " values checked over 10000 pairs";
  return {};
}

std::string algorithm_fidelity(std::string& note) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : {2u, 3u, 5u, 20u}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<ModalityScores> table(n * n);
      for (auto& cell : table) cell = {unit(rng), unit(rng), unit(rng), unit(rng)};
      const auto w = random_simplex(rng);
      const auto stub = [&](std::size_t i, std::size_t j) { return table[i * n + j]; };
      const auto report = build_report("stub", n, w, stub, 1 + trial % 4);
      std::vector<double> hybrids;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j) hybrids.push_back(sim_hybrid(table[i * n + j], w));
        }
      }
      if (hybrids.size() != n * (n - 1)) return "wrong pair count";
      double sum = 0.0;
      for (double h : hybrids) sum += h;
      const double direct = sum / static_cast<double>(hybrids.size());
      if (report.confidence != direct) {
        return "N = " + std::to_string(n) + ": " + str(report.confidence) + " != " + str(direct);
      }
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto permuted = build_report(
          "stub", n, w, [&](std::size_t i, std::size_t j) { return table[perm[i] * n + perm[j]]; }, 1);
      if (std::abs(permuted.confidence - direct) > 1e-9) return "not permutation invariant at N = " + std::to_string(n);
    }
  }
  note = "100 stubbed reports, exact equality";
  return {};
}

std::string auroc_correctness(std::string& note) {
  const auto datasets = random_datasets(100, 11);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& d : datasets) {
    const double a = auroc(d.scored);
    worst = std::max(worst, std::abs(a - oracle::pairwise_auroc(d.scores, d.positive)));
    auto reversed = d.scored;
    for (auto& s : reversed) s.label = s.label == Outcome::kPassed ? Outcome::kFailed : Outcome::kPassed;
    if (std::abs(auroc(reversed) - (1.0 - a)) > 1e-12) return "label reversal broke";
    auto transformed = d.scored;
    for (auto& s : transformed) s.score = std::exp(3.0 * s.score) - 7.0;
    if (auroc(transformed) != a) return "monotone transform changed AUROC";
  }
  const double seconds = elapsed_since(start);
  note = "max |diff| = " + str(worst);
  if (worst > 1e-12) return "oracle disagreement " + str(worst);
  if (seconds >= 2.0) return "took " + str(seconds) + " s";
  return {};
}

std::string aucpr_correctness(std::string& note) {
  const auto datasets = random_datasets(100, 11);
  double worst = 0.0;
  for (const auto& d : datasets) {
    worst = std::max(worst, std::abs(aucpr(d.scored) - oracle::threshold_average_precision(d.scores, d.positive)));
  }
  note = "max |diff| = " + str(worst);
  if (worst > 1e-9) return "oracle disagreement " + str(worst);
  std::vector<ScoredSample> perfect;
  std::vector<ScoredSample> all_positive;
  for (int k = 0; k < 30; ++k) {
    perfect.push_back({"p" + std::to_string(k), k / 30.0, k >= 18 ? Outcome::kPassed : Outcome::kFailed, {}, {}});
    all_positive.push_back({"a" + std::to_string(k), (k % 7) / 7.0, Outcome::kPassed, {}, {}});
  }
  if (aucpr(perfect) != 1.0) return "perfect ranking gives " + str(aucpr(perfect));
  if (aucpr(all_positive) != 1.0) return "all-positive gives " + str(aucpr(all_positive));
  return {};
}

struct SyntheticScores {
  std::vector<ScoredSample> honest;
  std::vector<ScoredSample> avg_prob;
};

SyntheticScores score_synthetic() {
  constexpr std::size_t kN = 20;
  const auto dataset = synthetic::separable_dataset(40, kN, 2026);
  LocalHashedProvider provider(256);
  std::mt19937_64 rng(99);
  SyntheticScores out;
  for (const auto& [samples, label] : dataset) {
    const auto report = estimate_confidence(samples, SimilarityWeights::uniform(), provider);
    const int correct = label == Outcome::kPassed ? static_cast<int>(kN)
                                                   : std::uniform_int_distribution<int>(0, 3)(rng);
    out.honest.push_back({samples.requirement_id, report.confidence, label, correct, static_cast<int>(kN)});
    const std::vector<TokenProbs> flat(kN, TokenProbs(40, 0.9));
    out.avg_prob.push_back({samples.requirement_id, avg_prob(flat), label, {}, {}});
  }
  return out;
}

std::string synthetic_separability(std::string& note, SyntheticScores& scores) {
  const auto start = std::chrono::steady_clock::now();
  scores = score_synthetic();
  const double seconds = elapsed_since(start);
  const double ours = auroc(scores.honest);
  const double baseline = auroc(scores.avg_prob);
  note = "AUROC " + str(ours) + " vs avg-prob " + str(baseline) + " (40 + 40 sets, N = 20)";
  if (ours < 0.95) return "AUROC " + str(ours) + " < 0.95";
  if (!(ours > baseline)) return "does not beat avg-prob " + str(baseline);
  if (seconds >= 60.0) return "took " + str(seconds) + " s";
  return {};
}

std::string sweep_behaviour(std::string& note, const SyntheticScores& scores) {
  if (scores.honest.empty()) return "synthetic dataset unavailable";
  const auto sweep = threshold_sweep(scores.honest, 100);
  if (sweep.size() != 100) return "sweep has " + std::to_string(sweep.size()) + " points";
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    if (sweep[k].threshold < sweep[k - 1].threshold) return "thresholds not ascending";
    if (sweep[k].shown_correct > sweep[k - 1].shown_correct ||
        sweep[k].shown_erroneous > sweep[k - 1].shown_erroneous) {
      return "counts increase at point " + std::to_string(k);
    }
  }
  long long correct = 0;
  long long erroneous = 0;
  for (const auto& s : scores.honest) {
    correct += *s.programs_correct;
    erroneous += *s.programs_total - *s.programs_correct;
  }
  if (sweep.front().shown_correct != correct || sweep.front().shown_erroneous != erroneous) {
    return "lowest threshold does not show everything";
  }
  note = "show-everything point (" + std::to_string(correct) + " correct, " + std::to_string(erroneous) +
         " erroneous) -> (" + std::to_string(sweep.back().shown_correct) + ", " +
         std::to_string(sweep.back().shown_erroneous) + ")";
  return {};
}

std::string weight_tuning(std::string& note) {
  const char* names[4] = {"text", "syntax", "dataflow", "embedding"};
  for (int modality = 0; modality < 4; ++modality) {
    const auto result = tune_weights(synthetic::one_modality_dataset(modality, 50, 300 + modality));
    const double w = synthetic::weight_of(result.weights, modality);
    note += std::string(names[modality]) + "=" + str(w) + " ";
    if (w < 0.9) return std::string(names[modality]) + " weight only " + str(w);
  }
  return {};
}

std::string gate_contract(std::string& note) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng() % 19;
    SampleSet set{"g", "r", {}};
    for (std::size_t k = 0; k < n; ++k) set.programs.push_back(synthetic::python("x = " + std::to_string(k)));
    // Every third trial puts the confidence exactly on the threshold.
    const double threshold = std::round(unit(rng) * 20.0) / 20.0;
    const double confidence = trial % 3 == 0 ? threshold : unit(rng);
    const auto d = decide(confidence, set, threshold);
    if (confidence > threshold) {
      if (d.verdict != Verdict::kShow || d.programs != set.programs || !d.message.empty()) return "show broken";
    } else if (d.verdict != Verdict::kRefuse || !d.programs.empty() ||
               d.message != "Sorry, I cannot solve this requirement.") {
      return "refuse broken at confidence " + str(confidence) + ", threshold " + str(threshold);
    }
    ++checked;
  }
  note = std::to_string(checked) + " decisions";
  return {};
}

// End-to-end through the command line, with a mock model that derives each
// completion from the requirement number in the prompt and the request seed.
std::string run_pipeline(const fs::path& dir, std::string& transcript) {
  testing::MockServer server;
  server.on_chat([](const json& request) {
    const std::string prompt = request["messages"].back()["content"];
    const std::string marker = "Synthetic requirement number ";
    const auto at = prompt.find(marker);
    const std::size_t index = at == std::string::npos ? 0 : std::stoul(prompt.substr(at + marker.size()));
    const std::int64_t seed = request.value("seed", std::int64_t{0});
    return testing::MockReply{200, testing::chat_reply(synthetic::mock_completion(index, seed))};
  });
  const auto fixture = synthetic::write_fixture(dir / "bench", 10, 2, 1);
  const auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"honest", "--endpoint", server.endpoint(), "--model", "m1", "--seed", "42"});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    std::string text = out.str();
    for (auto at = text.find(dir.string()); at != std::string::npos; at = text.find(dir.string())) {
      text.replace(at, dir.string().size(), "<run>");
    }
    transcript += text;
    if (code != 0) throw std::runtime_error(args[7] + " exited " + std::to_string(code) + ": " + err.str());
  };
  const auto p = [&](const char* name) { return (dir / name).string(); };
  run({"sample", "--benchmark", fixture.benchmark.string(), "--out", p("samples.jsonl")});
  run({"estimate", "--samples", p("samples.jsonl"), "--benchmark", fixture.benchmark.string(), "--out",
       p("reports.jsonl")});
  run({"gate", "--reports", p("reports.jsonl"), "--samples", p("samples.jsonl")});
  run({"eval", "--benchmark", fixture.benchmark.string(), "--samples", p("samples.jsonl"), "--split", "all",
       "--out", p("metrics.json"), "--curves", p("curves")});
  return server.requests() == 400 ? "" : "expected 400 requests, saw " + std::to_string(server.requests());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string end_to_end(std::string& note) {
  const fs::path root = fs::temp_directory_path() / "honest_acceptance_e2e";
  fs::remove_all(root);
  std::string transcripts[2];
  double worst_seconds = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto start = std::chrono::steady_clock::now();
    if (auto f = run_pipeline(root / std::to_string(pass), transcripts[pass]); !f.empty()) return f;
    worst_seconds = std::max(worst_seconds, elapsed_since(start));
  }
  if (transcripts[0] != transcripts[1]) return "stdout differs between runs";
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "0")) {
    if (!entry.is_regular_file()) continue;
    const auto other = root / "1" / fs::relative(entry.path(), root / "0");
    if (read_file(entry.path()) != read_file(other)) return "differs: " + fs::relative(entry.path(), root / "0").string();
    ++files;
  }
  const auto metrics = json::parse(read_file(root / "0" / "metrics.json"));
  note = "20 requirements x 20 programs, " + std::to_string(files) + " files byte-identical, AUROC " +
         str(metrics["auroc"].get<double>()) + ", slowest run " + str(worst_seconds) + " s";
  fs::remove_all(root);
  if (worst_seconds >= 30.0) return "took " + str(worst_seconds) + " s";
  return {};
}

std::string live_endpoint(std::string& note) {
  const char* endpoint = std::getenv("HONEST_ENDPOINT");
  if (endpoint == nullptr || *endpoint == '\0') {
    note = "HONEST_ENDPOINT is unset";
    return "SKIP";
  }
  const fs::path dir = fs::temp_directory_path() / "honest_acceptance_live";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto sample = [&](std::vector<std::string> extra, const fs::path& out) {
    std::vector<std::string> args = {"honest", "sample", "--requirement",
                                     "Return the sum of a list of integers.", "--out", out.string()};
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (code != 0) throw std::runtime_error("sample exited " + std::to_string(code) + ": " + e.str());
    return load_samples(out).at(0);
  };
  const auto twenty = sample({"--n", "20"}, dir / "n20.jsonl");
  if (twenty.programs.size() != 20) return "got " + std::to_string(twenty.programs.size()) + " programs";
  for (const auto& p : twenty.programs) {
    if (!p.token_probs || p.token_probs->empty()) return "missing token probabilities";
  }
  const auto preset = sample({"--preset", "paper-five"}, dir / "five.jsonl");
  std::vector<double> temps;
  for (const auto& p : preset.programs) temps.push_back(p.temperature);
  if (temps != std::vector<double>{0.0, 0.2, 0.6, 0.8, 1.0}) return "preset temperatures wrong";
  note = "20 programs with token probabilities; five-temperature preset";
  fs::remove_all(dir);
  return {};
}

}  // namespace

int main() {
  SyntheticScores synthetic_scores;
  criterion("similarity-oracle", similarity_oracle);
  criterion("identity", identity_suite);
  criterion("range", range_suite);
  criterion("confidence-aggregation", algorithm_fidelity);
  criterion("auroc", auroc_correctness);
  criterion("aucpr", aucpr_correctness);
  criterion("synthetic-separability", [&](std::string& note) { return synthetic_separability(note, synthetic_scores); });
  criterion("threshold-sweep", [&](std::string& note) { return sweep_behaviour(note, synthetic_scores); });
  criterion("weight-tuning", weight_tuning);
  criterion("gate", gate_contract);
  criterion("end-to-end", end_to_end);
  criterion("live-endpoint", live_endpoint);
  std::cout << results.passed << " passed, " << results.failed << " failed, " << results.skipped << " skipped\n";
  return results.failed == 0 ? 0 : 1;
}
