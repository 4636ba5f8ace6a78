#pragma once

// Evaluation harness: corpus splits, mutated test cases, top-k accuracy, and
// synthetic corpora with known structure.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specminer/ifd.hpp"
#include "specminer/model.hpp"

namespace specminer {

enum class Task { Next, Missed, Misuse };
enum class Mutation { DropLast, DropRandom, Swap };

std::string to_string(Task task);
std::string to_string(Mutation mutation);
Task task_from_string(const std::string& s);

/// Uniform integer in [0, n) from a 64-bit Mersenne Twister by rejection
/// sampling, so sequences are identical on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_with(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

struct CorpusSplit {
  std::vector<Graam> train;
  std::vector<Graam> test;
};

/// Splits by program so entry points of one program never straddle the
/// split. round(ratio * programs) programs go to training. Throws
/// CorpusTooSmall below two programs.
CorpusSplit split_corpus(const std::vector<Graam>& graams, double ratio, std::uint64_t seed);

struct TestCase {
  std::string id;
  std::string source;
  Mutation mutation = Mutation::DropLast;
  std::vector<NodeId> nodes;       // source nodes touched by the mutation
  std::vector<std::string> label;  // expected API, or the swapped pair
  std::uint64_t seed = 0;
  Graam query;
};

/// Removes an API node. Nodes left without predecessors hang off start, sinks
/// get a fresh end, and ends that lose their only predecessor disappear.
Graam remove_node(const Graam& g, NodeId node);

/// Next: DropLast per GRAAM. Missed: DropRandom for every API node. Misuse:
/// Swap for every pair of differently labeled API nodes whose swap changes
/// the graph. GRAAMs that are too small are skipped and listed in `skipped`.
std::vector<TestCase> generate_cases(const std::vector<Graam>& test, Task task, std::uint64_t seed,
                                     std::vector<std::string>* skipped = nullptr);

struct AccuracyRow {
  std::size_t k = 0;
  double accuracy = 0.0;
  std::size_t correct = 0;
};

struct EvalReport {
  Task task = Task::Next;
  std::vector<AccuracyRow> rows;
  std::size_t n_cases = 0;
  std::uint64_t seed = 0;
};

EvalReport run_eval(const FSpec& fspec, const IfdModel& ifd, const std::vector<TestCase>& cases,
                    Task task, std::size_t kmax = 10, std::uint64_t seed = 0);

/// Columns: task, k, accuracy, n_cases, seed.
std::string to_csv(const EvalReport& report);

// Synthetic corpora.

/// Random DAG of `nodes` API nodes; node i draws one or two predecessors
/// among earlier nodes (or none, making it a root).
Graam synthetic_ground_truth(std::size_t nodes, std::uint64_t seed);

/// `count` GRAAMs, each the predecessor closure of a random node subset of
/// `truth`; a `duplicate_ratio` share repeats earlier GRAAMs.
std::vector<Graam> synthetic_subset_corpus(const Graam& truth, std::size_t count,
                                           double duplicate_ratio, std::uint64_t seed);

/// `families` disjoint chains of `length` API nodes, `copies` GRAAMs each.
std::vector<Graam> synthetic_chain_corpus(std::size_t families, std::size_t length,
                                          std::size_t copies, const std::string& prefix = "chain");

/// One chain of `length - 1` shared nodes whose last node is one of two
/// alternatives, `per_branch` GRAAMs for each.
std::vector<Graam> synthetic_fork_corpus(std::size_t length, std::size_t per_branch,
                                         const std::string& prefix = "fork");

}  // namespace specminer
