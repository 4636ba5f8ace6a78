#pragma once

// Shared fixtures, graph builders and brute-force oracles for the test
// binaries.

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "specminer/fspec.hpp"
#include "specminer/ifd.hpp"
#include "specminer/model.hpp"
#include "specminer/slicer.hpp"

namespace specminer::testing {

std::filesystem::path source_dir();
std::filesystem::path jaas_dir();
std::filesystem::path golden_dir();

struct Jaas {
  FrameworkModel framework;
  IfdModel ifd;
  // Keyed by program name: listing1, listing2, listing2-swapped.
  std::map<std::string, PrimaryApiUsageGraph> primary;
  std::map<std::string, Graam> graams;
};

/// Loaded once per process.
const Jaas& jaas();

/// Framework model and analysis of in-memory MiniLang sources.
FrameworkModel framework_from_source(const std::string& source, const std::string& name = "fw");
ProgramAnalysis analyze_source(const std::string& source, const FrameworkModel& framework,
                               const std::string& name = "app",
                               const std::vector<std::string>& entrypoints = {});

/// Sorted golden lines: "node <key>", "seq a -> b", "data a -> b",
/// "edge a -> b" and, for FSpecs, "edge a -> b [f]".
std::vector<std::string> render(const PrimaryApiUsageGraph& g);
std::vector<std::string> render(const Graam& g);
std::vector<std::string> render(const FSpec& f);
std::vector<std::string> read_golden(const std::string& name);

/// Method-invocation label on type T.
ApiLabel op(const std::string& member, const std::string& target = "T");

/// Node 0 is start, 1..api.size() are API nodes, the rest `ends` end nodes.
Graam make_graam(const std::string& id, const std::vector<ApiLabel>& api, int ends,
                 const std::set<Edge>& edges);
/// start -> a1 -> ... -> an -> end.
Graam chain(const std::string& id, const std::vector<std::string>& members, const std::string& target = "T");

/// Random valid GRAAM with `api` API nodes over `alphabet` labels.
Graam random_graam(std::mt19937_64& rng, int api, int alphabet, const std::string& id = "r");
/// Same graph with node ids permuted (start stays 0).
Graam permuted(const Graam& g, std::mt19937_64& rng);

/// Exhaustive isomorphism test over all bijections: keys, edges and (when
/// given) edge frequencies must correspond.
bool brute_isomorphic(const Graam& a, const Graam& b,
                      const std::map<Edge, std::int64_t>* fa = nullptr,
                      const std::map<Edge, std::int64_t>* fb = nullptr);

/// Key sequences of every start-to-end path.
std::set<std::vector<std::string>> path_keys(const Graam& g);

/// Violations recomputed from scratch: each pair (r, w) of same-receiver API
/// nodes with an IFD edge w -> r on field f, where r is ordered before w and
/// no same-receiver writer of f precedes r or sits between r and w. `order`
/// is the edge set whose paths define precedence.
std::set<std::tuple<NodeId, NodeId, std::string>> brute_violations(const std::vector<UsageNode>& nodes,
                                                                   const std::set<Edge>& order,
                                                                   const IfdModel& ifd);

}  // namespace specminer::testing
