#pragma once

// Writer-to-reader field dependencies between framework methods, and the
// reader-before-writer check that separates sound usages from unsound ones.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specminer/model.hpp"

namespace specminer {

struct IfdEdge {
  std::string writer;  // "Type.method"
  std::string reader;  // "Type.method"
  std::string field;   // "Type.field"

  auto operator<=>(const IfdEdge&) const = default;
};

struct IfdModel {
  std::set<IfdEdge> edges;
  // Effective field accesses per framework method ("Type.field" keys).
  std::map<std::string, std::set<std::string>> writes;
  std::map<std::string, std::set<std::string>> reads;
  // Framework type -> itself followed by its framework supertypes, used to
  // find the method body an API call dispatches to.
  std::map<std::string, std::vector<std::string>> lineage;

  /// Framework method id a method-invocation label binds to, or nullopt.
  std::optional<std::string> method_for(const ApiLabel& label) const;
  /// Fields `writer` writes that `reader` reads (empty if no dependency).
  std::vector<std::string> fields_between(const std::string& writer,
                                          const std::string& reader) const;
  bool writes_field(const std::string& method, const std::string& field) const;
  /// Strict order writer < reader induced by the edges.
  bool precedes(const std::string& writer, const std::string& reader) const;
};

/// Direct accesses of each framework method, plus those of same-class callees
/// up to `transitive_depth` calls deep.
IfdModel mine_ifd(const FrameworkModel& framework, int transitive_depth = 1);

struct Violation {
  std::string program;
  std::string entrypoint;
  NodeId reader = 0;  // executes first
  NodeId writer = 0;
  std::string reader_statement;
  std::string writer_statement;
  std::string reader_method;
  std::string writer_method;
  std::string field;
  std::string rule = "reader-before-writer";

  auto operator<=>(const Violation&) const = default;
};

/// Both nodes must operate on the same receiver object: their receiver sets
/// intersect, or both are empty and they share a target type.
bool same_receiver(const UsageNode& a, const UsageNode& b);

/// Order is reachability over sequence and data edges.
std::vector<Violation> check_violations(const PrimaryApiUsageGraph& g, const IfdModel& ifd);
/// Order is reachability over the GRAAM's edges.
std::vector<Violation> check_violations(const Graam& g, const IfdModel& ifd);

struct SoundnessSplit {
  std::vector<PrimaryApiUsageGraph> sound;
  std::vector<std::pair<PrimaryApiUsageGraph, std::vector<Violation>>> unsound;
};

SoundnessSplit filter_sound(const std::vector<PrimaryApiUsageGraph>& corpus, const IfdModel& ifd);

}  // namespace specminer
