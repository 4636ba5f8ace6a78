#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specminer/ifd.hpp"
#include "specminer/match.hpp"
#include "specminer/model.hpp"

namespace specminer {

enum class Action { Add, Remove, Replace, Reorder };

std::string to_string(Action action);

struct Recommendation {
  Action action = Action::Add;
  // Node key of the recommended API ("<end>" when the usage may stop here).
  std::string api;
  // Reorder: the API to move after `api`. Replace: the label being replaced.
  std::string secondary;
  std::optional<NodeId> anchor;  // query node the action applies at
  std::int64_t score = 0;
  int rank = 0;

  auto operator<=>(const Recommendation&) const = default;
};

struct Continuation {
  NodeId node = 0;  // FSpec node
  std::string api;
  std::int64_t score = 0;  // smallest incoming edge frequency
};

struct ContextMatch {
  Embedding embedding;  // query -> FSpec
  std::vector<NodeId> unmatched;  // query nodes outside the match
  std::vector<Continuation> frontier;
};

/// Largest start-inclusive embedding of the query's non-end nodes. Throws
/// NoMatch when only the start node matches.
ContextMatch match_context(const FSpec& fspec, const Graam& partial);

std::vector<Recommendation> next_api(const FSpec& fspec, const Graam& partial, std::size_t k);

/// One-hole search for a single missing API. Throws NothingMissing when the
/// whole query embeds.
std::vector<Recommendation> detect_missed(const FSpec& fspec, const Graam& g, std::size_t k);

struct MisuseReport {
  std::vector<Violation> violations;
  bool order_mismatch = false;  // no embedding, but a transposition gives one
  std::vector<Recommendation> fixes;

  bool clean() const { return violations.empty() && !order_mismatch; }
};

MisuseReport detect_misuse(const FSpec& fspec, const IfdModel& ifd, const Graam& g, std::size_t k);
/// Also checks violations against the program's own execution order, which
/// the GRAAM no longer records.
MisuseReport detect_misuse(const FSpec& fspec, const IfdModel& ifd, const Graam& g,
                           const PrimaryApiUsageGraph& primary, std::size_t k);

}  // namespace specminer
