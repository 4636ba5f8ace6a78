#pragma once

// JSON and CSV encodings of every artifact the pipeline writes. Node and
// edge lists are emitted sorted and object keys in lexicographic order, so
// equal inputs serialize to identical bytes.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specminer/eval.hpp"
#include "specminer/facts.hpp"
#include "specminer/fspec.hpp"
#include "specminer/ifd.hpp"
#include "specminer/model.hpp"
#include "specminer/recommend.hpp"

namespace specminer {

using Json = nlohmann::json;

Json to_json(const ApiLabel& label);
Json to_json(const UsageNode& node);
Json to_json(const PrimaryApiUsageGraph& g);
Json to_json(const Graam& g);
Json to_json(const FSpec& f);
Json to_json(const IfdModel& ifd);
Json to_json(const Violation& v);
Json to_json(const Recommendation& r);
Json to_json(const MisuseReport& r);
Json to_json(const FrameworkModel& fw);
Json to_json(const ProgramFacts& facts);

ApiLabel label_from_json(const Json& j);
UsageNode node_from_json(const Json& j);
PrimaryApiUsageGraph primary_from_json(const Json& j);
Graam graam_from_json(const Json& j);
FSpec fspec_from_json(const Json& j);
IfdModel ifd_from_json(const Json& j);
FrameworkModel framework_from_json(const Json& j);
ProgramFacts facts_from_json(const Json& j);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

/// Throws InputError when the file is missing or not JSON.
Json read_json(const std::filesystem::path& file);
void write_text(const std::filesystem::path& file, const std::string& text);

/// Columns: k, cum_graam_nodes, fspec_nodes, fspec_edges.
std::string to_csv(const LearningCurve& curve);

/// File-name-safe rendering of an artifact id.
std::string file_stem(const std::string& id);

}  // namespace specminer
