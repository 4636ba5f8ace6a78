#pragma once

// Reading MiniLang source trees and pipeline manifests from disk.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specminer/facts.hpp"
#include "specminer/minilang.hpp"
#include "specminer/model.hpp"

namespace specminer {

/// `*.mini` files under each path (recursive, sorted). A path may also name a
/// single file. Throws InputError for a missing path.
std::vector<std::filesystem::path> source_files(const std::vector<std::filesystem::path>& paths);

std::vector<minilang::CompilationUnit> parse_sources(const std::vector<std::filesystem::path>& paths);

/// Framework model named after the directory.
FrameworkModel load_framework(const std::filesystem::path& dir);

ProgramFacts load_program(const std::string& name, const std::vector<std::filesystem::path>& sources,
                          const std::vector<std::filesystem::path>& libs,
                          const FrameworkModel& framework,
                          const std::vector<std::string>& entrypoints = {});

struct ManifestProgram {
  std::string name;
  std::filesystem::path path;
  std::vector<std::string> entrypoints;
};

struct Manifest {
  std::filesystem::path base;  // directory of the manifest file
  std::filesystem::path framework;
  std::vector<std::filesystem::path> libs;
  std::vector<ManifestProgram> programs;
  std::filesystem::path output;
  std::uint64_t seed = 1;
  double split = 0.8;
  int ifd_transitive_depth = 1;
  double saturation_threshold = 0.9;
};

/// Relative paths resolve against the manifest's directory. Throws
/// InputError on unreadable files, bad TOML, or missing required keys.
Manifest load_manifest(const std::filesystem::path& file);

}  // namespace specminer
