#include "specminer/loader.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <tomlplusplus/toml.hpp>

#include "specminer/error.hpp"

namespace specminer {

namespace fs = std::filesystem;

std::vector<fs::path> source_files(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    if (!fs::exists(p)) throw InputError("path does not exist: " + p.string());
    if (fs::is_regular_file(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& entry : fs::recursive_directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".mini") found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<minilang::CompilationUnit> parse_sources(const std::vector<fs::path>& paths) {
  std::vector<minilang::CompilationUnit> units;
  for (const auto& file : source_files(paths)) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot read " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    units.push_back(minilang::parse(text.str(), file.filename().string()));
  }
  return units;
}

FrameworkModel load_framework(const fs::path& dir) {
  auto units = parse_sources({dir});
  auto name = fs::absolute(dir).lexically_normal().filename().string();
  if (name.empty()) name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  return build_framework_model(name, units);
}

ProgramFacts load_program(const std::string& name, const std::vector<fs::path>& sources,
                          const std::vector<fs::path>& libs, const FrameworkModel& framework,
                          const std::vector<std::string>& entrypoints) {
  auto units = parse_sources(sources);
  auto lib_units = parse_sources(libs);
  units.insert(units.end(), std::make_move_iterator(lib_units.begin()),
               std::make_move_iterator(lib_units.end()));
  return lower(units, framework, name, entrypoints);
}

namespace {

std::vector<std::string> string_array(const toml::node_view<const toml::node>& node,
                                      const std::string& key) {
  std::vector<std::string> out;
  if (!node) return out;
  const auto* arr = node.as_array();
  if (arr == nullptr) throw InputError("manifest key '" + key + "' must be an array of strings");
  for (const auto& item : *arr) {
    auto s = item.value<std::string>();
    if (!s) throw InputError("manifest key '" + key + "' must be an array of strings");
    out.push_back(*s);
  }
  return out;
}

}  // namespace

Manifest load_manifest(const fs::path& file) {
  if (!fs::exists(file)) throw InputError("manifest not found: " + file.string());
  toml::table tbl;
  try {
    tbl = toml::parse_file(file.string());
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << file.string() << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw InputError(os.str());
  }
  Manifest m;
  m.base = fs::absolute(file).parent_path();
  auto resolve = [&](const std::string& p) { return (m.base / p).lexically_normal(); };
  const toml::table& root = tbl;
  auto fw = root["framework"].value<std::string>();
  if (!fw) throw InputError(file.string() + ": missing 'framework'");
  m.framework = resolve(*fw);
  if (!fs::is_directory(m.framework)) {
    throw InputError(file.string() + ": framework directory not found: " + m.framework.string());
  }
  for (const auto& lib : string_array(root["libs"], "libs")) m.libs.push_back(resolve(lib));
  m.output = resolve(root["output"].value_or(std::string("out")));
  m.seed = static_cast<std::uint64_t>(root["seed"].value_or(std::int64_t{1}));
  m.split = root["split"].value_or(0.8);
  m.ifd_transitive_depth = static_cast<int>(root["ifd_transitive_depth"].value_or(std::int64_t{1}));
  m.saturation_threshold = root["saturation_threshold"].value_or(0.9);
  const auto* programs = root["program"].as_array();
  if (programs == nullptr || programs->empty()) {
    throw InputError(file.string() + ": at least one [[program]] table is required");
  }
  for (const auto& entry : *programs) {
    const auto* t = entry.as_table();
    if (t == nullptr) throw InputError(file.string() + ": [[program]] entries must be tables");
    ManifestProgram p;
    auto path = (*t)["path"].value<std::string>();
    if (!path) throw InputError(file.string() + ": [[program]] entry without 'path'");
    p.path = resolve(*path);
    p.name = (*t)["name"].value_or(p.path.filename().string());
    p.entrypoints = string_array((*t)["entrypoints"], "entrypoints");
    m.programs.push_back(std::move(p));
  }
  return m;
}

}  // namespace specminer
