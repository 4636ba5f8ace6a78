#include "specminer/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <cli11/CLI11.hpp>

#include "specminer/error.hpp"
#include "specminer/eval.hpp"
#include "specminer/fspec.hpp"
#include "specminer/graam.hpp"
#include "specminer/ifd.hpp"
#include "specminer/loader.hpp"
#include "specminer/recommend.hpp"
#include "specminer/serialize.hpp"
#include "specminer/slicer.hpp"

namespace fs = std::filesystem;

namespace specminer::cli {

namespace {

class Logger {
 public:
  Logger(std::ostream& err, const bool& quiet) : err_(err), quiet_(quiet) {}
  void operator()(const std::string& msg) const {
    if (!quiet_) err_ << "specminer: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  const bool& quiet_;
};

// A directory of MiniLang sources, or a framework.json written by `parse`.
FrameworkModel framework_at(const fs::path& p) {
  if (fs::is_directory(p)) return load_framework(p);
  if (!fs::exists(p)) throw InputError("framework not found: " + p.string());
  return framework_from_json(read_json(p));
}

std::vector<fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Output directories are owned by the command writing them; stale artifacts
// from an earlier run would otherwise leak into the next phase.
void reset_dir(const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& p : json_files(dir)) fs::remove(p);
}

std::string usage_id(const PrimaryApiUsageGraph& g) { return g.program + ":" + g.entrypoint; }

IfdModel ifd_from(const std::optional<fs::path>& ifd_file, const std::optional<fs::path>& framework,
                  int depth) {
  if (ifd_file) return ifd_from_json(read_json(*ifd_file));
  if (framework) return mine_ifd(framework_at(*framework), depth);
  throw InputError("either --ifd or --framework is required");
}

Json rejected_json(const SoundnessSplit& split) {
  Json programs = Json::array();
  for (const auto& [g, violations] : split.unsound) {
    Json vs = Json::array();
    for (const auto& v : violations) vs.push_back(to_json(v));
    programs.push_back({{"program", g.program}, {"entrypoint", g.entrypoint}, {"violations", vs}});
  }
  return {{"format", "specminer.rejected/1"}, {"usages", programs}};
}

std::vector<Graam> build_graams(const std::vector<PrimaryApiUsageGraph>& usages, const IfdModel& ifd) {
  std::vector<Graam> out;
  out.reserve(usages.size());
  for (const auto& g : usages) out.push_back(build_graam(g, ifd));
  return out;
}

void print_table(std::ostream& out, const std::string& heading, const std::vector<Recommendation>& recs) {
  out << heading << '\n';
  if (recs.empty()) {
    out << "  (none)\n";
    return;
  }
  out << "  " << std::left << std::setw(5) << "rank" << std::setw(9) << "action" << std::setw(7) << "score"
      << "api\n";
  for (const auto& r : recs) {
    out << "  " << std::left << std::setw(5) << r.rank << std::setw(9) << to_string(r.action) << std::setw(7)
        << r.score << r.api;
    if (!r.secondary.empty()) out << (r.action == Action::Replace ? "  (instead of " : "  (before ") << r.secondary << ")";
    if (r.anchor) out << "  @" << *r.anchor;
    out << '\n';
  }
}

struct ParseArgs {
  fs::path dir;
  fs::path framework;
  fs::path output;
  std::optional<fs::path> framework_out;
  std::vector<fs::path> libs;
  std::vector<std::string> entries;
  std::string name;
};

struct ExtractArgs {
  fs::path facts;
  fs::path framework;
  fs::path output;
};

struct ValidateArgs {
  fs::path usages;
  fs::path framework;
  fs::path output;
  std::optional<fs::path> rejected;
  std::optional<fs::path> ifd_out;
  int depth = 1;
};

struct GraamArgs {
  fs::path sound;
  std::optional<fs::path> ifd;
  std::optional<fs::path> framework;
  fs::path output;
  int depth = 1;
};

struct TrainArgs {
  fs::path graams;
  fs::path output;
  std::optional<fs::path> curve;
  double threshold = 0.9;
};

struct RecommendArgs {
  fs::path fspec;
  std::vector<fs::path> program;
  fs::path framework;
  std::vector<fs::path> libs;
  std::vector<std::string> entries;
  std::optional<fs::path> ifd;
  std::string task = "next";
  std::size_t k = 10;
  std::string format = "table";
  int depth = 1;
};

struct EvalArgs {
  fs::path corpus;
  std::optional<fs::path> framework;
  std::optional<fs::path> ifd;
  std::string task = "next";
  std::uint64_t seed = 1;
  double split = 0.8;
  std::size_t kmax = 10;
  std::optional<fs::path> output;
  int depth = 1;
};

void cmd_parse(const ParseArgs& a, const Logger& log) {
  const auto fw = load_framework(a.framework);
  const std::string name = a.name.empty() ? fs::absolute(a.dir).lexically_normal().filename().string() : a.name;
  const auto facts = load_program(name.empty() ? "program" : name, {a.dir}, a.libs, fw, a.entries);
  write_text(a.output, dump(to_json(facts)));
  if (a.framework_out) write_text(*a.framework_out, dump(to_json(fw)));
  log("parsed " + std::to_string(facts.methods.size()) + " methods of '" + facts.name + "'");
}

void cmd_extract(const ExtractArgs& a, const Logger& log) {
  const auto fw = framework_at(a.framework);
  const auto analysis = analyze(facts_from_json(read_json(a.facts)), fw);
  std::vector<std::string> skipped;
  const auto usages = extract_usages(analysis, &skipped);
  for (const auto& s : skipped) log("skipped entry point without framework usage: " + s);
  reset_dir(a.output);
  for (const auto& g : usages) write_text(a.output / (file_stem(usage_id(g)) + ".json"), dump(to_json(g)));
  log("extracted " + std::to_string(usages.size()) + " usage graphs");
}

void cmd_validate(const ValidateArgs& a, const Logger& log) {
  const auto ifd = mine_ifd(framework_at(a.framework), a.depth);
  std::vector<PrimaryApiUsageGraph> corpus;
  for (const auto& p : json_files(a.usages)) corpus.push_back(primary_from_json(read_json(p)));
  const auto split = filter_sound(corpus, ifd);
  reset_dir(a.output);
  for (const auto& g : split.sound) write_text(a.output / (file_stem(usage_id(g)) + ".json"), dump(to_json(g)));
  if (a.rejected) write_text(*a.rejected, dump(rejected_json(split)));
  if (a.ifd_out) write_text(*a.ifd_out, dump(to_json(ifd)));
  for (const auto& [g, v] : split.unsound) {
    log("rejected " + usage_id(g) + ": " + std::to_string(v.size()) + " reader-before-writer violation(s)");
  }
  log(std::to_string(split.sound.size()) + " sound, " + std::to_string(split.unsound.size()) + " unsound");
}

void cmd_graam(const GraamArgs& a, const Logger& log) {
  const auto ifd = ifd_from(a.ifd, a.framework, a.depth);
  std::vector<PrimaryApiUsageGraph> sound;
  for (const auto& p : json_files(a.sound)) sound.push_back(primary_from_json(read_json(p)));
  const auto graams = build_graams(sound, ifd);
  reset_dir(a.output);
  for (const auto& g : graams) write_text(a.output / (file_stem(g.id) + ".json"), dump(to_json(g)));
  log("built " + std::to_string(graams.size()) + " GRAAMs");
}

std::vector<Graam> read_graams(const fs::path& dir) {
  std::vector<Graam> out;
  for (const auto& p : json_files(dir)) out.push_back(graam_from_json(read_json(p)));
  return out;
}

void cmd_train(const TrainArgs& a, const Logger& log) {
  const auto graams = read_graams(a.graams);
  if (graams.empty()) throw InputError("no GRAAMs under " + a.graams.string());
  const auto [fspec, curve] = train(graams);
  write_text(a.output, dump(to_json(fspec)));
  if (a.curve) write_text(*a.curve, to_csv(curve));
  log("FSpec: " + std::to_string(fspec.graph.nodes.size()) + " nodes, " +
      std::to_string(fspec.graph.edges.size()) + " edges; saturation at " +
      std::to_string(saturation_point(curve, a.threshold)) + " of " + std::to_string(graams.size()) +
      " GRAAMs");
}

int cmd_recommend(const RecommendArgs& a, std::ostream& out, const Logger& log) {
  const auto task = task_from_string(a.task);
  if (a.format != "json" && a.format != "table") throw InputError("unknown format '" + a.format + "'");
  const auto fspec = fspec_from_json(read_json(a.fspec));
  const auto fw = framework_at(a.framework);
  const auto ifd = a.ifd ? ifd_from_json(read_json(*a.ifd)) : mine_ifd(fw, a.depth);
  const std::string name = a.program.front().stem().string();
  const auto analysis = analyze(load_program(name, a.program, a.libs, fw, a.entries), fw);
  std::vector<std::string> skipped;
  const auto usages = extract_usages(analysis, &skipped);
  for (const auto& s : skipped) log("skipped entry point without framework usage: " + s);
  if (usages.empty()) throw EmptyUsage("'" + name + "' has no framework-related statements");

  struct Result {
    std::string graam;
    std::string status = "ok";
    std::vector<Recommendation> recs;
    std::optional<MisuseReport> misuse;
  };
  std::vector<Result> results;
  for (const auto& primary : usages) {
    const auto g = build_graam(primary, ifd);
    Result r;
    r.graam = g.id;
    try {
      if (task == Task::Next) {
        r.recs = next_api(fspec, g, a.k);
      } else if (task == Task::Missed) {
        r.recs = detect_missed(fspec, g, a.k);
      } else {
        r.misuse = detect_misuse(fspec, ifd, g, primary, a.k);
        if (r.misuse->clean()) r.status = "clean";
        r.recs = r.misuse->fixes;
      }
    } catch (const NoMatch& e) {
      r.status = "no-match";
      log(e.what());
    } catch (const NothingMissing& e) {
      r.status = "nothing-missing";
      log(e.what());
    }
    results.push_back(std::move(r));
  }

  if (a.format == "json") {
    Json list = Json::array();
    for (const auto& r : results) {
      Json recs = Json::array();
      for (const auto& rec : r.recs) recs.push_back(to_json(rec));
      Json j = {{"graam", r.graam}, {"status", r.status}, {"recommendations", recs}};
      if (r.misuse) {
        j["violations"] = to_json(*r.misuse)["violations"];
        j["order_mismatch"] = r.misuse->order_mismatch;
      }
      list.push_back(std::move(j));
    }
    out << dump({{"format", "specminer.recommendations/1"}, {"task", to_string(task)}, {"results", list}});
    return 0;
  }
  for (const auto& r : results) {
    print_table(out, r.graam + " [" + r.status + "]", r.recs);
    if (!r.misuse) continue;
    for (const auto& v : r.misuse->violations) {
      out << "  violation: " << v.reader_method << " reads " << v.field << " before " << v.writer_method
          << " writes it\n";
    }
  }
  return 0;
}

void cmd_eval(const EvalArgs& a, std::ostream& out, const Logger& log) {
  const auto task = task_from_string(a.task);
  const auto ifd = ifd_from(a.ifd, a.framework, a.depth);
  const auto graams = read_graams(a.corpus);
  const auto split = split_corpus(graams, a.split, a.seed);
  std::vector<std::string> skipped;
  const auto cases = generate_cases(split.test, task, a.seed, &skipped);
  for (const auto& s : skipped) log("skipped undersized GRAAM: " + s);
  const auto fspec = train(split.train).first;
  const auto report = run_eval(fspec, ifd, cases, task, a.kmax, a.seed);
  const auto csv = to_csv(report);
  if (a.output) {
    write_text(*a.output, csv);
  } else {
    out << csv;
  }
  log(std::to_string(split.train.size()) + " training / " + std::to_string(split.test.size()) +
      " test GRAAMs, " + std::to_string(report.n_cases) + " cases");
}

void cmd_pipeline(const fs::path& manifest_file, const Logger& log) {
  const auto m = load_manifest(manifest_file);
  const auto fw = load_framework(m.framework);
  const auto ifd = mine_ifd(fw, m.ifd_transitive_depth);
  const fs::path out = m.output;
  fs::create_directories(out);
  write_text(out / "framework.json", dump(to_json(fw)));
  write_text(out / "ifd.json", dump(to_json(ifd)));
  log("IFD: " + std::to_string(ifd.edges.size()) + " writer-reader edges");

  reset_dir(out / "facts");
  reset_dir(out / "usages");
  std::vector<PrimaryApiUsageGraph> corpus;
  for (const auto& p : m.programs) {
    const auto facts = load_program(p.name, {p.path}, m.libs, fw, p.entrypoints);
    write_text(out / "facts" / (file_stem(p.name) + ".json"), dump(to_json(facts)));
    std::vector<std::string> skipped;
    auto usages = extract_usages(analyze(facts, fw), &skipped);
    for (const auto& s : skipped) log("skipped entry point without framework usage: " + s);
    for (auto& g : usages) {
      write_text(out / "usages" / (file_stem(usage_id(g)) + ".json"), dump(to_json(g)));
      corpus.push_back(std::move(g));
    }
  }

  const auto split = filter_sound(corpus, ifd);
  reset_dir(out / "sound");
  for (const auto& g : split.sound) write_text(out / "sound" / (file_stem(usage_id(g)) + ".json"), dump(to_json(g)));
  write_text(out / "unsound.json", dump(rejected_json(split)));
  for (const auto& [g, v] : split.unsound) {
    log("rejected " + usage_id(g) + ": " + std::to_string(v.size()) + " reader-before-writer violation(s)");
  }

  const auto graams = build_graams(split.sound, ifd);
  reset_dir(out / "graams");
  for (const auto& g : graams) write_text(out / "graams" / (file_stem(g.id) + ".json"), dump(to_json(g)));
  if (graams.empty()) throw EmptyUsage("no sound usages to train on");

  const auto [fspec, curve] = train(graams);
  write_text(out / "fspec.json", dump(to_json(fspec)));
  write_text(out / "curve.csv", to_csv(curve));
  log(std::to_string(corpus.size()) + " usages, " + std::to_string(graams.size()) + " sound; FSpec " +
      std::to_string(fspec.graph.nodes.size()) + " nodes, " + std::to_string(fspec.graph.edges.size()) +
      " edges; saturation at " + std::to_string(saturation_point(curve, m.saturation_threshold)) +
      "; artifacts in " + out.string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learns framework API specifications from example programs and recommends API usages.",
               "specminer"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress log messages");
  const Logger log(err, quiet);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Lower MiniLang sources into program facts");
  parse->add_option("dir", pa.dir, "Program source directory or file")->required();
  parse->add_option("--framework", pa.framework, "Framework source directory")->required();
  parse->add_option("-o,--output", pa.output, "facts.json to write")->required();
  parse->add_option("--framework-out", pa.framework_out, "Also write the framework model");
  parse->add_option("--lib", pa.libs, "Library source directory (repeatable)");
  parse->add_option("--entry", pa.entries, "Entry point Class.method (repeatable)");
  parse->add_option("--name", pa.name, "Program name (default: directory name)");

  ExtractArgs xa;
  auto* extract = app.add_subcommand("extract", "Slice program facts into primary usage graphs");
  extract->add_option("facts", xa.facts, "facts.json")->required();
  extract->add_option("--framework", xa.framework, "Framework directory or framework.json")->required();
  extract->add_option("-o,--output", xa.output, "Directory for usage graphs")->required();

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Split usage graphs into sound and unsound");
  validate->add_option("usages", va.usages, "Directory of usage graphs")->required();
  validate->add_option("--framework", va.framework, "Framework directory or framework.json")->required();
  validate->add_option("-o,--output", va.output, "Directory for sound usage graphs")->required();
  validate->add_option("--rejected", va.rejected, "Write rejected usages with their violations");
  validate->add_option("--ifd-out", va.ifd_out, "Write the mined IFD model");
  validate->add_option("--ifd-transitive-depth", va.depth, "Same-class callee depth")->check(CLI::NonNegativeNumber);

  GraamArgs ga;
  auto* graam = app.add_subcommand("graam", "Build GRAAMs from sound usage graphs");
  graam->add_option("sound", ga.sound, "Directory of sound usage graphs")->required();
  graam->add_option("--ifd", ga.ifd, "ifd.json");
  graam->add_option("--framework", ga.framework, "Framework to mine the IFD model from");
  graam->add_option("-o,--output", ga.output, "Directory for GRAAMs")->required();
  graam->add_option("--ifd-transitive-depth", ga.depth, "Same-class callee depth")->check(CLI::NonNegativeNumber);

  TrainArgs ta;
  auto* trainc = app.add_subcommand("train", "Merge GRAAMs into an FSpec");
  trainc->add_option("graams", ta.graams, "Directory of GRAAMs")->required();
  trainc->add_option("-o,--output", ta.output, "fspec.json to write")->required();
  trainc->add_option("--curve", ta.curve, "Learning curve CSV to write");
  trainc->add_option("--saturation", ta.threshold, "Threshold for the logged saturation point")
      ->check(CLI::Range(0.0, 1.0));

  RecommendArgs ra;
  auto* recommend = app.add_subcommand("recommend", "Query the FSpec with a (partial) program");
  recommend->add_option("--fspec", ra.fspec, "fspec.json")->required();
  recommend->add_option("--program", ra.program, "Program sources (repeatable)")->required();
  recommend->add_option("--framework", ra.framework, "Framework directory or framework.json")->required();
  recommend->add_option("--lib", ra.libs, "Library source directory (repeatable)");
  recommend->add_option("--entry", ra.entries, "Entry point Class.method (repeatable)");
  recommend->add_option("--ifd", ra.ifd, "ifd.json (default: mined from the framework)");
  recommend->add_option("--task", ra.task, "next, missed or misuse")
      ->check(CLI::IsMember({"next", "missed", "misuse"}));
  recommend->add_option("-k", ra.k, "Number of recommendations")->check(CLI::PositiveNumber);
  recommend->add_option("--format", ra.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  recommend->add_option("--ifd-transitive-depth", ra.depth, "Same-class callee depth")
      ->check(CLI::NonNegativeNumber);

  EvalArgs ea;
  auto* evalc = app.add_subcommand("eval", "Top-k accuracy on a held-out split");
  evalc->add_option("--corpus", ea.corpus, "Directory of GRAAMs")->required();
  evalc->add_option("--framework", ea.framework, "Framework directory or framework.json");
  evalc->add_option("--ifd", ea.ifd, "ifd.json");
  evalc->add_option("--task", ea.task, "next, missed or misuse")->check(CLI::IsMember({"next", "missed", "misuse"}));
  evalc->add_option("--seed", ea.seed, "Split and case seed");
  evalc->add_option("--split", ea.split, "Training share of programs");
  evalc->add_option("-k,--kmax", ea.kmax, "Largest k reported")->check(CLI::PositiveNumber);
  evalc->add_option("-o,--output", ea.output, "report.csv (default: stdout)");
  evalc->add_option("--ifd-transitive-depth", ea.depth, "Same-class callee depth")->check(CLI::NonNegativeNumber);

  fs::path manifest;
  auto* pipeline = app.add_subcommand("pipeline", "Run parse through train from a manifest");
  pipeline->add_option("manifest", manifest, "manifest.toml")->required();

  if (!args.empty() && args.front().rfind('-', 0) != 0 && app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "specminer: unknown subcommand '" << args.front() << "'\n\n" << app.help();
    return 1;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "specminer: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*parse) cmd_parse(pa, log);
    if (*extract) cmd_extract(xa, log);
    if (*validate) cmd_validate(va, log);
    if (*graam) cmd_graam(ga, log);
    if (*trainc) cmd_train(ta, log);
    if (*recommend) return cmd_recommend(ra, out, log);
    if (*evalc) cmd_eval(ea, out, log);
    if (*pipeline) cmd_pipeline(manifest, log);
  } catch (const InputError& e) {
    err << "specminer: error: " << e.what() << '\n';
    return 2;
  } catch (const AnalysisError& e) {
    err << "specminer: analysis error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "specminer: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace specminer::cli
