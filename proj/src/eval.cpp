#include "specminer/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "specminer/error.hpp"
#include "specminer/graam.hpp"
#include "specminer/graph_algo.hpp"
#include "specminer/recommend.hpp"

namespace specminer {

std::string to_string(Task task) {
  switch (task) {
    case Task::Next:
      return "next";
    case Task::Missed:
      return "missed";
    case Task::Misuse:
      return "misuse";
  }
  return "?";
}

std::string to_string(Mutation mutation) {
  switch (mutation) {
    case Mutation::DropLast:
      return "drop-last";
    case Mutation::DropRandom:
      return "drop-random";
    case Mutation::Swap:
      return "swap";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "next") return Task::Next;
  if (s == "missed") return Task::Missed;
  if (s == "misuse") return Task::Misuse;
  throw InputError("unknown task '" + s + "' (expected next, missed or misuse)");
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw InputError("uniform_below(0)");
  // 2^64 mod n: draws below it would bias the low residues.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

CorpusSplit split_corpus(const std::vector<Graam>& graams, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InputError("split ratio must be in (0, 1), got " + std::to_string(ratio));
  }
  std::set<std::string> programs;
  for (const auto& g : graams) programs.insert(g.program.empty() ? g.id : g.program);
  if (programs.size() < 2) {
    throw CorpusTooSmall("corpus has " + std::to_string(programs.size()) +
                         " program(s); a split needs at least 2");
  }
  std::vector<std::string> order(programs.begin(), programs.end());
  std::mt19937_64 rng(seed);
  shuffle_with(order, rng);
  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(order.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, order.size() - 1);
  std::set<std::string> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  CorpusSplit out;
  for (const auto& g : graams) {
    const auto& p = g.program.empty() ? g.id : g.program;
    (train.contains(p) ? out.train : out.test).push_back(g);
  }
  return out;
}

Graam remove_node(const Graam& g, NodeId node) {
  const auto adj = make_adjacency(g.nodes.size(), g.edges);
  std::vector<NodeId> remap(g.nodes.size(), -1);
  Graam out;
  out.id = g.id;
  out.program = g.program;
  out.entrypoint = g.entrypoint;
  for (const auto& n : g.nodes) {
    if (n.id == node) continue;
    if (n.role == NodeRole::End && adj.preds[n.id] == std::vector<NodeId>{node}) continue;
    remap[n.id] = static_cast<NodeId>(out.nodes.size());
    UsageNode copy = n;
    copy.id = remap[n.id];
    copy.receivers.clear();
    for (NodeId r : n.receivers) {
      if (r != node && remap[r] >= 0) copy.receivers.push_back(remap[r]);
    }
    out.nodes.push_back(std::move(copy));
  }
  for (const auto& [u, v] : g.edges) {
    if (remap[u] >= 0 && remap[v] >= 0) out.edges.insert({remap[u], remap[v]});
  }
  const auto nadj = make_adjacency(out.nodes.size(), out.edges);
  const NodeId start = out.start();
  const auto count = out.nodes.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& n = out.nodes[i];
    if (!n.is_api()) continue;
    if (nadj.preds[n.id].empty()) out.edges.insert({start, n.id});
    if (nadj.succs[n.id].empty()) {
      UsageNode end;
      end.id = static_cast<NodeId>(out.nodes.size());
      end.role = NodeRole::End;
      out.nodes.push_back(end);
      out.edges.insert({n.id, end.id});
    }
  }
  return out;
}

std::vector<TestCase> generate_cases(const std::vector<Graam>& test, Task task, std::uint64_t seed,
                                     std::vector<std::string>* skipped) {
  std::vector<TestCase> out;
  for (const auto& g : test) {
    const auto api = g.api_nodes();
    const std::size_t needed = 2;
    if (api.size() < needed) {
      if (skipped != nullptr) skipped->push_back(g.id);
      continue;
    }
    auto add_drop = [&](Mutation m, NodeId x) {
      TestCase c;
      c.id = g.id + ":" + to_string(m) + ":" + std::to_string(x);
      c.source = g.id;
      c.mutation = m;
      c.nodes = {x};
      c.label = {g.nodes[x].key()};
      c.seed = seed;
      c.query = remove_node(g, x);
      out.push_back(std::move(c));
    };
    switch (task) {
      case Task::Next: {
        const auto depth = depth_from_start(g);
        NodeId last = api.front();
        for (NodeId x : api) {
          const auto kx = std::make_tuple(-depth[x], g.nodes[x].key(), x);
          const auto kl = std::make_tuple(-depth[last], g.nodes[last].key(), last);
          if (kx < kl) last = x;
        }
        add_drop(Mutation::DropLast, last);
        break;
      }
      case Task::Missed:
        for (NodeId x : api) add_drop(Mutation::DropRandom, x);
        break;
      case Task::Misuse: {
        const auto original = canonical_form(g);
        for (std::size_t i = 0; i < api.size(); ++i) {
          for (std::size_t j = i + 1; j < api.size(); ++j) {
            const NodeId x = api[i];
            const NodeId y = api[j];
            if (g.nodes[x].label == g.nodes[y].label) continue;
            Graam q = g;
            std::swap(q.nodes[x].label, q.nodes[y].label);
            if (canonical_form(q) == original) continue;
            TestCase c;
            c.id = g.id + ":swap:" + std::to_string(x) + "-" + std::to_string(y);
            c.source = g.id;
            c.mutation = Mutation::Swap;
            c.nodes = {x, y};
            c.label = {g.nodes[x].key(), g.nodes[y].key()};
            c.seed = seed;
            c.query = std::move(q);
            out.push_back(std::move(c));
          }
        }
        break;
      }
    }
  }
  return out;
}

namespace {

// Rank of the expected answer, or 0 if absent.
std::size_t hit_rank(const TestCase& c, const std::vector<Recommendation>& recs, Task task) {
  for (const auto& r : recs) {
    if (task == Task::Misuse) {
      if (r.action != Action::Reorder) continue;
      const bool same = (r.api == c.label[0] && r.secondary == c.label[1]) ||
                        (r.api == c.label[1] && r.secondary == c.label[0]);
      if (same) return static_cast<std::size_t>(r.rank);
    } else if (r.api == c.label[0]) {
      return static_cast<std::size_t>(r.rank);
    }
  }
  return 0;
}

}  // namespace

EvalReport run_eval(const FSpec& fspec, const IfdModel& ifd, const std::vector<TestCase>& cases,
                    Task task, std::size_t kmax, std::uint64_t seed) {
  EvalReport report;
  report.task = task;
  report.n_cases = cases.size();
  report.seed = seed;
  std::vector<std::size_t> hits(kmax + 1, 0);
  for (const auto& c : cases) {
    std::vector<Recommendation> recs;
    try {
      switch (task) {
        case Task::Next:
          recs = next_api(fspec, c.query, kmax);
          break;
        case Task::Missed:
          recs = detect_missed(fspec, c.query, kmax);
          break;
        case Task::Misuse:
          recs = detect_misuse(fspec, ifd, c.query, kmax).fixes;
          break;
      }
    } catch (const NoMatch&) {
    } catch (const NothingMissing&) {
    }
    const auto r = hit_rank(c, recs, task);
    if (r >= 1 && r <= kmax) ++hits[r];
  }
  std::size_t correct = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    correct += hits[k];
    const double acc = cases.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(cases.size());
    report.rows.push_back({k, acc, correct});
  }
  return report;
}

std::string to_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "task,k,accuracy,n_cases,seed\n";
  for (const auto& row : report.rows) {
    os << to_string(report.task) << ',' << row.k << ',' << std::fixed << std::setprecision(6)
       << row.accuracy << ',' << report.n_cases << ',' << report.seed << '\n';
  }
  return os.str();
}

namespace {

// start = 0, API nodes 1..labels.size(), ends appended for sinks.
Graam assemble(const std::string& id, const std::vector<ApiLabel>& labels,
               const std::set<Edge>& api_edges) {
  Graam g;
  g.id = id;
  g.program = id;
  g.entrypoint = "main";
  UsageNode start;
  start.role = NodeRole::Start;
  g.nodes.push_back(start);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    UsageNode n;
    n.id = static_cast<NodeId>(i + 1);
    n.label = labels[i];
    g.nodes.push_back(std::move(n));
  }
  std::vector<bool> has_pred(labels.size(), false);
  std::vector<bool> has_succ(labels.size(), false);
  for (const auto& [u, v] : api_edges) {
    g.edges.insert({u + 1, v + 1});
    has_succ[u] = true;
    has_pred[v] = true;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!has_pred[i]) g.edges.insert({0, static_cast<NodeId>(i + 1)});
    if (!has_succ[i]) {
      UsageNode end;
      end.id = static_cast<NodeId>(g.nodes.size());
      end.role = NodeRole::End;
      g.nodes.push_back(end);
      g.edges.insert({static_cast<NodeId>(i + 1), end.id});
    }
  }
  return g;
}

std::string numbered(const std::string& prefix, std::size_t i) {
  std::ostringstream os;
  os << prefix << '-' << std::setw(3) << std::setfill('0') << i;
  return os.str();
}

}  // namespace

Graam synthetic_ground_truth(std::size_t nodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ApiLabel> labels;
  std::set<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto kind = i % 4 == 0 ? ApiKind::ObjectInit : ApiKind::MethodInvoke;
    labels.push_back({kind, "Svc" + std::to_string(i % 3), kind == ApiKind::ObjectInit ? "<init>" : "op" + std::to_string(i)});
    if (i == 0 || uniform_below(rng, 100) < 15) continue;
    const auto preds = 1 + uniform_below(rng, std::min<std::uint64_t>(2, i));
    std::set<NodeId> chosen;
    while (chosen.size() < preds) chosen.insert(static_cast<NodeId>(uniform_below(rng, i)));
    for (NodeId p : chosen) edges.insert({p, static_cast<NodeId>(i)});
  }
  return assemble("truth", labels, edges);
}

std::vector<Graam> synthetic_subset_corpus(const Graam& truth, std::size_t count,
                                           double duplicate_ratio, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto adj = make_adjacency(truth.nodes.size(), truth.edges);
  const auto api = truth.api_nodes();
  const auto n_dup = static_cast<std::size_t>(std::llround(duplicate_ratio * static_cast<double>(count)));
  const auto n_unique = count - n_dup;
  std::vector<std::set<NodeId>> subsets;
  std::set<std::set<NodeId>> seen;
  for (std::size_t attempt = 0; subsets.size() < n_unique && attempt < 100000; ++attempt) {
    const auto picks = 1 + uniform_below(rng, api.size());
    std::set<NodeId> s;
    std::vector<NodeId> work;
    for (std::uint64_t i = 0; i < picks; ++i) work.push_back(api[uniform_below(rng, api.size())]);
    while (!work.empty()) {
      const NodeId x = work.back();
      work.pop_back();
      if (!truth.nodes[x].is_api() || !s.insert(x).second) continue;
      for (NodeId p : adj.preds[x]) work.push_back(p);
    }
    if (seen.insert(s).second) subsets.push_back(std::move(s));
  }
  if (subsets.size() < n_unique) {
    throw InputError("ground truth admits only " + std::to_string(subsets.size()) +
                     " distinct usages, " + std::to_string(n_unique) + " requested");
  }
  for (std::size_t i = 0; i < n_dup; ++i) subsets.push_back(subsets[uniform_below(rng, n_unique)]);
  std::vector<Graam> out;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::map<NodeId, NodeId> local;
    std::vector<ApiLabel> labels;
    for (NodeId x : subsets[i]) {
      local[x] = static_cast<NodeId>(labels.size());
      labels.push_back(truth.nodes[x].label);
    }
    std::set<Edge> edges;
    for (const auto& [u, v] : truth.edges) {
      if (local.contains(u) && local.contains(v)) edges.insert({local[u], local[v]});
    }
    out.push_back(assemble(numbered("usage", i), labels, edges));
  }
  return out;
}

std::vector<Graam> synthetic_chain_corpus(std::size_t families, std::size_t length,
                                          std::size_t copies, const std::string& prefix) {
  std::vector<Graam> out;
  for (std::size_t f = 0; f < families; ++f) {
    std::vector<ApiLabel> labels;
    std::set<Edge> edges;
    for (std::size_t i = 0; i < length; ++i) {
      labels.push_back({i == 0 ? ApiKind::ObjectInit : ApiKind::MethodInvoke, "Family" + std::to_string(f),
                        i == 0 ? "<init>" : "step" + std::to_string(i)});
      if (i > 0) edges.insert({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
    }
    for (std::size_t c = 0; c < copies; ++c) {
      out.push_back(assemble(numbered(prefix + "-f" + std::to_string(f), c), labels, edges));
    }
  }
  return out;
}

std::vector<Graam> synthetic_fork_corpus(std::size_t length, std::size_t per_branch,
                                         const std::string& prefix) {
  std::vector<Graam> out;
  for (const std::string branch : {"a", "b"}) {
    std::vector<ApiLabel> labels;
    std::set<Edge> edges;
    for (std::size_t i = 0; i + 1 < length; ++i) {
      labels.push_back({i == 0 ? ApiKind::ObjectInit : ApiKind::MethodInvoke, "Fork",
                        i == 0 ? "<init>" : "step" + std::to_string(i)});
      if (i > 0) edges.insert({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
    }
    labels.push_back({ApiKind::MethodInvoke, "Fork", "finish_" + branch});
    edges.insert({static_cast<NodeId>(length - 2), static_cast<NodeId>(length - 1)});
    for (std::size_t c = 0; c < per_branch; ++c) {
      out.push_back(assemble(numbered(prefix + "-" + branch, c), labels, edges));
    }
  }
  return out;
}

}  // namespace specminer
