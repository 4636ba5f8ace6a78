#include <gtest/gtest.h>

#include "specminer/error.hpp"
#include "specminer/graam.hpp"
#include "specminer/graph_algo.hpp"
#include "support.hpp"

using namespace specminer;
using namespace specminer::testing;

namespace {

PrimaryApiUsageGraph primary(const std::vector<ApiLabel>& api, const std::set<Edge>& seq, const std::set<Edge>& data) {
  const auto g = make_graam("p", api, 1, {});
  PrimaryApiUsageGraph p;
  p.program = "p";
  p.entrypoint = "main";
  p.nodes = g.nodes;
  p.sequence_edges = seq;
  p.data_edges = data;
  return p;
}

const char* kFramework = R"(
class K {
  String f;
  void a() { String x = this.f; this.f = "a"; }
  void b() { String y = this.f; this.f = "b"; }
  void put() { this.f = "p"; }
  String get() { return this.f; }
}
)";

}  // namespace

TEST(Graam, JaasListingsMatchGoldens) {
  EXPECT_EQ(render(jaas().graams.at("listing1")), read_golden("listing1.graam.txt"));
  EXPECT_EQ(render(jaas().graams.at("listing2")), read_golden("listing2.graam.txt"));
}

TEST(Graam, DropsIncidentalOrderAndRewiresOrphans) {
  // start -> A -> B -> C -> end with data A -> C; B is unrelated to both.
  const auto p = primary({op("A"), op("B"), op("C")}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {{1, 3}});
  const auto g = build_graam(p, IfdModel{});
  EXPECT_EQ(g.id, "p:main");
  ASSERT_EQ(g.nodes.size(), 6u);
  EXPECT_EQ(g.nodes[5].role, NodeRole::End);
  EXPECT_EQ(g.edges, (std::set<Edge>{{0, 1}, {0, 2}, {1, 3}, {3, 4}, {2, 5}}));
  g.validate();
}

TEST(Graam, AddsWriterReaderOrder) {
  const auto ifd = mine_ifd(framework_from_source(kFramework));
  // put and get touch the same object but share no data edge.
  auto p = primary({op("put", "K"), op("get", "K")}, {{0, 1}, {1, 2}, {2, 3}}, {});
  const auto g = build_graam(p, ifd);
  EXPECT_TRUE(g.edges.contains({1, 2}));
}

TEST(Graam, DifferentReceiversAreNotOrdered) {
  const auto ifd = mine_ifd(framework_from_source(kFramework));
  auto p = primary({op("put", "K"), op("get", "K")}, {{0, 1}, {1, 2}, {2, 3}}, {});
  p.nodes[1].receivers = {7};
  p.nodes[2].receivers = {8};
  const auto g = build_graam(p, ifd);
  EXPECT_FALSE(g.edges.contains({1, 2}));
}

TEST(Graam, MutualWritersInParallelBranchesCycle) {
  const auto ifd = mine_ifd(framework_from_source(kFramework));
  auto p = primary({op("a", "K"), op("b", "K")}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {});
  EXPECT_THROW(build_graam(p, ifd), CycleAfterAugmentation);
}

TEST(Graam, EquivalentUsagesShareACanonicalForm) {
  // Both listings instantiate Subject and CallbackHandler in a different
  // order; the order disappears from the GRAAMs.
  const auto& j = jaas();
  const auto s1 = api_sequence(j.primary.at("listing1"));
  auto reordered = j.primary.at("listing1");
  std::swap(reordered.nodes[1].label, reordered.nodes[2].label);
  std::set<Edge> data;
  for (auto [u, v] : reordered.data_edges) {
    auto flip = [](NodeId x) { return x == 1 ? 2 : x == 2 ? 1 : x; };
    data.insert({flip(u), flip(v)});
  }
  reordered.data_edges = data;
  EXPECT_TRUE(equivalent(s1, api_sequence(reordered)));
  EXPECT_EQ(canonical_form(build_graam(j.primary.at("listing1"), j.ifd)),
            canonical_form(build_graam(reordered, j.ifd)));
  EXPECT_FALSE(equivalent(s1, api_sequence(j.primary.at("listing2"))));
}

TEST(Graam, EquivalenceNeedsMatchingDataEdges) {
  ApiSequence a{{op("x"), op("y")}, {{0, 1}}};
  ApiSequence b{{op("x"), op("y")}, {{1, 0}}};
  ApiSequence c{{op("y"), op("x")}, {{1, 0}}};
  EXPECT_FALSE(equivalent(a, b));
  EXPECT_TRUE(equivalent(a, c));
}

TEST(CanonicalForm, InvariantUnderRelabeling) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_graam(rng, 1 + static_cast<int>(rng() % 12), 3);
    EXPECT_EQ(canonical_form(g), canonical_form(permuted(g, rng)));
  }
}

TEST(CanonicalForm, AgreesWithBruteForceIsomorphism) {
  std::mt19937_64 rng(9);
  std::vector<Graam> pool;
  while (pool.size() < 80) {
    auto g = random_graam(rng, 1 + static_cast<int>(rng() % 5), 2);
    if (g.nodes.size() > 7) continue;
    pool.push_back(g);
    if (pool.size() % 4 == 0) pool.push_back(permuted(g, rng));
  }
  std::size_t iso = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t k = i + 1; k < pool.size(); ++k) {
      const bool brute = brute_isomorphic(pool[i], pool[k]);
      ASSERT_EQ(canonical_form(pool[i]) == canonical_form(pool[k]), brute) << i << " vs " << k;
      iso += brute ? 1 : 0;
    }
  }
  EXPECT_GT(iso, 0u);
}

TEST(CanonicalForm, FrequenciesAreEncoded) {
  FSpec a;
  a.graph = chain("a", {"x", "y"});
  for (const auto& e : a.graph.edges) a.frequency[e] = 1;
  FSpec b = a;
  b.frequency[{1, 2}] = 2;
  EXPECT_NE(canonical_form(a), canonical_form(b));
  EXPECT_EQ(canonical_form(a), canonical_form(FSpec(a)));
}

TEST(CanonicalForm, OrderMapsPositionsBackToNodes) {
  const auto g = chain("c", {"x", "y", "z"});
  const auto cf = canonical_form(g);
  ASSERT_EQ(cf.order.size(), g.nodes.size());
  for (std::size_t p = 0; p < cf.order.size(); ++p) EXPECT_EQ(cf.labels[p], g.nodes[cf.order[p]].key());
}

TEST(CanonicalForm, EnforcesNodeBound) {
  std::vector<std::string> members;
  for (int i = 0; i < 70; ++i) members.push_back("m" + std::to_string(i));
  EXPECT_THROW(canonical_form(chain("big", members)), SizeLimitExceeded);
  EXPECT_NO_THROW(canonical_form(chain("big", members), 128));
}

TEST(CanonicalForm, SymmetricGraphs) {
  // Four interchangeable parallel nodes: exercises twin pruning.
  std::set<Edge> edges;
  for (NodeId i = 1; i <= 4; ++i) {
    edges.insert({0, i});
    edges.insert({i, 5});
  }
  const auto g = make_graam("sym", {op("a"), op("a"), op("a"), op("a")}, 1, edges);
  std::mt19937_64 rng(1);
  EXPECT_EQ(canonical_form(g), canonical_form(permuted(g, rng)));
  auto h = g;
  h.nodes[4].label = op("b");
  EXPECT_NE(canonical_form(g), canonical_form(h));
}
