#include <gtest/gtest.h>

#include <numeric>

#include "specminer/error.hpp"
#include "specminer/eval.hpp"
#include "specminer/fspec.hpp"
#include "specminer/graam.hpp"
#include "specminer/match.hpp"
#include "support.hpp"

using namespace specminer;
using namespace specminer::testing;

namespace {

std::int64_t total_frequency(const FSpec& f) {
  std::int64_t sum = 0;
  for (const auto& [e, n] : f.frequency) sum += n;
  return sum;
}

}  // namespace

TEST(Match, QueryEmbedsInItself) {
  const auto g = jaas().graams.at("listing2");
  const auto e = best_match(g, nullptr, g);
  EXPECT_EQ(e.size, g.nodes.size());
  EXPECT_EQ(e.weight, static_cast<std::int64_t>(g.edges.size()));
  for (std::size_t q = 0; q < g.nodes.size(); ++q) EXPECT_TRUE(e.matched(static_cast<NodeId>(q)));
}

TEST(Match, PredecessorsMustCorrespondExactly) {
  // Model: start -> a -> b. Query: start -> b. b's model predecessor is a,
  // which the query lacks, so b stays unmatched.
  const auto model = chain("m", {"a", "b"});
  const auto query = chain("q", {"b"});
  const auto e = best_match(model, nullptr, query, {.include_ends = false});
  EXPECT_EQ(e.size, 1u);
  EXPECT_FALSE(e.matched(1));
}

TEST(Match, HoleHidesAModelNode) {
  // Dropping h from start -> a -> h -> b leaves a as a sink and b hanging
  // off start; through the hole, b's model predecessors look the same.
  const auto model = chain("m", {"a", "h", "b"});
  const auto query = make_graam("q", {op("a"), op("b")}, 2, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  MatchOptions opt;
  opt.include_ends = false;
  EXPECT_EQ(best_match(model, nullptr, query, opt).size, 2u);
  opt.hole = 2;
  const auto e = best_match(model, nullptr, query, opt);
  EXPECT_EQ(e.size, 3u);
  EXPECT_EQ(e.phi[2], 3);
  const auto adj = make_adjacency(model.nodes.size(), model.edges);
  EXPECT_EQ(visible_preds(adj, 0, 3, NodeId{2}), std::vector<NodeId>{0});
  EXPECT_EQ(visible_preds(adj, 0, 3, std::nullopt), std::vector<NodeId>{2});
}

TEST(Match, PrefersHeavierEmbeddings) {
  // Two parallel a-nodes under start; the query's single a should map to the
  // one whose incoming edge is more frequent.
  const auto model = make_graam("m", {op("a"), op("a")}, 2, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  std::map<Edge, std::int64_t> freq = {{{0, 1}, 1}, {{0, 2}, 5}, {{1, 3}, 1}, {{2, 4}, 5}};
  const auto e = best_match(model, &freq, chain("q", {"a"}));
  EXPECT_EQ(e.phi[1], 2);
  EXPECT_EQ(e.weight, 10);
}

TEST(Match, EnumerateReturnsMaximalEmbeddingsBestFirst) {
  const auto model = make_graam("m", {op("a"), op("a")}, 2, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  std::map<Edge, std::int64_t> freq = {{{0, 1}, 1}, {{0, 2}, 5}, {{1, 3}, 1}, {{2, 4}, 5}};
  const auto all = enumerate_matches(model, &freq, chain("q", {"a"}));
  ASSERT_EQ(all.size(), 2u);
  EXPECT_GE(all[0].weight, all[1].weight);
  EXPECT_NE(all[0].phi[1], all[1].phi[1]);
}

TEST(Merge, EmptySpecificationCopiesTheGraam) {
  const auto& g = jaas().graams.at("listing1");
  const auto f = merge(FSpec{}, g);
  EXPECT_TRUE(brute_isomorphic(f.graph, g));
  for (const auto& e : f.graph.edges) EXPECT_EQ(f.freq(e), 1);
  for (const auto& n : f.graph.nodes) {
    EXPECT_TRUE(n.receivers.empty());
    EXPECT_FALSE(n.statement.has_value());
  }
}

TEST(Merge, DuplicateGraamDoublesFrequencies) {
  const auto& g = jaas().graams.at("listing2");
  const auto f = merge(merge(FSpec{}, g), g);
  EXPECT_EQ(f.graph.nodes.size(), g.nodes.size());
  for (const auto& e : f.graph.edges) EXPECT_EQ(f.freq(e), 2);
}

TEST(Merge, MergeableRegionIsTheSharedUpperPart) {
  const auto& j = jaas();
  const auto f = merge(FSpec{}, j.graams.at("listing2"));
  const auto cands = find_mergeable(f, j.graams.at("listing1"));
  ASSERT_FALSE(cands.empty());
  // start, both inits, LoginContext and login(). The end after login()
  // exists only in listing 1.
  EXPECT_EQ(cands[0].size, 5u);
  EXPECT_EQ(cands[0].bijection.size(), cands[0].size);
}

TEST(Train, ListingsProduceTheExpectedSpecification) {
  const auto& j = jaas();
  const auto [f, curve] = train({j.graams.at("listing1"), j.graams.at("listing2")});
  EXPECT_EQ(render(f), read_golden("listings.fspec.txt"));
  ASSERT_EQ(curve.rows.size(), 2u);
  EXPECT_EQ(curve.rows[0].graams_visited, 1u);
  EXPECT_EQ(curve.rows[1].fspec_nodes, f.graph.nodes.size());
  EXPECT_EQ(curve.rows[1].fspec_edges, f.graph.edges.size());
}

TEST(Train, TrainingOrderIsLargestFirstThenById) {
  const auto small = chain("b", {"x"});
  const auto big = chain("z", {"x", "y"});
  const auto tie = chain("a", {"x"});
  const auto ordered = training_order({small, big, tie});
  EXPECT_EQ(ordered[0].id, "z");
  EXPECT_EQ(ordered[1].id, "a");
  EXPECT_EQ(ordered[2].id, "b");
}

TEST(Train, SoundnessRegression) {
  std::set<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  const auto g1 = make_graam("g1", {op("m1"), op("m2"), op("m3"), op("m4")}, 1, edges);
  const auto g2 = make_graam("g2", {op("m5"), op("m2"), op("m3"), op("m6")}, 1, edges);
  const auto f = train({g1, g2}).first;
  const auto paths = path_keys(f.graph);
  std::set<std::vector<std::string>> training = path_keys(g1);
  for (const auto& p : path_keys(g2)) training.insert(p);
  EXPECT_EQ(paths, training);
}

TEST(Train, PropertiesOnRandomCorpora) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto truth = synthetic_ground_truth(10, seed);
    const auto corpus = synthetic_subset_corpus(truth, 30, 0.2, seed);
    const auto [f, curve] = train(corpus);
    f.validate();
    // Every training edge lands on exactly one specification edge.
    std::int64_t edges = 0;
    for (const auto& g : corpus) edges += static_cast<std::int64_t>(g.edges.size());
    EXPECT_EQ(total_frequency(f), edges) << seed;
    // Every training GRAAM still embeds completely.
    for (const auto& g : corpus) {
      EXPECT_EQ(best_match(f.graph, &f.frequency, g).size, g.nodes.size()) << seed << " " << g.id;
    }
    // Every path of the specification was seen in training.
    std::set<std::vector<std::string>> seen;
    for (const auto& g : corpus) {
      for (const auto& p : path_keys(g)) seen.insert(p);
    }
    for (const auto& p : path_keys(f.graph)) EXPECT_TRUE(seen.contains(p)) << seed;
    // The curve never shrinks.
    for (std::size_t i = 1; i < curve.rows.size(); ++i) {
      EXPECT_GE(curve.rows[i].fspec_nodes, curve.rows[i - 1].fspec_nodes);
    }
  }
}

TEST(Train, ResultDoesNotDependOnInputOrder) {
  auto corpus = synthetic_subset_corpus(synthetic_ground_truth(10, 3), 25, 0.2, 3);
  const auto a = train(corpus).first;
  std::reverse(corpus.begin(), corpus.end());
  const auto b = train(corpus).first;
  EXPECT_EQ(canonical_form(a), canonical_form(b));
}

TEST(Saturation, ConstructedCurve) {
  // 51 GRAAMs, node count reaching 90% of its final value at the 24th.
  LearningCurve curve;
  for (std::size_t k = 1; k <= 51; ++k) {
    const std::size_t nodes = k < 24 ? 40 + k * 2 : (k < 40 ? 90 + (k - 24) / 4 : 100);
    curve.rows.push_back({k, k * 10, nodes, nodes + 5});
  }
  EXPECT_EQ(saturation_point(curve, 0.9), 24u);
  EXPECT_EQ(saturation_point(curve, 1.0), 40u);
}

TEST(Saturation, RejectsBadInput) {
  EXPECT_THROW(saturation_point(LearningCurve{}, 0.9), InputError);
  LearningCurve curve;
  curve.rows.push_back({1, 3, 3, 2});
  EXPECT_THROW(saturation_point(curve, 0.0), InputError);
  EXPECT_THROW(saturation_point(curve, 1.5), InputError);
  EXPECT_EQ(saturation_point(curve, 0.5), 1u);
}
