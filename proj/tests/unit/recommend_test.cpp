#include <gtest/gtest.h>

#include "specminer/error.hpp"
#include "specminer/eval.hpp"
#include "specminer/fspec.hpp"
#include "specminer/graam.hpp"
#include "specminer/recommend.hpp"
#include "support.hpp"

using namespace specminer;
using namespace specminer::testing;

namespace {

const FSpec& listings_fspec() {
  static const FSpec f = train({jaas().graams.at("listing1"), jaas().graams.at("listing2")}).first;
  return f;
}

NodeId node_with_key(const Graam& g, const std::string& key) {
  for (const auto& n : g.nodes) {
    if (n.key() == key) return n.id;
  }
  return -1;
}

std::vector<std::string> apis(const std::vector<Recommendation>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(r.api);
  return out;
}

// Ranked APIs, or the name of the analysis error raised instead.
template <typename F>
std::vector<std::string> outcome(F&& query) {
  try {
    return apis(query());
  } catch (const NoMatch&) {
    return {"NoMatch"};
  } catch (const NothingMissing&) {
    return {"NothingMissing"};
  }
}

void expect_ranked(const std::vector<Recommendation>& recs) {
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].rank, static_cast<int>(i) + 1);
    if (i > 0) EXPECT_GE(recs[i - 1].score, recs[i].score);
  }
}

}  // namespace

TEST(NextApi, RecommendsLoginAfterTheContext) {
  const auto& g = jaas().graams.at("listing1");
  const auto partial = remove_node(g, node_with_key(g, "LoginContext.login()"));
  const auto recs = next_api(listings_fspec(), partial, 10);
  ASSERT_FALSE(recs.empty());
  EXPECT_EQ(recs[0].api, "LoginContext.login()");
  EXPECT_EQ(recs[0].action, Action::Add);
  EXPECT_EQ(recs[0].score, 2);
  ASSERT_TRUE(recs[0].anchor.has_value());
  EXPECT_EQ(partial.nodes[*recs[0].anchor].key(), "init LoginContext");
  expect_ranked(recs);
}

TEST(NextApi, KLimitsTheList) {
  const auto& g = jaas().graams.at("listing2");
  const auto partial = remove_node(g, node_with_key(g, "Subject.getPrincipals()"));
  EXPECT_LE(next_api(listings_fspec(), partial, 1).size(), 1u);
  EXPECT_TRUE(next_api(listings_fspec(), partial, 0).empty());
}

TEST(NextApi, UnrelatedQueryHasNoMatch) {
  EXPECT_THROW(next_api(listings_fspec(), chain("q", {"nothing"}), 5), NoMatch);
  EXPECT_THROW(next_api(FSpec{}, chain("q", {"x"}), 5), NoMatch);
}

TEST(DetectMissed, FindsTheDroppedLogin) {
  const auto& g = jaas().graams.at("listing2");
  const auto partial = remove_node(g, node_with_key(g, "LoginContext.login()"));
  const auto recs = detect_missed(listings_fspec(), partial, 10);
  ASSERT_FALSE(recs.empty());
  EXPECT_EQ(recs[0].api, "LoginContext.login()");
  expect_ranked(recs);
}

TEST(DetectMissed, CompleteUsageHasNothingMissing) {
  EXPECT_THROW(detect_missed(listings_fspec(), jaas().graams.at("listing1"), 10), NothingMissing);
}

TEST(DetectMissed, SelfConsistency) {
  // Every node of every training GRAAM, dropped, is found again.
  for (const std::string name : {"listing1", "listing2"}) {
    const auto& g = jaas().graams.at(name);
    for (NodeId v : g.api_nodes()) {
      const auto partial = remove_node(g, v);
      std::vector<Recommendation> recs;
      try {
        recs = detect_missed(listings_fspec(), partial, 10);
      } catch (const NothingMissing&) {
        continue;  // the remainder is itself a complete usage
      }
      const auto got = apis(recs);
      EXPECT_NE(std::find(got.begin(), got.end(), g.nodes[v].key()), got.end()) << name << " without " << v;
    }
  }
}

TEST(DetectMisuse, SwappedListingGetsAReorderFix) {
  const auto& j = jaas();
  const auto& g = j.graams.at("listing2-swapped");
  const auto report = detect_misuse(listings_fspec(), j.ifd, g, j.primary.at("listing2-swapped"), 10);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].field, "LoginContext.subject");
  EXPECT_FALSE(report.clean());
  ASSERT_FALSE(report.fixes.empty());
  EXPECT_EQ(report.fixes[0].action, Action::Reorder);
  EXPECT_EQ(report.fixes[0].api, "LoginContext.login()");
  EXPECT_EQ(report.fixes[0].secondary, "LoginContext.getSubject()");
}

TEST(DetectMisuse, SoundEmbeddableUsageIsClean) {
  const auto& j = jaas();
  const auto report = detect_misuse(listings_fspec(), j.ifd, j.graams.at("listing1"), 10);
  EXPECT_TRUE(report.clean());
  EXPECT_TRUE(report.violations.empty());
  EXPECT_TRUE(report.fixes.empty());
}

TEST(DetectMisuse, SwappingIndependentInitsIsNotAMisuse) {
  const auto& j = jaas();
  auto p = j.primary.at("listing1");
  // Instantiate Subject before the CallbackHandler instead.
  std::swap(p.nodes[1].label, p.nodes[2].label);
  std::swap(p.nodes[1].statement, p.nodes[2].statement);
  std::set<Edge> data;
  auto flip = [](NodeId x) { return x == 1 ? 2 : x == 2 ? 1 : x; };
  for (auto [u, v] : p.data_edges) data.insert({flip(u), flip(v)});
  p.data_edges = data;
  const auto g = build_graam(p, j.ifd);
  const auto report = detect_misuse(listings_fspec(), j.ifd, g, p, 10);
  EXPECT_TRUE(report.clean());
  EXPECT_TRUE(report.fixes.empty());
}

TEST(DetectMisuse, OrderMismatchWithoutIfdEvidence) {
  FSpec f = train({chain("a", {"open", "read", "close"}), chain("b", {"open", "read", "close"})}).first;
  const auto query = chain("q", {"open", "close", "read"});
  const auto report = detect_misuse(f, IfdModel{}, query, 5);
  EXPECT_TRUE(report.violations.empty());
  EXPECT_TRUE(report.order_mismatch);
  ASSERT_FALSE(report.fixes.empty());
  EXPECT_EQ(report.fixes[0].action, Action::Reorder);
  const std::set<std::string> pair = {report.fixes[0].api, report.fixes[0].secondary};
  EXPECT_EQ(pair, (std::set<std::string>{"T.read()", "T.close()"}));
}

TEST(DetectMisuse, WrongTargetGetsAReplaceFix) {
  FSpec f = train({chain("a", {"a", "b", "c"})}).first;
  const auto report = detect_misuse(f, IfdModel{}, chain("q", {"a", "z", "c"}), 5);
  ASSERT_FALSE(report.fixes.empty());
  EXPECT_EQ(report.fixes[0].action, Action::Replace);
  EXPECT_EQ(report.fixes[0].api, "T.b()");
  EXPECT_EQ(report.fixes[0].secondary, "T.z()");
}

TEST(Recommend, EquivalentPartialsGetIdenticalLists) {
  const auto truth = synthetic_ground_truth(10, 4);
  const auto corpus = synthetic_subset_corpus(truth, 30, 0.2, 4);
  const auto f = train(corpus).first;
  std::mt19937_64 rng(77);
  std::size_t compared = 0;
  for (const auto& g : corpus) {
    const auto api = g.api_nodes();
    if (api.size() < 2) continue;
    const auto partial = remove_node(g, api.back());
    const auto twin = permuted(partial, rng);
    ASSERT_EQ(canonical_form(partial), canonical_form(twin));
    const auto next = outcome([&] { return next_api(f, partial, 10); });
    EXPECT_EQ(next, outcome([&] { return next_api(f, twin, 10); }));
    EXPECT_EQ(outcome([&] { return detect_missed(f, partial, 10); }),
              outcome([&] { return detect_missed(f, twin, 10); }));
    EXPECT_EQ(apis(detect_misuse(f, IfdModel{}, partial, 10).fixes),
              apis(detect_misuse(f, IfdModel{}, twin, 10).fixes));
    compared += next.size() > 1 ? 1 : 0;
  }
  EXPECT_GT(compared, 5u);
}
