#include "tweetnet/graph.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <random>

#include "oracles.hpp"
#include "tweetnet/errors.hpp"

using namespace tweetnet;

namespace {

TweetRecord rt(const std::string& from, const std::string& to) {
  static int next = 0;
  TweetRecord r;
  r.tweet_id = std::to_string(++next);
  r.user_id = from;
  r.retweet_of_user_id = to;
  return r;
}

TweetRecord original(const std::string& user) {
  TweetRecord r;
  r.tweet_id = "o" + user;
  r.user_id = user;
  return r;
}

std::vector<TweetRecord> random_events(std::size_t users, std::size_t events,
                                       std::mt19937_64& rng) {
  std::vector<TweetRecord> out;
  for (std::size_t i = 0; i < events; ++i) {
    const auto a = rng() % users;
    auto b = rng() % users;
    if (b == a) b = (b + 1) % users;
    out.push_back(rt("u" + std::to_string(a), "u" + std::to_string(b)));
  }
  return out;
}

std::vector<std::int64_t> as_vector(const DegreeVector& v) {
  return {v.data(), v.data() + v.size()};
}

void expect_moments(const DistributionMoments<double>& got, const oracle::Moments& want) {
  EXPECT_DOUBLE_EQ(got.min, want.min);
  EXPECT_DOUBLE_EQ(got.max, want.max);
  EXPECT_NEAR(got.mean, want.mean, 1e-12 * std::max(1.0, want.mean));
  EXPECT_NEAR(got.variance, want.variance, 1e-9 * std::max(1.0, want.variance));
  EXPECT_NEAR(got.skew, want.skew, 1e-9 * std::max(1.0, std::abs(want.skew)));
}

}  // namespace

TEST(BuildRetweetGraph, Example) {
  const std::vector<TweetRecord> r{rt("a", "b"), rt("a", "b"), rt("b", "a")};
  const auto g = build_retweet_graph(r);
  ASSERT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.weight(*g.find("a"), *g.find("b")), 2u);
  EXPECT_EQ(g.weight(*g.find("b"), *g.find("a")), 1u);
  EXPECT_EQ(g.arc_count(), 2u);
}

TEST(BuildRetweetGraph, AuthorsWithoutRetweetsAreIsolated) {
  std::vector<TweetRecord> r;
  for (const char* u : {"a", "b", "c", "d", "e"}) r.push_back(original(u));
  const auto g = build_retweet_graph(r);
  EXPECT_EQ(g.node_count(), 5u);
  EXPECT_EQ(g.arc_count(), 0u);
}

TEST(BuildRetweetGraph, SelfRetweetKeepsNodeOnly) {
  const auto g = build_retweet_graph(std::vector<TweetRecord>{rt("a", "a")});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.arc_count(), 0u);
}

TEST(BuildRetweetGraph, WeightsMatchPairCount) {
  std::mt19937_64 rng(1);
  const auto events = random_events(1000, 100000, rng);
  std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
  for (const auto& e : events) ++pairs[{e.user_id, *e.retweet_of_user_id}];
  const auto g = build_retweet_graph(events);
  EXPECT_EQ(g.arc_count(), pairs.size());
  EXPECT_EQ(g.weighted_arc_sum(), events.size());
  for (const auto& a : g.arcs()) {
    EXPECT_EQ(a.weight, (pairs[{g.user(a.source), g.user(a.target)}]));
    ASSERT_NE(a.source, a.target);
  }
}

TEST(RetweetGraph, RejectsBadArcs) {
  EXPECT_THROW(RetweetGraph({"a", "b"}, {{0, 0, 1}}), DomainError);
  EXPECT_THROW(RetweetGraph({"a", "b"}, {{0, 1, 0}}), DomainError);
  EXPECT_THROW(RetweetGraph({"a", "b"}, {{0, 2, 1}}), DomainError);
}

TEST(DegreeSummary, SingleEdge) {
  const RetweetGraph g({"u", "v"}, {{0, 1, 3}});
  const auto s = degree_summary(g);
  const auto d = degree_vectors(g);
  EXPECT_EQ(d.out_weighted[0], 3);
  EXPECT_EQ(d.out_unweighted[0], 1);
  EXPECT_EQ(d.in_weighted[1], 3);
  EXPECT_EQ(d.in_unweighted[1], 1);
  EXPECT_DOUBLE_EQ(s.out_weighted.mean, 1.5);
  EXPECT_DOUBLE_EQ(s.in_weighted.mean, 1.5);
  EXPECT_EQ(s.unique_edge_count, 1u);
  EXPECT_EQ(s.weighted_edge_sum, 3u);
}

TEST(DegreeSummary, EmptyGraphIsDomainError) {
  EXPECT_THROW(degree_summary(RetweetGraph{}), DomainError);
}

TEST(DegreeSummary, MatchesDirectMomentComputation) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = build_retweet_graph(random_events(50, 400, rng));
    const auto s = degree_summary(g);
    const auto d = degree_vectors(g);
    expect_moments(s.out_weighted, oracle::moments(as_vector(d.out_weighted)));
    expect_moments(s.in_weighted, oracle::moments(as_vector(d.in_weighted)));
    expect_moments(s.out_unweighted, oracle::moments(as_vector(d.out_unweighted)));
    expect_moments(s.in_unweighted, oracle::moments(as_vector(d.in_unweighted)));
    EXPECT_EQ(s.out_weighted.mean, s.in_weighted.mean);
    EXPECT_EQ(s.out_unweighted.mean, s.in_unweighted.mean);
    EXPECT_DOUBLE_EQ(s.out_unweighted.mean,
                     static_cast<double>(s.unique_edge_count) / static_cast<double>(s.node_count));
    for (const auto* m : {&s.out_weighted, &s.in_weighted, &s.out_unweighted, &s.in_unweighted}) {
      EXPECT_GE(m->variance, 0.0);
      EXPECT_LE(m->min, m->mean);
      EXPECT_LE(m->mean, m->max);
    }
  }
}

TEST(DegreeSummary, AddingOneRetweetMovesOneDegreeEach) {
  std::mt19937_64 rng(4);
  auto events = random_events(30, 200, rng);
  const auto before = degree_vectors(build_retweet_graph(events));
  events.push_back(rt("u3", "u7"));
  const auto after = degree_vectors(build_retweet_graph(events));
  EXPECT_EQ((after.out_weighted - before.out_weighted).sum(), 1);
  EXPECT_EQ((after.in_weighted - before.in_weighted).sum(), 1);
  EXPECT_EQ((after.out_weighted - before.out_weighted).abs().maxCoeff(), 1);
}

TEST(DegreeSummary, InvariantUnderRelabeling) {
  std::mt19937_64 rng(6);
  const auto events = random_events(40, 300, rng);
  auto renamed = events;
  for (auto& e : renamed) {
    e.user_id = "zz" + std::string(e.user_id.rbegin(), e.user_id.rend());
    *e.retweet_of_user_id =
        "zz" + std::string(e.retweet_of_user_id->rbegin(), e.retweet_of_user_id->rend());
  }
  const auto a = degree_summary(build_retweet_graph(events));
  const auto b = degree_summary(build_retweet_graph(renamed));
  EXPECT_EQ(a.node_count, b.node_count);
  EXPECT_EQ(a.unique_edge_count, b.unique_edge_count);
  EXPECT_DOUBLE_EQ(a.out_weighted.variance, b.out_weighted.variance);
  EXPECT_DOUBLE_EQ(a.in_unweighted.skew, b.in_unweighted.skew);
  EXPECT_DOUBLE_EQ(a.in_weighted.max, b.in_weighted.max);
}

TEST(ClassifyRoles, Examples) {
  // p has in=10 out=0, d has in=0 out=10, m has in=out=4.
  std::vector<Arc> arcs{{1, 3, 10}, {0, 2, 4}, {2, 0, 4}};
  const RetweetGraph g({"a", "d", "m", "p"}, arcs);
  const auto roles = classify_roles(g, 0.5);
  std::map<std::string, RoleScore> by_user;
  for (const auto& r : roles) by_user[r.user] = r;
  EXPECT_EQ(by_user["p"].score, 1.0);
  EXPECT_EQ(by_user["p"].label, Role::kProducer);
  EXPECT_EQ(by_user["d"].score, -1.0);
  EXPECT_EQ(by_user["d"].label, Role::kDistributor);
  EXPECT_EQ(by_user["m"].score, 0.0);
  EXPECT_EQ(by_user["m"].label, Role::kMixed);
  EXPECT_THROW(classify_roles(g, 0.0), DomainError);
  EXPECT_THROW(classify_roles(g, 1.5), DomainError);
}

TEST(ClassifyRoles, TransposeNegatesScores) {
  std::mt19937_64 rng(8);
  const auto g = build_retweet_graph(random_events(60, 500, rng));
  const auto a = classify_roles(g, 0.3);
  const auto b = classify_roles(g.transposed(), 0.3);
  std::map<std::string, RoleScore> tb;
  for (const auto& r : b) tb[r.user] = r;
  for (const auto& r : a) {
    const auto& t = tb.at(r.user);
    EXPECT_EQ(t.score, -r.score);
    if (r.label == Role::kProducer) EXPECT_EQ(t.label, Role::kDistributor);
    if (r.label == Role::kDistributor) EXPECT_EQ(t.label, Role::kProducer);
    if (r.label == Role::kMixed) EXPECT_EQ(t.label, Role::kMixed);
    EXPECT_EQ(r.score == 1.0, r.out_deg == 0 && r.in_deg > 0);
    EXPECT_EQ(r.score == -1.0, r.in_deg == 0 && r.out_deg > 0);
  }
}

TEST(Symmetrize, Examples) {
  const RetweetGraph g({"u", "v"}, {{0, 1, 1}, {1, 0, 4}});
  const auto ug = symmetrize(g, 1);
  ASSERT_EQ(ug.edge_count(), 1u);
  EXPECT_EQ(ug.edges()[0].weight, 5u);

  const RetweetGraph h({"u", "v"}, {{0, 1, 2}});
  const auto uh = symmetrize(h, 3);
  EXPECT_EQ(uh.edge_count(), 0u);
  EXPECT_EQ(uh.node_count(), 2u);
  EXPECT_THROW(symmetrize(h, 0), DomainError);
}

TEST(Symmetrize, MatchesPairwiseSum) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = build_retweet_graph(random_events(100, 800, rng));
    const std::uint64_t min_weight = 1 + trial % 3;
    const auto ug = symmetrize(g, min_weight);
    EXPECT_EQ(ug.node_count(), g.node_count());
    std::map<std::pair<NodeId, NodeId>, std::uint64_t> got;
    for (const auto& e : ug.edges()) got[{e.u, e.v}] = e.weight;
    const auto n = static_cast<NodeId>(g.node_count());
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const auto w = g.weight(u, v) + g.weight(v, u);
        const auto it = got.find({u, v});
        if (w >= min_weight && w > 0) {
          ASSERT_NE(it, got.end());
          EXPECT_EQ(it->second, w);
          EXPECT_GE(it->second, std::max(g.weight(u, v), g.weight(v, u)));
        } else {
          EXPECT_EQ(it, got.end());
        }
      }
    }
  }
}

TEST(UndirectedGraph, RejectsBadEdges) {
  EXPECT_THROW(UndirectedGraph({"a", "b"}, {{0, 0, 1}}), DomainError);
  EXPECT_THROW(UndirectedGraph({"a", "b"}, {{0, 1, 1}, {1, 0, 1}}), DomainError);
  EXPECT_THROW(UndirectedGraph({"a", "b"}, {{0, 1, 0}}), DomainError);
}

TEST(UndirectedGraph, FileRoundTrip) {
  std::mt19937_64 rng(10);
  const auto ug = symmetrize(build_retweet_graph(random_events(40, 200, rng)), 1);
  const auto dir = std::filesystem::temp_directory_path() / "tweetnet_graph_roundtrip";
  std::filesystem::remove_all(dir);
  write_undirected_graph(ug, dir);
  const auto back = read_undirected_graph(dir);
  EXPECT_EQ(std::vector<std::string>(back.labels().begin(), back.labels().end()),
            std::vector<std::string>(ug.labels().begin(), ug.labels().end()));
  EXPECT_EQ(std::vector<Edge>(back.edges().begin(), back.edges().end()),
            std::vector<Edge>(ug.edges().begin(), ug.edges().end()));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_undirected_graph(dir), InputError);
}

TEST(DegreeHistogram, CountsEveryNodeOnce) {
  std::mt19937_64 rng(12);
  const auto d = degree_vectors(build_retweet_graph(random_events(70, 300, rng)));
  std::uint64_t out = 0, in = 0;
  for (const auto& row : degree_histogram(d.out_weighted, d.in_weighted)) {
    out += row.out_count;
    in += row.in_count;
  }
  EXPECT_EQ(out, static_cast<std::uint64_t>(d.out_weighted.size()));
  EXPECT_EQ(in, static_cast<std::uint64_t>(d.in_weighted.size()));
}
