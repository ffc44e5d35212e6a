#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tweetnet/ingest.hpp"

namespace tweetnet {

using NodeId = std::uint32_t;

struct Arc {
  NodeId source;
  NodeId target;
  std::uint64_t weight;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Weighted retweet digraph. Node ids follow lexicographic user_id order;
/// arcs are sorted by (source, target) and carry the number of times
/// `source` retweeted `target`.
class RetweetGraph {
 public:
  RetweetGraph() = default;

  /// Merges duplicate arcs by summing weights. Throws DomainError on an
  /// out-of-range endpoint, a self-loop or a zero weight. `users` must be
  /// sorted and unique.
  RetweetGraph(std::vector<std::string> users, std::vector<Arc> arcs);

  std::size_t node_count() const { return users_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::span<const std::string> users() const { return users_; }
  std::span<const Arc> arcs() const { return arcs_; }
  std::span<const Arc> out_arcs(NodeId u) const;
  const std::string& user(NodeId id) const { return users_[id]; }
  std::optional<NodeId> find(std::string_view user_id) const;

  /// e_ij, or 0 when there is no arc.
  std::uint64_t weight(NodeId source, NodeId target) const;
  std::uint64_t weighted_arc_sum() const;

  /// Same nodes, every arc reversed.
  RetweetGraph transposed() const;

 private:
  std::vector<std::string> users_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> offsets_;
};

/// One edge of an undirected graph, normalized so that u < v.
struct Edge {
  NodeId u;
  NodeId v;
  std::uint64_t weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with sorted adjacency lists.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;

  /// Throws DomainError on self-loops, zero weights, duplicate edges or
  /// out-of-range endpoints. Edge endpoints may be given in either order.
  UndirectedGraph(std::vector<std::string> labels, std::vector<Edge> edges);

  /// Unlabeled graph on n nodes; labels are zero-padded indices so that
  /// label order matches id order.
  static UndirectedGraph from_edge_list(
      std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  bool adjacent(NodeId u, NodeId v) const;
  std::span<const std::string> labels() const { return labels_; }
  const std::string& label(NodeId id) const { return labels_[id]; }

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

template <typename Scalar>
struct DistributionMoments {
  Scalar min{};
  Scalar max{};
  Scalar mean{};
  Scalar variance{};  // population second central moment
  Scalar skew{};      // m3 / m2^(3/2), 0 when m2 = 0
};

/// Population moments of a sample. The mean is the plain sum over the
/// count, so two samples with equal integer-valued sums have equal means.
template <typename Derived>
DistributionMoments<double> population_moments(
    const Eigen::ArrayBase<Derived>& sample) {
  DistributionMoments<double> m;
  if (sample.size() == 0) return m;
  const Eigen::ArrayXd x = sample.derived().template cast<double>();
  const double n = static_cast<double>(x.size());
  m.min = x.minCoeff();
  m.max = x.maxCoeff();
  m.mean = x.sum() / n;
  const Eigen::ArrayXd centered = x - m.mean;
  const double m2 = centered.square().sum() / n;
  const double m3 = centered.cube().sum() / n;
  m.variance = m2;
  m.skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

using DegreeVector = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

/// Per-node degrees, indexed by NodeId.
struct DegreeVectors {
  DegreeVector out_weighted;
  DegreeVector in_weighted;
  DegreeVector out_unweighted;
  DegreeVector in_unweighted;
};

DegreeVectors degree_vectors(const RetweetGraph& g);

struct DegreeSummary {
  std::uint64_t node_count = 0;
  std::uint64_t unique_edge_count = 0;
  std::uint64_t weighted_edge_sum = 0;
  DistributionMoments<double> out_weighted;
  DistributionMoments<double> in_weighted;
  DistributionMoments<double> out_unweighted;
  DistributionMoments<double> in_unweighted;
};

/// Each retweet record adds one to e_ij for its (author, retweeted author)
/// pair. Every author and retweeted author becomes a node; self-retweets
/// add the author as a node but no arc.
RetweetGraph build_retweet_graph(std::span<const TweetRecord> records);

/// Throws DomainError on an empty graph.
DegreeSummary degree_summary(const RetweetGraph& g);

enum class Role { kProducer, kDistributor, kMixed };
std::string_view role_name(Role role);

struct RoleScore {
  std::string user;
  double in_deg = 0.0;
  double out_deg = 0.0;
  double score = 0.0;
  Role label = Role::kMixed;
};

/// (in - out) / (in + out) over weighted degrees, labeled against the
/// threshold tau in (0, 1]. Sorted by |score| descending, then user id.
std::vector<RoleScore> classify_roles(const RetweetGraph& g, double tau);

/// Undirected weight {u, v} = e_uv + e_vu; edges lighter than min_weight
/// are dropped, nodes are kept.
UndirectedGraph symmetrize(const RetweetGraph& g, std::uint64_t min_weight);

struct DegreeHistogramRow {
  std::int64_t degree;
  std::uint64_t out_count;
  std::uint64_t in_count;
};

/// Number of nodes at each degree value present in either direction.
std::vector<DegreeHistogramRow> degree_histogram(const DegreeVector& out,
                                                 const DegreeVector& in);

// File forms used to hand graphs between pipeline stages.
void write_undirected_graph(const UndirectedGraph& g,
                            const std::filesystem::path& dir);
UndirectedGraph read_undirected_graph(const std::filesystem::path& dir);

}  // namespace tweetnet
