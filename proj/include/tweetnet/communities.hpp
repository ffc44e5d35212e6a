#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tweetnet/cliques.hpp"
#include "tweetnet/graph.hpp"

namespace tweetnet {

/// How two k-cliques are joined during percolation.
enum class OverlapRule {
  kStandard,  // share exactly k - 1 nodes
  kLoose,     // share at least one node
};

std::string_view rule_name(OverlapRule rule);
std::optional<OverlapRule> parse_rule(std::string_view name);

using Community = std::vector<NodeId>;

/// Communities at one clique size. Members are sorted; communities are
/// ordered by size descending, then lexicographically by members (so ties
/// resolve on the smallest member id first).
struct CommunityCover {
  std::size_t k = 0;
  OverlapRule rule = OverlapRule::kStandard;
  std::vector<Community> communities;
  std::uint64_t source_clique_count = 0;
};

/// Sorts members and communities into the canonical order above.
void canonicalize(std::vector<Community>& communities);

/// Node unions of the connected components of the clique overlap graph.
/// Throws DomainError if k < 2 or any clique does not have k members.
CommunityCover percolate(std::span<const Clique> cliques, std::size_t k,
                         OverlapRule rule);

/// percolate(enumerate_k_cliques(g, k, budget), k, rule).
CommunityCover detect_communities(const UndirectedGraph& g, std::size_t k,
                                  OverlapRule rule,
                                  std::uint64_t budget = kUnlimitedCliques,
                                  unsigned threads = 1);

struct SweepEntry {
  std::size_t k;
  std::uint64_t community_count;
  std::uint64_t clique_count;
};

struct SweepResult {
  OverlapRule rule = OverlapRule::kStandard;
  std::vector<SweepEntry> entries;  // ascending k
};

/// Percolation over maximal cliques, shared across clique sizes.
///
/// Two k-cliques sharing k - 1 nodes lie in maximal cliques sharing at
/// least k - 1 nodes, and all k-subsets of one maximal clique are mutually
/// reachable, so the k-clique communities are the node unions of components
/// of maximal cliques (size >= k) joined when they overlap in >= k - 1
/// nodes. Under the loose rule the threshold is one shared node. k-clique
/// counts come from the pivot counter, so nothing is materialized.
class CliqueCommunityIndex {
 public:
  explicit CliqueCommunityIndex(const UndirectedGraph& g, unsigned threads = 1);

  std::size_t max_clique_size() const { return clique_counts_.size() - 1; }
  std::uint64_t clique_count(std::size_t k) const;
  std::span<const Clique> maximal() const { return maximal_; }

  CommunityCover cover(std::size_t k, OverlapRule rule) const;
  SweepResult sweep(std::size_t k_min, std::size_t k_max, OverlapRule rule) const;

 private:
  struct Overlap {
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t shared;
  };

  std::size_t node_count_;
  std::vector<Clique> maximal_;           // size >= 2, sorted
  std::vector<std::uint64_t> clique_counts_;
  std::vector<Overlap> overlaps_;         // pairs sharing >= 2 nodes
};

/// Community count for every k in [k_min, k_max]. Throws DomainError
/// unless 2 <= k_min <= k_max.
SweepResult community_count_sweep(const UndirectedGraph& g, std::size_t k_min,
                                  std::size_t k_max, OverlapRule rule,
                                  unsigned threads = 1);

}  // namespace tweetnet
