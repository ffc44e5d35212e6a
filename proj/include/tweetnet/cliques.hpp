#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tweetnet/graph.hpp"

namespace tweetnet {

/// Sorted member ids of a complete subgraph.
using Clique = std::vector<NodeId>;

/// Vertices in degeneracy (smallest-last) order with their core numbers.
struct DegeneracyOrder {
  std::vector<NodeId> order;
  std::vector<std::uint32_t> position;  // position[v] = index of v in order
  std::uint32_t degeneracy = 0;
};

DegeneracyOrder degeneracy_order(const UndirectedGraph& g);

/// All maximal cliques with at least `min_size` members, found by
/// Bron-Kerbosch with Tomita pivoting over a degeneracy ordering. Outer
/// vertices are split across `threads` workers; the result is sorted
/// lexicographically, so it does not depend on the schedule.
std::vector<Clique> maximal_cliques(const UndirectedGraph& g,
                                    std::size_t min_size = 1,
                                    unsigned threads = 1);

inline constexpr std::uint64_t kUnlimitedCliques =
    std::numeric_limits<std::uint64_t>::max();

/// Every k-subset of nodes that is fully connected, sorted
/// lexicographically. Produced by expanding maximal cliques of size >= k
/// into their k-subsets and deduplicating. Throws CliqueBudgetExceeded when
/// more than `budget` subsets would be generated, DomainError when k < 2.
std::vector<Clique> enumerate_k_cliques(const UndirectedGraph& g, std::size_t k,
                                        std::uint64_t budget = kUnlimitedCliques,
                                        unsigned threads = 1);

/// counts[s] = number of distinct cliques with exactly s members, for every
/// s up to the maximum clique size (counts[0] = 1 for the empty clique).
/// Each clique is counted once through the pivot recursion tree without
/// being listed; counts saturate at UINT64_MAX.
std::vector<std::uint64_t> clique_size_counts(const UndirectedGraph& g,
                                              unsigned threads = 1);

}  // namespace tweetnet
