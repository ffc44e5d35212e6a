#include "tweetnet/communities.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "tweetnet/errors.hpp"

namespace tweetnet {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

struct CliqueHash {
  std::size_t operator()(const Clique& c) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (NodeId v : c) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Node unions of clique components. `active` selects which cliques take
// part; `sets` must already hold the component structure.
std::vector<Community> collect(std::span<const Clique> cliques,
                               const std::vector<bool>& active,
                               DisjointSets& sets) {
  std::unordered_map<std::uint32_t, Community> by_root;
  for (std::uint32_t i = 0; i < cliques.size(); ++i) {
    if (!active[i]) continue;
    auto& members = by_root[sets.find(i)];
    members.insert(members.end(), cliques[i].begin(), cliques[i].end());
  }
  std::vector<Community> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.push_back(std::move(members));
  }
  canonicalize(out);
  return out;
}

// Joins cliques that share any node.
void unite_by_node(std::span<const Clique> cliques, const std::vector<bool>& active,
                   DisjointSets& sets) {
  std::unordered_map<NodeId, std::uint32_t> first_owner;
  for (std::uint32_t i = 0; i < cliques.size(); ++i) {
    if (!active[i]) continue;
    for (NodeId v : cliques[i]) {
      auto [it, inserted] = first_owner.try_emplace(v, i);
      if (!inserted) sets.unite(it->second, i);
    }
  }
}

}  // namespace

std::string_view rule_name(OverlapRule rule) {
  return rule == OverlapRule::kLoose ? "loose" : "standard";
}

std::optional<OverlapRule> parse_rule(std::string_view name) {
  if (name == "standard") return OverlapRule::kStandard;
  if (name == "loose") return OverlapRule::kLoose;
  return std::nullopt;
}

void canonicalize(std::vector<Community>& communities) {
  for (auto& c : communities) std::sort(c.begin(), c.end());
  std::sort(communities.begin(), communities.end(),
            [](const Community& a, const Community& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a < b;
            });
}

CommunityCover percolate(std::span<const Clique> cliques, std::size_t k,
                         OverlapRule rule) {
  if (k < 2) throw DomainError("percolate: k must be >= 2");
  for (const auto& c : cliques) {
    if (c.size() != k) {
      throw DomainError("percolate: clique of size " + std::to_string(c.size()) +
                        " at level k=" + std::to_string(k));
    }
  }
  std::vector<Clique> sorted(cliques.begin(), cliques.end());
  for (auto& c : sorted) std::sort(c.begin(), c.end());

  DisjointSets sets(sorted.size());
  const std::vector<bool> active(sorted.size(), true);
  if (rule == OverlapRule::kLoose) {
    unite_by_node(sorted, active, sets);
  } else {
    // Cliques sharing k - 1 nodes share one of their (k - 1)-faces.
    std::unordered_map<Clique, std::uint32_t, CliqueHash> face_owner;
    face_owner.reserve(sorted.size() * k);
    Clique face(k - 1);
    for (std::uint32_t i = 0; i < sorted.size(); ++i) {
      for (std::size_t skip = 0; skip < k; ++skip) {
        std::copy(sorted[i].begin(), sorted[i].begin() + skip, face.begin());
        std::copy(sorted[i].begin() + skip + 1, sorted[i].end(),
                  face.begin() + skip);
        auto [it, inserted] = face_owner.try_emplace(face, i);
        if (!inserted) sets.unite(it->second, i);
      }
    }
  }

  CommunityCover cover;
  cover.k = k;
  cover.rule = rule;
  cover.source_clique_count = sorted.size();
  cover.communities = collect(sorted, active, sets);
  return cover;
}

CommunityCover detect_communities(const UndirectedGraph& g, std::size_t k,
                                  OverlapRule rule, std::uint64_t budget,
                                  unsigned threads) {
  const auto cliques = enumerate_k_cliques(g, k, budget, threads);
  return percolate(cliques, k, rule);
}

CliqueCommunityIndex::CliqueCommunityIndex(const UndirectedGraph& g,
                                           unsigned threads)
    : node_count_(g.node_count()),
      maximal_(maximal_cliques(g, 2, threads)),
      clique_counts_(clique_size_counts(g, threads)) {
  // Overlap counts between maximal cliques of size >= 3; pairs sharing a
  // single node only matter for the node-union rules.
  std::vector<std::vector<std::uint32_t>> containing(node_count_);
  for (std::uint32_t i = 0; i < maximal_.size(); ++i) {
    if (maximal_[i].size() < 3) continue;
    for (NodeId v : maximal_[i]) containing[v].push_back(i);
  }
  std::vector<std::uint32_t> shared(maximal_.size(), 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t i = 0; i < maximal_.size(); ++i) {
    if (maximal_[i].size() < 3) continue;
    for (NodeId v : maximal_[i]) {
      for (std::uint32_t j : containing[v]) {
        if (j <= i) continue;
        if (shared[j]++ == 0) touched.push_back(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t j : touched) {
      if (shared[j] >= 2) overlaps_.push_back({i, j, shared[j]});
      shared[j] = 0;
    }
    touched.clear();
  }
}

std::uint64_t CliqueCommunityIndex::clique_count(std::size_t k) const {
  return k < clique_counts_.size() ? clique_counts_[k] : 0;
}

CommunityCover CliqueCommunityIndex::cover(std::size_t k, OverlapRule rule) const {
  if (k < 2) throw DomainError("cover: k must be >= 2");
  std::vector<bool> active(maximal_.size());
  for (std::size_t i = 0; i < maximal_.size(); ++i) active[i] = maximal_[i].size() >= k;

  DisjointSets sets(maximal_.size());
  if (rule == OverlapRule::kLoose || k == 2) {
    unite_by_node(maximal_, active, sets);
  } else {
    for (const auto& o : overlaps_) {
      if (o.shared + 1 >= k && active[o.a] && active[o.b]) sets.unite(o.a, o.b);
    }
  }
  CommunityCover out;
  out.k = k;
  out.rule = rule;
  out.source_clique_count = clique_count(k);
  out.communities = collect(maximal_, active, sets);
  return out;
}

SweepResult CliqueCommunityIndex::sweep(std::size_t k_min, std::size_t k_max,
                                        OverlapRule rule) const {
  if (k_min < 2 || k_min > k_max) {
    throw DomainError("sweep: requires 2 <= k_min <= k_max");
  }
  SweepResult result;
  result.rule = rule;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const std::uint64_t communities =
        k > max_clique_size() ? 0 : cover(k, rule).communities.size();
    result.entries.push_back({k, communities, clique_count(k)});
  }
  return result;
}

SweepResult community_count_sweep(const UndirectedGraph& g, std::size_t k_min,
                                  std::size_t k_max, OverlapRule rule,
                                  unsigned threads) {
  if (k_min < 2 || k_min > k_max) {
    throw DomainError("community_count_sweep: requires 2 <= k_min <= k_max");
  }
  return CliqueCommunityIndex(g, threads).sweep(k_min, k_max, rule);
}

}  // namespace tweetnet
