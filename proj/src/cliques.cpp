#include "tweetnet/cliques.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "tweetnet/errors.hpp"

namespace tweetnet {
namespace {

using VertexSet = std::vector<NodeId>;

// Sorted-set intersection; gallops through the larger side when the sizes
// are lopsided, which is the common case next to hubs.
void intersect(std::span<const NodeId> a, std::span<const NodeId> b,
               VertexSet& out) {
  out.clear();
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return;
  if (b.size() > 16 * a.size()) {
    auto lo = b.begin();
    for (NodeId x : a) {
      lo = std::lower_bound(lo, b.end(), x);
      if (lo == b.end()) break;
      if (*lo == x) out.push_back(x);
    }
    return;
  }
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
}

std::size_t intersection_size(std::span<const NodeId> a,
                              std::span<const NodeId> b) {
  if (a.size() > b.size()) std::swap(a, b);
  std::size_t n = 0;
  if (b.size() > 16 * a.size()) {
    auto lo = b.begin();
    for (NodeId x : a) {
      lo = std::lower_bound(lo, b.end(), x);
      if (lo == b.end()) break;
      if (*lo == x) ++n;
    }
    return n;
  }
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

class MaximalCliqueSearch {
 public:
  MaximalCliqueSearch(const UndirectedGraph& g, std::size_t min_size,
                      std::vector<Clique>& out)
      : g_(g), min_size_(min_size), out_(out) {}

  void run_from(NodeId v, const DegeneracyOrder& order) {
    VertexSet p, x;
    for (NodeId w : g_.neighbors(v)) {
      (order.position[w] > order.position[v] ? p : x).push_back(w);
    }
    r_.assign(1, v);
    expand(std::move(p), std::move(x));
  }

 private:
  void expand(VertexSet p, VertexSet x) {
    if (p.empty()) {
      if (x.empty() && r_.size() >= min_size_) {
        Clique c = r_;
        std::sort(c.begin(), c.end());
        out_.push_back(std::move(c));
      }
      return;
    }
    if (r_.size() + p.size() < min_size_) return;

    NodeId pivot = p.front();
    std::size_t best = 0;
    bool first = true;
    for (const VertexSet* side : {&p, &x}) {
      for (NodeId u : *side) {
        const std::size_t n = intersection_size(p, g_.neighbors(u));
        if (first || n > best) {
          pivot = u;
          best = n;
          first = false;
        }
      }
    }

    VertexSet candidates;
    const auto pivot_adj = g_.neighbors(pivot);
    std::set_difference(p.begin(), p.end(), pivot_adj.begin(), pivot_adj.end(),
                        std::back_inserter(candidates));
    VertexSet next_p, next_x;
    for (NodeId v : candidates) {
      const auto adj = g_.neighbors(v);
      intersect(p, adj, next_p);
      intersect(x, adj, next_x);
      r_.push_back(v);
      expand(next_p, next_x);
      r_.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  }

  const UndirectedGraph& g_;
  std::size_t min_size_;
  std::vector<Clique>& out_;
  VertexSet r_;
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

class BinomialTable {
 public:
  std::uint64_t operator()(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    while (rows_.size() <= n) {
      const std::size_t m = rows_.size();
      std::vector<std::uint64_t> row(m + 1, 1);
      for (std::size_t j = 1; j < m; ++j) {
        row[j] = saturating_add(rows_[m - 1][j - 1], rows_[m - 1][j]);
      }
      rows_.push_back(std::move(row));
    }
    return rows_[n][k];
  }

 private:
  std::vector<std::vector<std::uint64_t>> rows_;
};

// Pivot-tree clique counting. Every clique inside the candidate set is
// encoded exactly once by a root-to-leaf path as (held vertices, any subset
// of pivot vertices), so a leaf with h held and p pivots contributes
// C(p, s - h) cliques of size s.
class CliqueCounter {
 public:
  CliqueCounter(const UndirectedGraph& g, std::vector<std::uint64_t>& counts)
      : g_(g), counts_(counts) {}

  void run_from(NodeId v, const DegeneracyOrder& order) {
    VertexSet p;
    for (NodeId w : g_.neighbors(v)) {
      if (order.position[w] > order.position[v]) p.push_back(w);
    }
    count(std::move(p), 1, 0);
  }

 private:
  void count(VertexSet p, std::size_t held, std::size_t pivots) {
    if (p.empty()) {
      if (counts_.size() < held + pivots + 1) counts_.resize(held + pivots + 1, 0);
      for (std::size_t i = 0; i <= pivots; ++i) {
        counts_[held + i] = saturating_add(counts_[held + i], binomial_(pivots, i));
      }
      return;
    }
    NodeId pivot = p.front();
    std::size_t best = intersection_size(p, g_.neighbors(pivot));
    for (NodeId u : p) {
      const std::size_t n = intersection_size(p, g_.neighbors(u));
      if (n > best) {
        pivot = u;
        best = n;
      }
    }
    const auto pivot_adj = g_.neighbors(pivot);
    VertexSet next;
    intersect(p, pivot_adj, next);
    count(next, held, pivots + 1);

    VertexSet others;
    std::set_difference(p.begin(), p.end(), pivot_adj.begin(), pivot_adj.end(),
                        std::back_inserter(others));
    std::erase(others, pivot);
    for (NodeId v : others) {
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      intersect(p, g_.neighbors(v), next);
      count(next, held + 1, pivots);
    }
  }

  const UndirectedGraph& g_;
  std::vector<std::uint64_t>& counts_;
  BinomialTable binomial_;
};

template <typename Worker, typename Result>
std::vector<Result> run_partitioned(const UndirectedGraph& g, unsigned threads,
                                    const std::function<Worker(Result&)>& make) {
  const DegeneracyOrder order = degeneracy_order(g);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::max<std::size_t>(1, g.node_count()))));
  std::vector<Result> results(threads);
  auto work = [&](unsigned t) {
    Worker w = make(results[t]);
    for (std::size_t i = t; i < order.order.size(); i += threads) {
      w.run_from(order.order[i], order);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return results;
}

}  // namespace

DegeneracyOrder degeneracy_order(const UndirectedGraph& g) {
  // Batagelj-Zaversnik bucket peeling.
  const std::size_t n = g.node_count();
  DegeneracyOrder d;
  d.position.assign(n, 0);
  if (n == 0) return d;

  std::vector<std::uint32_t> degree(n);
  std::uint32_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.degree(v));
    max_degree = std::max(max_degree, degree[v]);
  }
  std::vector<std::uint32_t> bin(max_degree + 1, 0);
  for (NodeId v = 0; v < n; ++v) ++bin[degree[v]];
  std::uint32_t start = 0;
  for (auto& b : bin) {
    const std::uint32_t count = b;
    b = start;
    start += count;
  }
  std::vector<NodeId> vert(n);
  auto& pos = d.position;
  for (NodeId v = 0; v < n; ++v) {
    pos[v] = bin[degree[v]]++;
    vert[pos[v]] = v;
  }
  for (std::size_t k = max_degree; k > 0; --k) bin[k] = bin[k - 1];
  bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = vert[i];
    for (NodeId u : g.neighbors(v)) {
      if (degree[u] <= degree[v]) continue;
      const std::uint32_t du = degree[u];
      const std::uint32_t pu = pos[u];
      const std::uint32_t pw = bin[du];
      const NodeId w = vert[pw];
      if (u != w) {
        pos[u] = pw;
        vert[pu] = w;
        pos[w] = pu;
        vert[pw] = u;
      }
      ++bin[du];
      --degree[u];
    }
  }
  d.order = std::move(vert);
  d.degeneracy = *std::max_element(degree.begin(), degree.end());
  return d;
}

std::vector<Clique> maximal_cliques(const UndirectedGraph& g, std::size_t min_size,
                                    unsigned threads) {
  auto parts = run_partitioned<MaximalCliqueSearch, std::vector<Clique>>(
      g, threads, [&](std::vector<Clique>& out) {
        return MaximalCliqueSearch(g, min_size, out);
      });
  std::vector<Clique> all;
  for (auto& part : parts) {
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Clique> enumerate_k_cliques(const UndirectedGraph& g, std::size_t k,
                                        std::uint64_t budget, unsigned threads) {
  if (k < 2) throw DomainError("enumerate_k_cliques: k must be >= 2");
  std::vector<Clique> out;
  std::uint64_t generated = 0;
  Clique subset(k);
  std::vector<std::size_t> pick(k);
  for (const Clique& m : maximal_cliques(g, k, threads)) {
    // Lexicographic walk over k-combinations of positions in m.
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      if (++generated > budget) {
        throw CliqueBudgetExceeded("k-clique expansion at k=" + std::to_string(k) +
                                   " exceeded the budget of " +
                                   std::to_string(budget) + " cliques");
      }
      for (std::size_t i = 0; i < k; ++i) subset[i] = m[pick[i]];
      out.push_back(subset);
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m.size() - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> clique_size_counts(const UndirectedGraph& g,
                                              unsigned threads) {
  auto parts = run_partitioned<CliqueCounter, std::vector<std::uint64_t>>(
      g, threads, [&](std::vector<std::uint64_t>& out) {
        return CliqueCounter(g, out);
      });
  std::vector<std::uint64_t> counts{1};
  for (const auto& part : parts) {
    if (part.size() > counts.size()) counts.resize(part.size(), 0);
    for (std::size_t s = 1; s < part.size(); ++s) {
      counts[s] = saturating_add(counts[s], part[s]);
    }
  }
  return counts;
}

}  // namespace tweetnet
