#include "tweetnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "tweetnet/csv.hpp"
#include "tweetnet/errors.hpp"

namespace tweetnet {

RetweetGraph::RetweetGraph(std::vector<std::string> users, std::vector<Arc> arcs)
    : users_(std::move(users)) {
  if (!std::is_sorted(users_.begin(), users_.end()) ||
      std::adjacent_find(users_.begin(), users_.end()) != users_.end()) {
    throw DomainError("RetweetGraph: users must be sorted and unique");
  }
  for (const auto& a : arcs) {
    if (a.source >= users_.size() || a.target >= users_.size()) {
      throw DomainError("RetweetGraph: arc endpoint out of range");
    }
    if (a.source == a.target) throw DomainError("RetweetGraph: self-loop");
    if (a.weight == 0) throw DomainError("RetweetGraph: zero arc weight");
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (const auto& a : arcs) {
    if (!arcs_.empty() && arcs_.back().source == a.source &&
        arcs_.back().target == a.target) {
      arcs_.back().weight += a.weight;
    } else {
      arcs_.push_back(a);
    }
  }
  offsets_.assign(users_.size() + 1, 0);
  for (const auto& a : arcs_) ++offsets_[a.source + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::span<const Arc> RetweetGraph::out_arcs(NodeId u) const {
  return std::span<const Arc>(arcs_).subspan(offsets_[u],
                                             offsets_[u + 1] - offsets_[u]);
}

std::optional<NodeId> RetweetGraph::find(std::string_view user_id) const {
  const auto it = std::lower_bound(users_.begin(), users_.end(), user_id);
  if (it == users_.end() || *it != user_id) return std::nullopt;
  return static_cast<NodeId>(it - users_.begin());
}

std::uint64_t RetweetGraph::weight(NodeId source, NodeId target) const {
  const auto out = out_arcs(source);
  const auto it = std::lower_bound(
      out.begin(), out.end(), target,
      [](const Arc& a, NodeId t) { return a.target < t; });
  return it != out.end() && it->target == target ? it->weight : 0;
}

std::uint64_t RetweetGraph::weighted_arc_sum() const {
  std::uint64_t total = 0;
  for (const auto& a : arcs_) total += a.weight;
  return total;
}

RetweetGraph RetweetGraph::transposed() const {
  std::vector<Arc> reversed;
  reversed.reserve(arcs_.size());
  for (const auto& a : arcs_) reversed.push_back({a.target, a.source, a.weight});
  return RetweetGraph(users_, std::move(reversed));
}

UndirectedGraph::UndirectedGraph(std::vector<std::string> labels,
                                 std::vector<Edge> edges)
    : labels_(std::move(labels)), adjacency_(labels_.size()) {
  for (auto& e : edges) {
    if (e.u >= labels_.size() || e.v >= labels_.size()) {
      throw DomainError("UndirectedGraph: edge endpoint out of range");
    }
    if (e.u == e.v) throw DomainError("UndirectedGraph: self-loop");
    if (e.weight == 0) throw DomainError("UndirectedGraph: zero edge weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw DomainError("UndirectedGraph: duplicate edge");
    }
  }
  for (const auto& e : edges) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  edges_ = std::move(edges);
}

UndirectedGraph UndirectedGraph::from_edge_list(
    std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    labels[i] = std::string(width - digits.size(), '0') + digits;
  }
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v] : edges) list.push_back({u, v, 1});
  return UndirectedGraph(std::move(labels), std::move(list));
}

bool UndirectedGraph::adjacent(NodeId u, NodeId v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

DegreeVectors degree_vectors(const RetweetGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  DegreeVectors d{DegreeVector::Zero(n), DegreeVector::Zero(n),
                  DegreeVector::Zero(n), DegreeVector::Zero(n)};
  for (const auto& a : g.arcs()) {
    const auto w = static_cast<std::int64_t>(a.weight);
    d.out_weighted(a.source) += w;
    d.in_weighted(a.target) += w;
    d.out_unweighted(a.source) += 1;
    d.in_unweighted(a.target) += 1;
  }
  return d;
}

RetweetGraph build_retweet_graph(std::span<const TweetRecord> records) {
  std::unordered_map<std::string_view, NodeId> index;
  std::vector<std::string_view> names;
  auto intern = [&](std::string_view name) {
    auto [it, inserted] = index.try_emplace(name, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  std::vector<std::pair<NodeId, NodeId>> events;
  for (const auto& r : records) {
    const NodeId author = intern(r.user_id);
    if (!r.retweet_of_user_id) continue;
    const NodeId original = intern(*r.retweet_of_user_id);
    if (author != original) events.emplace_back(author, original);
  }

  std::vector<NodeId> order(names.size());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return names[a] < names[b]; });
  std::vector<NodeId> rank(names.size());
  std::vector<std::string> users;
  users.reserve(names.size());
  for (NodeId i = 0; i < order.size(); ++i) {
    rank[order[i]] = i;
    users.emplace_back(names[order[i]]);
  }

  for (auto& [s, t] : events) {
    s = rank[s];
    t = rank[t];
  }
  std::sort(events.begin(), events.end());
  std::vector<Arc> arcs;
  for (const auto& [s, t] : events) {
    if (!arcs.empty() && arcs.back().source == s && arcs.back().target == t) {
      ++arcs.back().weight;
    } else {
      arcs.push_back({s, t, 1});
    }
  }
  return RetweetGraph(std::move(users), std::move(arcs));
}

DegreeSummary degree_summary(const RetweetGraph& g) {
  if (g.node_count() == 0) throw DomainError("degree_summary: empty graph");
  const DegreeVectors d = degree_vectors(g);
  DegreeSummary s;
  s.node_count = g.node_count();
  s.unique_edge_count = g.arc_count();
  s.weighted_edge_sum = g.weighted_arc_sum();
  s.out_weighted = population_moments(d.out_weighted);
  s.in_weighted = population_moments(d.in_weighted);
  s.out_unweighted = population_moments(d.out_unweighted);
  s.in_unweighted = population_moments(d.in_unweighted);
  return s;
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kProducer: return "producer";
    case Role::kDistributor: return "distributor";
    case Role::kMixed: return "mixed";
  }
  return "mixed";
}

std::vector<RoleScore> classify_roles(const RetweetGraph& g, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("classify_roles: tau must lie in (0, 1]");
  }
  const DegreeVectors d = degree_vectors(g);
  std::vector<RoleScore> roles(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto& r = roles[i];
    r.user = g.user(i);
    r.in_deg = static_cast<double>(d.in_weighted(i));
    r.out_deg = static_cast<double>(d.out_weighted(i));
    const double total = r.in_deg + r.out_deg;
    r.score = total > 0.0 ? (r.in_deg - r.out_deg) / total : 0.0;
    r.label = r.score >= tau    ? Role::kProducer
              : r.score <= -tau ? Role::kDistributor
                                : Role::kMixed;
  }
  std::stable_sort(roles.begin(), roles.end(),
                   [](const RoleScore& a, const RoleScore& b) {
                     const double fa = std::abs(a.score), fb = std::abs(b.score);
                     if (fa != fb) return fa > fb;
                     return a.user < b.user;
                   });
  return roles;
}

UndirectedGraph symmetrize(const RetweetGraph& g, std::uint64_t min_weight) {
  if (min_weight < 1) throw DomainError("symmetrize: min_weight must be >= 1");
  std::vector<Edge> merged;
  merged.reserve(g.arc_count());
  for (const auto& a : g.arcs()) {
    merged.push_back({std::min(a.source, a.target), std::max(a.source, a.target),
                      a.weight});
  }
  std::sort(merged.begin(), merged.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::vector<Edge> edges;
  for (const auto& e : merged) {
    if (!edges.empty() && edges.back().u == e.u && edges.back().v == e.v) {
      edges.back().weight += e.weight;
    } else {
      edges.push_back(e);
    }
  }
  std::erase_if(edges, [&](const Edge& e) { return e.weight < min_weight; });
  return UndirectedGraph(std::vector<std::string>(g.users().begin(), g.users().end()),
                         std::move(edges));
}

std::vector<DegreeHistogramRow> degree_histogram(const DegreeVector& out,
                                                 const DegreeVector& in) {
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
  for (Eigen::Index i = 0; i < out.size(); ++i) ++counts[out(i)].first;
  for (Eigen::Index i = 0; i < in.size(); ++i) ++counts[in(i)].second;
  std::vector<DegreeHistogramRow> rows;
  rows.reserve(counts.size());
  for (const auto& [degree, c] : counts) rows.push_back({degree, c.first, c.second});
  return rows;
}

void write_undirected_graph(const UndirectedGraph& g,
                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream nodes(dir / "nodes.csv", std::ios::binary);
  std::ofstream edges(dir / "undirected_edges.csv", std::ios::binary);
  if (!nodes || !edges) {
    throw InputError("cannot write graph files under '" + dir.string() + "'");
  }
  nodes << "user_id\n";
  for (const auto& label : g.labels()) csv::write_row(nodes, {label});
  edges << "u,v,weight\n";
  for (const auto& e : g.edges()) {
    csv::write_row(edges, {g.label(e.u), g.label(e.v), std::to_string(e.weight)});
  }
}

UndirectedGraph read_undirected_graph(const std::filesystem::path& dir) {
  std::ifstream nodes(dir / "nodes.csv", std::ios::binary);
  std::ifstream edges(dir / "undirected_edges.csv", std::ios::binary);
  if (!nodes || !edges) {
    throw InputError("cannot read graph files under '" + dir.string() + "'");
  }
  std::vector<std::string> fields;
  bool ok = true;
  std::vector<std::string> labels;
  csv::read_record(nodes, fields, ok);
  while (csv::read_record(nodes, fields, ok)) {
    if (!ok || fields.size() != 1) throw InputError("malformed nodes.csv");
    if (fields[0].empty()) continue;
    labels.push_back(fields[0]);
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw InputError("duplicate node in nodes.csv");
  }
  auto id_of = [&](const std::string& label) {
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
      throw InputError("edge references unknown node '" + label + "'");
    }
    return static_cast<NodeId>(it - labels.begin());
  };
  std::vector<Edge> list;
  csv::read_record(edges, fields, ok);
  while (csv::read_record(edges, fields, ok)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!ok || fields.size() != 3) throw InputError("malformed undirected_edges.csv");
    std::uint64_t w = 0;
    const auto& ws = fields[2];
    if (std::from_chars(ws.data(), ws.data() + ws.size(), w).ec != std::errc{}) {
      throw InputError("bad edge weight '" + ws + "'");
    }
    list.push_back({id_of(fields[0]), id_of(fields[1]), w});
  }
  try {
    return UndirectedGraph(std::move(labels), std::move(list));
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid graph files: ") + e.what());
  }
}

}  // namespace tweetnet
