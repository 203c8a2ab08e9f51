#include "mscd/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

bool parse_weight(std::string_view token, double& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

Graph Graph::from_rows(std::vector<std::vector<Edge>> rows, std::vector<std::string> labels) {
  Graph g;
  const std::size_t n = rows.size();
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw ContractViolation("label count does not match row count");

  std::size_t total_entries = 0;
  for (const auto& row : rows) total_entries += row.size();
  g.entries_.reserve(total_entries);
  g.offsets_.assign(1, 0);
  g.offsets_.reserve(n + 1);
  g.strengths_.assign(n, 0.0);
  g.diagonal_.assign(n, 0.0);

  std::size_t off_diagonal = 0;
  std::size_t loops = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
    double sum = 0.0;
    for (const Edge& e : row) {
      if (e.target >= n) throw ContractViolation("row entry refers to a node outside the graph");
      sum += e.weight;
      if (e.target == i) {
        g.diagonal_[i] = e.weight;
        ++loops;
      } else {
        ++off_diagonal;
      }
      g.entries_.push_back(e);
    }
    g.strengths_[i] = sum;
    g.total_weight_ += sum;
    g.offsets_.push_back(g.entries_.size());
  }
  g.edge_count_ = off_diagonal / 2 + loops;
  g.labels_ = std::move(labels);
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.index_.emplace(g.labels_[i], static_cast<NodeId>(i));
  return g;
}

double Graph::min_strength() const noexcept {
  if (strengths_.empty()) return 0.0;
  return *std::min_element(strengths_.begin(), strengths_.end());
}

double Graph::weight(NodeId i, NodeId j) const noexcept {
  auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Edge& e, NodeId target) { return e.target < target; });
  return (it != row.end() && it->target == j) ? it->weight : 0.0;
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId GraphBuilder::add_node(std::string_view label) {
  auto [it, inserted] = index_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
  if (inserted) {
    labels_.emplace_back(label);
    rows_.emplace_back();
  }
  return it->second;
}

bool GraphBuilder::add_edge(NodeId u, NodeId v, double weight) {
  if (u >= labels_.size() || v >= labels_.size()) throw ContractViolation("edge endpoint was never added");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw DomainError("edge weight must be finite and > 0");
  if (!seen_.insert(pair_key(u, v)).second) return false;
  if (u == v) {
    rows_[u].push_back({u, 2.0 * weight});
  } else {
    rows_[u].push_back({v, weight});
    rows_[v].push_back({u, weight});
  }
  return true;
}

bool GraphBuilder::add_edge(std::string_view u, std::string_view v, double weight) {
  const NodeId a = add_node(u);
  const NodeId b = add_node(v);
  return add_edge(a, b, weight);
}

Graph GraphBuilder::build() const { return Graph::from_rows(rows_, labels_); }

Graph load_edge_list(std::istream& in) {
  GraphBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected 'u v' or 'u v w', got " + std::to_string(tokens.size()) + " fields");
    }
    double w = 1.0;
    if (tokens.size() == 3) {
      if (!parse_weight(tokens[2], w)) throw ParseError(line_no, "weight '" + tokens[2] + "' is not a number");
      if (!(w > 0.0)) throw ParseError(line_no, "weight must be > 0, got " + tokens[2]);
    }
    if (!builder.add_edge(tokens[0], tokens[1], w)) {
      throw ParseError(line_no, "duplicate edge " + tokens[0] + " " + tokens[1]);
    }
  }
  return builder.build();
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (const Edge& e : g.neighbors(i)) {
      if (e.target < i) continue;
      const double w = e.target == i ? e.weight / 2.0 : e.weight;
      out << g.label(i) << ' ' << g.label(e.target) << ' ' << w << '\n';
    }
  }
  out.precision(precision);
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i);
  return from_assignment(labels);
}

Partition Partition::whole(std::size_t n) {
  std::vector<std::uint32_t> labels(n, 0);
  return from_assignment(labels);
}

Partition Partition::from_assignment(std::span<const std::uint32_t> labels) {
  Partition p;
  p.assignment_.resize(labels.size());
  std::unordered_map<std::uint32_t, CommunityId> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], static_cast<CommunityId>(p.communities_.size()));
    if (inserted) p.communities_.emplace_back();
    p.assignment_[i] = it->second;
    p.communities_[it->second].push_back(static_cast<NodeId>(i));
  }
  return p;
}

Partition Partition::from_communities(std::size_t n, const std::vector<std::vector<NodeId>>& communities) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> labels(n, unset);
  for (std::size_t c = 0; c < communities.size(); ++c) {
    if (communities[c].empty()) throw ArgumentError("empty community in partition");
    for (NodeId i : communities[c]) {
      if (i >= n) throw ArgumentError("community member out of range");
      if (labels[i] != unset) throw ArgumentError("node assigned to more than one community");
      labels[i] = static_cast<std::uint32_t>(c);
    }
  }
  if (std::find(labels.begin(), labels.end(), unset) != labels.end()) {
    throw ArgumentError("node not assigned to any community");
  }
  return from_assignment(labels);
}

Cover::Cover(std::size_t n, std::vector<std::vector<NodeId>> communities)
    : communities_(std::move(communities)), membership_(n) {
  for (std::size_t k = 0; k < communities_.size(); ++k) {
    auto& c = communities_[k];
    if (c.empty()) throw ArgumentError("empty community in cover");
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw ArgumentError("duplicate node in community");
    if (c.back() >= n) throw ArgumentError("community member out of range");
    for (NodeId i : c) membership_[i].push_back(static_cast<std::uint32_t>(k));
  }
}

Cover Cover::from_partition(const Partition& p) { return Cover(p.node_count(), p.communities()); }

bool Cover::is_disjoint() const noexcept {
  return std::all_of(membership_.begin(), membership_.end(), [](const auto& m) { return m.size() <= 1; });
}

bool Cover::is_partition() const noexcept {
  return std::all_of(membership_.begin(), membership_.end(), [](const auto& m) { return m.size() == 1; });
}

bool community_connected(const Graph& g, std::span<const NodeId> members, std::optional<NodeId> excluded) {
  if (members.empty()) throw ContractViolation("community_connected: members must be non-empty");
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  if (excluded) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), *excluded);
    if (it == sorted.end() || *it != *excluded) {
      throw ContractViolation("community_connected: excluded node is not a member");
    }
    sorted.erase(it);
  }
  if (sorted.size() <= 1) return true;

  std::vector<char> seen(sorted.size(), 0);
  auto slot = [&](NodeId v) -> std::ptrdiff_t {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    return (it != sorted.end() && *it == v) ? it - sorted.begin() : -1;
  };
  std::queue<NodeId> frontier;
  frontier.push(sorted.front());
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (const Edge& e : g.neighbors(u)) {
      const auto s = slot(e.target);
      if (s < 0 || seen[s]) continue;
      seen[s] = 1;
      ++reached;
      frontier.push(e.target);
    }
  }
  return reached == sorted.size();
}

CommunityWeights community_weights(const Graph& g, std::span<const NodeId> members) {
  CommunityWeights w;
  if (members.empty()) return w;
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId i : sorted) {
    w.total += g.strength(i);
    for (const Edge& e : g.neighbors(i)) {
      if (std::binary_search(sorted.begin(), sorted.end(), e.target)) w.internal += e.weight;
    }
  }
  return w;
}

}  // namespace mscd
