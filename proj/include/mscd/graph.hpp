#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mscd {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

struct Edge {
  NodeId target;
  double weight;
};

/// Weighted undirected graph stored as a symmetric sparse matrix in CSR form.
///
/// Rows are sorted by neighbour id. The diagonal entry of row i is the matrix
/// value A_ii, so a self-loop line "u u w" in an edge list becomes A_uu = 2w.
/// With that convention strength(i) is the plain row sum and total_weight()
/// (2m) is the sum of all matrix entries. Walk networks reuse this type with
/// whatever diagonal the walk produces.
class Graph {
 public:
  Graph() = default;

  /// Builds from per-row sorted entries. Rows must describe a symmetric matrix.
  static Graph from_rows(std::vector<std::vector<Edge>> rows, std::vector<std::string> labels = {});

  std::size_t node_count() const noexcept { return strengths_.size(); }
  /// Number of undirected edges, self-loops included.
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t entry_count() const noexcept { return entries_.size(); }

  std::span<const Edge> neighbors(NodeId i) const noexcept {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  double strength(NodeId i) const noexcept { return strengths_[i]; }
  std::span<const double> strengths() const noexcept { return strengths_; }
  double self_weight(NodeId i) const noexcept { return diagonal_[i]; }
  double total_weight() const noexcept { return total_weight_; }
  double min_strength() const noexcept;

  /// Matrix entry A_ij, 0 when absent.
  double weight(NodeId i, NodeId j) const noexcept;

  const std::string& label(NodeId i) const { return labels_[i]; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Edge> entries_;
  std::vector<double> strengths_;
  std::vector<double> diagonal_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  double total_weight_ = 0.0;
  std::size_t edge_count_ = 0;
};

/// Collects undirected edges keyed by external tokens and assigns dense ids
/// in order of first appearance.
class GraphBuilder {
 public:
  NodeId add_node(std::string_view label);
  /// Returns false if the (unordered) pair was already added.
  bool add_edge(NodeId u, NodeId v, double weight = 1.0);
  bool add_edge(std::string_view u, std::string_view v, double weight = 1.0);
  std::size_t node_count() const noexcept { return labels_.size(); }
  Graph build() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<Edge>> rows_;
  std::unordered_set<std::uint64_t> seen_;
};

/// Parses a whitespace-separated edge list ("u v" or "u v w", '#' comments).
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

/// Writes each undirected edge once. Diagonal entries are written as
/// self-loops of half the matrix value so that the file reloads to the same matrix.
void write_edge_list(const Graph& g, std::ostream& out);

/// Crisp node to community map. Community ids are dense and ordered by their
/// smallest member; member lists are sorted.
class Partition {
 public:
  Partition() = default;

  static Partition singletons(std::size_t n);
  static Partition whole(std::size_t n);
  /// Relabels arbitrary ids into canonical dense ids.
  static Partition from_assignment(std::span<const std::uint32_t> labels);
  /// Every node must appear in exactly one list.
  static Partition from_communities(std::size_t n, const std::vector<std::vector<NodeId>>& communities);

  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::size_t community_count() const noexcept { return communities_.size(); }
  CommunityId community_of(NodeId i) const noexcept { return assignment_[i]; }
  std::span<const CommunityId> assignment() const noexcept { return assignment_; }
  std::span<const NodeId> members(CommunityId c) const noexcept { return communities_[c]; }
  const std::vector<std::vector<NodeId>>& communities() const noexcept { return communities_; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<CommunityId> assignment_;
  std::vector<std::vector<NodeId>> communities_;
};

/// Possibly overlapping communities over n nodes. Nodes may belong to no community.
class Cover {
 public:
  Cover() = default;
  /// Sorts and validates each community (non-empty, ids < n, no duplicates).
  Cover(std::size_t n, std::vector<std::vector<NodeId>> communities);
  static Cover from_partition(const Partition& p);

  std::size_t node_count() const noexcept { return membership_.size(); }
  std::size_t community_count() const noexcept { return communities_.size(); }
  std::span<const NodeId> community(std::size_t k) const noexcept { return communities_[k]; }
  const std::vector<std::vector<NodeId>>& communities() const noexcept { return communities_; }
  std::span<const std::uint32_t> memberships(NodeId i) const noexcept { return membership_[i]; }

  /// True when every node belongs to at most one community.
  bool is_disjoint() const noexcept;
  /// True when every node belongs to exactly one community.
  bool is_partition() const noexcept;

  bool operator==(const Cover&) const = default;

 private:
  std::vector<std::vector<NodeId>> communities_;
  std::vector<std::vector<std::uint32_t>> membership_;
};

/// Is the subgraph induced on members (minus excluded) connected? An empty
/// remainder counts as connected.
bool community_connected(const Graph& g, std::span<const NodeId> members,
                         std::optional<NodeId> excluded = std::nullopt);

struct CommunityWeights {
  double internal = 0.0;  ///< sum over ordered member pairs of A_ij, diagonal included
  double total = 0.0;     ///< sum of member strengths
};

CommunityWeights community_weights(const Graph& g, std::span<const NodeId> members);

}  // namespace mscd
