#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mglan {

enum class NodeKind : std::uint8_t { User = 0, Tweet = 1 };

inline const char* kind_name(NodeKind k) { return k == NodeKind::User ? "User" : "Tweet"; }
inline char kind_tag(NodeKind k) { return k == NodeKind::User ? 'U' : 'T'; }

/// Typed node handle: (kind, dense per-kind index).
struct NodeRef {
  NodeKind kind = NodeKind::User;
  std::uint32_t index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct Neighbor {
  NodeRef node;
  double weight = 0.0;
};

/// Time-decay weight for a spread edge: 1 / (max(0, t) + 1), t in minutes.
/// Negative delays (data noise) clamp to weight 1. Throws on non-finite input.
double edge_weight(double delay_minutes);

struct EdgeRecord {
  std::string user_id;
  std::string tweet_id;
  double delay_minutes = 0.0;
};

/// Immutable bipartite user/tweet graph with symmetric weighted adjacency.
/// Node indices are dense per kind, assigned in first-seen order of the edge
/// list; duplicate (user, tweet) pairs collapse keeping the smallest delay.
class HetGraph {
 public:
  HetGraph() = default;

  static HetGraph build(const std::vector<EdgeRecord>& edges);

  std::size_t user_count() const { return user_ids_.size(); }
  std::size_t tweet_count() const { return tweet_ids_.size(); }
  std::size_t node_count() const { return user_count() + tweet_count(); }
  /// Undirected edge count (each user-tweet pair counted once).
  std::size_t edge_count() const;

  std::span<const Neighbor> neighbors(NodeRef v) const;
  std::vector<Neighbor> neighbors_of_kind(NodeRef v, NodeKind k) const;

  const std::string& node_id(NodeRef v) const;
  std::optional<NodeRef> find(NodeKind kind, std::string_view id) const;

  /// Flat row for embedding matrices: users first, then tweets.
  std::size_t row_index(NodeRef v) const;
  NodeRef node_at_row(std::size_t row) const;

  bool has_relation(NodeKind a, NodeKind b) const;
  bool valid(NodeRef v) const;
  void require_valid(NodeRef v) const;

 private:
  friend class GraphBuilder;
  std::vector<std::string> user_ids_;
  std::vector<std::string> tweet_ids_;
  // CSR over rows (users then tweets); neighbors sorted by (kind, index)
  std::vector<std::size_t> adj_offsets_;
  std::vector<Neighbor> adj_;
  std::unordered_map<std::string, std::uint32_t> user_index_;
  std::unordered_map<std::string, std::uint32_t> tweet_index_;
};

/// Incremental construction path used by dataio::to_graph, where user and
/// tweet id namespaces are kept separate by the caller.
class GraphBuilder {
 public:
  std::uint32_t user(std::string_view id);
  std::uint32_t tweet(std::string_view id);
  /// Keeps the minimum delay when the same (user, tweet) pair repeats.
  void spread(std::uint32_t user_idx, std::uint32_t tweet_idx, double delay_minutes);
  HetGraph finish();

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> tweet_ids_;
  std::unordered_map<std::string, std::uint32_t> user_index_;
  std::unordered_map<std::string, std::uint32_t> tweet_index_;
  std::unordered_map<std::uint64_t, double> min_delay_;  // (user, tweet) -> delay
};

/// Cyclic node-kind pattern constraining walks. Consecutive kinds (including
/// the wraparound) must form a relation present in the graph schema.
struct MetaPathSchema {
  std::vector<NodeKind> pattern;

  static MetaPathSchema user_tweet() { return {{NodeKind::User, NodeKind::Tweet}}; }

  NodeKind kind_at(std::size_t pos) const { return pattern[pos % pattern.size()]; }
  /// Position of the first occurrence of `k`, if any.
  std::optional<std::size_t> position_of(NodeKind k) const;
  void validate(const HetGraph& g) const;
};

}  // namespace mglan
