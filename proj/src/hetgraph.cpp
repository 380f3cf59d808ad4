#include "mglan/hetgraph.hpp"

#include <algorithm>
#include <cmath>

#include "mglan/error.hpp"

namespace mglan {

double edge_weight(double delay_minutes) {
  if (!std::isfinite(delay_minutes))
    fail(ErrorCode::InvalidArgument, "edge_weight: delay must be finite");
  return 1.0 / (std::max(0.0, delay_minutes) + 1.0);
}

std::size_t HetGraph::edge_count() const { return adj_.size() / 2; }

std::span<const Neighbor> HetGraph::neighbors(NodeRef v) const {
  require_valid(v);
  const std::size_t row = row_index(v);
  return {adj_.data() + adj_offsets_[row], adj_offsets_[row + 1] - adj_offsets_[row]};
}

std::vector<Neighbor> HetGraph::neighbors_of_kind(NodeRef v, NodeKind k) const {
  std::vector<Neighbor> out;
  for (const Neighbor& n : neighbors(v))
    if (n.node.kind == k) out.push_back(n);
  return out;
}

const std::string& HetGraph::node_id(NodeRef v) const {
  require_valid(v);
  return v.kind == NodeKind::User ? user_ids_[v.index] : tweet_ids_[v.index];
}

std::optional<NodeRef> HetGraph::find(NodeKind kind, std::string_view id) const {
  const auto& map = kind == NodeKind::User ? user_index_ : tweet_index_;
  auto it = map.find(std::string(id));
  if (it == map.end()) return std::nullopt;
  return NodeRef{kind, it->second};
}

std::size_t HetGraph::row_index(NodeRef v) const {
  return v.kind == NodeKind::User ? v.index : user_count() + v.index;
}

NodeRef HetGraph::node_at_row(std::size_t row) const {
  if (row < user_count()) return {NodeKind::User, static_cast<std::uint32_t>(row)};
  return {NodeKind::Tweet, static_cast<std::uint32_t>(row - user_count())};
}

bool HetGraph::has_relation(NodeKind a, NodeKind b) const {
  return a != b;  // single bipartite "spread" relation
}

bool HetGraph::valid(NodeRef v) const {
  const std::size_t n = v.kind == NodeKind::User ? user_count() : tweet_count();
  return v.index < n;
}

void HetGraph::require_valid(NodeRef v) const {
  if (!valid(v))
    fail(ErrorCode::InvalidArgument, std::string("invalid node reference: ") + kind_tag(v.kind) +
                                         std::to_string(v.index));
}

std::uint32_t GraphBuilder::user(std::string_view id) {
  auto [it, inserted] = user_index_.try_emplace(std::string(id), static_cast<std::uint32_t>(user_ids_.size()));
  if (inserted) user_ids_.emplace_back(id);
  return it->second;
}

std::uint32_t GraphBuilder::tweet(std::string_view id) {
  auto [it, inserted] = tweet_index_.try_emplace(std::string(id), static_cast<std::uint32_t>(tweet_ids_.size()));
  if (inserted) tweet_ids_.emplace_back(id);
  return it->second;
}

void GraphBuilder::spread(std::uint32_t user_idx, std::uint32_t tweet_idx, double delay_minutes) {
  if (!std::isfinite(delay_minutes))
    fail(ErrorCode::InvalidArgument, "spread delay must be finite");
  const std::uint64_t key = (static_cast<std::uint64_t>(user_idx) << 32) | tweet_idx;
  auto [it, inserted] = min_delay_.try_emplace(key, delay_minutes);
  if (!inserted && delay_minutes < it->second) it->second = delay_minutes;
}

HetGraph GraphBuilder::finish() {
  HetGraph g;
  g.user_ids_ = std::move(user_ids_);
  g.tweet_ids_ = std::move(tweet_ids_);
  g.user_index_ = std::move(user_index_);
  g.tweet_index_ = std::move(tweet_index_);

  const std::size_t n_users = g.user_ids_.size();
  const std::size_t n_rows = n_users + g.tweet_ids_.size();
  std::vector<std::size_t> degree(n_rows, 0);
  for (const auto& [key, delay] : min_delay_) {
    (void)delay;
    const auto u = static_cast<std::uint32_t>(key >> 32);
    const auto t = static_cast<std::uint32_t>(key & 0xffffffffu);
    ++degree[u];
    ++degree[n_users + t];
  }
  g.adj_offsets_.assign(n_rows + 1, 0);
  for (std::size_t r = 0; r < n_rows; ++r) g.adj_offsets_[r + 1] = g.adj_offsets_[r] + degree[r];
  g.adj_.resize(g.adj_offsets_.back());

  std::vector<std::size_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (const auto& [key, delay] : min_delay_) {
    const auto u = static_cast<std::uint32_t>(key >> 32);
    const auto t = static_cast<std::uint32_t>(key & 0xffffffffu);
    const double w = edge_weight(delay);
    g.adj_[cursor[u]++] = {NodeRef{NodeKind::Tweet, t}, w};
    g.adj_[cursor[n_users + t]++] = {NodeRef{NodeKind::User, u}, w};
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[r]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[r + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return g;
}

HetGraph HetGraph::build(const std::vector<EdgeRecord>& edges) {
  GraphBuilder b;
  for (const EdgeRecord& e : edges) {
    b.spread(b.user(e.user_id), b.tweet(e.tweet_id), e.delay_minutes);
  }
  HetGraph g = b.finish();
  // flat input shares one id namespace: the same string on both sides is a
  // type ambiguity
  for (const std::string& uid : g.user_ids_) {
    if (g.tweet_index_.count(uid))
      fail(ErrorCode::InvalidArgument, "id appears as both user and tweet: " + uid);
  }
  return g;
}

std::optional<std::size_t> MetaPathSchema::position_of(NodeKind k) const {
  for (std::size_t i = 0; i < pattern.size(); ++i)
    if (pattern[i] == k) return i;
  return std::nullopt;
}

void MetaPathSchema::validate(const HetGraph& g) const {
  if (pattern.size() < 2) fail(ErrorCode::Config, "meta path pattern needs length >= 2");
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const NodeKind a = pattern[i];
    const NodeKind b = pattern[(i + 1) % pattern.size()];
    if (!g.has_relation(a, b))
      fail(ErrorCode::Config, std::string("meta path step ") + kind_name(a) + "->" + kind_name(b) +
                                  " is not a graph relation");
  }
}

}  // namespace mglan
