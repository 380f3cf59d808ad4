#include "mglan/metawalk.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "mglan/error.hpp"
#include "mglan/rng.hpp"

namespace mglan {

void WalkConfig::validate() const {
  if (walk_length < 2) fail(ErrorCode::Config, "walk_length must be >= 2");
  if (walks_per_node < 1) fail(ErrorCode::Config, "walks_per_node must be >= 1");
}

std::size_t WalkCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& w : walks) n += w.size();
  return n;
}

std::vector<std::pair<NodeRef, double>> transition_distribution(const HetGraph& g, NodeRef v,
                                                                NodeKind next_kind) {
  std::vector<std::pair<NodeRef, double>> out;
  double total = 0.0;
  for (const Neighbor& n : g.neighbors(v)) {
    if (n.node.kind != next_kind) continue;
    out.emplace_back(n.node, n.weight);
    total += n.weight;
  }
  if (total <= 0.0) return {};
  for (auto& [node, p] : out) p /= total;
  return out;
}

namespace {

// Cumulative-weight sampler over a neighbor span restricted to one kind.
std::optional<NodeRef> sample_from_span(std::span<const Neighbor> nbrs, NodeKind next_kind,
                                        std::mt19937_64& rng) {
  double total = 0.0;
  for (const Neighbor& n : nbrs)
    if (n.node.kind == next_kind) total += n.weight;
  if (total <= 0.0) return std::nullopt;
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  const Neighbor* last = nullptr;
  for (const Neighbor& n : nbrs) {
    if (n.node.kind != next_kind) continue;
    acc += n.weight;
    last = &n;
    if (acc >= target) return n.node;
  }
  return last->node;  // float slack lands on the final candidate
}

}  // namespace

std::optional<NodeRef> sample_next(const HetGraph& g, NodeRef v, NodeKind next_kind,
                                   std::mt19937_64& rng) {
  return sample_from_span(g.neighbors(v), next_kind, rng);
}

WalkCorpus generate_walks(const HetGraph& g, const WalkConfig& cfg) {
  cfg.validate();
  cfg.pattern.validate(g);

  std::vector<NodeRef> starts;
  starts.reserve(g.node_count());
  for (std::size_t r = 0; r < g.node_count(); ++r) {
    const NodeRef v = g.node_at_row(r);
    if (cfg.pattern.position_of(v.kind)) starts.push_back(v);
  }

  WalkCorpus corpus;
  corpus.walks.resize(starts.size() * cfg.walks_per_node);

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      const NodeRef start = starts[s];
      const std::size_t pat_pos = *cfg.pattern.position_of(start.kind);
      for (std::size_t k = 0; k < cfg.walks_per_node; ++k) {
        std::mt19937_64 rng(derive_seed(cfg.rng_seed, g.row_index(start), k));
        std::vector<NodeRef>& walk = corpus.walks[s * cfg.walks_per_node + k];
        walk.reserve(cfg.walk_length);
        walk.push_back(start);
        NodeRef cur = start;
        for (std::size_t step = 1; step < cfg.walk_length; ++step) {
          const NodeKind next_kind = cfg.pattern.kind_at(pat_pos + step);
          const auto next = sample_from_span(g.neighbors(cur), next_kind, rng);
          if (!next) break;  // dead end: Eq. 3 assigns zero mass everywhere
          walk.push_back(*next);
          cur = *next;
        }
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, cfg.threads);
  if (threads == 1 || starts.size() < 2 * threads) {
    run_range(0, starts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (starts.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(starts.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return corpus;
}

void write_corpus(const WalkCorpus& corpus, std::ostream& out) {
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << kind_tag(walk[i].kind) << walk[i].index;
    }
    out << '\n';
  }
}

}  // namespace mglan
