#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "mglan/hetgraph.hpp"

namespace mglan {

struct WalkConfig {
  std::size_t walk_length = 100;
  std::size_t walks_per_node = 5;
  MetaPathSchema pattern = MetaPathSchema::user_tweet();
  std::uint64_t rng_seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

struct WalkCorpus {
  std::vector<std::vector<NodeRef>> walks;

  std::size_t token_count() const;
};

/// Normalized next-step distribution over neighbors of `v` whose kind is
/// `next_kind`: p(u) = w(v,u) / sum over that set. Empty when `v` has no
/// neighbor of the requested kind (dead end).
std::vector<std::pair<NodeRef, double>> transition_distribution(const HetGraph& g, NodeRef v,
                                                                NodeKind next_kind);

/// One weighted step; nullopt at a dead end. Exposed so distribution
/// conformance can be checked directly against transition_distribution.
std::optional<NodeRef> sample_next(const HetGraph& g, NodeRef v, NodeKind next_kind,
                                   std::mt19937_64& rng);

/// Meta-path-constrained weighted walks from every node whose kind appears in
/// the pattern. Each walk's RNG stream is derived from (seed, start row, walk
/// index), so the corpus is identical regardless of thread count. Walks
/// truncate at dead ends.
WalkCorpus generate_walks(const HetGraph& g, const WalkConfig& cfg);

/// One walk per line, space-separated "U<idx>"/"T<idx>" tokens.
void write_corpus(const WalkCorpus& corpus, std::ostream& out);

}  // namespace mglan
