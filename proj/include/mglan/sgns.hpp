#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mglan/hetgraph.hpp"
#include "mglan/metawalk.hpp"

namespace mglan {

/// n x d node representations, users first then tweets. The output/context
/// matrix exists only for training; the input matrix is the learned X.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t user_count, std::size_t tweet_count, std::size_t dim);

  /// word2vec-style init: input uniform in [-0.5/d, 0.5/d], output zeros.
  static EmbeddingMatrix seeded(std::size_t user_count, std::size_t tweet_count, std::size_t dim,
                                std::uint64_t seed);
  /// Standard-normal rows; stands in for X when features are not learned.
  static EmbeddingMatrix random_normal(std::size_t user_count, std::size_t tweet_count,
                                       std::size_t dim, std::uint64_t seed);

  std::size_t user_count() const { return user_count_; }
  std::size_t tweet_count() const { return tweet_count_; }
  std::size_t rows() const { return user_count_ + tweet_count_; }
  std::size_t dim() const { return dim_; }

  std::size_t row_index(NodeRef v) const {
    return v.kind == NodeKind::User ? v.index : user_count_ + v.index;
  }
  std::span<double> input_row(std::size_t row) { return {input_.data() + row * dim_, dim_}; }
  std::span<const double> input_row(std::size_t row) const {
    return {input_.data() + row * dim_, dim_};
  }
  std::span<double> output_row(std::size_t row) { return {output_.data() + row * dim_, dim_}; }
  std::span<const double> input_values() const { return input_; }

  bool all_finite() const;

  /// Text dump: header "n d", then one "U<idx>|T<idx> f1 .. fd" row per node.
  void save_text(std::ostream& out) const;
  /// Raw container: magic, counts, then little-endian f32 input rows.
  void save_binary(const std::filesystem::path& path) const;
  static EmbeddingMatrix load_binary(const std::filesystem::path& path);

 private:
  std::size_t user_count_ = 0;
  std::size_t tweet_count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
};

struct SgnsConfig {
  std::size_t dim = 256;
  std::size_t context_size = 7;
  std::size_t negatives = 3;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  std::uint64_t rng_seed = 1;
  std::size_t threads = 1;  // >1 runs lock-free shared updates; determinism forfeited

  void validate() const;
};

/// All in-window skip-gram pairs: for each position i, (v_i, v_j) for j != i
/// with |i - j| <= context_size. Materialized form for tests; training uses
/// the streaming visitor.
std::vector<std::pair<NodeRef, NodeRef>> extract_pairs(const WalkCorpus& corpus,
                                                       std::size_t context_size);
void for_each_pair(const WalkCorpus& corpus, std::size_t context_size,
                   const std::function<void(NodeRef, NodeRef)>& fn);

/// One negative-sampling SGD step on log s(x_c . y_o) + sum log s(-x_c . y_n).
/// Returns the step's objective value (the loss, negated objective).
double sgns_step(EmbeddingMatrix& emb, NodeRef center, NodeRef context,
                 std::span<const NodeRef> negatives, double lr);

struct SgnsTrainResult {
  EmbeddingMatrix embeddings;
  std::vector<double> epoch_mean_loss;
  bool empty_corpus = false;
};

/// generate_walks + SGNS epochs; deterministic when cfg.threads == 1 and
/// walk_cfg.threads == 1. An all-isolated graph yields the seed-initialized
/// matrix with empty_corpus set.
SgnsTrainResult train_embeddings(const HetGraph& g, const WalkConfig& walk_cfg,
                                 const SgnsConfig& cfg);

}  // namespace mglan
