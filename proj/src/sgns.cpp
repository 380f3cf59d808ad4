#include "mglan/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <thread>

#include "mglan/error.hpp"
#include "mglan/rng.hpp"
#include "mglan/util.hpp"

namespace mglan {

EmbeddingMatrix::EmbeddingMatrix(std::size_t user_count, std::size_t tweet_count, std::size_t dim)
    : user_count_(user_count),
      tweet_count_(tweet_count),
      dim_(dim),
      input_((user_count + tweet_count) * dim, 0.0),
      output_((user_count + tweet_count) * dim, 0.0) {}

EmbeddingMatrix EmbeddingMatrix::seeded(std::size_t user_count, std::size_t tweet_count,
                                        std::size_t dim, std::uint64_t seed) {
  EmbeddingMatrix m(user_count, tweet_count, dim);
  std::mt19937_64 rng(derive_seed(seed, 0x5eed));
  const double half = 0.5 / static_cast<double>(dim);
  for (double& v : m.input_) v = uniform_in(rng, -half, half);
  return m;
}

EmbeddingMatrix EmbeddingMatrix::random_normal(std::size_t user_count, std::size_t tweet_count,
                                               std::size_t dim, std::uint64_t seed) {
  EmbeddingMatrix m(user_count, tweet_count, dim);
  std::mt19937_64 rng(derive_seed(seed, 0x60a1));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : m.input_) v = normal(rng);
  return m;
}

bool EmbeddingMatrix::all_finite() const {
  for (double v : input_)
    if (!std::isfinite(v)) return false;
  for (double v : output_)
    if (!std::isfinite(v)) return false;
  return true;
}

void EmbeddingMatrix::save_text(std::ostream& out) const {
  out << rows() << ' ' << dim_ << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    if (r < user_count_)
      out << 'U' << r;
    else
      out << 'T' << (r - user_count_);
    const auto row = input_row(r);
    for (double v : row) out << ' ' << format_double(v);
    out << '\n';
  }
}

namespace {
constexpr char kEmbMagic[8] = {'M', 'G', 'L', 'E', 'M', 'B', '1', '\n'};

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f32(std::ofstream& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

float get_f32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}
}  // namespace

void EmbeddingMatrix::save_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write: " + path.string());
  out.write(kEmbMagic, sizeof(kEmbMagic));
  put_u64(out, user_count_);
  put_u64(out, tweet_count_);
  put_u64(out, dim_);
  for (double v : input_) put_f32(out, static_cast<float>(v));
  if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

EmbeddingMatrix EmbeddingMatrix::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kEmbMagic, 8) != 0)
    fail(ErrorCode::Parse, "not an embedding file: " + path.string());
  const std::uint64_t users = get_u64(in);
  const std::uint64_t tweets = get_u64(in);
  const std::uint64_t dim = get_u64(in);
  EmbeddingMatrix m(users, tweets, dim);
  for (double& v : m.input_) v = static_cast<double>(get_f32(in));
  if (!in) fail(ErrorCode::Parse, "truncated embedding file: " + path.string());
  return m;
}

void SgnsConfig::validate() const {
  if (dim < 1) fail(ErrorCode::Config, "embedding dim must be >= 1");
  if (context_size < 1) fail(ErrorCode::Config, "context_size must be >= 1");
  if (negatives < 1) fail(ErrorCode::Config, "negatives must be >= 1");
  if (!(initial_lr > 0.0)) fail(ErrorCode::Config, "learning rate must be > 0");
}

void for_each_pair(const WalkCorpus& corpus, std::size_t context_size,
                   const std::function<void(NodeRef, NodeRef)>& fn) {
  for (const auto& walk : corpus.walks) {
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= context_size ? i - context_size : 0;
      const std::size_t hi = std::min(n - 1, i + context_size);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        fn(walk[i], walk[j]);
      }
    }
  }
}

std::vector<std::pair<NodeRef, NodeRef>> extract_pairs(const WalkCorpus& corpus,
                                                       std::size_t context_size) {
  std::vector<std::pair<NodeRef, NodeRef>> out;
  for_each_pair(corpus, context_size, [&](NodeRef c, NodeRef o) { out.emplace_back(c, o); });
  return out;
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// -log sigma(z) evaluated without overflow
inline double softplus_neg(double z) { return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

double step_on_rows(std::span<double> x, std::span<double> y_pos,
                    const std::vector<std::span<double>>& y_negs, double lr) {
  const std::size_t d = x.size();
  std::vector<double> dx(d, 0.0);
  double loss = 0.0;

  double z = 0.0;
  for (std::size_t i = 0; i < d; ++i) z += x[i] * y_pos[i];
  loss += softplus_neg(z);
  const double g_pos = 1.0 - sigmoid(z);
  for (std::size_t i = 0; i < d; ++i) {
    dx[i] += g_pos * y_pos[i];
    y_pos[i] += lr * g_pos * x[i];
  }

  for (const auto& y_neg : y_negs) {
    double zn = 0.0;
    for (std::size_t i = 0; i < d; ++i) zn += x[i] * y_neg[i];
    loss += softplus_neg(-zn);
    const double g_neg = -sigmoid(zn);
    for (std::size_t i = 0; i < d; ++i) {
      dx[i] += g_neg * y_neg[i];
      y_neg[i] += lr * g_neg * x[i];
    }
  }

  for (std::size_t i = 0; i < d; ++i) x[i] += lr * dx[i];
  return loss;
}

// per-kind unigram^(3/4) negative sampler built from corpus frequencies
struct NegativeSampler {
  std::vector<std::uint32_t> user_nodes, tweet_nodes;
  AliasTable user_table, tweet_table;

  NegativeSampler(const WalkCorpus& corpus, std::size_t user_count, std::size_t tweet_count) {
    std::vector<double> user_freq(user_count, 0.0), tweet_freq(tweet_count, 0.0);
    for (const auto& walk : corpus.walks)
      for (NodeRef v : walk)
        (v.kind == NodeKind::User ? user_freq[v.index] : tweet_freq[v.index]) += 1.0;

    auto build = [](std::vector<double>& freq, std::vector<std::uint32_t>& nodes) {
      std::vector<double> weights;
      for (std::uint32_t i = 0; i < freq.size(); ++i) {
        if (freq[i] <= 0.0) continue;
        nodes.push_back(i);
        weights.push_back(std::pow(freq[i], 0.75));
      }
      return weights.empty() ? AliasTable() : AliasTable(weights);
    };
    user_table = build(user_freq, user_nodes);
    tweet_table = build(tweet_freq, tweet_nodes);
  }

  // negatives share the context node's kind; avoid the context itself when
  // the kind has alternatives
  NodeRef draw(NodeKind kind, NodeRef context, std::mt19937_64& rng) const {
    const auto& table = kind == NodeKind::User ? user_table : tweet_table;
    const auto& nodes = kind == NodeKind::User ? user_nodes : tweet_nodes;
    for (int attempt = 0; attempt < 3; ++attempt) {
      const NodeRef cand{kind, nodes[table.sample(rng)]};
      if (cand != context || nodes.size() == 1) return cand;
    }
    return NodeRef{kind, nodes[table.sample(rng)]};
  }
};

}  // namespace

double sgns_step(EmbeddingMatrix& emb, NodeRef center, NodeRef context,
                 std::span<const NodeRef> negatives, double lr) {
  std::vector<std::span<double>> y_negs;
  y_negs.reserve(negatives.size());
  for (NodeRef n : negatives) y_negs.push_back(emb.output_row(emb.row_index(n)));
  return step_on_rows(emb.input_row(emb.row_index(center)),
                      emb.output_row(emb.row_index(context)), y_negs, lr);
}

SgnsTrainResult train_embeddings(const HetGraph& g, const WalkConfig& walk_cfg,
                                 const SgnsConfig& cfg) {
  cfg.validate();
  if (g.node_count() == 0) fail(ErrorCode::Config, "cannot embed an empty graph");

  SgnsTrainResult result;
  result.embeddings =
      EmbeddingMatrix::seeded(g.user_count(), g.tweet_count(), cfg.dim, cfg.rng_seed);
  EmbeddingMatrix& emb = result.embeddings;

  const WalkCorpus corpus = generate_walks(g, walk_cfg);
  std::size_t total_pairs = 0;
  for (const auto& walk : corpus.walks) {
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i)
      total_pairs += std::min(i, cfg.context_size) + std::min(n - 1 - i, cfg.context_size);
  }
  if (total_pairs == 0) {
    result.empty_corpus = true;
    return result;
  }

  const NegativeSampler sampler(corpus, g.user_count(), g.tweet_count());
  const double total_updates = static_cast<double>(total_pairs) * static_cast<double>(cfg.epochs);

  if (cfg.threads <= 1) {
    std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0xca11));
    std::vector<NodeRef> negs(cfg.negatives);
    std::size_t done = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      double epoch_loss = 0.0;
      std::size_t epoch_pairs = 0;
      for_each_pair(corpus, cfg.context_size, [&](NodeRef center, NodeRef context) {
        const double lr = std::max(
            cfg.min_lr, cfg.initial_lr * (1.0 - static_cast<double>(done) / total_updates));
        for (std::size_t k = 0; k < cfg.negatives; ++k)
          negs[k] = sampler.draw(context.kind, context, rng);
        epoch_loss += sgns_step(emb, center, context, negs, lr);
        ++done;
        ++epoch_pairs;
      });
      result.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(epoch_pairs));
    }
    return result;
  }

  // Lock-free shared-update mode: walk ranges are split across threads that
  // write into the shared matrices without synchronization. Races are
  // tolerated by contract; determinism is forfeited.
  const std::size_t threads = cfg.threads;
  std::vector<double> epoch_loss_acc(cfg.epochs, 0.0);
  std::atomic<std::size_t> done{0};
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::atomic<double> epoch_loss{0.0};
    std::atomic<std::size_t> epoch_pairs{0};
    auto worker = [&](std::size_t tid) {
      std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0xca11 + epoch, tid));
      std::vector<NodeRef> negs(cfg.negatives);
      double local_loss = 0.0;
      std::size_t local_pairs = 0;
      WalkCorpus shard;
      for (std::size_t w = tid; w < corpus.walks.size(); w += threads)
        shard.walks.push_back(corpus.walks[w]);
      for_each_pair(shard, cfg.context_size, [&](NodeRef center, NodeRef context) {
        const std::size_t t = done.fetch_add(1, std::memory_order_relaxed);
        const double lr = std::max(
            cfg.min_lr, cfg.initial_lr * (1.0 - static_cast<double>(t) / total_updates));
        for (std::size_t k = 0; k < cfg.negatives; ++k)
          negs[k] = sampler.draw(context.kind, context, rng);
        local_loss += sgns_step(emb, center, context, negs, lr);
        ++local_pairs;
      });
      epoch_loss.fetch_add(local_loss, std::memory_order_relaxed);
      epoch_pairs.fetch_add(local_pairs, std::memory_order_relaxed);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
    result.epoch_mean_loss.push_back(epoch_loss.load() /
                                     static_cast<double>(std::max<std::size_t>(1, epoch_pairs.load())));
  }
  return result;
}

}  // namespace mglan
