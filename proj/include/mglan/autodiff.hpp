#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mglan {

using Shape = std::vector<std::size_t>;

namespace detail {
struct TensorNode {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;

  std::size_t size() const { return value.size(); }
  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};
}  // namespace detail

/// Value-semantic handle to a node in a dynamically built computation graph.
/// Graphs are confined to one thread per training step and freed once the
/// root handle is dropped.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double v);
  static Tensor row(std::vector<double> values);  // shape {1, n}

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t size() const { return node_->size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return node_->value; }
  std::span<double> values_mut() { return node_->value; }
  std::span<const double> grad() const { return node_->grad; }
  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool v) { node_->requires_grad = v; }
  void zero_grad();
  double item() const;

  double at(std::size_t r, std::size_t c) const;

  detail::TensorNode* node() const { return node_.get(); }
  std::shared_ptr<detail::TensorNode> shared_node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::TensorNode> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<detail::TensorNode> node_;
};

/// Reverse-mode sweep from a scalar root; accumulates into .grad of every
/// requires_grad tensor reachable through the graph.
void backward(const Tensor& loss);

/// Neighborhood index for attention over a graph, self-loop first per node.
/// score_bias holds an additive per-edge term on pre-softmax scores (zero
/// unless edge-weight biasing is enabled).
struct GatTopology {
  std::size_t node_count = 0;
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> neighbors;
  std::vector<double> score_bias;
};

namespace ad {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);
Tensor add_n(std::span<const Tensor> ts);
Tensor concat_rows(std::span<const Tensor> ts);
Tensor concat_cols(std::span<const Tensor> ts);
Tensor slice_rows(const Tensor& a, std::size_t lo, std::size_t hi);
Tensor gather_rows(const Tensor& a, std::vector<std::uint32_t> indices);
/// Sliding windows over rows: {L, d} -> {L-w+1, w*d}; row i is rows i..i+w-1
/// flattened. Feeds 1-D convolution as a single matmul.
Tensor im2col1d(const Tensor& a, std::size_t window);
Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor elu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor softmax(const Tensor& a, int axis);  // rows: axis=1, cols: axis=0
Tensor log(const Tensor& a);
Tensor mean_all(const Tensor& a);
Tensor sum_all(const Tensor& a);
Tensor mean_rows(const Tensor& a);  // {m,n} -> {1,n}
Tensor max_rows(const Tensor& a);   // {m,n} -> {1,n}; grad routes to first max
Tensor reshape(const Tensor& a, Shape shape);
/// Stabilized -log softmax(logits)[label] for a {1, C} row.
Tensor cross_entropy_logits(const Tensor& logits, std::size_t label);
/// Softmax attention over per-node neighbor lists:
/// e_ij = leaky_relu(self_scores[i] + nbr_scores[j]) + bias_ij, normalized
/// over j in topo[i]; output row i is sum_j alpha_ij * h[j].
Tensor graph_attention(const Tensor& self_scores, const Tensor& nbr_scores, const Tensor& h,
                       std::shared_ptr<const GatTopology> topo, double leaky_slope);

}  // namespace ad

/// Attention coefficients as computed by ad::graph_attention, for inspection.
std::vector<std::vector<double>> attention_coefficients(std::span<const double> self_scores,
                                                        std::span<const double> nbr_scores,
                                                        const GatTopology& topo,
                                                        double leaky_slope);

/// Max relative error between analytic and central-difference gradients of a
/// scalar-valued tensor program, over every coordinate of every input.
double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                  std::vector<Tensor> inputs, double h = 1e-5);

std::string shape_str(const Shape& s);

}  // namespace mglan
