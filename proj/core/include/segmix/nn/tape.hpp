#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "segmix/nn/params.hpp"
#include "segmix/nn/tensor.hpp"

namespace segmix::nn {

class Tape;

// Handle to a node on a tape.
struct Value {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over a small fixed operator set. A tape records one
// forward computation; backward() runs a single reverse sweep and accumulates
// parameter gradients into the bound ParamSet objects.
//
// All tensors on the tape are rank 2. Batched networks put the batch in the
// row dimension.
class Tape {
 public:
  // Leaf holding a constant; no gradient is tracked through it.
  Value constant(Tensor t);

  // Leaf bound to ps.value(name); backward() adds into ps.grad(name).
  Value param(ParamSet& ps, const std::string& name);

  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);  // elementwise
  Value scale(Value a, double c);
  Value add_scalar(Value a, double c);

  // y[B,out] = x[B,in] * w[out,in]^T
  Value linear(Value x, Value w);
  // y[B,F] = x[B,F] + b[1,F] broadcast over rows
  Value add_bias(Value x, Value b);

  Value sigmoid(Value a);
  Value tanh(Value a);
  Value relu(Value a);
  Value elu(Value a);
  Value abs(Value a);

  Value concat_cols(const std::vector<Value>& xs);
  // y[B,1] with y[b] = x[b, idx[b]]
  Value gather_cols(Value x, std::vector<int> idx);
  Value reshape(Value x, std::size_t rows, std::size_t cols);
  // Per-row bilinear form: y[b,o] = sum_i x[b,i] * w[b, i*out + o].
  // Used by the mixing network whose layer weights vary per sample.
  Value row_bilinear(Value x, Value w, std::size_t out);
  Value row_sum(Value x);  // [B,F] -> [B,1]
  Value sum_all(Value x);  // -> [1,1]

  const Tensor& value(Value v) const;
  double scalar(Value v) const;

  // Reverse sweep from a scalar loss node. Throws std::logic_error if no
  // forward computation has been recorded or the node is not scalar.
  void backward(Value loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    kConstant, kParam, kAdd, kSub, kMul, kScale, kAddScalar, kLinear, kAddBias,
    kSigmoid, kTanh, kRelu, kElu, kAbs, kConcat, kGather, kReshape,
    kRowBilinear, kRowSum, kSumAll,
  };

  struct Node {
    Op op;
    Tensor val;
    Tensor grad;
    int a = -1;
    int b = -1;
    std::vector<int> parents;  // concat only
    std::vector<int> idx;      // gather only
    double c = 0.0;
    std::size_t aux = 0;  // row_bilinear: out width
    bool needs_grad = false;
    ParamSet* bound_set = nullptr;
    std::string bound_name;
  };

  std::vector<Node> nodes_;

  int push(Node n);
  Value make_unary(Op op, Value a, double c = 0.0);
  Value make_binary(Op op, Value a, Value b);
  const Node& node(Value v) const;
  void check(Value v) const;
  void propagate(int i);
};

}  // namespace segmix::nn
