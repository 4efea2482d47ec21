#include "segmix/nn/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels.hpp"

namespace segmix::nn {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::check(Value v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size()))
    throw std::logic_error("Tape: value handle does not belong to this tape");
}

const Tape::Node& Tape::node(Value v) const {
  check(v);
  return nodes_[v.id];
}

Value Tape::constant(Tensor t) {
  Node n;
  n.op = Op::kConstant;
  n.val = std::move(t);
  n.needs_grad = false;
  return {push(std::move(n))};
}

Value Tape::param(ParamSet& ps, const std::string& name) {
  Node n;
  n.op = Op::kParam;
  n.val = ps.value(name);
  n.needs_grad = true;
  n.bound_set = &ps;
  n.bound_name = name;
  return {push(std::move(n))};
}

Value Tape::make_unary(Op op, Value a, double c) {
  check(a);
  Node n;
  n.op = op;
  n.a = a.id;
  n.c = c;
  n.needs_grad = nodes_[a.id].needs_grad;
  const Tensor& x = nodes_[a.id].val;
  n.val = Tensor(x.rows(), x.cols());
  switch (op) {
    case Op::kScale:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = c * x[i];
      break;
    case Op::kAddScalar:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = x[i] + c;
      break;
    case Op::kSigmoid:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = 1.0 / (1.0 + std::exp(-x[i]));
      break;
    case Op::kTanh:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = std::tanh(x[i]);
      break;
    case Op::kRelu:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = x[i] > 0.0 ? x[i] : 0.0;
      break;
    case Op::kElu:
      for (std::size_t i = 0; i < x.numel(); ++i)
        n.val[i] = x[i] > 0.0 ? x[i] : std::exp(x[i]) - 1.0;
      break;
    case Op::kAbs:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = std::fabs(x[i]);
      break;
    default:
      throw std::logic_error("Tape: bad unary op");
  }
  return {push(std::move(n))};
}

Value Tape::make_binary(Op op, Value a, Value b) {
  check(a);
  check(b);
  const Tensor& x = nodes_[a.id].val;
  const Tensor& y = nodes_[b.id].val;
  require(x.same_shape(y), "Tape: elementwise op shape mismatch");
  Node n;
  n.op = op;
  n.a = a.id;
  n.b = b.id;
  n.needs_grad = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
  n.val = Tensor(x.rows(), x.cols());
  switch (op) {
    case Op::kAdd:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = x[i] + y[i];
      break;
    case Op::kSub:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = x[i] - y[i];
      break;
    case Op::kMul:
      for (std::size_t i = 0; i < x.numel(); ++i) n.val[i] = x[i] * y[i];
      break;
    default:
      throw std::logic_error("Tape: bad binary op");
  }
  return {push(std::move(n))};
}

Value Tape::add(Value a, Value b) { return make_binary(Op::kAdd, a, b); }
Value Tape::sub(Value a, Value b) { return make_binary(Op::kSub, a, b); }
Value Tape::mul(Value a, Value b) { return make_binary(Op::kMul, a, b); }
Value Tape::scale(Value a, double c) { return make_unary(Op::kScale, a, c); }
Value Tape::add_scalar(Value a, double c) { return make_unary(Op::kAddScalar, a, c); }
Value Tape::sigmoid(Value a) { return make_unary(Op::kSigmoid, a); }
Value Tape::tanh(Value a) { return make_unary(Op::kTanh, a); }
Value Tape::relu(Value a) { return make_unary(Op::kRelu, a); }
Value Tape::elu(Value a) { return make_unary(Op::kElu, a); }
Value Tape::abs(Value a) { return make_unary(Op::kAbs, a); }

Value Tape::linear(Value x, Value w) {
  check(x);
  check(w);
  const Tensor& xv = nodes_[x.id].val;
  const Tensor& wv = nodes_[w.id].val;
  require(xv.cols() == wv.cols(), "Tape: linear input width does not match weight fan-in");
  Node n;
  n.op = Op::kLinear;
  n.a = x.id;
  n.b = w.id;
  n.needs_grad = nodes_[x.id].needs_grad || nodes_[w.id].needs_grad;
  n.val = Tensor(xv.rows(), wv.rows());
  kernels::linear(n.val, xv, wv);
  return {push(std::move(n))};
}

Value Tape::add_bias(Value x, Value b) {
  check(x);
  check(b);
  const Tensor& xv = nodes_[x.id].val;
  const Tensor& bv = nodes_[b.id].val;
  require(bv.rows() == 1 && bv.cols() == xv.cols(), "Tape: bias shape mismatch");
  Node n;
  n.op = Op::kAddBias;
  n.a = x.id;
  n.b = b.id;
  n.needs_grad = nodes_[x.id].needs_grad || nodes_[b.id].needs_grad;
  n.val = xv;
  for (std::size_t r = 0; r < xv.rows(); ++r)
    for (std::size_t c = 0; c < xv.cols(); ++c) n.val.at(r, c) += bv.at(0, c);
  return {push(std::move(n))};
}

Value Tape::concat_cols(const std::vector<Value>& xs) {
  require(!xs.empty(), "Tape: concat of nothing");
  std::size_t rows = node(xs[0]).val.rows();
  std::size_t cols = 0;
  bool needs = false;
  for (Value v : xs) {
    require(node(v).val.rows() == rows, "Tape: concat row mismatch");
    cols += node(v).val.cols();
    needs = needs || node(v).needs_grad;
  }
  Node n;
  n.op = Op::kConcat;
  n.needs_grad = needs;
  n.val = Tensor(rows, cols);
  for (Value v : xs) n.parents.push_back(v.id);
  std::size_t off = 0;
  for (Value v : xs) {
    const Tensor& x = node(v).val;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) n.val.at(r, off + c) = x.at(r, c);
    off += x.cols();
  }
  return {push(std::move(n))};
}

Value Tape::gather_cols(Value x, std::vector<int> idx) {
  check(x);
  const Tensor& xv = nodes_[x.id].val;
  require(idx.size() == xv.rows(), "Tape: gather index count must equal rows");
  Node n;
  n.op = Op::kGather;
  n.a = x.id;
  n.needs_grad = nodes_[x.id].needs_grad;
  n.val = Tensor(xv.rows(), 1);
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    require(idx[r] >= 0 && idx[r] < static_cast<int>(xv.cols()), "Tape: gather index out of range");
    n.val.at(r, 0) = xv.at(r, static_cast<std::size_t>(idx[r]));
  }
  n.idx = std::move(idx);
  return {push(std::move(n))};
}

Value Tape::reshape(Value x, std::size_t rows, std::size_t cols) {
  check(x);
  const Tensor& xv = nodes_[x.id].val;
  require(rows * cols == xv.numel(), "Tape: reshape element count mismatch");
  Node n;
  n.op = Op::kReshape;
  n.a = x.id;
  n.needs_grad = nodes_[x.id].needs_grad;
  n.val = Tensor(rows, cols);
  n.val.data() = xv.data();
  return {push(std::move(n))};
}

Value Tape::row_bilinear(Value x, Value w, std::size_t out) {
  check(x);
  check(w);
  const Tensor& xv = nodes_[x.id].val;
  const Tensor& wv = nodes_[w.id].val;
  require(wv.rows() == xv.rows() && wv.cols() == xv.cols() * out,
          "Tape: row_bilinear weight must be [B, in*out]");
  Node n;
  n.op = Op::kRowBilinear;
  n.a = x.id;
  n.b = w.id;
  n.aux = out;
  n.needs_grad = nodes_[x.id].needs_grad || nodes_[w.id].needs_grad;
  n.val = Tensor(xv.rows(), out);
  std::size_t in = xv.cols();
  for (std::size_t r = 0; r < xv.rows(); ++r)
    for (std::size_t o = 0; o < out; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < in; ++i) acc += xv.at(r, i) * wv.at(r, i * out + o);
      n.val.at(r, o) = acc;
    }
  return {push(std::move(n))};
}

Value Tape::row_sum(Value x) {
  check(x);
  const Tensor& xv = nodes_[x.id].val;
  Node n;
  n.op = Op::kRowSum;
  n.a = x.id;
  n.needs_grad = nodes_[x.id].needs_grad;
  n.val = Tensor(xv.rows(), 1);
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < xv.cols(); ++c) acc += xv.at(r, c);
    n.val.at(r, 0) = acc;
  }
  return {push(std::move(n))};
}

Value Tape::sum_all(Value x) {
  check(x);
  const Tensor& xv = nodes_[x.id].val;
  Node n;
  n.op = Op::kSumAll;
  n.a = x.id;
  n.needs_grad = nodes_[x.id].needs_grad;
  n.val = Tensor(1, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < xv.numel(); ++i) acc += xv[i];
  n.val[0] = acc;
  return {push(std::move(n))};
}

const Tensor& Tape::value(Value v) const { return node(v).val; }

double Tape::scalar(Value v) const {
  const Tensor& t = node(v).val;
  if (t.numel() != 1) throw std::logic_error("Tape: scalar() on non-scalar node");
  return t[0];
}

void Tape::propagate(int i) {
  Node& n = nodes_[i];
  const Tensor& g = n.grad;
  auto pgrad = [&](int p) -> Tensor& { return nodes_[p].grad; };
  auto pneeds = [&](int p) { return nodes_[p].needs_grad; };
  switch (n.op) {
    case Op::kConstant:
    case Op::kParam:
      break;
    case Op::kAdd:
      if (pneeds(n.a)) pgrad(n.a).add_scaled(g, 1.0);
      if (pneeds(n.b)) pgrad(n.b).add_scaled(g, 1.0);
      break;
    case Op::kSub:
      if (pneeds(n.a)) pgrad(n.a).add_scaled(g, 1.0);
      if (pneeds(n.b)) pgrad(n.b).add_scaled(g, -1.0);
      break;
    case Op::kMul: {
      const Tensor& av = nodes_[n.a].val;
      const Tensor& bv = nodes_[n.b].val;
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k) ga[k] += g[k] * bv[k];
      }
      if (pneeds(n.b)) {
        Tensor& gb = pgrad(n.b);
        for (std::size_t k = 0; k < g.numel(); ++k) gb[k] += g[k] * av[k];
      }
      break;
    }
    case Op::kScale:
      if (pneeds(n.a)) pgrad(n.a).add_scaled(g, n.c);
      break;
    case Op::kAddScalar:
      if (pneeds(n.a)) pgrad(n.a).add_scaled(g, 1.0);
      break;
    case Op::kLinear: {
      if (pneeds(n.a)) kernels::linear_back_input(pgrad(n.a), g, nodes_[n.b].val);
      if (pneeds(n.b)) kernels::linear_back_weight(pgrad(n.b), g, nodes_[n.a].val);
      break;
    }
    case Op::kAddBias: {
      if (pneeds(n.a)) pgrad(n.a).add_scaled(g, 1.0);
      if (pneeds(n.b)) {
        Tensor& gb = pgrad(n.b);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) gb.at(0, c) += g.at(r, c);
      }
      break;
    }
    case Op::kSigmoid: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k) {
          double s = n.val[k];
          ga[k] += g[k] * s * (1.0 - s);
        }
      }
      break;
    }
    case Op::kTanh: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k) {
          double t = n.val[k];
          ga[k] += g[k] * (1.0 - t * t);
        }
      }
      break;
    }
    case Op::kRelu: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k)
          if (n.val[k] > 0.0) ga[k] += g[k];
      }
      break;
    }
    case Op::kElu: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k)
          ga[k] += g[k] * (n.val[k] > 0.0 ? 1.0 : n.val[k] + 1.0);
      }
      break;
    }
    case Op::kAbs: {
      if (pneeds(n.a)) {
        const Tensor& av = nodes_[n.a].val;
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k) {
          double s = av[k] > 0.0 ? 1.0 : (av[k] < 0.0 ? -1.0 : 0.0);
          ga[k] += g[k] * s;
        }
      }
      break;
    }
    case Op::kConcat: {
      std::size_t off = 0;
      for (int p : n.parents) {
        const Tensor& pv = nodes_[p].val;
        if (pneeds(p)) {
          Tensor& gp = pgrad(p);
          for (std::size_t r = 0; r < pv.rows(); ++r)
            for (std::size_t c = 0; c < pv.cols(); ++c) gp.at(r, c) += g.at(r, off + c);
        }
        off += pv.cols();
      }
      break;
    }
    case Op::kGather: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t r = 0; r < g.rows(); ++r)
          ga.at(r, static_cast<std::size_t>(n.idx[r])) += g.at(r, 0);
      }
      break;
    }
    case Op::kReshape: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t k = 0; k < g.numel(); ++k) ga[k] += g[k];
      }
      break;
    }
    case Op::kRowBilinear: {
      const Tensor& xv = nodes_[n.a].val;
      const Tensor& wv = nodes_[n.b].val;
      std::size_t in = xv.cols();
      std::size_t out = n.aux;
      if (pneeds(n.a)) {
        Tensor& gx = pgrad(n.a);
        for (std::size_t r = 0; r < xv.rows(); ++r)
          for (std::size_t i = 0; i < in; ++i) {
            double acc = 0.0;
            for (std::size_t o = 0; o < out; ++o) acc += g.at(r, o) * wv.at(r, i * out + o);
            gx.at(r, i) += acc;
          }
      }
      if (pneeds(n.b)) {
        Tensor& gw = pgrad(n.b);
        for (std::size_t r = 0; r < xv.rows(); ++r)
          for (std::size_t i = 0; i < in; ++i)
            for (std::size_t o = 0; o < out; ++o)
              gw.at(r, i * out + o) += g.at(r, o) * xv.at(r, i);
      }
      break;
    }
    case Op::kRowSum: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        for (std::size_t r = 0; r < ga.rows(); ++r)
          for (std::size_t c = 0; c < ga.cols(); ++c) ga.at(r, c) += g.at(r, 0);
      }
      break;
    }
    case Op::kSumAll: {
      if (pneeds(n.a)) {
        Tensor& ga = pgrad(n.a);
        double gs = g[0];
        for (std::size_t k = 0; k < ga.numel(); ++k) ga[k] += gs;
      }
      break;
    }
  }
}

void Tape::backward(Value loss) {
  if (nodes_.empty()) throw std::logic_error("Tape: backward before any forward computation");
  check(loss);
  Node& ln = nodes_[loss.id];
  if (ln.val.numel() != 1) throw std::logic_error("Tape: backward requires a scalar loss");
  for (Node& n : nodes_)
    if (n.needs_grad) {
      n.grad = Tensor(n.val.rows(), n.val.cols());
    }
  if (!ln.needs_grad) return;  // loss does not depend on any parameter
  ln.grad[0] = 1.0;
  for (int i = loss.id; i >= 0; --i)
    if (nodes_[i].needs_grad) propagate(i);
  for (Node& n : nodes_)
    if (n.op == Op::kParam && n.bound_set != nullptr)
      n.bound_set->grad(n.bound_name).add_scaled(n.grad, 1.0);
}

}  // namespace segmix::nn
