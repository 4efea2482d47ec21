#include "segmix/nn/ops.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels.hpp"

namespace segmix::nn {

void add_dense_params(ParamSet& ps, const std::string& name, std::size_t in,
                      std::size_t out, Rng& rng) {
  ps.add_uniform(name + ".w", out, in, in, rng);
  ps.add_uniform(name + ".b", 1, out, in, rng);
}

void add_gru_params(ParamSet& ps, const std::string& name, std::size_t in,
                    std::size_t hidden, Rng& rng) {
  for (const char* gate : {"r", "z", "n"}) {
    ps.add_uniform(name + ".w" + gate, hidden, in, in, rng);
    ps.add_uniform(name + ".u" + gate, hidden, hidden, hidden, rng);
    ps.add_uniform(name + ".b" + gate, 1, hidden, hidden, rng);
  }
}

namespace {

Tensor linear_eval(const Tensor& x, const Tensor& w) {
  if (x.cols() != w.cols())
    throw std::invalid_argument("dense: input width " + x.shape_str() +
                                " does not match weight " + w.shape_str());
  Tensor y(x.rows(), w.rows());
  kernels::linear(y, x, w);
  return y;
}

void add_bias_inplace(Tensor& y, const Tensor& b) {
  for (std::size_t r = 0; r < y.rows(); ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) y.at(r, c) += b.at(0, c);
}

void sigmoid_inplace(Tensor& t) {
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = 1.0 / (1.0 + std::exp(-t[i]));
}

void tanh_inplace(Tensor& t) {
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = std::tanh(t[i]);
}

}  // namespace

Tensor dense_forward(const ParamSet& ps, const std::string& name, const Tensor& input) {
  Tensor y = linear_eval(input, ps.value(name + ".w"));
  add_bias_inplace(y, ps.value(name + ".b"));
  return y;
}

Tensor gru_cell_forward(const ParamSet& ps, const std::string& name, const Tensor& input,
                        const Tensor& hidden) {
  const Tensor& ur = ps.value(name + ".ur");
  if (hidden.cols() != ur.cols())
    throw std::invalid_argument("gru: hidden width does not match configured hidden dim");

  Tensor r = linear_eval(input, ps.value(name + ".wr"));
  r.add_scaled(linear_eval(hidden, ur), 1.0);
  add_bias_inplace(r, ps.value(name + ".br"));
  sigmoid_inplace(r);

  Tensor z = linear_eval(input, ps.value(name + ".wz"));
  z.add_scaled(linear_eval(hidden, ps.value(name + ".uz")), 1.0);
  add_bias_inplace(z, ps.value(name + ".bz"));
  sigmoid_inplace(z);

  Tensor n = linear_eval(input, ps.value(name + ".wn"));
  Tensor uh = linear_eval(hidden, ps.value(name + ".un"));
  for (std::size_t i = 0; i < n.numel(); ++i) n[i] += r[i] * uh[i];
  add_bias_inplace(n, ps.value(name + ".bn"));
  tanh_inplace(n);

  Tensor out(hidden.rows(), hidden.cols());
  for (std::size_t i = 0; i < out.numel(); ++i)
    out[i] = (1.0 - z[i]) * n[i] + z[i] * hidden[i];
  return out;
}

Value dense_node(Tape& tape, ParamSet& ps, const std::string& name, Value x) {
  Value w = tape.param(ps, name + ".w");
  Value b = tape.param(ps, name + ".b");
  return tape.add_bias(tape.linear(x, w), b);
}

Value gru_cell_node(Tape& tape, ParamSet& ps, const std::string& name, Value x, Value h) {
  auto gate_pre = [&](const char* g) {
    Value wx = tape.linear(x, tape.param(ps, name + ".w" + g));
    Value uh = tape.linear(h, tape.param(ps, name + ".u" + g));
    return tape.add_bias(tape.add(wx, uh), tape.param(ps, name + ".b" + g));
  };
  Value r = tape.sigmoid(gate_pre("r"));
  Value z = tape.sigmoid(gate_pre("z"));

  Value wn = tape.linear(x, tape.param(ps, name + ".wn"));
  Value un = tape.linear(h, tape.param(ps, name + ".un"));
  Value n_pre = tape.add_bias(tape.add(wn, tape.mul(r, un)), tape.param(ps, name + ".bn"));
  Value n = tape.tanh(n_pre);

  Value one_minus_z = tape.add_scalar(tape.scale(z, -1.0), 1.0);
  return tape.add(tape.mul(one_minus_z, n), tape.mul(z, h));
}

}  // namespace segmix::nn
