#include "segmix/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace segmix::nn {

AdamState::AdamState(const ParamSet& ps, AdamConfig cfg) : cfg_(cfg) {
  for (const auto& e : ps.entries()) {
    m_.emplace_back(e.value.rows(), e.value.cols());
    v_.emplace_back(e.value.rows(), e.value.cols());
  }
}

void AdamState::step(ParamSet& ps) {
  if (ps.entries().size() != m_.size())
    throw std::invalid_argument("AdamState: parameter layout changed since construction");
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < m_.size(); ++p) {
    auto& e = ps.entries()[p];
    Tensor& m = m_[p];
    Tensor& v = v_[p];
    for (std::size_t i = 0; i < e.value.numel(); ++i) {
      double g = e.grad[i] + cfg_.weight_decay * e.value[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      e.value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    e.grad.fill(0.0);
  }
}

}  // namespace segmix::nn
