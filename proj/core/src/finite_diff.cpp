#include "segmix/nn/finite_diff.hpp"

#include <algorithm>
#include <cmath>

namespace segmix::nn {

std::vector<std::pair<std::string, Tensor>> finite_diff_grad(
    const std::function<double(ParamSet&)>& loss_fn, ParamSet& params, double h) {
  std::vector<std::pair<std::string, Tensor>> out;
  for (auto& e : params.entries()) {
    Tensor g(e.value.rows(), e.value.cols());
    for (std::size_t i = 0; i < e.value.numel(); ++i) {
      double saved = e.value[i];
      e.value[i] = saved + h;
      double fp = loss_fn(params);
      e.value[i] = saved - h;
      double fm = loss_fn(params);
      e.value[i] = saved;
      g[i] = (fp - fm) / (2.0 * h);
    }
    out.emplace_back(e.name, std::move(g));
  }
  return out;
}

double max_grad_rel_error(const std::function<double(ParamSet&)>& loss_fn,
                          const std::function<void(ParamSet&)>& analytic_backward,
                          ParamSet& params, double h, double floor) {
  params.zero_grads();
  analytic_backward(params);
  auto numeric = finite_diff_grad(loss_fn, params, h);
  double worst = 0.0;
  for (std::size_t p = 0; p < numeric.size(); ++p) {
    const Tensor& a = params.entries()[p].grad;
    const Tensor& n = numeric[p].second;
    for (std::size_t i = 0; i < a.numel(); ++i) {
      double denom = std::max({std::fabs(a[i]), std::fabs(n[i]), floor});
      worst = std::max(worst, std::fabs(a[i] - n[i]) / denom);
    }
  }
  return worst;
}

}  // namespace segmix::nn
