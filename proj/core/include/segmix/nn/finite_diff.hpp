#pragma once

#include <functional>
#include <string>
#include <vector>

#include "segmix/nn/params.hpp"

namespace segmix::nn {

// Central-difference gradient oracle: (f(w+h) - f(w-h)) / 2h per scalar
// parameter. The loss function must be a deterministic function of the
// parameter values. Parameters are restored exactly afterwards.
std::vector<std::pair<std::string, Tensor>> finite_diff_grad(
    const std::function<double(ParamSet&)>& loss_fn, ParamSet& params, double h = 1e-5);

// Convenience: runs loss_fn once to populate analytic gradients through the
// caller-supplied closure, compares against finite differences, and returns
// the maximum relative error max(|a-n| / max(|a|,|n|,floor)).
double max_grad_rel_error(const std::function<double(ParamSet&)>& loss_fn,
                          const std::function<void(ParamSet&)>& analytic_backward,
                          ParamSet& params, double h = 1e-5, double floor = 1e-6);

}  // namespace segmix::nn
