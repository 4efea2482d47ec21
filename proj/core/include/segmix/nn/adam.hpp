#pragma once

#include <cstdint>
#include <vector>

#include "segmix/nn/params.hpp"

namespace segmix::nn {

// Adam with bias correction. Defaults follow the training setup used across
// the toolkit: lr 5e-4, beta1 0.9, beta2 0.99, stability epsilon 1e-5, no
// weight decay.
struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-5;
  double weight_decay = 0.0;  // kept at 0
};

class AdamState {
 public:
  AdamState(const ParamSet& ps, AdamConfig cfg = {});

  // Applies one update from the gradients currently stored in ps, then
  // clears them. With all-zero gradients this is the identity on parameters.
  void step(ParamSet& ps);

  std::int64_t t() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::int64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace segmix::nn
