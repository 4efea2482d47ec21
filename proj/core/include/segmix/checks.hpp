#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace segmix::checks {

struct GradCheckReport {
  std::string name;
  double max_rel_error = 0.0;
  int instances = 0;
};

// Analytic gradients of a dense -> GRU -> dense stack with a squared-error
// head, against central finite differences, on random small instances.
GradCheckReport check_dense_gru(int instances, std::uint64_t seed);

// Full QMIX TD loss on random tiny episode batches (2 agents, 3 actions,
// episode length 2, hidden widths <= 8).
GradCheckReport check_td_loss(int instances, std::uint64_t seed);

// Action-representation loss on random transition batches.
GradCheckReport check_repr_loss(int instances, std::uint64_t seed);

// Mixing network alone (Q-values and state into Q_tot).
GradCheckReport check_mixing(int instances, std::uint64_t seed);

std::vector<GradCheckReport> run_all_grad_checks(int instances, std::uint64_t seed);

}  // namespace segmix::checks
