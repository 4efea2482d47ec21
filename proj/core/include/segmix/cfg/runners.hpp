#pragma once

#include "segmix/cfg/run_config.hpp"

namespace segmix::cfg {

// Dispatches to the experiment named by the config, writes the manifest and
// all result files under the configured output directory, and returns the
// process exit status (0 on success).
int run_experiment(const RunConfig& cfg);

}  // namespace segmix::cfg
