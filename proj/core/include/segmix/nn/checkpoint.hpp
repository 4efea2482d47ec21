#pragma once

#include <string>

#include "segmix/nn/params.hpp"

namespace segmix::nn {

// Parameter checkpoint file. Little-endian binary layout:
//   magic   8 bytes   "SMXCKPT1"
//   count   u32       number of tensors
//   per tensor:
//     name_len u32, name bytes (no terminator)
//     rows u64, cols u64
//     rows*cols f64 values, row-major
void save_checkpoint(const ParamSet& ps, const std::string& path);

// Loads a checkpoint written by save_checkpoint. Throws std::runtime_error
// on bad magic or truncated data.
ParamSet load_checkpoint(const std::string& path);

}  // namespace segmix::nn
