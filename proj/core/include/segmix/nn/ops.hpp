#pragma once

#include <string>

#include "segmix/nn/params.hpp"
#include "segmix/nn/tape.hpp"
#include "segmix/nn/tensor.hpp"
#include "segmix/rng.hpp"

namespace segmix::nn {

// Registers a dense layer's parameters: "<name>.w" [out,in], "<name>.b" [1,out].
void add_dense_params(ParamSet& ps, const std::string& name, std::size_t in,
                      std::size_t out, Rng& rng);

// Registers GRU cell parameters under "<name>.{wr,ur,br,wz,uz,bz,wn,un,bn}".
void add_gru_params(ParamSet& ps, const std::string& name, std::size_t in,
                    std::size_t hidden, Rng& rng);

// y = input * W^T + b, evaluated without recording gradients.
Tensor dense_forward(const ParamSet& ps, const std::string& name, const Tensor& input);

// Conventional GRU cell, evaluated without recording gradients:
//   r  = sigmoid(Wr x + Ur h + br)
//   z  = sigmoid(Wz x + Uz h + bz)
//   n  = tanh(Wn x + r .* (Un h) + bn)
//   h' = (1 - z) .* n + z .* h
Tensor gru_cell_forward(const ParamSet& ps, const std::string& name, const Tensor& input,
                        const Tensor& hidden);

// Same layers recorded on a tape for training.
Value dense_node(Tape& tape, ParamSet& ps, const std::string& name, Value x);
Value gru_cell_node(Tape& tape, ParamSet& ps, const std::string& name, Value x, Value h);

}  // namespace segmix::nn
