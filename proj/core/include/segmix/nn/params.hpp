#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "segmix/nn/tensor.hpp"
#include "segmix/rng.hpp"

namespace segmix::nn {

// Named collection of weight tensors with parallel gradient storage.
// Insertion order is preserved; every deterministic sweep over parameters
// (Adam, checkpoints, finite differences) iterates in that order.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Tensor value;
    Tensor grad;
  };

  // Adds a zero-initialized parameter. Throws on duplicate name.
  Tensor& add(const std::string& name, std::size_t rows, std::size_t cols);

  // Adds a parameter initialized uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
  // the library-wide default weight init.
  Tensor& add_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                      std::size_t fan_in, Rng& rng);

  // Adds a parameter initialized uniformly in [-scale, +scale].
  Tensor& add_uniform_scaled(const std::string& name, std::size_t rows, std::size_t cols,
                             double scale, Rng& rng);

  bool has(const std::string& name) const;
  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);
  const Tensor& grad(const std::string& name) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;
  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

  void zero_grads();

  // Copies all values from another set. Both must hold identical names and
  // shapes; used for hard target-network synchronization.
  void copy_values_from(const ParamSet& other);

 private:
  std::vector<Entry> entries_;
  int index_of(const std::string& name) const;
};

}  // namespace segmix::nn
