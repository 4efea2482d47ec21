#include "segmix/nn/params.hpp"

#include <cmath>
#include <stdexcept>

namespace segmix::nn {

int ParamSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return static_cast<int>(i);
  return -1;
}

Tensor& ParamSet::add(const std::string& name, std::size_t rows, std::size_t cols) {
  if (index_of(name) >= 0) throw std::invalid_argument("ParamSet: duplicate name " + name);
  entries_.push_back({name, Tensor(rows, cols), Tensor(rows, cols)});
  return entries_.back().value;
}

Tensor& ParamSet::add_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                              std::size_t fan_in, Rng& rng) {
  double scale = 1.0 / std::sqrt(static_cast<double>(fan_in == 0 ? 1 : fan_in));
  return add_uniform_scaled(name, rows, cols, scale, rng);
}

Tensor& ParamSet::add_uniform_scaled(const std::string& name, std::size_t rows,
                                     std::size_t cols, double scale, Rng& rng) {
  Tensor& t = add(name, rows, cols);
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-scale, scale);
  return t;
}

bool ParamSet::has(const std::string& name) const { return index_of(name) >= 0; }

Tensor& ParamSet::value(const std::string& name) {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("ParamSet: no parameter named " + name);
  return entries_[i].value;
}

const Tensor& ParamSet::value(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("ParamSet: no parameter named " + name);
  return entries_[i].value;
}

Tensor& ParamSet::grad(const std::string& name) {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("ParamSet: no parameter named " + name);
  return entries_[i].grad;
}

const Tensor& ParamSet::grad(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("ParamSet: no parameter named " + name);
  return entries_[i].grad;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.value.numel();
  return n;
}

void ParamSet::zero_grads() {
  for (auto& e : entries_) e.grad.fill(0.0);
}

void ParamSet::copy_values_from(const ParamSet& other) {
  if (other.entries_.size() != entries_.size())
    throw std::invalid_argument("ParamSet: parameter count mismatch in copy");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name != other.entries_[i].name ||
        !entries_[i].value.same_shape(other.entries_[i].value))
      throw std::invalid_argument("ParamSet: layout mismatch in copy at " + entries_[i].name);
    entries_[i].value = other.entries_[i].value;
  }
}

}  // namespace segmix::nn
