#include "segmix/nn/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace segmix::nn {

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (std::size_t d : shape_) n *= d;
  v_.assign(n, fill);
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::initializer_list<double> values)
    : shape_{rows, cols}, v_(values) {
  if (v_.size() != rows * cols)
    throw std::invalid_argument("Tensor: initializer size does not match shape");
}

Tensor Tensor::row(std::initializer_list<double> values) {
  Tensor t;
  t.shape_ = {1, values.size()};
  t.v_ = values;
  return t;
}

Tensor Tensor::from_vector(const std::vector<double>& values) {
  Tensor t;
  t.shape_ = {1, values.size()};
  t.v_ = values;
  return t;
}

void Tensor::fill(double x) { std::fill(v_.begin(), v_.end(), x); }

void Tensor::add_scaled(const Tensor& o, double scale) {
  if (!same_shape(o)) throw std::invalid_argument("Tensor::add_scaled: shape mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += scale * o.v_[i];
}

bool Tensor::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
  os << ")";
  return os.str();
}

}  // namespace segmix::nn
