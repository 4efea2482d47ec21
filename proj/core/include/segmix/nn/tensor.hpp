#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace segmix::nn {

// Dense row-major tensor of doubles. Everything in the training core is
// rank 1 or rank 2; rank 2 tensors are (rows, cols) with rows usually being
// the batch dimension.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : shape_{rows, cols}, v_(rows * cols, fill) {}
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::initializer_list<double> values);

  static Tensor row(std::initializer_list<double> values);
  static Tensor from_vector(const std::vector<double>& values);  // 1 x n

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? (shape_.empty() ? 0 : 1) : shape_[1]; }
  std::size_t numel() const { return v_.size(); }
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  double& at(std::size_t r, std::size_t c) { return v_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return v_[r * cols() + c]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  void fill(double x);
  void add_scaled(const Tensor& o, double scale);  // *this += scale * o
  bool all_finite() const;

  std::string shape_str() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> v_;
};

}  // namespace segmix::nn
