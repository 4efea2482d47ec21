#pragma once

#include <Eigen/Core>

#include "segmix/nn/tensor.hpp"

// Shared dense-algebra kernels. The tape ops and the untraced inference path
// both call these so their outputs are bitwise identical.
namespace segmix::nn::kernels {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using MapConst = Eigen::Map<const RowMat>;

// y[B,out] = x[B,in] * w[out,in]^T
inline void linear(Tensor& y, const Tensor& x, const Tensor& w) {
  MapConst xm(x.data().data(), static_cast<Eigen::Index>(x.rows()),
              static_cast<Eigen::Index>(x.cols()));
  MapConst wm(w.data().data(), static_cast<Eigen::Index>(w.rows()),
              static_cast<Eigen::Index>(w.cols()));
  MapMat ym(y.data().data(), static_cast<Eigen::Index>(y.rows()),
            static_cast<Eigen::Index>(y.cols()));
  ym.noalias() = xm * wm.transpose();
}

// gx[B,in] += g[B,out] * w[out,in]
inline void linear_back_input(Tensor& gx, const Tensor& g, const Tensor& w) {
  MapConst gm(g.data().data(), static_cast<Eigen::Index>(g.rows()),
              static_cast<Eigen::Index>(g.cols()));
  MapConst wm(w.data().data(), static_cast<Eigen::Index>(w.rows()),
              static_cast<Eigen::Index>(w.cols()));
  MapMat gxm(gx.data().data(), static_cast<Eigen::Index>(gx.rows()),
             static_cast<Eigen::Index>(gx.cols()));
  gxm.noalias() += gm * wm;
}

// gw[out,in] += g[B,out]^T * x[B,in]
inline void linear_back_weight(Tensor& gw, const Tensor& g, const Tensor& x) {
  MapConst gm(g.data().data(), static_cast<Eigen::Index>(g.rows()),
              static_cast<Eigen::Index>(g.cols()));
  MapConst xm(x.data().data(), static_cast<Eigen::Index>(x.rows()),
              static_cast<Eigen::Index>(x.cols()));
  MapMat gwm(gw.data().data(), static_cast<Eigen::Index>(gw.rows()),
             static_cast<Eigen::Index>(gw.cols()));
  gwm.noalias() += gm.transpose() * xm;
}

}  // namespace segmix::nn::kernels
