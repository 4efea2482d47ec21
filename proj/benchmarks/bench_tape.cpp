#include <benchmark/benchmark.h>

#include "segmix/nn/adam.hpp"
#include "segmix/nn/ops.hpp"
#include "segmix/nn/tape.hpp"

using namespace segmix;

static void BM_DenseGruForward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  nn::ParamSet ps;
  nn::add_dense_params(ps, "fc", 16, 64, rng);
  nn::add_gru_params(ps, "gru", 64, 64, rng);
  nn::add_dense_params(ps, "out", 64, 8, rng);
  nn::Tensor x(batch, 16, 0.1);
  nn::Tensor h(batch, 64);
  for (auto _ : state) {
    nn::Tensor a = nn::dense_forward(ps, "fc", x);
    h = nn::gru_cell_forward(ps, "gru", a, h);
    nn::Tensor q = nn::dense_forward(ps, "out", h);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_DenseGruForward)->Arg(1)->Arg(32)->Arg(96);

static void BM_TapeForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  nn::ParamSet ps;
  nn::add_dense_params(ps, "fc", 16, 64, rng);
  nn::add_gru_params(ps, "gru", 64, 64, rng);
  nn::add_dense_params(ps, "out", 64, 8, rng);
  nn::Tensor x(batch, 16, 0.1);
  nn::Tensor target(batch, 8, 0.5);
  for (auto _ : state) {
    nn::Tape tape;
    nn::Value xv = tape.constant(x);
    nn::Value hv = tape.constant(nn::Tensor(batch, 64));
    nn::Value a = nn::dense_node(tape, ps, "fc", xv);
    nn::Value h1 = nn::gru_cell_node(tape, ps, "gru", a, hv);
    nn::Value q = nn::dense_node(tape, ps, "out", h1);
    nn::Value err = tape.sub(q, tape.constant(target));
    tape.backward(tape.sum_all(tape.mul(err, err)));
    ps.zero_grads();
  }
}
BENCHMARK(BM_TapeForwardBackward)->Arg(1)->Arg(32)->Arg(96);

static void BM_AdamStep(benchmark::State& state) {
  Rng rng(3);
  nn::ParamSet ps;
  nn::add_dense_params(ps, "fc", 64, 64, rng);
  nn::AdamState adam(ps, {});
  for (auto& e : ps.entries()) e.grad.fill(0.01);
  for (auto _ : state) {
    adam.step(ps);
    for (auto& e : ps.entries()) e.grad.fill(0.01);
  }
}
BENCHMARK(BM_AdamStep);
