#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "segmix/checks.hpp"
#include "segmix/nn/adam.hpp"
#include "segmix/nn/checkpoint.hpp"
#include "segmix/nn/finite_diff.hpp"
#include "segmix/nn/ops.hpp"
#include "segmix/nn/tape.hpp"

using namespace segmix;

TEST_CASE("dense forward basics") {
  nn::ParamSet ps;
  Rng rng(1);
  nn::add_dense_params(ps, "fc", 2, 2, rng);

  SUBCASE("zero weights and bias give the zero vector") {
    ps.value("fc.w").fill(0.0);
    ps.value("fc.b").fill(0.0);
    nn::Tensor y = nn::dense_forward(ps, "fc", nn::Tensor::row({1.5, -2.0}));
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
  }

  SUBCASE("identity weight passes input through") {
    ps.value("fc.w") = nn::Tensor(2, 2, {1.0, 0.0, 0.0, 1.0});
    ps.value("fc.b").fill(0.0);
    nn::Tensor y = nn::dense_forward(ps, "fc", nn::Tensor::row({3.25, -0.5}));
    CHECK(y[0] == 3.25);
    CHECK(y[1] == -0.5);
  }

  SUBCASE("hand-computed 2x2 case") {
    ps.value("fc.w") = nn::Tensor(2, 2, {1.0, 2.0, 3.0, 4.0});
    ps.value("fc.b").fill(0.0);
    nn::Tensor y = nn::dense_forward(ps, "fc", nn::Tensor::row({1.0, 1.0}));
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[1] == doctest::Approx(7.0));
  }

  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS(nn::dense_forward(ps, "fc", nn::Tensor::row({1.0, 2.0, 3.0})),
                    std::invalid_argument);
  }
}

TEST_CASE("gru cell forward") {
  nn::ParamSet ps;
  Rng rng(2);
  nn::add_gru_params(ps, "g", 2, 3, rng);

  SUBCASE("all-zero weights halve the hidden state") {
    for (auto& e : ps.entries()) e.value.fill(0.0);
    nn::Tensor h = nn::Tensor::row({1.0, -2.0, 0.5});
    nn::Tensor h2 = nn::gru_cell_forward(ps, "g", nn::Tensor::row({0.3, 0.7}), h);
    for (std::size_t i = 0; i < 3; ++i) CHECK(h2[i] == doctest::Approx(0.5 * h[i]));
  }

  SUBCASE("all-zero everything stays zero") {
    for (auto& e : ps.entries()) e.value.fill(0.0);
    nn::Tensor h2 =
        nn::gru_cell_forward(ps, "g", nn::Tensor::row({0.0, 0.0}), nn::Tensor::row({0.0, 0.0, 0.0}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(h2[i] == 0.0);
  }

  SUBCASE("matches an independent gate-by-gate evaluation") {
    nn::Tensor x = nn::Tensor::row({0.4, -0.9});
    nn::Tensor h = nn::Tensor::row({0.2, 0.1, -0.3});
    nn::Tensor got = nn::gru_cell_forward(ps, "g", x, h);

    auto matvec = [&](const char* name, const nn::Tensor& v) {
      const nn::Tensor& w = ps.value(name);
      std::vector<double> out(w.rows(), 0.0);
      for (std::size_t r = 0; r < w.rows(); ++r)
        for (std::size_t c = 0; c < w.cols(); ++c) out[r] += w.at(r, c) * v[c];
      return out;
    };
    auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    auto wr = matvec("g.wr", x), ur = matvec("g.ur", h);
    auto wz = matvec("g.wz", x), uz = matvec("g.uz", h);
    auto wn = matvec("g.wn", x), un = matvec("g.un", h);
    for (std::size_t i = 0; i < 3; ++i) {
      double r = sigmoid(wr[i] + ur[i] + ps.value("g.br")[i]);
      double z = sigmoid(wz[i] + uz[i] + ps.value("g.bz")[i]);
      double n = std::tanh(wn[i] + r * un[i] + ps.value("g.bn")[i]);
      double expected = (1.0 - z) * n + z * h[i];
      CHECK(got[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("hidden width mismatch is rejected") {
    CHECK_THROWS_AS(
        nn::gru_cell_forward(ps, "g", nn::Tensor::row({0.0, 0.0}), nn::Tensor::row({1.0})),
        std::invalid_argument);
  }
}

TEST_CASE("tape backward") {
  SUBCASE("quadratic loss gives 2w") {
    nn::ParamSet ps;
    ps.add("w", 1, 3);
    ps.value("w") = nn::Tensor(1, 3, {1.0, -2.0, 0.5});
    nn::Tape tape;
    nn::Value w = tape.param(ps, "w");
    tape.backward(tape.sum_all(tape.mul(w, w)));
    CHECK(ps.grad("w")[0] == doctest::Approx(2.0));
    CHECK(ps.grad("w")[1] == doctest::Approx(-4.0));
    CHECK(ps.grad("w")[2] == doctest::Approx(1.0));
  }

  SUBCASE("parameter not in the loss receives zero gradient") {
    nn::ParamSet ps;
    ps.add("used", 1, 2).fill(1.0);
    ps.add("unused", 1, 2).fill(1.0);
    nn::Tape tape;
    nn::Value u = tape.param(ps, "used");
    tape.param(ps, "unused");
    tape.backward(tape.sum_all(tape.mul(u, u)));
    CHECK(ps.grad("unused")[0] == 0.0);
    CHECK(ps.grad("unused")[1] == 0.0);
  }

  SUBCASE("backward before any forward is misuse") {
    nn::Tape tape;
    CHECK_THROWS_AS(tape.backward(nn::Value{}), std::logic_error);
  }

  SUBCASE("backward on a non-scalar node is misuse") {
    nn::Tape tape;
    nn::Value c = tape.constant(nn::Tensor(2, 2));
    CHECK_THROWS_AS(tape.backward(c), std::logic_error);
  }
}

TEST_CASE("finite difference oracle") {
  SUBCASE("f(w) = w^2 at w=3 gives 6") {
    nn::ParamSet ps;
    ps.add("w", 1, 1);
    ps.value("w")[0] = 3.0;
    auto grads = nn::finite_diff_grad(
        [](nn::ParamSet& p) { return p.value("w")[0] * p.value("w")[0]; }, ps, 1e-5);
    CHECK(grads[0].second[0] == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(ps.value("w")[0] == 3.0);  // restored
  }

  SUBCASE("constant function has zero gradient") {
    nn::ParamSet ps;
    ps.add("w", 1, 2).fill(5.0);
    auto grads = nn::finite_diff_grad([](nn::ParamSet&) { return 42.0; }, ps, 1e-5);
    CHECK(grads[0].second[0] == 0.0);
    CHECK(grads[0].second[1] == 0.0);
  }

  SUBCASE("analytic gradients match on dense+GRU stacks across seeds") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
      auto rep = checks::check_dense_gru(3, seed);
      CHECK(rep.max_rel_error <= 1e-4);
    }
  }
}

TEST_CASE("adam optimizer") {
  nn::ParamSet ps;
  ps.add("w", 1, 1);
  ps.value("w")[0] = 1.0;

  SUBCASE("zero gradients leave parameters unchanged") {
    nn::AdamState adam(ps, {.lr = 0.01});
    adam.step(ps);
    adam.step(ps);
    CHECK(ps.value("w")[0] == 1.0);
  }

  SUBCASE("first step matches the hand-evaluated update") {
    // g=1, lr=1e-3: mhat = vhat = 1, so dw = -lr / (1 + eps_stab).
    nn::AdamState adam(ps, {.lr = 1e-3, .beta1 = 0.9, .beta2 = 0.99, .eps = 1e-5});
    ps.grad("w")[0] = 1.0;
    adam.step(ps);
    double expected = 1.0 - 1e-3 * (1.0 / (1.0 + 1e-5));
    CHECK(ps.value("w")[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ps.grad("w")[0] == 0.0);  // gradients cleared
  }

  SUBCASE("two identical runs give bitwise-equal parameters") {
    auto run = [] {
      Rng rng(99);
      nn::ParamSet p;
      p.add_uniform("w", 4, 4, 4, rng);
      nn::AdamState adam(p, {.lr = 5e-4});
      for (int step = 0; step < 25; ++step) {
        nn::Tape tape;
        nn::Value w = tape.param(p, "w");
        tape.backward(tape.sum_all(tape.mul(w, w)));
        adam.step(p);
      }
      return p.value("w").data();
    };
    CHECK(run() == run());
  }
}

TEST_CASE("checkpoint round trip") {
  Rng rng(7);
  nn::ParamSet ps;
  ps.add_uniform("a.w", 3, 2, 2, rng);
  ps.add_uniform("b", 1, 5, 5, rng);
  std::string path = "ckpt_test.bin";
  nn::save_checkpoint(ps, path);
  nn::ParamSet loaded = nn::load_checkpoint(path);
  REQUIRE(loaded.entries().size() == 2);
  CHECK(loaded.entries()[0].name == "a.w");
  CHECK(loaded.value("a.w").data() == ps.value("a.w").data());
  CHECK(loaded.value("b").data() == ps.value("b").data());
  CHECK_THROWS_AS(nn::load_checkpoint("does_not_exist.bin"), std::runtime_error);
  std::remove(path.c_str());
}
