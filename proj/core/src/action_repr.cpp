#include "segmix/repr/action_repr.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "segmix/nn/ops.hpp"
#include "segmix/nn/tape.hpp"

namespace segmix::repr {

void add_repr_params(nn::ParamSet& ps, const ReprConfig& cfg, Rng& rng) {
  auto na = static_cast<std::size_t>(cfg.n_actions);
  auto d = static_cast<std::size_t>(cfg.repr_dim);
  auto ph = static_cast<std::size_t>(cfg.predictor_hidden);
  auto pin = static_cast<std::size_t>(cfg.predictor_input_dim());
  ps.add_uniform_scaled("enc.w", d, na, cfg.encoder_init_scale, rng);
  ps.add_uniform_scaled("enc.b", 1, d, cfg.encoder_init_scale, rng);
  nn::add_dense_params(ps, "po1", pin, ph, rng);
  nn::add_dense_params(ps, "po2", ph, static_cast<std::size_t>(cfg.obs_dim), rng);
  nn::add_dense_params(ps, "pr1", pin, ph, rng);
  nn::add_dense_params(ps, "pr2", ph, 1, rng);
}

std::vector<double> encode_action(const nn::ParamSet& ps, const ReprConfig& cfg,
                                  int action_id) {
  if (action_id < 0 || action_id >= cfg.n_actions)
    throw std::out_of_range("encode_action: action id out of range");
  nn::Tensor one_hot(1, static_cast<std::size_t>(cfg.n_actions));
  one_hot[static_cast<std::size_t>(action_id)] = 1.0;
  nn::Tensor z = nn::dense_forward(ps, "enc", one_hot);
  return z.data();
}

double repr_loss(std::span<const replay::Transition* const> batch, nn::ParamSet& ps,
                 const ReprConfig& cfg, bool accumulate_grads) {
  if (batch.empty()) throw std::invalid_argument("repr_loss: empty batch");
  const auto n = static_cast<std::size_t>(cfg.n_agents);
  const auto na = static_cast<std::size_t>(cfg.n_actions);
  const std::size_t rows = batch.size() * n;

  // One-hot actions feeding the encoder, and the non-encoder predictor
  // inputs [obs | one-hot of other agents' actions].
  nn::Tensor one_hot(rows, na);
  std::size_t rest_w = static_cast<std::size_t>(cfg.obs_dim) + (n - 1) * na;
  nn::Tensor rest(rows, rest_w);
  nn::Tensor o_true(rows, static_cast<std::size_t>(cfg.obs_dim));
  nn::Tensor r_true(rows, 1);
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const replay::Transition& tr = *batch[s];
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t row = s * n + i;
      one_hot.at(row, static_cast<std::size_t>(tr.actions[i])) = 1.0;
      std::size_t k = 0;
      for (double v : tr.obs[i]) rest.at(row, k++) = v;
      for (std::size_t other = 0; other < n; ++other) {
        if (other == i) continue;
        rest.at(row, k + static_cast<std::size_t>(tr.actions[other])) = 1.0;
        k += na;
      }
      for (std::size_t d = 0; d < tr.next_obs[i].size(); ++d)
        o_true.at(row, d) = tr.next_obs[i][d];
      r_true.at(row, 0) = tr.reward;
    }
  }

  nn::Tape tape;
  nn::Value z = nn::dense_node(tape, ps, "enc", tape.constant(std::move(one_hot)));
  nn::Value pin = tape.concat_cols({z, tape.constant(std::move(rest))});
  nn::Value oh = tape.relu(nn::dense_node(tape, ps, "po1", pin));
  nn::Value o_pred = nn::dense_node(tape, ps, "po2", oh);
  nn::Value rh = tape.relu(nn::dense_node(tape, ps, "pr1", pin));
  nn::Value r_pred = nn::dense_node(tape, ps, "pr2", rh);

  nn::Value o_err = tape.sub(o_pred, tape.constant(std::move(o_true)));
  nn::Value o_sq = tape.sum_all(tape.mul(o_err, o_err));
  nn::Value r_err = tape.sub(r_pred, tape.constant(std::move(r_true)));
  nn::Value r_sq = tape.sum_all(tape.mul(r_err, r_err));
  nn::Value loss = tape.scale(tape.add(o_sq, tape.scale(r_sq, cfg.lambda_reward)),
                              1.0 / static_cast<double>(batch.size()));
  if (accumulate_grads) tape.backward(loss);
  return tape.scalar(loss);
}

FrozenRepresentations train_encoder(const replay::EpisodeBuffer& buffer,
                                    const EncoderTrainConfig& cfg) {
  Rng init_rng(cfg.seed * 1000003ULL + 777771ULL);
  nn::ParamSet ps;
  add_repr_params(ps, cfg.repr, init_rng);
  nn::AdamState adam(ps, {.lr = cfg.lr});
  Rng sample_rng(cfg.seed * 1000003ULL + 515151ULL);

  FrozenRepresentations out;
  for (long u = 0; u < cfg.updates; ++u) {
    auto batch = buffer.sample_transitions(cfg.batch_size, sample_rng);
    if (!batch) break;
    out.final_loss = repr_loss(*batch, ps, cfg.repr, true);
    adam.step(ps);
  }
  for (int a = 0; a < cfg.repr.n_actions; ++a)
    out.z.push_back(encode_action(ps, cfg.repr, a));
  return out;
}

void save_representations(const FrozenRepresentations& repr, std::ostream& os) {
  os << "action-repr v1\n";
  os << "n_actions " << repr.z.size() << "\n";
  os << "d " << (repr.z.empty() ? 0 : repr.z[0].size()) << "\n";
  os.precision(17);
  for (std::size_t a = 0; a < repr.z.size(); ++a) {
    os << "z " << a;
    for (double v : repr.z[a]) os << " " << v;
    os << "\n";
  }
}

FrozenRepresentations load_representations(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "action-repr v1")
    throw std::runtime_error("representations: bad header");
  std::string key;
  std::size_t n_actions = 0, d = 0;
  is >> key >> n_actions;
  if (key != "n_actions") throw std::runtime_error("representations: expected n_actions");
  is >> key >> d;
  if (key != "d") throw std::runtime_error("representations: expected d");
  std::getline(is, line);
  FrozenRepresentations out;
  for (std::size_t a = 0; a < n_actions; ++a) {
    if (!std::getline(is, line)) throw std::runtime_error("representations: truncated");
    std::istringstream ls(line);
    std::size_t id = 0;
    ls >> key >> id;
    if (key != "z" || id != a) throw std::runtime_error("representations: bad row");
    std::vector<double> z;
    double v;
    while (ls >> v) z.push_back(v);
    if (z.size() != d) throw std::runtime_error("representations: bad width");
    out.z.push_back(std::move(z));
  }
  return out;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("adjusted_rand_index: label vectors must match");
  int ka = *std::max_element(a.begin(), a.end()) + 1;
  int kb = *std::max_element(b.begin(), b.end()) + 1;
  std::vector<std::vector<long>> table(static_cast<std::size_t>(ka),
                                       std::vector<long>(static_cast<std::size_t>(kb), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    ++table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];

  auto choose2 = [](long x) { return static_cast<double>(x) * (x - 1) / 2.0; };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (int i = 0; i < ka; ++i) {
    long row = 0;
    for (int j = 0; j < kb; ++j) {
      row += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      sum_cells += choose2(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    sum_rows += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    long col = 0;
    for (int i = 0; i < ka; ++i) col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    sum_cols += choose2(col);
  }
  double total = choose2(static_cast<long>(a.size()));
  double expected = sum_rows * sum_cols / total;
  double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace segmix::repr
