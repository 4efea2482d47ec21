#include "segmix/cfg/run_config.hpp"

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace segmix::cfg {

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCountReach: return "count-reach";
    case ExperimentKind::kTrainIql: return "train-iql";
    case ExperimentKind::kTrainQmix: return "train-qmix";
    case ExperimentKind::kLearnRepr: return "learn-repr";
    case ExperimentKind::kCluster: return "cluster";
    case ExperimentKind::kGradCheck: return "grad-check";
  }
  throw std::logic_error("kind_name: bad kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  for (ExperimentKind k : {ExperimentKind::kCountReach, ExperimentKind::kTrainIql,
                           ExperimentKind::kTrainQmix, ExperimentKind::kLearnRepr,
                           ExperimentKind::kCluster, ExperimentKind::kGradCheck})
    if (name == kind_name(k)) return k;
  throw ConfigError("unknown experiment kind: " + name);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_value_text(
    const std::string& text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got: " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_key_value_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_key_value_text(buf.str(), path);
}

const std::string& RunConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

long RunConfig::get_long(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for key '" + key + "': " + v);
  }
}

int RunConfig::get_int(const std::string& key) const {
  return static_cast<int>(get_long(key));
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid real number for key '" + key + "': " + v);
  }
}

std::uint64_t RunConfig::get_seed(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("invalid seed for key '" + key + "': " + v);
  }
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean for key '" + key + "': " + v);
}

std::vector<long> RunConfig::get_long_list(const std::string& key) const {
  std::vector<long> out;
  std::istringstream is(get_string(key));
  std::string tok;
  while (is >> tok) {
    try {
      out.push_back(std::stol(tok));
    } catch (const std::exception&) {
      throw ConfigError("invalid integer list for key '" + key + "': " + tok);
    }
  }
  return out;
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream is(get_string(key));
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

const std::map<std::string, std::string>& defaults_for(ExperimentKind kind) {
  static const std::map<std::string, std::string> count_reach = {
      {"n_agents", "2"},       {"nk_values", "2 4 6 8 10"}, {"m_actions", "3"},
      {"eps", "0.5"},          {"total_steps", "1000000"},  {"strategies", "seg eps"},
      {"seed", "0"},           {"out", "out/count-reach"},
  };
  static const std::map<std::string, std::string> train_iql = {
      {"n_agents", "5"},       {"k_horizon", "4"},     {"m_actions", "3"},
      {"alpha", "0.1"},        {"gamma", "0.6"},       {"eps_start", "1.0"},
      {"eps_end", "0.05"},     {"eps_anneal", "30000"},
      {"total_steps", "350000"}, {"eval_interval", "1000"}, {"episode_len", "50"},
      {"strategy", "seg"},     {"trials", "10"},       {"seeds", ""},
      {"seed", "0"},           {"out", "out/train-iql"},
  };
  static const std::map<std::string, std::string> train_qmix = {
      {"env", "coord"},        {"n_agents", "3"},      {"k_horizon", "3"},
      {"m_actions", "3"},      {"n_true_groups", "2"}, {"noise_scale", "0.0"},
      {"gamma", "0.9"},        {"hidden", "64"},       {"mix_hidden", "32"},
      {"lr", "5e-4"},          {"batch_size", "32"},   {"buffer_capacity", "5000"},
      {"train_interval_episodes", "1"}, {"target_update_interval", "200"},
      {"eps_start", "1.0"},    {"eps_end", "0.05"},    {"eps_anneal", "30000"},
      {"total_env_steps", "300000"}, {"eval_interval", "5000"},
      {"eval_horizon", "0"},   {"early_stop_consecutive", "3"},
      {"episode_len", "50"},   {"strategy", "seg"},    {"groups", "analytic"},
      {"seed", "0"},           {"out", "out/train-qmix"},
  };
  static const std::map<std::string, std::string> learn_repr = {
      {"n_agents", "2"},       {"n_actions", "6"},     {"n_true_groups", "2"},
      {"noise_scale", "0.0"},  {"encoder_steps", "50000"}, {"repr_dim", "20"},
      {"lambda_reward", "10"}, {"predictor_hidden", "128"}, {"lr", "5e-4"},
      {"batch_size", "32"},    {"k_clusters", "0"},    {"dump_episodes", "false"},
      {"seed", "0"},           {"out", "out/learn-repr"},
  };
  static const std::map<std::string, std::string> cluster = {
      {"repr_file", ""},       {"k_clusters", "2"},    {"always_available", ""},
      {"seed", "0"},           {"out", "out/cluster"},
  };
  static const std::map<std::string, std::string> grad_check = {
      {"instances", "20"},     {"tolerance", "1e-4"},  {"seed", "0"},
      {"out", "out/grad-check"},
  };
  switch (kind) {
    case ExperimentKind::kCountReach: return count_reach;
    case ExperimentKind::kTrainIql: return train_iql;
    case ExperimentKind::kTrainQmix: return train_qmix;
    case ExperimentKind::kLearnRepr: return learn_repr;
    case ExperimentKind::kCluster: return cluster;
    case ExperimentKind::kGradCheck: return grad_check;
  }
  throw std::logic_error("defaults_for: bad kind");
}

RunConfig resolve_config(ExperimentKind kind,
                         const std::vector<std::pair<std::string, std::string>>& file_values,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> values = defaults_for(kind);
  auto apply = [&](const std::vector<std::pair<std::string, std::string>>& kvs,
                   const char* source) {
    for (const auto& [key, value] : kvs) {
      if (key == "kind") {
        if (value != kind_name(kind))
          throw ConfigError(std::string(source) + ": config is for kind '" + value +
                            "' but experiment is '" + kind_name(kind) + "'");
        continue;
      }
      auto it = values.find(key);
      if (it == values.end())
        throw ConfigError(std::string(source) + ": unknown key '" + key + "' for " +
                          kind_name(kind));
      it->second = value;
    }
  };
  apply(file_values, "config file");
  apply(overrides, "command line");
  return RunConfig(kind, std::move(values));
}

RunConfig parse_config(ExperimentKind kind, const std::string& file_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::vector<std::pair<std::string, std::string>> file_values;
  if (!file_path.empty()) file_values = parse_key_value_file(file_path);
  return resolve_config(kind, file_values, overrides);
}

std::string write_manifest(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string path = out_dir + "/manifest.txt";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write manifest: " + path);
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  os << "# segmix run manifest\n";
  os << "# version " << kVersion << "\n";
  os << "# generated_at " << stamp << "\n";
  os << "kind = " << kind_name(cfg.kind()) << "\n";
  for (const auto& [k, v] : cfg.values()) os << k << " = " << v << "\n";
  return path;
}

}  // namespace segmix::cfg
