#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace segmix::cfg {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { kCountReach, kTrainIql, kTrainQmix, kLearnRepr, kCluster, kGradCheck };

const char* kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

// Parse failures throw ConfigError with a diagnostic that names the file,
// line or key at fault. Distinct messages cover unparsable lines, unknown
// keys and invalid values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value document. '#' starts a comment; blank lines are ignored.
std::vector<std::pair<std::string, std::string>> parse_key_value_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> parse_key_value_text(const std::string& text,
                                                                      const std::string& origin);

// Fully resolved configuration: defaults for the experiment kind, overlaid
// by the config file, overlaid by command-line overrides. Unknown keys are
// rejected, naming the offending key.
class RunConfig {
 public:
  RunConfig(ExperimentKind kind, std::map<std::string, std::string> values)
      : kind_(kind), values_(std::move(values)) {}

  ExperimentKind kind() const { return kind_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  const std::string& get_string(const std::string& key) const;
  long get_long(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_seed(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // Space-separated list; empty string yields an empty vector.
  std::vector<long> get_long_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

 private:
  ExperimentKind kind_;
  std::map<std::string, std::string> values_;
};

// Documented defaults per experiment kind.
const std::map<std::string, std::string>& defaults_for(ExperimentKind kind);

RunConfig resolve_config(ExperimentKind kind,
                         const std::vector<std::pair<std::string, std::string>>& file_values,
                         const std::vector<std::pair<std::string, std::string>>& overrides);

// Convenience: loads the file when path is non-empty, then resolves.
RunConfig parse_config(ExperimentKind kind, const std::string& file_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

// Writes <out_dir>/manifest.txt: a valid config file for the same kind,
// carrying the fully resolved values; version and wall-clock metadata ride
// in comment lines so re-running from the manifest reproduces the run.
std::string write_manifest(const RunConfig& cfg, const std::string& out_dir);

}  // namespace segmix::cfg
