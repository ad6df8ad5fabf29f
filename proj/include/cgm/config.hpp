#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/rng.hpp"

namespace cgm {

struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string k, const std::string& what)
      : std::runtime_error("config key '" + k + "': " + what), key(std::move(k)) {}
};

// flat key=value experiment description; everything beyond the reserved keys
// (experiment, seed, stream, threads, out) is an experiment parameter
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  Seed seed{0, 0};
  int threads{1};
  std::string out_dir{"."};

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.experiment == b.experiment && a.params == b.params && a.seed == b.seed &&
           a.threads == b.threads && a.out_dir == b.out_dir;
  }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// typed parameter access with per-key errors
double param_double(const ExperimentConfig& cfg, const std::string& key, double fallback);
long long param_int(const ExperimentConfig& cfg, const std::string& key, long long fallback);
std::vector<double> param_double_list(const ExperimentConfig& cfg, const std::string& key,
                                      const std::string& fallback);
std::vector<long long> param_int_list(const ExperimentConfig& cfg, const std::string& key,
                                      const std::string& fallback);

std::string format_float(double v);  // fixed 17-significant-digit formatting

}  // namespace cgm
