#include "cgm/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cgm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (key == "experiment") {
      cfg.experiment = val;
    } else if (key == "seed") {
      try {
        cfg.seed.value = std::stoull(val);
      } catch (...) {
        throw ConfigError(key, "not an unsigned integer: " + val);
      }
    } else if (key == "stream") {
      try {
        cfg.seed.stream = std::stoull(val);
      } catch (...) {
        throw ConfigError(key, "not an unsigned integer: " + val);
      }
    } else if (key == "threads") {
      try {
        cfg.threads = std::stoi(val);
      } catch (...) {
        throw ConfigError(key, "not an integer: " + val);
      }
      if (cfg.threads < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "out") {
      cfg.out_dir = val;
    } else {
      cfg.params[key] = val;
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment = " << cfg.experiment << "\n";
  out << "seed = " << cfg.seed.value << "\n";
  out << "stream = " << cfg.seed.stream << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "out = " << cfg.out_dir << "\n";
  for (const auto& [k, v] : cfg.params) out << k << " = " << v << "\n";
  return out.str();
}

double param_double(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(key, "not a number: " + it->second);
  }
}

long long param_int(const ExperimentConfig& cfg, const std::string& key, long long fallback) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(key, "not an integer: " + it->second);
  }
}

namespace {

template <class T, class Parse>
std::vector<T> parse_list(const ExperimentConfig& cfg, const std::string& key,
                          const std::string& fallback, Parse parse) {
  const auto it = cfg.params.find(key);
  const std::string& raw = it == cfg.params.end() ? fallback : it->second;
  std::vector<T> out;
  std::istringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse(item));
    } catch (...) {
      throw ConfigError(key, "bad list entry: " + item);
    }
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

}  // namespace

std::vector<double> param_double_list(const ExperimentConfig& cfg, const std::string& key,
                                      const std::string& fallback) {
  return parse_list<double>(cfg, key, fallback, [](const std::string& s) { return std::stod(s); });
}

std::vector<long long> param_int_list(const ExperimentConfig& cfg, const std::string& key,
                                      const std::string& fallback) {
  return parse_list<long long>(cfg, key, fallback,
                               [](const std::string& s) { return std::stoll(s); });
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace cgm
