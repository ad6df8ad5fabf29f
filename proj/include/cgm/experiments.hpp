#pragma once

#include <string>
#include <vector>

#include "cgm/config.hpp"

namespace cgm {

// deterministic lemma checks, counted over randomized instances
struct PropertyCheck {
  std::string name;
  long long instances{0};
  long long violations{0};
};
std::vector<PropertyCheck> run_property_suite(long long instances, const Seed& seed, int threads);

struct RunArtifacts {
  std::string csv_path;
  std::string summary_path;
  std::string stdout_line;  // headline printed by the CLI
};

std::vector<std::string> experiment_names();

// executes the named experiment and writes <out>/<name>.csv and
// <out>/<name>_summary.json; identical (config, seed) reruns produce
// byte-identical files at any thread count
RunArtifacts run_experiment(const ExperimentConfig& cfg);

// reshape result CSVs into plot-ready two-column data
// kind: trend -> (log x, log y); tail -> (x, y); histogram -> 50-bin counts of y
void emit_plot_data(const std::string& kind, const std::string& in_path,
                    const std::string& out_path, const std::string& x_column,
                    const std::string& y_column);

}  // namespace cgm
