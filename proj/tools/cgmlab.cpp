#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cgm/experiments.hpp"
#include "cgm/lpp.hpp"
#include "cgm/mc.hpp"
#include "cgm/queueing.hpp"

namespace {

// every experiment parameter is exposed as a flag; flags override config-file
// values so a config can be partially specialized from the command line
const std::vector<std::string> kParamFlags = {
    "N",     "epsilon", "rho",    "alpha",   "beta",   "sigma",  "alpha1",
    "alpha2", "n",       "m",      "replicas", "instances", "sizes", "tail-n",
    "tail-t", "r",       "d1",     "d2",      "i",      "xi1",    "r-list",
    "eta-list", "n-list", "range-len", "margin"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corner growth model laboratory"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a named experiment");
  std::string experiment, config_path, out_dir = ".";
  std::uint64_t seed_value = 0, seed_stream = 0;
  int threads = 1;
  bool seed_set = false, stream_set = false, threads_set = false, out_set = false;
  run->add_option("--experiment", experiment, "experiment name");
  run->add_option("--config", config_path, "config file (key = value lines)");
  run->add_option("--seed", seed_value, "seed value")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--stream", seed_stream, "seed stream id")->each([&](const std::string&) { stream_set = true; });
  run->add_option("--threads", threads, "worker threads")->each([&](const std::string&) { threads_set = true; });
  run->add_option("--out", out_dir, "output directory")->each([&](const std::string&) { out_set = true; });
  std::map<std::string, std::string> flag_params;
  for (const std::string& key : kParamFlags) {
    run->add_option_function<std::string>(
        "--" + key, [&flag_params, key](const std::string& v) { flag_params[key] = v; },
        "experiment parameter " + key);
  }

  // list-experiments
  auto* list = app.add_subcommand("list-experiments", "print known experiment names");

  // geodesic: export one geodesic as a JSON point list
  auto* geo = app.add_subcommand("geodesic", "export a geodesic as a JSON point list");
  std::string from_str, to_str, geo_out;
  std::uint64_t geo_seed = 0, geo_stream = 0;
  geo->add_option("--from", from_str, "source point x1,x2")->required();
  geo->add_option("--to", to_str, "target point x1,x2")->required();
  geo->add_option("--seed", geo_seed, "seed value");
  geo->add_option("--stream", geo_stream, "seed stream id");
  geo->add_option("--out", geo_out, "output JSON path")->required();

  // emit-plot-data
  auto* emit = app.add_subcommand("emit-plot-data", "reshape result CSVs for plotting");
  std::string kind, in_path, out_path, x_col, y_col;
  emit->add_option("--kind", kind, "trend | tail | histogram")->required();
  emit->add_option("--in", in_path, "input CSV")->required();
  emit->add_option("--out", out_path, "output CSV")->required();
  emit->add_option("--x", x_col, "x column name");
  emit->add_option("--y", y_col, "y column name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (list->parsed()) {
    for (const std::string& name : cgm::experiment_names()) std::cout << name << "\n";
    return 0;
  }

  if (geo->parsed()) {
    try {
      auto parse_point = [](const std::string& s) {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw std::runtime_error("point must be x1,x2: " + s);
        return cgm::Point{std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
      };
      const cgm::Point u = parse_point(from_str), v = parse_point(to_str);
      const cgm::WeightField f{{geo_seed, geo_stream}};
      const cgm::UpRightPath path = cgm::geodesic(f, u, v);
      nlohmann::json j;
      j["seed"] = geo_seed;
      j["stream"] = geo_stream;
      j["value"] = cgm::lpp(f, u, v);
      nlohmann::json pts = nlohmann::json::array();
      for (cgm::Point p : path.pts) pts.push_back({p.x1, p.x2});
      j["points"] = pts;
      std::ofstream out(geo_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + geo_out);
      out << j.dump(2) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }

  if (emit->parsed()) {
    try {
      cgm::emit_plot_data(kind, in_path, out_path, x_col, y_col);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }

  // run
  cgm::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = cgm::load_config_file(config_path);
    if (!experiment.empty()) cfg.experiment = experiment;
    if (seed_set) cfg.seed.value = seed_value;
    if (stream_set) cfg.seed.stream = seed_stream;
    if (threads_set) cfg.threads = threads;
    if (out_set) cfg.out_dir = out_dir;
    for (const auto& [k, v] : flag_params) cfg.params[k] = v;
    if (cfg.experiment.empty())
      throw cgm::ConfigError("experiment", "missing (use --experiment or --config)");
    if (cfg.threads < 1) throw cgm::ConfigError("threads", "must be >= 1");

    const cgm::RunArtifacts art = cgm::run_experiment(cfg);
    std::cout << art.stdout_line << "\n";
    std::cout << "wrote " << art.csv_path << " and " << art.summary_path << "\n";
    return 0;
  } catch (const cgm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cgm::ReplicaError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    std::cerr << "failing replica seed: value=" << cfg.seed.value << " stream="
              << cfg.seed.replica(static_cast<std::uint64_t>(e.replica)).stream << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    std::cerr << "seed: value=" << cfg.seed.value << " stream=" << cfg.seed.stream << "\n";
    return 3;
  }
}
