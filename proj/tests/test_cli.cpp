#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cgm/config.hpp"

using namespace cgm;

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

CmdResult run_cmd(const std::string& args) {
  const std::string out_file = "/tmp/cgmlab_test_stdout.txt";
  const std::string err_file = "/tmp/cgmlab_test_stderr.txt";
  const std::string cmd =
      std::string(CGMLAB_BIN) + " " + args + " >" + out_file + " 2>" + err_file;
  const int raw = std::system(cmd.c_str());
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return {WEXITSTATUS(raw), slurp(out_file), slurp(err_file)};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rw-exact prints the closed-form value") {
  CmdResult r = run_cmd("run --experiment rw-exact --alpha 2 --beta 1 --n 3 --out /tmp/cgm_t1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.0658436") != std::string::npos);  // 16/243
}

TEST_CASE("list-experiments names all ten experiments") {
  CmdResult r = run_cmd("list-experiments");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"w-event", "exit-exponent", "variance-check", "queue-fixedpoint", "queue-identity",
        "cylinder", "block-connection", "rw-exact", "no-axis", "property-suite"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("property suite passes from the command line") {
  CmdResult r = run_cmd("run --experiment property-suite --seed 7 --instances 200 --out /tmp/cgm_t2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("all deterministic lemma checks passed") != std::string::npos);
}

TEST_CASE("config validation failures name the offending key and exit 2") {
  CmdResult r = run_cmd("run --experiment variance-check --rho 1.5 --out /tmp/cgm_t3");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("rho") != std::string::npos);

  CmdResult r2 = run_cmd("run --experiment no-such-thing --out /tmp/cgm_t3");
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("experiment") != std::string::npos);
}

TEST_CASE("runtime errors print the failing seed and exit 3") {
  // a deliberately tiny window starves the burn-in: the argmax certificate
  // fails at runtime rather than at validation
  CmdResult r = run_cmd(
      "run --experiment queue-identity --sigma 1.0 --alpha1 0.95 --alpha2 0.9 "
      "--margin 6 --replicas 20 --seed 3 --out /tmp/cgm_t4");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("reruns are byte-identical across thread counts") {
  CmdResult a = run_cmd(
      "run --experiment variance-check --rho 0.5 --m 5 --n 5 --replicas 4000 --seed 99 "
      "--threads 1 --out /tmp/cgm_t5a");
  CmdResult b = run_cmd(
      "run --experiment variance-check --rho 0.5 --m 5 --n 5 --replicas 4000 --seed 99 "
      "--threads 2 --out /tmp/cgm_t5b");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp("/tmp/cgm_t5a/variance-check.csv") == slurp("/tmp/cgm_t5b/variance-check.csv"));
  // exact rerun of the same config: every output byte matches
  const std::string csv_before = slurp("/tmp/cgm_t5b/variance-check.csv");
  const std::string json_before = slurp("/tmp/cgm_t5b/variance-check_summary.json");
  CmdResult c = run_cmd(
      "run --experiment variance-check --rho 0.5 --m 5 --n 5 --replicas 4000 --seed 99 "
      "--threads 2 --out /tmp/cgm_t5b");
  REQUIRE(c.exit_code == 0);
  CHECK(slurp("/tmp/cgm_t5b/variance-check.csv") == csv_before);
  CHECK(slurp("/tmp/cgm_t5b/variance-check_summary.json") == json_before);
}

TEST_CASE("config files round-trip and flags override them") {
  const std::string path = "/tmp/cgm_t6.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "experiment = rw-exact\n";
    out << "alpha = 2\nbeta = 1\nn = 3\n";
    out << "seed = 11\nthreads = 2\nout = /tmp/cgm_t6\n";
  }
  ExperimentConfig cfg = load_config_file(path);
  CHECK(cfg.experiment == "rw-exact");
  CHECK(cfg.seed.value == 11);
  CHECK(cfg.threads == 2);
  ExperimentConfig reparsed = parse_config_text(serialize_config(cfg));
  CHECK(reparsed == cfg);

  CmdResult r = run_cmd("run --config " + path + " --n 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.6666666") != std::string::npos);  // P(B_1) = 2/3 overrides n
}

TEST_CASE("plot data reshaping") {
  CmdResult r0 = run_cmd(
      "run --experiment exit-exponent --sizes 8,16,32 --replicas 200 --tail-n 16 "
      "--tail-t 1,2 --seed 5 --threads 2 --out /tmp/cgm_t7");
  REQUIRE(r0.exit_code == 0);
  CmdResult r1 = run_cmd(
      "emit-plot-data --kind trend --in /tmp/cgm_t7/exit-exponent.csv "
      "--out /tmp/cgm_t7/trend.csv --x N --y mean_absz");
  CHECK(r1.exit_code == 0);
  const std::string trend = slurp("/tmp/cgm_t7/trend.csv");
  CHECK(trend.find("log_x,log_y") == 0);

  CmdResult r2 = run_cmd(
      "run --experiment variance-check --rho 0.5 --m 4 --n 4 --replicas 20000 --seed 12 "
      "--threads 2 --out /tmp/cgm_t8");
  REQUIRE(r2.exit_code == 0);
  CmdResult r3 = run_cmd(
      "emit-plot-data --kind histogram --in /tmp/cgm_t8/variance-check.csv "
      "--out /tmp/cgm_t8/hist.csv --y j_increment");
  CHECK(r3.exit_code == 0);
  // weighted mean of bin centers reproduces the Exp(rho) mean 1/0.5 = 2
  std::ifstream in("/tmp/cgm_t8/hist.csv");
  std::string line;
  std::getline(in, line);
  double wsum = 0, total = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double center = std::stod(line.substr(0, comma));
    const double count = std::stod(line.substr(comma + 1));
    wsum += center * count;
    total += count;
  }
  CHECK(total == 20000);
  CHECK(std::abs(wsum / total - 2.0) < 0.1);

  CmdResult r4 = run_cmd("emit-plot-data --kind tail --in /nonexistent.csv --out /tmp/x.csv --y p");
  CHECK(r4.exit_code == 2);
}

TEST_CASE("geodesics export as JSON point lists") {
  CmdResult r =
      run_cmd("geodesic --seed 42 --from -2,-1 --to 5,4 --out /tmp/cgm_t9.json");
  REQUIRE(r.exit_code == 0);
  const std::string j = slurp("/tmp/cgm_t9.json");
  CHECK(j.find("\"points\"") != std::string::npos);
  CHECK(j.find("\"value\"") != std::string::npos);
  // path length |v-u|_1 + 1 points: 13 coordinate pairs
  std::size_t pairs = 0, pos = 0;
  while ((pos = j.find('[', pos + 1)) != std::string::npos) ++pairs;
  CHECK(pairs >= 13);
}

TEST_CASE("estimates table carries the uniform summary columns") {
  CmdResult r = run_cmd(
      "run --experiment w-event --N 8 --replicas 50 --seed 4 --out /tmp/cgm_t10");
  REQUIRE(r.exit_code == 0);
  const std::string est = slurp("/tmp/cgm_t10/w-event_estimates.csv");
  CHECK(est.find("experiment,params,quantity,estimate,se,n") == 0);
  CHECK(est.find("w-event,") != std::string::npos);
  CHECK(est.find("p_w") != std::string::npos);
}
