#include "cgm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cgm/analysis.hpp"
#include "cgm/events.hpp"
#include "cgm/lpp.hpp"
#include "cgm/queueing.hpp"
#include "cgm/stationary.hpp"

namespace cgm {

namespace {

using nlohmann::json;

struct CsvWriter {
  std::ostringstream out;

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

std::string fmt(double v) { return format_float(v); }
std::string fmt(long long v) { return std::to_string(v); }

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed.value;
  j["stream"] = cfg.seed.stream;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out_dir;
  json p 	= json::object();
  for (const auto& [k, v] : cfg.params) p[k] = v;
  j["params"] = p;
  return j;
}

json summary_json(const McSummary& m) {
  return json{{"n", m.n}, {"mean", m.mean}, {"se", m.se}, {"ci_lo", m.ci_lo}, {"ci_hi", m.ci_hi}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct Outputs {
  CsvWriter csv;
  json summary;
  std::string headline;
  std::vector<std::vector<std::string>> estimates;  // quantity, estimate, se, n
};

void est(Outputs& o, const std::string& quantity, double estimate, double se, long long n) {
  o.estimates.push_back({quantity, format_float(estimate), format_float(se), std::to_string(n)});
}

// ---- individual experiments ----------------------------------------------

Outputs run_rw_exact(const ExperimentConfig& cfg) {
  const double alpha = param_double(cfg, "alpha", 2.0);
  const double beta = param_double(cfg, "beta", 1.0);
  const long long n = param_int(cfg, "n", 3);
  if (!(alpha > beta && beta > 0)) throw ConfigError("alpha", "need alpha > beta > 0");
  if (n < 1) throw ConfigError("n", "need n >= 1");
  Outputs o;
  o.csv.header({"n", "p_exact"});
  for (long long k = 1; k <= n; ++k)
    o.csv.row({fmt(k), fmt(rw_first_passage_exact({alpha, beta}, k))});
  const double p = rw_first_passage_exact({alpha, beta}, n);
  o.summary["p_exact"] = p;
  o.summary["ballot_sum"] = rw_ballot_sum({alpha, beta});
  o.summary["never_negative_limit"] = rw_never_negative_limit({alpha, beta});
  est(o, "p_exact_n" + std::to_string(n), p, 0.0, 0);
  o.headline = "P(B_" + std::to_string(n) + ") = " + fmt(p);
  return o;
}

Outputs run_variance_check(const ExperimentConfig& cfg) {
  const double rho = param_double(cfg, "rho", 0.5);
  const long long m = param_int(cfg, "m", 25);
  const long long n = param_int(cfg, "n", 25);
  const long long replicas = param_int(cfg, "replicas", 100000);
  if (!(rho > 0 && rho < 1)) throw ConfigError("rho", "need rho in (0,1)");
  if (m < 1 || n < 1) throw ConfigError("m", "need m, n >= 1");
  if (replicas < 2) throw ConfigError("replicas", "need replicas >= 2");
  VarianceCheckResult r = variance_formula_check(rho, m, n, replicas, cfg.seed, cfg.threads);
  Outputs o;
  o.csv.header({"replica", "g", "s_zplus", "j_increment"});
  for (long long i = 0; i < replicas; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    o.csv.row({fmt(i), fmt(r.g[k]), fmt(r.s_zplus[k]), fmt(r.j_increment[k])});
  }
  o.summary["lhs_variance"] = r.lhs;
  o.summary["lhs_se"] = r.lhs_se;
  o.summary["rhs_formula"] = r.rhs;
  o.summary["rhs_se"] = r.rhs_se;
  o.summary["mean_g"] = r.mean_g;
  est(o, "lhs_variance", r.lhs, r.lhs_se, replicas);
  est(o, "rhs_formula", r.rhs, r.rhs_se, replicas);
  o.headline = "Var = " + fmt(r.lhs) + " vs formula " + fmt(r.rhs);
  return o;
}

Outputs run_exit_exponent(const ExperimentConfig& cfg) {
  const double rho = param_double(cfg, "rho", 0.5);
  const std::vector<long long> sizes = param_int_list(cfg, "sizes", "64,128,256,512");
  const long long replicas = param_int(cfg, "replicas", 2000);
  const long long tail_n = param_int(cfg, "tail-n", 256);
  const std::vector<double> tail_t = param_double_list(cfg, "tail-t", "1,2,3,4");
  if (!(rho > 0 && rho < 1)) throw ConfigError("rho", "need rho in (0,1)");
  if (sizes.size() < 3) throw ConfigError("sizes", "need at least 3 sizes");
  if (replicas < 10) throw ConfigError("replicas", "need replicas >= 10");
  std::vector<Coord> sz(sizes.begin(), sizes.end());
  ExitExponentResult r =
      exit_exponent_experiment(rho, sz, replicas, cfg.seed, cfg.threads, tail_t, tail_n);
  Outputs o;
  o.csv.header({"N", "replicas", "mean_absz", "se"});
  for (std::size_t i = 0; i < sz.size(); ++i)
    o.csv.row({fmt(static_cast<long long>(sz[i])), fmt(replicas), fmt(r.mean_absz[i]),
               fmt(r.se_absz[i])});
  o.summary["slope"] = r.fit.slope;
  o.summary["intercept"] = r.fit.intercept;
  o.summary["r_squared"] = r.fit.r_squared;
  json tails = json::array();
  for (std::size_t i = 0; i < r.tail_t.size(); ++i)
    tails.push_back({{"t", r.tail_t[i]}, {"p", r.tail_p[i]}, {"se", r.tail_se[i]}});
  o.summary["tail_N"] = tail_n;
  o.summary["tails"] = tails;
  for (std::size_t i = 0; i < sz.size(); ++i)
    est(o, "mean_absz_N" + std::to_string(sz[i]), r.mean_absz[i], r.se_absz[i], replicas);
  est(o, "slope", r.fit.slope, 0.0, replicas);
  for (std::size_t i = 0; i < r.tail_t.size(); ++i)
    est(o, "tail_p_t" + fmt(r.tail_t[i]), r.tail_p[i], r.tail_se[i], replicas);
  o.headline = "E|Z| log-log slope = " + fmt(r.fit.slope);
  return o;
}

Outputs run_queue_fixedpoint(const ExperimentConfig& cfg) {
  const double alpha = param_double(cfg, "alpha", 0.5);
  const double sigma = param_double(cfg, "sigma", 1.0);
  const long long n = param_int(cfg, "n", 100000);
  if (!(sigma > alpha && alpha > 0)) throw ConfigError("alpha", "need sigma > alpha > 0");
  if (n < 10) throw ConfigError("n", "need n >= 10");
  FixedpointStats st = fixedpoint_stats(alpha, sigma, n, cfg.seed);
  // per-index rows are recomputed to keep the experiment window identical
  const long long margin = default_burnin_margin(alpha, sigma);
  BiSequence a =
      BiSequence::iid_exponential(cfg.seed.derived(streams::arrivals), {1 - margin, n}, alpha);
  BiSequence s =
      BiSequence::iid_exponential(cfg.seed.derived(streams::services), {1 - margin, n}, sigma);
  QueueOutputs q = depart(a, s, {1, n});
  Outputs o;
  o.csv.header({"j", "departure", "sojourn", "dual_service"});
  for (long long j = 1; j <= n; ++j)
    o.csv.row({fmt(j), fmt(q.departures.at(j)), fmt(q.sojourns.at(j)),
               fmt(q.dual_services.at(j))});
  o.summary["mean_departure"] = st.mean_d;
  o.summary["mean_sojourn"] = st.mean_t;
  o.summary["mean_dual_service"] = st.mean_sv;
  o.summary["var_departure"] = st.var_d;
  json ac = json::array();
  for (double x : st.autocorr_d) ac.push_back(x);
  o.summary["autocorr_departure"] = ac;
  est(o, "mean_departure", st.mean_d, std::sqrt(st.var_d / static_cast<double>(n)), n);
  est(o, "mean_sojourn", st.mean_t, std::sqrt(st.var_t / static_cast<double>(n)), n);
  est(o, "mean_dual_service", st.mean_sv, std::sqrt(st.var_sv / static_cast<double>(n)), n);
  o.headline = "mean d/t/sv = " + fmt(st.mean_d) + " / " + fmt(st.mean_t) + " / " +
               fmt(st.mean_sv);
  return o;
}

Outputs run_queue_identity(const ExperimentConfig& cfg) {
  const double sigma = param_double(cfg, "sigma", 1.0);
  const double alpha1 = param_double(cfg, "alpha1", 0.6);
  const double alpha2 = param_double(cfg, "alpha2", 0.3);
  const long long replicas = param_int(cfg, "replicas", 1000);
  const long long len = param_int(cfg, "range-len", 20);
  if (!(sigma > alpha1 && alpha1 > alpha2 && alpha2 > 0))
    throw ConfigError("alpha1", "need sigma > alpha1 > alpha2 > 0");
  if (replicas < 1) throw ConfigError("replicas", "need replicas >= 1");
  const long long margin =
      param_int(cfg, "margin", 3 * std::max(default_burnin_margin(alpha2, sigma),
                                            default_burnin_margin(alpha2, alpha1)));
  if (margin < 3) throw ConfigError("margin", "need margin >= 3");
  std::vector<double> ok(static_cast<std::size_t>(replicas));
  parallel_for(replicas, cfg.threads, [&](long long rep) {
    const Seed s = cfg.seed.replica(static_cast<std::uint64_t>(rep));
    const IndexRange win{-margin, len};
    BiSequence b = BiSequence::iid_exponential(s.derived(1), win, alpha2);
    BiSequence a = BiSequence::iid_exponential(s.derived(2), win, alpha1);
    BiSequence sv = BiSequence::iid_exponential(s.derived(3), win, sigma);
    ok[static_cast<std::size_t>(rep)] = queue_identity_check(b, a, sv, {0, len}) ? 1.0 : 0.0;
  });
  Outputs o;
  o.csv.header({"replica", "ok"});
  long long holds = 0;
  for (long long i = 0; i < replicas; ++i) {
    o.csv.row({fmt(i), fmt(static_cast<long long>(ok[static_cast<std::size_t>(i)]))});
    if (ok[static_cast<std::size_t>(i)] > 0.5) ++holds;
  }
  o.summary["holds"] = holds;
  o.summary["replicas"] = replicas;
  est(o, "holds_fraction", static_cast<double>(holds) / static_cast<double>(replicas), 0.0,
      replicas);
  o.headline = "identity held on " + std::to_string(holds) + "/" + std::to_string(replicas);
  return o;
}

Outputs run_w_event(const ExperimentConfig& cfg) {
  const long long N = param_int(cfg, "N", 32);
  const double epsilon = param_double(cfg, "epsilon", 0.25);
  const long long replicas = param_int(cfg, "replicas", 1000);
  if (N < 2) throw ConfigError("N", "need N >= 2");
  if (!(epsilon > 0 && epsilon < 1.0 / 3.0)) throw ConfigError("epsilon", "need epsilon in (0, 1/3)");
  if (std::floor(epsilon * static_cast<double>(N)) < 1.0)
    throw ConfigError("epsilon", "need eps*N >= 1");
  if (replicas < 1) throw ConfigError("replicas", "need replicas >= 1");

  std::vector<DetectResult> res(static_cast<std::size_t>(replicas));
  parallel_for(replicas, cfg.threads, [&](long long rep) {
    const Seed s = cfg.seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {-N, -N}, {N, N});
    res[static_cast<std::size_t>(rep)] = detect_W(w, N, epsilon);
  });
  Outputs o;
  o.csv.header({"N", "epsilon", "seed", "event", "indicator", "witness_u", "witness_v"});
  std::vector<double> ind(static_cast<std::size_t>(replicas));
  for (long long i = 0; i < replicas; ++i) {
    const DetectResult& r = res[static_cast<std::size_t>(i)];
    ind[static_cast<std::size_t>(i)] = r.found ? 1.0 : 0.0;
    const Seed s = cfg.seed.replica(static_cast<std::uint64_t>(i));
    o.csv.row({fmt(N), fmt(epsilon), std::to_string(s.stream), "w-event",
               r.found ? "1" : "0",
               r.found ? to_string(r.u) : "",
               r.found ? to_string(r.v) : ""});
  }
  const McSummary p = summarize(ind);
  o.summary["p"] = summary_json(p);
  est(o, "p_w", p.mean, p.se, replicas);
  o.headline = "P(W) = " + fmt(p.mean) + " +- " + fmt(p.se);
  return o;
}

Outputs run_cylinder(const ExperimentConfig& cfg) {
  const long long N = param_int(cfg, "N", 256);
  const double xi1 = param_double(cfg, "xi1", 0.5);
  const long long i = param_int(cfg, "i", N / 4);
  const std::vector<double> rs = param_double_list(cfg, "r-list", "1,2,4,8");
  const long long replicas = param_int(cfg, "replicas", 10000);
  if (!(xi1 > 0 && xi1 < 1)) throw ConfigError("xi1", "need xi1 in (0,1)");
  if (N < 4) throw ConfigError("N", "need N >= 4");
  if (replicas < 1) throw ConfigError("replicas", "need replicas >= 1");
  const Coord p1 = static_cast<Coord>(std::floor(static_cast<double>(N) * xi1));
  if (i < 0 || i > p1) throw ConfigError("i", "column outside [0, N*xi1]");
  CylinderResult r = cylinder_experiment(xi1, N, i, rs, replicas, cfg.seed, cfg.threads);
  Outputs o;
  o.csv.header({"r", "p_miss", "se", "n"});
  for (std::size_t k = 0; k < rs.size(); ++k)
    o.csv.row({fmt(rs[k]), fmt(r.p_miss[k].mean), fmt(r.p_miss[k].se), fmt(replicas)});
  json pm = json::array();
  for (std::size_t k = 0; k < rs.size(); ++k)
    pm.push_back({{"r", rs[k]}, {"p_miss", r.p_miss[k].mean}, {"se", r.p_miss[k].se}});
  o.summary["p_miss"] = pm;
  for (std::size_t k = 0; k < rs.size(); ++k)
    est(o, "p_miss_r" + fmt(rs[k]), r.p_miss[k].mean, r.p_miss[k].se, replicas);
  o.headline = "P(miss) at r=" + fmt(rs.front()) + " is " + fmt(r.p_miss.front().mean);
  return o;
}

Outputs run_block_connection(const ExperimentConfig& cfg) {
  const long long N = param_int(cfg, "N", 64);
  const double epsilon = param_double(cfg, "epsilon", 0.25);
  const double r = param_double(cfg, "r", std::pow(static_cast<double>(N), 2.0 / 15.0));
  const double d1 = param_double(cfg, "d1", 1.0);
  const double d2 = param_double(cfg, "d2", std::pow(static_cast<double>(N), 1.0 / 8.0));
  const long long replicas = param_int(cfg, "replicas", 1000);
  if (replicas < 100) throw ConfigError("replicas", "need replicas >= 100");
  if (!(epsilon > 0 && epsilon < 1.0 / 3.0)) throw ConfigError("epsilon", "need epsilon in (0, 1/3)");
  BlockConnectionResult b =
      block_connection_probability(N, epsilon, r, d1, d2, replicas, cfg.seed, cfg.threads);
  Outputs o;
  o.csv.header({"set", "estimate", "se", "n"});
  o.csv.row({"opposite", fmt(b.opposite.mean), fmt(b.opposite.se), fmt(replicas)});
  o.csv.row({"far", fmt(b.far.mean), fmt(b.far.se), fmt(replicas)});
  o.summary["opposite"] = summary_json(b.opposite);
  o.summary["far"] = summary_json(b.far);
  est(o, "p_opposite", b.opposite.mean, b.opposite.se, replicas);
  est(o, "p_far", b.far.mean, b.far.se, replicas);
  o.headline = "P(opposite) = " + fmt(b.opposite.mean) + ", P(far) = " + fmt(b.far.mean);
  return o;
}

Outputs run_no_axis(const ExperimentConfig& cfg) {
  const std::vector<double> etas = param_double_list(cfg, "eta-list", "0.6,0.75,0.9");
  const std::vector<long long> ns = param_int_list(cfg, "n-list", "32,64,128,256,512");
  const long long replicas = param_int(cfg, "replicas", 500);
  if (replicas < 3) throw ConfigError("replicas", "need replicas >= 3");
  std::vector<Coord> nsc(ns.begin(), ns.end());
  NoAxisResult r = no_axis_divergence(etas, nsc, replicas, cfg.seed, cfg.threads);
  Outputs o;
  o.csv.header({"eta1", "median"});
  for (std::size_t k = 0; k < etas.size(); ++k) o.csv.row({fmt(etas[k]), fmt(r.medians[k])});
  json med = json::array();
  for (double m : r.medians) med.push_back(m);
  o.summary["medians"] = med;
  for (std::size_t k = 0; k < etas.size(); ++k)
    est(o, "median_eta" + fmt(etas[k]), r.medians[k], 0.0, replicas);
  o.headline = "medians: " + fmt(r.medians.front()) + " .. " + fmt(r.medians.back());
  return o;
}

Outputs run_property_suite_exp(const ExperimentConfig& cfg) {
  const long long instances = param_int(cfg, "instances", 1000);
  if (instances < 1) throw ConfigError("instances", "need instances >= 1");
  std::vector<PropertyCheck> checks = run_property_suite(instances, cfg.seed, cfg.threads);
  Outputs o;
  o.csv.header({"check", "instances", "violations"});
  long long total = 0;
  for (const PropertyCheck& c : checks) {
    o.csv.row({c.name, fmt(c.instances), fmt(c.violations)});
    total += c.violations;
  }
  o.summary["total_violations"] = total;
  for (const PropertyCheck& c : checks)
    est(o, "violations_" + c.name, static_cast<double>(c.violations), 0.0, c.instances);
  o.headline = total == 0 ? "all deterministic lemma checks passed"
                          : std::to_string(total) + " violations";
  if (total != 0) throw std::runtime_error("property suite found violations");
  return o;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"w-event",        "exit-exponent", "variance-check", "queue-fixedpoint",
          "queue-identity", "cylinder",      "block-connection", "rw-exact",
          "no-axis",        "property-suite"};
}

std::vector<PropertyCheck> run_property_suite(long long instances, const Seed& seed,
                                              int threads) {
  std::vector<PropertyCheck> out;
  auto count = [&](const std::string& name, auto&& body) {
    std::atomic<long long> violations{0};
    parallel_for(instances, threads, [&](long long i) {
      if (!body(seed.derived(hash_combine(0x70726f70, out.size())).replica(
              static_cast<std::uint64_t>(i)))) {
        violations.fetch_add(1);
      }
    });
    out.push_back({name, instances, violations.load()});
  };

  count("crossing-lemma", [](const Seed& s) {
    const WeightField f{s.derived(streams::bulk)};
    const Coord w = 1 + static_cast<Coord>(s.stream % 5), h = 1 + static_cast<Coord>((s.stream >> 8) % 5);
    const auto ok = check_crossing(f, {0, 0}, {w, h});
    return ok[0] && ok[1] && ok[2] && ok[3];
  });

  count("increment-monotonicity", [](const Seed& s) {
    const WeightField f{s.derived(streams::bulk)};
    const WeightField g{s.derived(streams::boundary_i)};
    AxisWeights hi, lo;
    for (Coord k = 1; k <= 6; ++k) {
      const double base_r = f({k, 0}), base_c = f({0, k});
      hi.row.push_back(base_r + g({k, 1}));
      lo.row.push_back(base_r);
      hi.col.push_back(base_c);
      lo.col.push_back(base_c + g({k, 2}));
    }
    return check_monotone_increments(f, {0, 0}, {6, 6}, hi, lo);
  });

  count("decomposition", [](const Seed& s) {
    const WeightField f{s.derived(streams::bulk)};
    const Point v{1 + static_cast<Coord>(s.stream % 4), 1 + static_cast<Coord>((s.stream >> 8) % 4)};
    const Point y = v + Point{4, 4};
    const double whole = lpp(f, {0, 0}, y);
    const double split = lpp(f, {0, 0}, v) + induced_boundary_lpp(f, {0, 0}, v, y);
    return std::abs(whole - split) <= 1e-9;
  });

  count("shift-lemma", [](const Seed& s) {
    const WeightField f{s.derived(streams::bulk)};
    const Point u{0, 0}, p{9, 6};
    std::vector<double> ip{0}, jp{0};
    for (Coord k = 1; k <= p.x1; ++k) ip.push_back(ip.back() + f({k, 0}));
    for (Coord l = 1; l <= p.x2; ++l) jp.push_back(jp.back() + f({0, l}));
    const long long z = boundary_exit(f, u, ip, jp, p).z;
    for (Coord k = 1; k <= 3; ++k)
      if (z > k && induced_exit(f, u, u + k * e1, p).z != z - k) return false;
    return true;
  });

  count("queue-identity", [](const Seed& s) {
    const IndexRange win{-280, 20};
    BiSequence b = BiSequence::iid_exponential(s.derived(1), win, 0.3);
    BiSequence a = BiSequence::iid_exponential(s.derived(2), win, 0.6);
    BiSequence sv = BiSequence::iid_exponential(s.derived(3), win, 1.0);
    return queue_identity_check(b, a, sv, {0, 20});
  });

  count("burke-min-identity", [](const Seed& s) {
    const WeightField f{s.derived(streams::bulk)};
    const double rho = 0.2 + 0.6 * uniform01_from_hash(hash_at(s, Coord(1)));
    StationaryBoundary b = make_independent_boundary({0, 0}, rho, 6, 6, s);
    ValueTable t = stationary_table(f, b, {6, 6});
    for (Coord i = 1; i <= 6; ++i)
      for (Coord j = 1; j <= 6; ++j) {
        const double inc_i = t.at_point({i, j}) - t.at_point({i - 1, j});
        const double inc_j = t.at_point({i, j}) - t.at_point({i, j - 1});
        const double scale = std::max(1.0, std::abs(t.at_point({i, j})));
        if (std::abs(std::min(inc_i, inc_j) - f({i, j})) > 1e-12 * scale) return false;
      }
    return true;
  });

  return out;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
  const std::vector<std::string> names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ConfigError("experiment", "unknown experiment: '" + cfg.experiment + "'");

  Outputs o;
  if (cfg.experiment == "rw-exact") o = run_rw_exact(cfg);
  else if (cfg.experiment == "variance-check") o = run_variance_check(cfg);
  else if (cfg.experiment == "exit-exponent") o = run_exit_exponent(cfg);
  else if (cfg.experiment == "queue-fixedpoint") o = run_queue_fixedpoint(cfg);
  else if (cfg.experiment == "queue-identity") o = run_queue_identity(cfg);
  else if (cfg.experiment == "w-event") o = run_w_event(cfg);
  else if (cfg.experiment == "cylinder") o = run_cylinder(cfg);
  else if (cfg.experiment == "block-connection") o = run_block_connection(cfg);
  else if (cfg.experiment == "no-axis") o = run_no_axis(cfg);
  else if (cfg.experiment == "property-suite") o = run_property_suite_exp(cfg);

  std::filesystem::create_directories(cfg.out_dir);
  RunArtifacts art;
  art.csv_path = cfg.out_dir + "/" + cfg.experiment + ".csv";
  art.summary_path = cfg.out_dir + "/" + cfg.experiment + "_summary.json";
  art.stdout_line = o.headline;
  json summary;
  summary["config"] = config_json(cfg);
  summary["results"] = o.summary;
  write_file(art.csv_path, o.csv.out.str());
  write_file(art.summary_path, summary.dump(2) + "\n");

  std::string params;
  for (const auto& [k, v] : cfg.params) params += (params.empty() ? "" : ";") + k + "=" + v;
  CsvWriter et;
  et.header({"experiment", "params", "quantity", "estimate", "se", "n"});
  for (const auto& row : o.estimates)
    et.row({cfg.experiment, params, row[0], row[1], row[2], row[3]});
  write_file(cfg.out_dir + "/" + cfg.experiment + "_estimates.csv", et.out.str());
  return art;
}

namespace {

std::vector<std::map<std::string, std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
  std::vector<std::string> cols;
  {
    std::istringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string c;
    std::map<std::string, std::string> row;
    std::size_t k = 0;
    while (std::getline(ss, c, ',')) {
      if (k < cols.size()) row[cols[k]] = c;
      ++k;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double cell_double(const std::map<std::string, std::string>& row, const std::string& key) {
  const auto it = row.find(key);
  if (it == row.end()) throw std::runtime_error("missing column: " + key);
  return std::stod(it->second);
}

}  // namespace

void emit_plot_data(const std::string& kind, const std::string& in_path,
                    const std::string& out_path, const std::string& x_column,
                    const std::string& y_column) {
  const auto rows = read_csv(in_path);
  CsvWriter out;
  if (kind == "trend") {
    out.header({"log_x", "log_y"});
    for (const auto& r : rows) {
      const double x = cell_double(r, x_column), y = cell_double(r, y_column);
      if (x > 0 && y > 0) out.row({format_float(std::log(x)), format_float(std::log(y))});
    }
  } else if (kind == "tail") {
    out.header({"x", "y"});
    for (const auto& r : rows)
      out.row({format_float(cell_double(r, x_column)), format_float(cell_double(r, y_column))});
  } else if (kind == "histogram") {
    std::vector<double> vals;
    for (const auto& r : rows) vals.push_back(cell_double(r, y_column));
    if (vals.empty()) throw std::runtime_error("histogram: no rows");
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double lo = *mn, hi = *mx;
    const int bins = 50;
    const double width = (hi - lo) / bins > 0 ? (hi - lo) / bins : 1.0;
    std::vector<long long> count(bins, 0);
    for (double v : vals) {
      int b = static_cast<int>((v - lo) / width);
      if (b >= bins) b = bins - 1;
      if (b < 0) b = 0;
      ++count[static_cast<std::size_t>(b)];
    }
    out.header({"bin_center", "count"});
    for (int b = 0; b < bins; ++b)
      out.row({format_float(lo + (b + 0.5) * width), std::to_string(count[static_cast<std::size_t>(b)])});
  } else {
    throw std::runtime_error("unknown plot kind: " + kind);
  }
  write_file(out_path, out.out.str());
}

}  // namespace cgm
