// Command-line driver for the sweep-coalescent library.
//
// Subcommands: sweep | recurrent | coalescent | rates | rho | stats | compare.
// Every run writes its statistical outputs (per-replicate CSV, tables, and a
// summary.json) plus a manifest.json echoing the full parameter set. Replicate
// i always draws from the stream (master seed, command tag, i), and results
// land in slots fixed by the replicate index, so re-running a manifest on any
// thread count reproduces the statistical outputs byte for byte; only the
// wall-clock duration in the manifest varies.
//
// Exit codes: 0 success, 2 usage (bad flags or unreadable input path),
// 3 validation (parameters or input content rejected), 4 resource.

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "sweepcoal/ensemble.hpp"
#include "sweepcoal/exchangeable.hpp"
#include "sweepcoal/expectations.hpp"
#include "sweepcoal/genealogy.hpp"
#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/lambda_sim.hpp"
#include "sweepcoal/lattice.hpp"
#include "sweepcoal/moran.hpp"
#include "sweepcoal/partition_dist.hpp"
#include "sweepcoal/recurrent.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/stats.hpp"
#include "sweepcoal/sweep_spec.hpp"
#include "sweepcoal/xi_sim.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sweepcoal;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitResource = 4;

// Replicate-stream tags, one per stochastic subcommand (compare uses a block).
constexpr std::uint64_t kTagSweep = 100;
constexpr std::uint64_t kTagCoalescent = 101;
constexpr std::uint64_t kTagRecurrent = 102;
constexpr std::uint64_t kTagGrouped = 103;
constexpr std::uint64_t kTagLimit = 104;
constexpr std::uint64_t kTagCompareBase = 110;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; the fixed float format of every output.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Replicate counts accept plain integers and scientific notation (1e5).
std::uint64_t parse_reps(const std::string& text) {
  std::size_t pos = 0;
  try {
    if (text.find_first_of(".eE") == std::string::npos) {
      const auto v = std::stoull(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !(v >= 0.0) || v > 9e18 ||
        v != std::floor(v))
      throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw usage_error("--reps: expected a nonnegative integer, got '" + text +
                      "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read input file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  if (in.bad()) throw usage_error("cannot read input file: " + path);
  return body.str();
}

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("cannot write output file: " + path.string());
}

void write_json_file(const fs::path& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// CSV field for a partition; the block separator is a comma, so quote it.
std::string csv_partition(const Partition& pi) { return '"' + pi.to_string() + '"'; }

// Runs f(i) for i in [0, reps); --threads 1 forces the serial path, anything
// else fans out under OpenMP with results keyed by index. Exceptions from
// workers are captured and rethrown once after the join.
template <class F>
void for_replicates(std::uint64_t reps, int threads, F&& f) {
#ifdef _OPENMP
  if (threads != 1) {
    const int used = threads > 0 ? threads : omp_get_max_threads();
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 64) num_threads(used)
    for (long long i = 0; i < static_cast<long long>(reps); ++i) {
      try {
        f(static_cast<std::uint64_t>(i));
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (std::uint64_t i = 0; i < reps; ++i) f(i);
}

ordered_json law_to_json(const PartitionDistribution& law) {
  ordered_json out = ordered_json::object();
  for (const auto& [pi, w] : law.weights) out[pi.to_string()] = w;
  return out;
}

struct WelfordMean {
  double mean = 0.0, m2 = 0.0;
  std::uint64_t count = 0;
  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / double(count);
    m2 += d * (x - mean);
  }
  double se() const {
    return count > 1 ? std::sqrt(m2 / double(count - 1) / double(count)) : 0.0;
  }
};

// Output bundle: a directory, the echoed parameter set, and a manifest that
// is written last because it carries the wall-clock duration.
struct RunOutput {
  fs::path dir;
  std::string command;
  ordered_json params = ordered_json::object();
  std::uint64_t master_seed = 0;
  std::uint64_t replicates = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  RunOutput(std::string cmd, const std::string& out_dir)
      : dir(out_dir), command(std::move(cmd)) {
    fs::create_directories(dir);
  }

  void finish() const {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["parameters"] = params;
    manifest["master_seed"] = master_seed;
    manifest["replicates"] = replicates;
    manifest["tool_version"] = kToolVersion;
    manifest["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_json_file(dir / "manifest.json", manifest);
  }
};

// ---------------------------------------------------------------------------
// sweep: replicate a single selective sweep and summarize the sampled
// ancestry, with exact reference laws for small samples.

struct SweepArgs {
  double twoN = 200;
  double s = 0.1;
  double r = 0.0;
  int n = 3;
  std::string reps = "10000";
  std::uint64_t seed = 1;
  int threads = 0;
  bool tv = false;
  std::string out = "out";
  std::string format = "csv";
};

int run_sweep(const SweepArgs& a) {
  SweepParams params;
  params.twoN = static_cast<long>(a.twoN);
  params.s = a.s;
  params.r = a.r;
  params.n = a.n;
  params.validate();
  const std::uint64_t reps = parse_reps(a.reps);
  if (reps == 0) throw std::invalid_argument("sweep: --reps must be >= 1");
  const bool want_tv = a.tv || a.n <= 5;
  if (a.tv && a.n > 5)
    throw std::invalid_argument(
        "sweep: --tv requires n <= 5 (reference laws are enumerated over "
        "partitions of the sample)");

  RunOutput run("sweep", a.out);
  run.master_seed = a.seed;
  run.replicates = reps;
  run.params = {{"twoN", params.twoN}, {"s", a.s},     {"r", a.r},
                {"n", a.n},           {"reps", reps},  {"seed", a.seed},
                {"threads", a.threads}, {"tv", want_tv}, {"out", a.out},
                {"format", a.format}};

  std::vector<SweepOutcome> outcomes(reps);
  for_replicates(reps, a.threads, [&](std::uint64_t i) {
    Rng rng(a.seed, kTagSweep, i);
    outcomes[i] = simulate_single_sweep(params, rng);
  });

  std::string csv = "replicate,fixed,tau,theta\n";
  PartitionCounter conditional(a.n);
  std::uint64_t fixations = 0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto& o = outcomes[i];
    csv += std::to_string(i);
    csv += o.fixed ? ",1," : ",0,";
    csv += format_double(o.tau);
    csv += ',';
    csv += csv_partition(o.theta);
    csv += '\n';
    if (o.fixed) {
      ++fixations;
      conditional.add(o.theta);
    }
  }
  write_text_file(run.dir / "replicates.csv", csv);

  const double freq = double(fixations) / double(reps);
  ordered_json summary;
  summary["reps"] = reps;
  summary["fixations"] = fixations;
  summary["fixation_frequency"] = freq;
  summary["fixation_se"] = std::sqrt(freq * (1.0 - freq) / double(reps));
  if (fixations > 0)
    summary["theta_law_conditional"] = law_to_json(conditional.distribution());
  if (want_tv && fixations > 0) {
    const double alpha = a.r * std::log(double(params.twoN)) / a.s;
    const auto empirical = conditional.distribution();
    summary["alpha"] = alpha;
    summary["tv_two_coin"] =
        tv_distance(empirical, two_coin_law(std::exp(-alpha), a.n));
    StickBreaking sb;
    sb.theta = a.r / a.s;
    sb.stages = static_cast<long>(std::floor(double(params.twoN) * a.s));
    if (sb.theta <= 1.0 && sb.stages >= 1) {
      summary["tv_stick_breaking"] =
          tv_distance(empirical, stick_breaking_partition_law(sb, a.n));
    } else {
      summary["tv_stick_breaking"] = nullptr;
      summary["tv_stick_breaking_note"] =
          "staged reference law needs r <= s and floor(twoN*s) >= 1";
    }
  }
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// coalescent: replicate the exchangeable-merger ancestry of one measure and
// report the sampled law at a fixed time, with the exact law when n <= 5.

struct CoalescentArgs {
  std::string measure_file;
  int n = 4;
  double time = 0.5;
  std::string reps = "10000";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
};

int run_coalescent(const CoalescentArgs& a) {
  const LambdaMeasure measure =
      LambdaMeasure::from_json_string(read_text_file(a.measure_file));
  measure.validate();
  if (!(a.time > 0.0))
    throw std::invalid_argument("coalescent: --time must be > 0");
  const std::uint64_t reps = parse_reps(a.reps);
  if (reps == 0) throw std::invalid_argument("coalescent: --reps must be >= 1");

  RunOutput run("coalescent", a.out);
  run.master_seed = a.seed;
  run.replicates = reps;
  run.params = {{"measure", a.measure_file}, {"n", a.n},
                {"time", a.time},            {"reps", reps},
                {"seed", a.seed},            {"threads", a.threads},
                {"out", a.out},              {"format", a.format}};

  struct Row {
    bool absorbed = false;
    double absorption = 0.0;
    Partition at_time;
  };
  std::vector<Row> rows(reps);
  for_replicates(reps, a.threads, [&](std::uint64_t i) {
    Rng rng(a.seed, kTagCoalescent, i);
    const auto path = simulate_lambda(measure, a.n, a.time, rng);
    rows[i] = {path.absorbed,
               path.absorbed ? path.absorption_time() : 0.0,
               path.state_at(a.time)};
  });

  std::string csv = "replicate,absorbed,absorption_time,partition\n";
  PartitionCounter counter(a.n);
  double block_sum = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto& row = rows[i];
    csv += std::to_string(i);
    csv += row.absorbed ? ",1," : ",0,";
    if (row.absorbed) csv += format_double(row.absorption);
    csv += ',';
    csv += csv_partition(row.at_time);
    csv += '\n';
    counter.add(row.at_time);
    block_sum += row.at_time.block_count();
  }
  write_text_file(run.dir / "replicates.csv", csv);

  ordered_json summary;
  summary["reps"] = reps;
  summary["time"] = a.time;
  summary["mean_block_count"] = block_sum / double(reps);
  summary["law"] = law_to_json(counter.distribution());
  if (a.n >= 2 && a.n <= 5) {
    const PartitionLattice lattice(measure, a.n);
    const auto exact = lattice.law_at(a.time);
    summary["exact_law"] = law_to_json(exact);
    summary["tv_to_exact"] = tv_distance(counter.distribution(), exact);
  }
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// recurrent: finite-population ancestry under recurrent sweeps next to its
// two approximations, with pairwise total-variation distances per time.

struct RecurrentArgs {
  std::string spec_file;
  double twoN = 200;
  int n = 3;
  std::vector<double> times;
  std::string reps = "2000";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
};

int run_recurrent(const RecurrentArgs& a) {
  const SweepSpec spec = SweepSpec::from_json_string(read_text_file(a.spec_file));
  spec.validate();
  if (a.times.empty())
    throw std::invalid_argument("recurrent: --times needs at least one value");
  for (std::size_t i = 0; i + 1 < a.times.size(); ++i)
    if (!(a.times[i] < a.times[i + 1]))
      throw std::invalid_argument("recurrent: --times must be strictly increasing");
  if (a.times.front() < 0.0)
    throw std::invalid_argument("recurrent: --times must be >= 0");
  const std::uint64_t reps = parse_reps(a.reps);
  if (reps == 0) throw std::invalid_argument("recurrent: --reps must be >= 1");

  // Time zero is the sample itself; only positive times enter the samplers.
  std::vector<double> positive(a.times.begin(), a.times.end());
  const bool has_zero = !positive.empty() && positive.front() == 0.0;
  if (has_zero) positive.erase(positive.begin());

  const long twoN = static_cast<long>(a.twoN);
  const XiSweepMeasure grouped(spec, double(twoN));
  const LambdaMeasure limit = lambda_from_sweep_spec(spec);
  const double tmax = positive.empty() ? 0.0 : positive.back();

  RunOutput run("recurrent", a.out);
  run.master_seed = a.seed;
  run.replicates = reps;
  run.params = {{"spec", a.spec_file}, {"twoN", twoN},   {"n", a.n},
                {"times", a.times},    {"reps", reps},   {"seed", a.seed},
                {"threads", a.threads}, {"out", a.out},  {"format", a.format}};

  const std::size_t nt = positive.size();
  std::vector<std::vector<Partition>> population(reps), grouped_states(reps),
      limit_states(reps);
  for_replicates(reps, a.threads, [&](std::uint64_t i) {
    {
      Rng rng(a.seed, kTagRecurrent, i);
      if (nt > 0) {
        const auto snap = simulate_recurrent(spec, twoN, a.n, positive, rng);
        population[i] = snap.partitions;
      }
    }
    {
      Rng rng(a.seed, kTagGrouped, i);
      grouped_states[i].reserve(nt);
      if (nt > 0) {
        const auto path = simulate_xi_sweep(grouped, a.n, tmax, rng);
        for (double t : positive) grouped_states[i].push_back(path.state_at(t));
      }
    }
    {
      Rng rng(a.seed, kTagLimit, i);
      limit_states[i].reserve(nt);
      if (nt > 0) {
        const auto path = simulate_lambda(limit, a.n, tmax, rng);
        for (double t : positive) limit_states[i].push_back(path.state_at(t));
      }
    }
  });

  const std::vector<std::pair<const char*,
                              const std::vector<std::vector<Partition>>*>>
      models = {{"population", &population},
                {"grouped", &grouped_states},
                {"limit", &limit_states}};

  // Distributions per time and model; time 0 is a point mass at singletons.
  std::vector<std::array<PartitionDistribution, 3>> laws(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t m = 0; m < 3; ++m) {
      PartitionCounter counter(a.n);
      for (std::uint64_t i = 0; i < reps; ++i)
        counter.add((*models[m].second)[i][t]);
      laws[t][m] = counter.distribution();
    }
  }
  PartitionDistribution at_zero;
  at_zero.n = a.n;
  at_zero.weights[Partition::singletons(a.n)] = 1.0;

  const bool as_json = a.format == "json";
  if (as_json) {
    ordered_json dist = ordered_json::array();
    ordered_json tvs = ordered_json::array();
    if (has_zero)
      for (const auto& [name, unused] : models) {
        (void)unused;
        dist.push_back({{"time", 0.0},
                        {"model", name},
                        {"law", law_to_json(at_zero)}});
      }
    if (has_zero)
      tvs.push_back({{"time", 0.0},
                     {"population_vs_limit", 0.0},
                     {"population_vs_grouped", 0.0},
                     {"grouped_vs_limit", 0.0}});
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t m = 0; m < 3; ++m)
        dist.push_back({{"time", positive[t]},
                        {"model", models[m].first},
                        {"law", law_to_json(laws[t][m])}});
      tvs.push_back(
          {{"time", positive[t]},
           {"population_vs_limit", tv_distance(laws[t][0], laws[t][2])},
           {"population_vs_grouped", tv_distance(laws[t][0], laws[t][1])},
           {"grouped_vs_limit", tv_distance(laws[t][1], laws[t][2])}});
    }
    write_json_file(run.dir / "distributions.json", dist);
    write_json_file(run.dir / "tvs.json", tvs);
  } else {
    std::string dist = "time,model,partition,probability\n";
    std::string tvs =
        "time,population_vs_limit,population_vs_grouped,grouped_vs_limit\n";
    auto add_law = [&dist](double t, const char* model,
                           const PartitionDistribution& law) {
      for (const auto& [pi, w] : law.weights) {
        dist += format_double(t);
        dist += ',';
        dist += model;
        dist += ',';
        dist += csv_partition(pi);
        dist += ',';
        dist += format_double(w);
        dist += '\n';
      }
    };
    if (has_zero) {
      for (const auto& [name, unused] : models) {
        (void)unused;
        add_law(0.0, name, at_zero);
      }
      tvs += "0,0,0,0\n";
    }
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t m = 0; m < 3; ++m)
        add_law(positive[t], models[m].first, laws[t][m]);
      tvs += format_double(positive[t]);
      tvs += ',';
      tvs += format_double(tv_distance(laws[t][0], laws[t][2]));
      tvs += ',';
      tvs += format_double(tv_distance(laws[t][0], laws[t][1]));
      tvs += ',';
      tvs += format_double(tv_distance(laws[t][1], laws[t][2]));
      tvs += '\n';
    }
    write_text_file(run.dir / "distributions.csv", dist);
    write_text_file(run.dir / "tvs.csv", tvs);
  }

  ordered_json summary;
  summary["reps"] = reps;
  summary["twoN"] = twoN;
  summary["n"] = a.n;
  summary["times"] = a.times;
  ordered_json tv_summary = ordered_json::array();
  if (has_zero)
    tv_summary.push_back({{"time", 0.0},
                          {"population_vs_limit", 0.0},
                          {"population_vs_grouped", 0.0},
                          {"grouped_vs_limit", 0.0}});
  for (std::size_t t = 0; t < nt; ++t)
    tv_summary.push_back(
        {{"time", positive[t]},
         {"population_vs_limit", tv_distance(laws[t][0], laws[t][2])},
         {"population_vs_grouped", tv_distance(laws[t][0], laws[t][1])},
         {"grouped_vs_limit", tv_distance(laws[t][1], laws[t][2])}});
  summary["tv"] = tv_summary;
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// rates: exact per-level tables for one measure.

struct RatesArgs {
  std::string measure_file;
  int n = 10;
  double theta = 2.0;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "csv";
};

int run_rates(const RatesArgs& a) {
  const LambdaMeasure measure =
      LambdaMeasure::from_json_string(read_text_file(a.measure_file));
  measure.validate();
  if (a.n < 2 || a.n > 500)
    throw std::invalid_argument("rates: --n must be in [2, 500]");
  if (!(a.theta >= 0.0))
    throw std::invalid_argument("rates: --theta must be >= 0");

  RunOutput run("rates", a.out);
  run.master_seed = a.seed;
  run.params = {{"measure", a.measure_file}, {"n", a.n},
                {"theta", a.theta},          {"seed", a.seed},
                {"out", a.out},              {"format", a.format}};

  const auto totals = total_rates(measure, a.n);
  const auto visit = visit_probabilities(measure, a.n);
  std::vector<double> seg(a.n + 1, 0.0);
  for (int m = 2; m <= a.n; ++m) seg[m] = expected_segregating(measure, a.theta, m);

  if (a.format == "json") {
    ordered_json tables;
    ordered_json merger = ordered_json::array();
    for (int b = 2; b <= a.n; ++b)
      for (int k = 2; k <= b; ++k)
        merger.push_back({{"b", b}, {"k", k}, {"rate", lambda_rate(measure, b, k)}});
    ordered_json levels = ordered_json::array();
    for (int b = 2; b <= a.n; ++b)
      levels.push_back({{"b", b},
                        {"lambda_b", totals.lambda_b(b)},
                        {"alpha_b", totals.alpha_b(b)},
                        {"visit_probability", visit[b]},
                        {"expected_segregating", seg[b]}});
    tables["merger_rates"] = merger;
    tables["levels"] = levels;
    write_json_file(run.dir / "tables.json", tables);
  } else {
    std::string merger = "b,k,rate\n";
    for (int b = 2; b <= a.n; ++b)
      for (int k = 2; k <= b; ++k) {
        merger += std::to_string(b);
        merger += ',';
        merger += std::to_string(k);
        merger += ',';
        merger += format_double(lambda_rate(measure, b, k));
        merger += '\n';
      }
    write_text_file(run.dir / "merger_rates.csv", merger);
    std::string levels =
        "b,lambda_b,alpha_b,visit_probability,expected_segregating\n";
    for (int b = 2; b <= a.n; ++b) {
      levels += std::to_string(b);
      levels += ',';
      levels += format_double(totals.lambda_b(b));
      levels += ',';
      levels += format_double(totals.alpha_b(b));
      levels += ',';
      levels += format_double(visit[b]);
      levels += ',';
      levels += format_double(seg[b]);
      levels += '\n';
    }
    write_text_file(run.dir / "levels.csv", levels);
  }

  ordered_json summary;
  summary["n"] = a.n;
  summary["theta"] = a.theta;
  summary["pair_rate"] = totals.lambda_b(2);
  summary["expected_segregating_n"] = seg[a.n];
  summary["expected_pairwise"] = expected_pairwise(measure, a.theta);
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// rho: the limiting shortfall of segregating sites, or a refusal when the
// measure's level sums diverge.

struct RhoArgs {
  std::string measure_file;
  double theta = 2.0;
  double tol = 1e-3;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "csv";
};

int run_rho(const RhoArgs& a) {
  const LambdaMeasure measure =
      LambdaMeasure::from_json_string(read_text_file(a.measure_file));
  measure.validate();

  RunOutput run("rho", a.out);
  run.master_seed = a.seed;
  run.params = {{"measure", a.measure_file}, {"theta", a.theta},
                {"tol", a.tol},              {"seed", a.seed},
                {"out", a.out},              {"format", a.format}};

  const auto result = rho(measure, a.theta, a.tol);
  ordered_json summary;
  summary["theta"] = a.theta;
  summary["rho"] = result.value;
  summary["truncation_bound"] = result.truncation_bound;
  summary["truncation_level"] = result.truncation_level;
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// stats: replicate ensembles of summary statistics via the block-size kernel.

struct StatsArgs {
  std::string measure_file;
  int n = 10;
  double theta = 2.0;
  std::string reps = "10000";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
};

int run_stats(const StatsArgs& a) {
  const LambdaMeasure measure =
      LambdaMeasure::from_json_string(read_text_file(a.measure_file));
  measure.validate();
  const std::uint64_t reps = parse_reps(a.reps);
  if (reps == 0) throw std::invalid_argument("stats: --reps must be >= 1");

  RunOutput run("stats", a.out);
  run.master_seed = a.seed;
  run.replicates = reps;
  run.params = {{"measure", a.measure_file}, {"n", a.n},
                {"theta", a.theta},          {"reps", reps},
                {"seed", a.seed},            {"threads", a.threads},
                {"out", a.out},              {"format", a.format}};

  EnsembleConfig config;
  config.master_seed = a.seed;
  config.reps = reps;
  config.policy =
      a.threads == 1 ? ExecutionPolicy::serial : ExecutionPolicy::parallel;
  config.threads = a.threads;
  const auto ensemble = sample_stat_ensemble(measure, a.n, a.theta, config);

  const bool with_d = a.n >= 4;
  std::string csv = "replicate,n,theta,S_n,Delta_n,eta_e,eta_i,J_n,I_n,taj_num,fuli_num";
  if (with_d) csv += ",taj_D,fuli_D";
  csv += '\n';
  WelfordMean ws, wd, we, wi, wj, wl, wt, wf;
  DStatConfig raw;
  raw.normalize = false;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto& s = ensemble[i];
    const auto numerators = d_statistics(s, raw);
    csv += std::to_string(i);
    csv += ',';
    csv += std::to_string(s.n);
    csv += ',';
    csv += format_double(s.theta);
    csv += ',';
    csv += std::to_string(s.s_n);
    csv += ',';
    csv += format_double(s.delta_n);
    csv += ',';
    csv += std::to_string(s.eta_e);
    csv += ',';
    csv += std::to_string(s.eta_i);
    csv += ',';
    csv += format_double(s.external_length);
    csv += ',';
    csv += format_double(s.internal_length);
    csv += ',';
    csv += format_double(numerators.tajima_numerator);
    csv += ',';
    csv += format_double(numerators.fu_li_numerator);
    if (with_d) {
      const auto normalized = d_statistics(s);
      csv += ',';
      if (normalized.tajima_d) csv += format_double(*normalized.tajima_d);
      csv += ',';
      if (normalized.fu_li_d) csv += format_double(*normalized.fu_li_d);
    }
    csv += '\n';
    ws.add(double(s.s_n));
    wd.add(s.delta_n);
    we.add(double(s.eta_e));
    wi.add(double(s.eta_i));
    wj.add(s.external_length);
    wl.add(s.internal_length);
    wt.add(numerators.tajima_numerator);
    wf.add(numerators.fu_li_numerator);
  }
  write_text_file(run.dir / "replicates.csv", csv);

  ordered_json summary;
  summary["reps"] = reps;
  summary["n"] = a.n;
  summary["theta"] = a.theta;
  auto pack = [](const WelfordMean& w) {
    return ordered_json{{"mean", w.mean}, {"se", w.se()}};
  };
  summary["S_n"] = pack(ws);
  summary["Delta_n"] = pack(wd);
  summary["eta_e"] = pack(we);
  summary["eta_i"] = pack(wi);
  summary["J_n"] = pack(wj);
  summary["I_n"] = pack(wl);
  summary["taj_num"] = pack(wt);
  summary["fuli_num"] = pack(wf);
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// compare: matched-strength sweeps across population sizes, measuring how
// fast the sampled ancestry law approaches the single-coin reference and how
// the staged reference improves on it.

struct CompareArgs {
  std::vector<double> twoN;
  double s = 0.1;
  double alpha = 1.0;
  int n = 3;
  std::string reps = "10000";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
};

int run_compare(const CompareArgs& a) {
  if (a.twoN.empty())
    throw std::invalid_argument("compare: --twoN needs at least one value");
  if (a.n < 2 || a.n > 5)
    throw std::invalid_argument(
        "compare: --n must be in [2, 5] (reference laws are enumerated over "
        "partitions of the sample)");
  if (!(a.alpha >= 0.0))
    throw std::invalid_argument("compare: --alpha must be >= 0");
  const std::uint64_t reps = parse_reps(a.reps);
  if (reps == 0) throw std::invalid_argument("compare: --reps must be >= 1");

  // All sizes share the rescaled strength alpha = r log(twoN) / s, so the
  // single-coin reference law is the same row to row.
  std::vector<SweepParams> params(a.twoN.size());
  for (std::size_t j = 0; j < a.twoN.size(); ++j) {
    params[j].twoN = static_cast<long>(a.twoN[j]);
    params[j].s = a.s;
    params[j].r = a.alpha * a.s / std::log(a.twoN[j]);
    params[j].n = a.n;
    params[j].validate();
  }

  RunOutput run("compare", a.out);
  run.master_seed = a.seed;
  run.replicates = reps;
  run.params = {{"twoN", a.twoN},   {"s", a.s},       {"alpha", a.alpha},
                {"n", a.n},         {"reps", reps},   {"seed", a.seed},
                {"threads", a.threads}, {"out", a.out}, {"format", a.format}};

  const auto single_coin = two_coin_law(std::exp(-a.alpha), a.n);
  const Partition untouched = Partition::singletons(a.n);

  struct SizeRow {
    std::uint64_t fixations = 0, loss_marked = 0, losses = 0;
    PartitionCounter conditional;
    double tv_single = 0.0, tv_single_se = 0.0;
    double tv_staged = 0.0, tv_staged_se = 0.0;
    explicit SizeRow(int n) : conditional(n) {}
  };
  std::vector<SizeRow> table;
  table.reserve(a.twoN.size());

  for (std::size_t j = 0; j < a.twoN.size(); ++j) {
    std::vector<SweepOutcome> outcomes(reps);
    for_replicates(reps, a.threads, [&](std::uint64_t i) {
      Rng rng(a.seed, kTagCompareBase + j, i);
      outcomes[i] = simulate_single_sweep(params[j], rng);
    });
    SizeRow row(a.n);
    for (const auto& o : outcomes) {
      if (o.fixed) {
        ++row.fixations;
        row.conditional.add(o.theta);
      } else {
        ++row.losses;
        if (!(o.theta == untouched)) ++row.loss_marked;
      }
    }
    if (row.fixations > 0) {
      const auto empirical = row.conditional.distribution();
      StickBreaking sb;
      sb.theta = params[j].r / a.s;
      sb.stages = static_cast<long>(std::floor(a.twoN[j] * a.s));
      const auto staged = stick_breaking_partition_law(sb, a.n);
      Rng boot(a.seed, kTagCompareBase + 64 + j, 0);
      row.tv_single = tv_distance(empirical, single_coin);
      row.tv_single_se = tv_bootstrap_se(row.conditional, single_coin, 200, boot);
      row.tv_staged = tv_distance(empirical, staged);
      row.tv_staged_se = tv_bootstrap_se(row.conditional, staged, 200, boot);
    }
    table.push_back(std::move(row));
  }

  auto row_json = [&](std::size_t j) {
    const auto& row = table[j];
    ordered_json o;
    o["twoN"] = params[j].twoN;
    o["r"] = params[j].r;
    o["fixations"] = row.fixations;
    o["tv_two_coin"] = row.tv_single;
    o["tv_two_coin_boot_se"] = row.tv_single_se;
    o["tv_stick_breaking"] = row.tv_staged;
    o["tv_stick_breaking_boot_se"] = row.tv_staged_se;
    const double losses = double(row.losses);
    o["loss_marked_frequency"] =
        row.losses > 0 ? double(row.loss_marked) / losses : 0.0;
    return o;
  };

  if (a.format == "json") {
    ordered_json rows = ordered_json::array();
    for (std::size_t j = 0; j < table.size(); ++j) rows.push_back(row_json(j));
    write_json_file(run.dir / "decay.json", rows);
  } else {
    std::string csv =
        "twoN,r,fixations,tv_two_coin,tv_two_coin_boot_se,tv_stick_breaking,"
        "tv_stick_breaking_boot_se,loss_marked_frequency\n";
    for (std::size_t j = 0; j < table.size(); ++j) {
      const auto& row = table[j];
      csv += std::to_string(params[j].twoN);
      csv += ',';
      csv += format_double(params[j].r);
      csv += ',';
      csv += std::to_string(row.fixations);
      csv += ',';
      csv += format_double(row.tv_single);
      csv += ',';
      csv += format_double(row.tv_single_se);
      csv += ',';
      csv += format_double(row.tv_staged);
      csv += ',';
      csv += format_double(row.tv_staged_se);
      csv += ',';
      csv += format_double(row.losses > 0
                               ? double(row.loss_marked) / double(row.losses)
                               : 0.0);
      csv += '\n';
    }
    write_text_file(run.dir / "decay.csv", csv);
  }

  ordered_json summary;
  summary["reps_per_size"] = reps;
  summary["alpha"] = a.alpha;
  ordered_json rows = ordered_json::array();
  for (std::size_t j = 0; j < table.size(); ++j) rows.push_back(row_json(j));
  summary["rows"] = rows;
  write_json_file(run.dir / "summary.json", summary);
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweep-coalescent simulators and exact tables"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Replicate one selective sweep and summarize the sampled ancestry");
  sweep_cmd->add_option("--twoN", sweep.twoN, "chromosome count")->required();
  sweep_cmd->add_option("--s", sweep.s, "selective advantage")->required();
  sweep_cmd->add_option("--r", sweep.r, "per-birth recombination probability");
  sweep_cmd->add_option("--n", sweep.n, "sample size")->required();
  sweep_cmd->add_option("--reps", sweep.reps, "replicates");
  sweep_cmd->add_option("--seed", sweep.seed, "master seed");
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0 = all)");
  sweep_cmd->add_flag("--tv", sweep.tv, "require reference-law distances");
  sweep_cmd->add_option("--out", sweep.out, "output directory");
  sweep_cmd->add_option("--format", sweep.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  CoalescentArgs coal;
  auto* coal_cmd = app.add_subcommand(
      "coalescent", "Replicate the exchangeable-merger ancestry of one measure");
  coal_cmd->add_option("--measure", coal.measure_file, "measure JSON file")
      ->required();
  coal_cmd->add_option("--n", coal.n, "sample size")->required();
  coal_cmd->add_option("--time", coal.time, "evaluation time")->required();
  coal_cmd->add_option("--reps", coal.reps, "replicates");
  coal_cmd->add_option("--seed", coal.seed, "master seed");
  coal_cmd->add_option("--threads", coal.threads, "worker threads (0 = all)");
  coal_cmd->add_option("--out", coal.out, "output directory");
  coal_cmd->add_option("--format", coal.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  RecurrentArgs rec;
  auto* rec_cmd = app.add_subcommand(
      "recurrent",
      "Finite-population ancestry under recurrent sweeps vs its approximations");
  rec_cmd->add_option("--spec", rec.spec_file, "sweep landscape JSON file")
      ->required();
  rec_cmd->add_option("--twoN", rec.twoN, "chromosome count")->required();
  rec_cmd->add_option("--n", rec.n, "sample size")->required();
  rec_cmd->add_option("--times", rec.times, "evaluation times (ascending)")
      ->required()
      ->delimiter(',');
  rec_cmd->add_option("--reps", rec.reps, "replicates");
  rec_cmd->add_option("--seed", rec.seed, "master seed");
  rec_cmd->add_option("--threads", rec.threads, "worker threads (0 = all)");
  rec_cmd->add_option("--out", rec.out, "output directory");
  rec_cmd->add_option("--format", rec.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  RatesArgs rates;
  auto* rates_cmd =
      app.add_subcommand("rates", "Exact per-level tables for one measure");
  rates_cmd->add_option("--measure", rates.measure_file, "measure JSON file")
      ->required();
  rates_cmd->add_option("--n", rates.n, "largest level");
  rates_cmd->add_option("--theta", rates.theta, "mutation rate");
  rates_cmd->add_option("--seed", rates.seed, "master seed (echoed)");
  rates_cmd->add_option("--out", rates.out, "output directory");
  rates_cmd->add_option("--format", rates.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  RhoArgs rho_args;
  auto* rho_cmd = app.add_subcommand(
      "rho", "Limiting shortfall of segregating sites under the pairwise baseline");
  rho_cmd->add_option("--measure", rho_args.measure_file, "measure JSON file")
      ->required();
  rho_cmd->add_option("--theta", rho_args.theta, "mutation rate");
  rho_cmd->add_option("--tol", rho_args.tol, "certified truncation tolerance");
  rho_cmd->add_option("--seed", rho_args.seed, "master seed (echoed)");
  rho_cmd->add_option("--out", rho_args.out, "output directory");
  rho_cmd->add_option("--format", rho_args.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Replicate ensembles of genealogy summary statistics");
  stats_cmd->add_option("--measure", stats.measure_file, "measure JSON file")
      ->required();
  stats_cmd->add_option("--n", stats.n, "sample size")->required();
  stats_cmd->add_option("--theta", stats.theta, "mutation rate")->required();
  stats_cmd->add_option("--reps", stats.reps, "replicates");
  stats_cmd->add_option("--seed", stats.seed, "master seed");
  stats_cmd->add_option("--threads", stats.threads, "worker threads (0 = all)");
  stats_cmd->add_option("--out", stats.out, "output directory");
  stats_cmd->add_option("--format", stats.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Matched-strength sweep ancestry across population sizes");
  compare_cmd->add_option("--twoN", compare.twoN, "chromosome counts (ascending)")
      ->required()
      ->delimiter(',');
  compare_cmd->add_option("--s", compare.s, "selective advantage")->required();
  compare_cmd->add_option("--alpha", compare.alpha,
                          "rescaled recombination strength r log(twoN) / s")
      ->required();
  compare_cmd->add_option("--n", compare.n, "sample size")->required();
  compare_cmd->add_option("--reps", compare.reps, "replicates per size");
  compare_cmd->add_option("--seed", compare.seed, "master seed");
  compare_cmd->add_option("--threads", compare.threads, "worker threads (0 = all)");
  compare_cmd->add_option("--out", compare.out, "output directory");
  compare_cmd->add_option("--format", compare.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep(sweep);
    if (coal_cmd->parsed()) return run_coalescent(coal);
    if (rec_cmd->parsed()) return run_recurrent(rec);
    if (rates_cmd->parsed()) return run_rates(rates);
    if (rho_cmd->parsed()) return run_rho(rho_args);
    if (stats_cmd->parsed()) return run_stats(stats);
    if (compare_cmd->parsed()) return run_compare(compare);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  }
  return 0;
}
