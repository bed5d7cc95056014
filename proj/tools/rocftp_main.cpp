// Command-line front end: perfect sampling, block-length calibration,
// most-interest-range computation, and the replication experiments, all
// emitting deterministic CSV/JSON keyed by --seed.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rocftp/cftp.hpp"
#include "rocftp/diagnostics.hpp"
#include "rocftp/errors.hpp"
#include "rocftp/experiments.hpp"
#include "rocftp/parallel.hpp"
#include "rocftp/report_io.hpp"
#include "rocftp/rocftp.hpp"
#include "rocftp/targets.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

using rocftp::io::format_double17;

std::pair<double, double> parse_pair(const std::string& text,
                                     const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument(std::string(flag) + " expects <lo,hi>");
  try {
    const double lo = std::stod(text.substr(0, comma));
    const double hi = std::stod(text.substr(comma + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(flag) + " expects <lo,hi>");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      if constexpr (std::is_same_v<T, double>)
        out.push_back(std::stod(item));
      else
        out.push_back(static_cast<T>(std::stoll(item)));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) +
                                  " expects a comma-separated list");
    }
  }
  if (out.empty())
    throw std::invalid_argument(std::string(flag) + " expects at least one value");
  return out;
}

void emit(const std::optional<std::string>& out_path, const std::string& body) {
  if (out_path)
    rocftp::io::write_file_atomic(*out_path, body);
  else
    std::cout << body;
}

// Target plus the run geometry, with built-in case defaults filled in
// for anything the user left unset.
struct ResolvedRun {
  rocftp::Target target;
  double lo;
  double hi;
  double sigma;
  std::optional<int> block_length;
};

ResolvedRun resolve_run(const std::string& target_spec,
                        const std::optional<std::string>& range,
                        const std::optional<double>& sigma,
                        const std::optional<int>& block_length,
                        bool need_range = true) {
  const rocftp::BuiltinCase* builtin = rocftp::find_builtin_case(target_spec);
  rocftp::Target target = builtin ? builtin->target
                                  : rocftp::parse_target(target_spec);
  double lo = 0.0, hi = 0.0;
  if (range) {
    std::tie(lo, hi) = parse_pair(*range, "--range");
  } else if (builtin) {
    lo = builtin->range_lo;
    hi = builtin->range_hi;
  } else if (need_range) {
    throw std::invalid_argument("--range is required for custom targets");
  }
  double s = sigma ? *sigma : (builtin ? builtin->sigma : 1.0);
  std::optional<int> T = block_length;
  if (!T && builtin) T = builtin->block_length;
  return ResolvedRun{std::move(target), lo, hi, s, T};
}

int require_block_length(const ResolvedRun& run) {
  if (!run.block_length)
    throw std::invalid_argument(
        "no block length: pass --block-length or --calibrate");
  return *run.block_length;
}

std::string seed_comment(std::uint64_t seed, std::size_t reps) {
  return "# seed=" + std::to_string(seed) + " reps=" + std::to_string(reps) +
         "\n";
}

std::string samples_csv(const std::vector<double>& samples) {
  std::string out = "sample\n";
  for (double s : samples) {
    out += format_double17(s);
    out += "\n";
  }
  return out;
}

std::string samples_json(const rocftp::SampleResult& result) {
  nlohmann::json j;
  j["samples"] = result.samples;
  j["stats"] = {{"blocks", result.stats.blocks},
                {"coalescent_blocks", result.stats.coalescent_blocks},
                {"total_steps", result.stats.total_steps},
                {"p_hat", result.stats.p_hat}};
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Perfect sampling from one-dimensional mixture targets via read-once "
      "coupling-from-the-past with a Metropolis-multishift coupler."};
  app.require_subcommand(1);

  // Shared option storage; each subcommand binds the subset it uses.
  std::string target_spec;
  std::optional<std::string> range;
  std::optional<double> sigma;
  std::optional<int> block_length;
  std::optional<std::size_t> calibrate_reps;
  std::uint64_t seed = 1;
  std::size_t n = 10000;
  std::size_t reps = 10000;
  std::uint64_t max_blocks = 1'000'000;
  std::optional<double> x0;
  std::optional<std::string> out_path;
  std::string format = "csv";
  unsigned threads = 0;

  auto add_common = [&](CLI::App* cmd, bool with_target = true) {
    if (with_target)
      cmd->add_option("--target", target_spec,
                      "Built-in case name (case1..case6) or a mixture "
                      "expression like \"0.8*N(-2,1)+0.2*N(2,1)\"")
          ->required();
    cmd->add_option("--seed", seed, "Master seed")
        ->envname("ROCFTP_SEED")
        ->capture_default_str();
    cmd->add_option("--out", out_path, "Output path (default: stdout)");
    cmd->add_option("--threads", threads,
                    "Worker threads for replications (0 = all cores); the "
                    "output never depends on this")
        ->capture_default_str();
    return cmd;
  };
  auto add_geometry = [&](CLI::App* cmd) {
    cmd->add_option("--range", range,
                    "Starting range <lo,hi>; defaults to the built-in "
                    "case's range");
    cmd->add_option("--sigma", sigma,
                    "Proposal scale; defaults to the built-in case's scale "
                    "(1 for custom targets)");
  };

  CLI::App* cmd_sample = add_common(app.add_subcommand(
      "sample", "Draw i.i.d. samples from the target"));
  add_geometry(cmd_sample);
  cmd_sample->add_option("--block-length", block_length, "Block length T");
  cmd_sample->add_option("--calibrate", calibrate_reps,
                         "Calibrate T as the median coalescence time over "
                         "this many trials");
  cmd_sample->add_option("--n", n, "Number of samples")->capture_default_str();
  cmd_sample->add_option("--max-blocks", max_blocks, "Block budget")
      ->capture_default_str();
  cmd_sample->add_option("--x0", x0,
                         "Primary chain start (default: range midpoint)");
  cmd_sample->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* cmd_calibrate = add_common(app.add_subcommand(
      "calibrate", "Estimate the block length as the median coalescence "
                   "time of the extreme and midpoint chains"));
  add_geometry(cmd_calibrate);
  cmd_calibrate->add_option("--reps", reps, "Calibration trials")
      ->capture_default_str();

  double mir_epsilon = 0.001;
  std::size_t mir_resolution = 100000;
  CLI::App* cmd_mir = add_common(app.add_subcommand(
      "mir", "Most-interest range: smallest region holding 1-epsilon of "
             "the target mass"));
  cmd_mir->add_option("--epsilon", mir_epsilon, "Excluded tail mass")
      ->capture_default_str();
  cmd_mir->add_option("--resolution", mir_resolution, "Grid cells (>= 1000)")
      ->capture_default_str();

  std::string t_list = "20,30,40,50,60";
  CLI::App* cmd_sweep = add_common(app.add_subcommand(
      "sweep-block", "Per-block coalescence probability and blocks-per-"
                     "sample across block lengths"));
  add_geometry(cmd_sweep);
  cmd_sweep->add_option("--block-lengths", t_list, "Comma list of T values")
      ->capture_default_str();
  cmd_sweep->add_option("--reps", reps, "Replications per T")
      ->capture_default_str();

  std::string paths_list = "2,10,100";
  CLI::App* cmd_coal = add_common(app.add_subcommand(
      "coalescence", "Joint coalescence times of nested path sets"));
  add_geometry(cmd_coal);
  cmd_coal->add_option("--paths", paths_list,
                       "Ascending comma list of path counts, starting at 2")
      ->capture_default_str();
  cmd_coal->add_option("--reps", reps, "Replications")->capture_default_str();

  std::string starts_list;
  int t_max = 100;
  CLI::App* cmd_decay = add_common(app.add_subcommand(
      "decay", "Survival curve of the coupling time, with the total-"
               "variation bound 4*P(T*>t)"));
  add_geometry(cmd_decay);
  cmd_decay->add_option("--starts", starts_list,
                        "Comma list of starting points (default: range "
                        "endpoints and midpoint)");
  cmd_decay->add_option("--t-max", t_max, "Largest t")->capture_default_str();
  cmd_decay->add_option("--reps", reps, "Replications")->capture_default_str();

  double gof_delta = 0.5;
  CLI::App* cmd_gof = add_common(app.add_subcommand(
      "gof", "Goodness of fit of generated samples: KS test, QQ outliers, "
             "mode masses"));
  add_geometry(cmd_gof);
  cmd_gof->add_option("--block-length", block_length, "Block length T");
  cmd_gof->add_option("--calibrate", calibrate_reps,
                      "Calibrate T before sampling");
  cmd_gof->add_option("--n", n, "Number of samples")->capture_default_str();
  cmd_gof->add_option("--delta", gof_delta,
                      "QQ outlier threshold in target units")
      ->capture_default_str();
  cmd_gof->add_option("--max-blocks", max_blocks, "Block budget")
      ->capture_default_str();

  double rho = 0.92;
  std::string start_pair = "-100,100";
  int max_doublings = 40;
  CLI::App* cmd_cftp = add_common(
      app.add_subcommand("cftp-demo",
                         "Classic CFTP on the AR(1)-multishift chain"),
      /*with_target=*/false);
  cmd_cftp->add_option("--rho", rho, "AR(1) coefficient, |rho| < 1")
      ->capture_default_str();
  cmd_cftp->add_option("--start", start_pair, "Starting pair <lo,hi>")
      ->capture_default_str();
  cmd_cftp->add_option("--reps", reps, "Independent runs")
      ->capture_default_str();
  cmd_cftp->add_option("--max-doublings", max_doublings,
                       "Lookback doubling budget")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(cmd_sample) || app.got_subcommand(cmd_gof)) {
      const ResolvedRun run =
          resolve_run(target_spec, range, sigma, block_length);
      int T;
      if (calibrate_reps)
        T = rocftp::calibrate_block_length(run.target, run.lo, run.hi,
                                           run.sigma, *calibrate_reps, seed,
                                           threads);
      else
        T = require_block_length(run);

      if (app.got_subcommand(cmd_sample)) {
        rocftp::SamplerConfig cfg{run.target, run.lo,     run.hi, run.sigma,
                                  T,          seed,       max_blocks, x0};
        const rocftp::SampleResult result = rocftp::sample(cfg, n);
        if (!result.complete) {
          emit(out_path, format == "json" ? samples_json(result)
                                          : samples_csv(result.samples));
          std::cerr << "error: block budget exhausted after "
                    << result.samples.size() << " of " << n
                    << " samples (partial output written)\n";
          return kExitRuntime;
        }
        emit(out_path, format == "json" ? samples_json(result)
                                        : samples_csv(result.samples));
      } else {
        const rocftp::GofReport report =
            rocftp::gof_study(run.target, run.lo, run.hi, run.sigma, T, n,
                              gof_delta, seed, max_blocks);
        std::string body = "metric,value\n";
        body += "n," + std::to_string(n) + "\n";
        body += "ks_d," + format_double17(report.ks_d) + "\n";
        body += "ks_p_value," + format_double17(report.ks_p_value) + "\n";
        body += "qq_outlier_count," + std::to_string(report.outlier_count) + "\n";
        body += "qq_outlier_fraction," +
                format_double17(report.outlier_fraction) + "\n";
        for (std::size_t i = 0; i < report.modes.size(); ++i) {
          const auto& m = report.modes[i];
          const std::string tag = "mode" + std::to_string(i + 1);
          body += tag + "_lo," + format_double17(m.lo) + "\n";
          body += tag + "_hi," + format_double17(m.hi) + "\n";
          body += tag + "_observed," + format_double17(m.observed_fraction) + "\n";
          body += tag + "_expected," + format_double17(m.expected_weight) + "\n";
        }
        body += seed_comment(seed, n);
        emit(out_path, body);
      }
    } else if (app.got_subcommand(cmd_calibrate)) {
      const ResolvedRun run = resolve_run(target_spec, range, sigma, {});
      const int T = rocftp::calibrate_block_length(
          run.target, run.lo, run.hi, run.sigma, reps, seed, threads);
      std::string body = "block_length\n" + std::to_string(T) + "\n";
      body += seed_comment(seed, reps);
      emit(out_path, body);
    } else if (app.got_subcommand(cmd_mir)) {
      const ResolvedRun run =
          resolve_run(target_spec, {}, {}, {}, /*need_range=*/false);
      const rocftp::MirResult mir =
          rocftp::most_interest_range(run.target, mir_epsilon, mir_resolution);
      std::string body = "interval_lo,interval_hi\n";
      for (const auto& [lo, hi] : mir.intervals)
        body += format_double17(lo) + "," + format_double17(hi) + "\n";
      body += "# epsilon=" + format_double17(mir.epsilon) +
              " level=" + format_double17(mir.level) +
              " mass=" + format_double17(mir.mass) +
              " hull_lo=" + format_double17(mir.hull_lo) +
              " hull_hi=" + format_double17(mir.hull_hi) + "\n";
      emit(out_path, body);
    } else if (app.got_subcommand(cmd_sweep)) {
      const ResolvedRun run = resolve_run(target_spec, range, sigma, {});
      const std::vector<int> ts = parse_list<int>(t_list, "--block-lengths");
      const auto rows = rocftp::block_sweep(run.target, run.lo, run.hi,
                                            run.sigma, ts, reps, seed, threads);
      std::string body = "T,p_hat,n_bar,tau_bar,reps\n";
      for (const auto& r : rows)
        body += std::to_string(r.block_length) + "," +
                format_double17(r.p_hat) + "," + format_double17(r.n_bar) +
                "," + format_double17(r.tau_bar) + "," +
                std::to_string(r.reps) + "\n";
      body += seed_comment(seed, reps);
      emit(out_path, body);
    } else if (app.got_subcommand(cmd_coal)) {
      const ResolvedRun run = resolve_run(target_spec, range, sigma, {});
      const std::vector<std::size_t> counts =
          parse_list<std::size_t>(paths_list, "--paths");
      const auto rows =
          rocftp::coalescence_study(run.target, run.lo, run.hi, run.sigma,
                                    counts, reps, seed, threads);
      std::string body = "paths,mean_time,pct_equal_max,min,q1,median,mean,q3,max\n";
      for (const auto& r : rows)
        body += std::to_string(r.paths) + "," + format_double17(r.mean_time) +
                "," + format_double17(r.pct_equal_max) + "," +
                format_double17(r.time_summary.min) + "," +
                format_double17(r.time_summary.q1) + "," +
                format_double17(r.time_summary.median) + "," +
                format_double17(r.time_summary.mean) + "," +
                format_double17(r.time_summary.q3) + "," +
                format_double17(r.time_summary.max) + "\n";
      body += seed_comment(seed, reps);
      emit(out_path, body);
    } else if (app.got_subcommand(cmd_decay)) {
      const ResolvedRun run = resolve_run(target_spec, range, sigma, {});
      std::vector<double> starts;
      if (starts_list.empty())
        starts = {run.lo, 0.5 * (run.lo + run.hi), run.hi};
      else
        starts = parse_list<double>(starts_list, "--starts");
      const auto rows = rocftp::decay_study(run.target, starts, run.sigma,
                                            t_max, reps, seed, threads);
      std::string body = "t,survive_hat,tv_bound\n";
      for (const auto& r : rows)
        body += std::to_string(r.t) + "," + format_double17(r.survive_hat) +
                "," + format_double17(r.tv_bound) + "\n";
      body += seed_comment(seed, reps);
      emit(out_path, body);
    } else if (app.got_subcommand(cmd_cftp)) {
      const auto [lo, hi] = parse_pair(start_pair, "--start");
      std::vector<rocftp::CftpResult> results(reps);
      rocftp::detail::parallel_for(reps, threads, [&](std::size_t rep) {
        rocftp::RngStream stream(seed, rep);
        results[rep] = rocftp::cftp_run(rho, lo, hi, stream, max_doublings);
      });
      std::string body = "rep,sample,backoff_steps\n";
      for (std::size_t rep = 0; rep < reps; ++rep)
        body += std::to_string(rep) + "," +
                format_double17(results[rep].sample) + "," +
                std::to_string(results[rep].lookback) + "\n";
      emit(out_path, body);
    }
  } catch (const rocftp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
