#include "randboot/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "randboot/diagnostics.hpp"
#include "randboot/io.hpp"
#include "randboot/mc.hpp"
#include "randboot/selftest.hpp"
#include "randboot/version.hpp"

namespace randboot::cli {
namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& config, const char* name) {
  fs::create_directories(config.output_dir);
  return (fs::path(config.output_dir) / name).string();
}

nlohmann::json meta_json(const RunConfig& config, const char* command) {
  const nlohmann::json normalized = to_json(config);
  return {{"version", kVersion},
          {"command", command},
          {"master_seed", config.master_seed},
          {"config_hash", config_hash(normalized)},
          {"config", normalized}};
}

nlohmann::json uniformity_json(const diag::UniformityReport& report) {
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [level, rate] : report.rejection_rates) {
    rates[io::format_double(level)] = rate;
  }
  return {{"count", report.count},
          {"ks_to_uniform", report.ks},
          {"rejection_rates", rates}};
}

}  // namespace

int cmd_run(const RunConfig& config) {
  const std::vector<double> pvalues =
      mc::run_unconditional(config.experiment, config.reps, config.master_seed,
                            config.threads);
  const diag::UniformityReport uniformity = diag::uniformity_report(pvalues);

  io::write_pvalues_csv(out_path(config, "pvalues.csv"), pvalues);
  nlohmann::json report = {{"version", kVersion},
                           {"command", "run"},
                           {"n", config.experiment.n},
                           {"reps", config.reps},
                           {"master_seed", config.master_seed},
                           {"config_hash", config_hash(to_json(config))},
                           {"uniformity", uniformity_json(uniformity)}};
  io::write_json_file(out_path(config, "report.json"), report);
  io::write_json_file(out_path(config, "meta.json"), meta_json(config, "run"));
  std::cerr << "run: " << config.reps << " reps, n = " << config.experiment.n
            << ", ks_to_uniform = " << uniformity.ks << ", wrote "
            << config.output_dir << "/pvalues.csv\n";
  return 0;
}

int cmd_fanchart(const RunConfig& config) {
  const mc::ConditionalEcdfPanel panel = mc::run_double(
      config.experiment, config.outer_paths, config.inner_reps,
      config.grid_size, config.master_seed, config.threads);
  const diag::FanChartSummary summary =
      diag::fanchart(panel.grid, panel.rows, config.band_lo, config.band_hi);

  io::write_panel_csv(out_path(config, "panel.csv"), panel);
  io::write_fanchart_csv(out_path(config, "fanchart.csv"), summary);

  // The rows share a common inner replication count, so the pooled p-value
  // cdf on the grid is exactly the cross-row average.
  const double pooled_dev =
      (summary.average - panel.grid).cwiseAbs().maxCoeff();
  nlohmann::json report = {{"version", kVersion},
                           {"command", "fanchart"},
                           {"n", config.experiment.n},
                           {"outer_paths", config.outer_paths},
                           {"inner_reps", config.inner_reps},
                           {"band", {summary.band_lo, summary.band_hi}},
                           {"max_dispersion", summary.max_dispersion},
                           {"pooled_sup_deviation", pooled_dev},
                           {"master_seed", config.master_seed},
                           {"config_hash", config_hash(to_json(config))}};
  io::write_json_file(out_path(config, "report.json"), report);
  io::write_json_file(out_path(config, "meta.json"),
                      meta_json(config, "fanchart"));
  std::cerr << "fanchart: " << config.outer_paths << " paths x "
            << config.inner_reps << " reps, max_dispersion = "
            << summary.max_dispersion << ", wrote " << config.output_dir
            << "/fanchart.csv\n";
  return 0;
}

int cmd_power(const RunConfig& config) {
  std::vector<io::PowerRow> rows;
  rows.reserve(config.power.b_values.size());
  for (double b : config.power.b_values) {
    mc::Experiment exp = config.experiment;
    exp.local_alt_b = b;
    const std::vector<double> pvalues = mc::run_unconditional(
        exp, config.reps, config.master_seed, config.threads);
    // Fresh stream with a fixed identity per b: common random numbers keep
    // the oracle curve exactly monotone in b.
    rng::Stream oracle_stream =
        rng::StreamFactory(config.master_seed).child(0).child_stream(0);
    io::PowerRow row;
    row.b = b;
    row.mc_rejection = diag::rejection_rate(pvalues, config.power.level);
    row.oracle_power =
        diag::local_power_oracle(b, config.power.level, config.power.oracle_paths,
                                 config.power.oracle_steps, oracle_stream);
    rows.push_back(row);
    std::cerr << "power: b = " << b << ", mc = " << row.mc_rejection
              << ", oracle = " << row.oracle_power << "\n";
  }
  io::write_power_csv(out_path(config, "power.csv"), rows);
  io::write_json_file(out_path(config, "meta.json"),
                      meta_json(config, "power"));
  return 0;
}

int cmd_selftest(const std::string& corrupt) {
  const std::vector<selftest::CheckResult> results = selftest::run_all(corrupt);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << "\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "selftest: all checks passed\n"
                         : "selftest: FAILURES present\n");
  return all_pass ? 0 : 1;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for bootstrap p-value validity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> reps;
  std::optional<int> outer_paths;
  std::optional<int> inner_reps;
  std::optional<int> grid_size;
  std::optional<int> threads;
  std::optional<std::string> output_dir;
  std::string corrupt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "override master_seed");
    sub->add_option("--n", n, "override sample size");
    sub->add_option("--threads", threads, "override worker count");
    sub->add_option("--output-dir", output_dir, "override output directory");
  };

  CLI::App* run = app.add_subcommand("run", "unconditional p-value run");
  add_common(run);
  run->add_option("--reps", reps, "override replication count");

  CLI::App* fanchart =
      app.add_subcommand("fanchart", "conditional p-value cdf panel");
  add_common(fanchart);
  fanchart->add_option("--outer-paths", outer_paths, "override outer paths");
  fanchart->add_option("--inner-reps", inner_reps, "override inner reps");
  fanchart->add_option("--grid-size", grid_size, "override grid size");

  CLI::App* power = app.add_subcommand("power", "local power curve");
  add_common(power);
  power->add_option("--reps", reps, "override replication count");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "oracle and determinism checks");
  selftest_cmd
      ->add_option("--corrupt", corrupt,
                   "bias the named check (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what()
              << "\nvalid subcommands: run, fanchart, power, selftest\n";
    return 2;
  }

  try {
    if (selftest_cmd->parsed()) return cmd_selftest(corrupt);

    RunConfig config = load_config(config_path);
    if (seed) config.master_seed = *seed;
    if (n) config.experiment.n = *n;
    if (reps) config.reps = *reps;
    if (outer_paths) config.outer_paths = *outer_paths;
    if (inner_reps) config.inner_reps = *inner_reps;
    if (grid_size) config.grid_size = *grid_size;
    if (threads) config.threads = *threads;
    if (output_dir) config.output_dir = *output_dir;
    if (config.experiment.n < 2 || config.reps < 1 || config.grid_size < 2 ||
        config.threads < 0) {
      throw ConfigError("config: override left a field out of range");
    }
    try {
      mc::validate(config.experiment);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }

    if (run->parsed()) return cmd_run(config);
    if (fanchart->parsed()) return cmd_fanchart(config);
    return cmd_power(config);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace randboot::cli
