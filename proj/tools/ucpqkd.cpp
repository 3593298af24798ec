// Command-line front end: runs one scenario (or a one-key sweep) and writes
// the report files.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ucp/engine.hpp"
#include "ucp/report.hpp"
#include "ucp/scenario.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFailure = 1;
constexpr int kExitAlarms = 2;
constexpr int kExitConfig = 3;

struct SweepSpec {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 0;
};

// key=start:stop:steps
SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos) {
    throw ucp::harness::ConfigError("--sweep", "expected key=start:stop:steps");
  }
  SweepSpec s;
  s.key = text.substr(0, eq);
  try {
    s.start = std::stod(text.substr(eq + 1, c1 - eq - 1));
    s.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const long steps = std::stol(text.substr(c2 + 1));
    if (steps < 1) throw std::invalid_argument("steps");
    s.steps = static_cast<std::size_t>(steps);
  } catch (const std::logic_error&) {
    throw ucp::harness::ConfigError("--sweep", "expected key=start:stop:steps with numeric values");
  }
  return s;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("UCPQKD_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "ucpqkd_out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upconversion-receiver QKD simulator"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write report files");
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cycles;
  std::optional<unsigned> workers;
  std::string sweep_text;
  bool lwi_chart = false;
  bool emit_cycles = false;
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--out", out_dir, "Output directory (default: $UCPQKD_OUT_DIR or ./ucpqkd_out)");
  sim->add_option("--seed", seed, "Override the run seed");
  sim->add_option("--cycles", cycles, "Override the number of cycles");
  sim->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--sweep", sweep_text, "Scan one numeric key: key=start:stop:steps");
  sim->add_flag("--emit-lwi-chart", lwi_chart, "Write lwi_chart.csv");
  sim->add_flag("--emit-cycles", emit_cycles, "Write the per-cycle dump cycles.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitClean : kExitConfig;
  }

  using namespace ucp::harness;
  ScenarioConfig cfg;
  std::optional<SweepSpec> sweep_spec;
  try {
    cfg = load_scenario(scenario_path);
    if (seed) cfg.seed = *seed;
    if (cycles) cfg.n_cycles = *cycles;
    if (workers) cfg.workers = *workers;
    if (!sweep_text.empty()) {
      sweep_spec = parse_sweep(sweep_text);
      with_override(cfg, sweep_spec->key, sweep_spec->start);
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::filesystem::path dir =
      !out_dir.empty() ? out_dir : (!cfg.output.dir.empty() ? cfg.output.dir : default_out_dir());
  const bool want_lwi = lwi_chart || cfg.output.lwi_chart;
  const bool want_cycles = emit_cycles || cfg.output.cycles_csv;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const RunReport rep = run(cfg, {.keep_cycles = want_cycles});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& path : emit(rep, dir, {.lwi_chart = want_lwi, .cycles_csv = want_cycles})) {
      std::cout << "wrote " << path.string() << "\n";
    }
    const nlohmann::json stats = {
        {"wall_clock_s", seconds},
        {"cycles", rep.cycles_run},
        {"cycles_per_s", seconds > 0.0 ? static_cast<double>(rep.cycles_run) / seconds : 0.0},
    };
    write_text(dir / "run_stats.json", stats.dump(2) + "\n");

    bool alarms = rep.any_alarm();
    if (sweep_spec) {
      const auto rows = sweep(cfg, sweep_spec->key, sweep_spec->start, sweep_spec->stop, sweep_spec->steps);
      write_text(dir / "sweep.csv", sweep_csv(sweep_spec->key, rows));
      std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
      for (const auto& r : rows) alarms = alarms || r.alarm_prob > 0.0 || r.nabc_alarm_fraction > 0.0;
    }

    std::printf("cycles %llu  sifted %llu  qber %.4g  rate %.4g bit/s  alarms %s  (%.2f s)\n",
                static_cast<unsigned long long>(rep.cycles_run),
                static_cast<unsigned long long>(rep.sifted_bits), rep.qber(), rep.sifted_rate_bps(),
                alarms ? "yes" : "no", seconds);
    if (rep.terminated_early) std::printf("terminated early: %s\n", rep.termination_reason.c_str());
    return alarms ? kExitAlarms : kExitClean;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
