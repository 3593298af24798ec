#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ucp/cycle_record.hpp"
#include "ucp/monitors.hpp"
#include "ucp/photonics.hpp"
#include "ucp/scenario.hpp"

namespace ucp::harness {

/// Model identifier written into every report; bump when physics changes.
inline constexpr const char* kModelVersion = "ucpqkd-model-1.0";

struct RunOptions {
  unsigned workers = 0;  // 0 uses the scenario's worker count
  bool keep_cycles = false;
};

struct NabcWindow {
  std::uint64_t first_cycle = 0;
  std::uint64_t last_cycle = 0;
  monitors::NabcOutcome outcome;
};

struct RunReport {
  ScenarioConfig config;

  std::uint64_t cycles_requested = 0;
  std::uint64_t cycles_run = 0;
  bool terminated_early = false;
  std::string termination_reason;

  std::uint64_t sifted_bits = 0;
  std::uint64_t sifted_errors = 0;
  std::uint64_t double_clicks = 0;     // middle-bin double clicks in key cycles
  std::uint64_t no_click = 0;
  std::uint64_t basis_mismatch = 0;
  std::uint64_t sampling_cycles = 0;
  std::array<std::uint64_t, 2> detector_clicks{};
  std::uint64_t dead_time_suppressed = 0;
  std::uint64_t blinded_cycles = 0;

  std::array<std::uint64_t, kAlarmKinds> alarm_counts{};
  std::uint64_t cycles_with_alarm = 0;
  std::vector<monitors::AlarmRecord> alarms;
  std::vector<NabcWindow> nabc_windows;
  double nabc_expected_double_click_prob = 0.0;

  double max_zeta = 0.0;
  double max_residual_photons = 0.0;
  double max_out_of_gate_photons = 0.0;
  double max_out_of_gate_peak_w = 0.0;

  std::vector<photonics::LwiSample> lwi_violations;
  std::vector<CycleRecord> cycles;  // only with RunOptions::keep_cycles

  double qber() const;  // NaN when nothing was sifted
  double sifted_rate_bps() const;
  double double_click_rate() const;
  double alarm_probability() const;
  std::uint64_t nabc_alarms() const;
  bool any_alarm() const;
};

/// Runs the scenario. Identical (config, seed) give identical reports for any
/// worker count.
RunReport run(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Closed-form quantities that accompany every report.
struct Analytics {
  double channel_transmission = 0.0;
  double overall_efficiency = 0.0;
  double filter_transmission = 0.0;
  double key_rate_estimate_bps = 0.0;
  double sifted_probability_per_cycle = 0.0;
  double min_detectable_peak_w = 0.0;
  double gated_bound_w = 0.0;
  double flux_bound_w = 0.0;
  double sum_nm = 0.0;
};

Analytics analytics(const ScenarioConfig& cfg);

struct SweepRow {
  double value = 0.0;
  double alarm_prob = 0.0;
  double nabc_alarm_fraction = 0.0;
  double qber = 0.0;
  double sifted_rate_bps = 0.0;
};

/// Re-runs the scenario at `steps` evenly spaced values of one numeric key.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const std::string& key, double start,
                            double stop, std::size_t steps, const RunOptions& opts = {});

}  // namespace ucp::harness
