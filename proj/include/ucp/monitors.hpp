#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ucp/cycle_record.hpp"
#include "ucp/upconversion.hpp"

namespace ucp::monitors {

struct MonitorConfig {
  double zeta_min = 1e-3;
  double signal_monitor_min_photons = 1e3;
  std::size_t nabc_window = 500;
  double nabc_alpha = 0.01;

  void validate() const;
};

struct AlarmRecord {
  std::uint64_t cycle_index = 0;
  AlarmKind kind = AlarmKind::pump_depletion;
  double value = 0.0;
};

/// |1 - measured/reference|. Throws std::domain_error when the reference is 0.
double depletion(double p_out_ref_w, double p_out_meas_w);

/// Smallest signal peak whose full conversion depletes the pump by zeta_min:
/// zeta_min * P_out * lambda_pump * tau_pump / (lambda_sig * tau_sig).
double min_detectable_peak(double zeta_min, double pump_peak_w, double pump_width_ps,
                           double pump_nm, double signal_width_ps, double signal_nm);
double min_detectable_peak(const MonitorConfig& cfg, const upconversion::PumpConfig& pump,
                           double signal_width_ps, double signal_nm);

/// Readings below the monitor resolution read as zero.
double quantize_depletion(double zeta, const MonitorConfig& cfg);

bool signal_monitor(double residual_photons, const MonitorConfig& cfg);
bool signal_monitor(const photonics::OpticalPulse& residual, const MonitorConfig& cfg);

// Scalar monitor readings of one cycle.
struct CycleReadings {
  std::uint64_t cycle_index = 0;
  double zeta = 0.0;
  double residual_photons = 0.0;
  bool damage = false;
  bool fuse = false;
};

CycleReadings readings_of(const CycleRecord& rec);

/// Alarm bitmask for one cycle.
std::uint8_t evaluate_alarms(const CycleReadings& r, const MonitorConfig& cfg);

/// One record per (cycle, kind) in cycle order.
std::vector<AlarmRecord> aggregate_alarms(std::span<const CycleReadings> readings,
                                          const MonitorConfig& cfg);

std::string alarms_csv(std::span<const AlarmRecord> alarms);

enum class NabcVerdict { inconclusive, pass, alarm };

std::string to_string(NabcVerdict v);

struct NabcOutcome {
  NabcVerdict verdict = NabcVerdict::inconclusive;
  std::size_t samples = 0;
  std::size_t single_detector_clicks = 0;  // records where exactly one detector fired
  std::size_t matches = 0;                 // of those, detector index == Bob's phase index
  double correlation = 0.0;                // 2*matches/n - 1
  double correlation_p_value = 1.0;
  std::size_t double_clicks = 0;
  double double_click_p_value = 1.0;
  double expected_double_click_prob = 0.0;
};

/// Exact two-sided binomial p-value for k successes in n trials at p = 1/2.
double binomial_two_sided_half(std::size_t k, std::size_t n);

/// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(std::size_t k, std::size_t n, double p);

/// Sampling-cycle test. `expected_double_click_prob` is the honest per-record
/// probability of a bin where both detectors fire. Throws
/// std::invalid_argument if a record is not a single-pulse cycle.
NabcOutcome nabc_sample_test(std::span<const CycleRecord> records, const MonitorConfig& cfg,
                             double expected_double_click_prob);

}  // namespace ucp::monitors
