#include "ucp/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>

namespace ucp::monitors {

void MonitorConfig::validate() const {
  if (!(zeta_min > 0.0 && zeta_min < 1.0)) throw std::invalid_argument("zeta_min must lie in (0, 1)");
  if (!(signal_monitor_min_photons > 0.0)) {
    throw std::invalid_argument("signal_monitor_min_photons must be > 0");
  }
  if (nabc_window < 1) throw std::invalid_argument("nabc_window must be >= 1");
  if (!(nabc_alpha > 0.0 && nabc_alpha < 1.0)) throw std::invalid_argument("nabc_alpha must lie in (0, 1)");
}

double depletion(double p_out_ref_w, double p_out_meas_w) {
  if (p_out_ref_w == 0.0) throw std::domain_error("depletion: reference power is zero");
  return std::abs(1.0 - p_out_meas_w / p_out_ref_w);
}

double min_detectable_peak(double zeta_min, double pump_peak_w, double pump_width_ps,
                           double pump_nm, double signal_width_ps, double signal_nm) {
  return zeta_min * pump_peak_w * pump_nm * pump_width_ps / (signal_nm * signal_width_ps);
}

double min_detectable_peak(const MonitorConfig& cfg, const upconversion::PumpConfig& pump,
                           double signal_width_ps, double signal_nm) {
  return min_detectable_peak(cfg.zeta_min, pump.peak_power_w, pump.width_ps, pump.wavelength_nm,
                             signal_width_ps, signal_nm);
}

double quantize_depletion(double zeta, const MonitorConfig& cfg) {
  return zeta >= cfg.zeta_min ? zeta : 0.0;
}

bool signal_monitor(double residual_photons, const MonitorConfig& cfg) {
  return residual_photons >= cfg.signal_monitor_min_photons;
}

bool signal_monitor(const photonics::OpticalPulse& residual, const MonitorConfig& cfg) {
  return signal_monitor(residual.mean_photons(), cfg);
}

CycleReadings readings_of(const CycleRecord& rec) {
  return {rec.cycle_index, rec.zeta, rec.residual_signal_photons, rec.damage, rec.fuse};
}

std::uint8_t evaluate_alarms(const CycleReadings& r, const MonitorConfig& cfg) {
  std::uint8_t mask = 0;
  if (quantize_depletion(r.zeta, cfg) > 0.0) mask |= alarm_bit(AlarmKind::pump_depletion);
  if (signal_monitor(r.residual_photons, cfg)) mask |= alarm_bit(AlarmKind::signal_residual);
  if (r.damage) mask |= alarm_bit(AlarmKind::damage);
  if (r.fuse) mask |= alarm_bit(AlarmKind::fuse);
  return mask;
}

std::vector<AlarmRecord> aggregate_alarms(std::span<const CycleReadings> readings,
                                          const MonitorConfig& cfg) {
  std::vector<AlarmRecord> out;
  for (const auto& r : readings) {
    const std::uint8_t mask = evaluate_alarms(r, cfg);
    if (mask & alarm_bit(AlarmKind::pump_depletion)) {
      out.push_back({r.cycle_index, AlarmKind::pump_depletion, r.zeta});
    }
    if (mask & alarm_bit(AlarmKind::signal_residual)) {
      out.push_back({r.cycle_index, AlarmKind::signal_residual, r.residual_photons});
    }
    if (mask & alarm_bit(AlarmKind::damage)) out.push_back({r.cycle_index, AlarmKind::damage, 1.0});
    if (mask & alarm_bit(AlarmKind::fuse)) out.push_back({r.cycle_index, AlarmKind::fuse, 1.0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AlarmRecord& a, const AlarmRecord& b) { return a.cycle_index < b.cycle_index; });
  return out;
}

std::string alarms_csv(std::span<const AlarmRecord> alarms) {
  std::string out = "cycle_index,kind,value\n";
  char line[128];
  for (const auto& a : alarms) {
    std::snprintf(line, sizeof line, "%llu,%s,%.9g\n", static_cast<unsigned long long>(a.cycle_index),
                  to_string(a.kind).c_str(), a.value);
    out += line;
  }
  return out;
}

std::string to_string(NabcVerdict v) {
  switch (v) {
    case NabcVerdict::inconclusive: return "inconclusive";
    case NabcVerdict::pass: return "pass";
    case NabcVerdict::alarm: return "alarm";
  }
  return "inconclusive";
}

double binomial_two_sided_half(std::size_t k, std::size_t n) {
  if (n == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  const double kd = static_cast<double>(k);
  const double lower = boost::math::cdf(dist, kd);
  const double upper = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, kd - 1.0));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

double binomial_upper_tail(std::size_t k, std::size_t n, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(k) - 1.0));
}

NabcOutcome nabc_sample_test(std::span<const CycleRecord> records, const MonitorConfig& cfg,
                             double expected_double_click_prob) {
  NabcOutcome out;
  out.samples = records.size();
  out.expected_double_click_prob = expected_double_click_prob;

  bool any_click = false;
  for (const auto& rec : records) {
    if (!rec.single_pulse) throw std::invalid_argument("nabc_sample_test: record is not a sampling cycle");
    bool d0 = false;
    bool d1 = false;
    bool dbl = false;
    for (std::uint8_t i = 0; i < rec.n_outcomes; ++i) {
      const auto& o = rec.outcomes[i];
      d0 = d0 || o.d0_click;
      d1 = d1 || o.d1_click;
      dbl = dbl || o.double_click();
    }
    any_click = any_click || d0 || d1;
    if (dbl) ++out.double_clicks;
    if (d0 != d1) {
      ++out.single_detector_clicks;
      const std::size_t detector = d1 ? 1 : 0;
      if (detector == rec.bob_basis) ++out.matches;
    }
  }

  if (records.size() < cfg.nabc_window || !any_click) return out;

  const std::size_t n = out.single_detector_clicks;
  if (n > 0) {
    out.correlation = 2.0 * static_cast<double>(out.matches) / static_cast<double>(n) - 1.0;
  }
  out.correlation_p_value = binomial_two_sided_half(out.matches, n);
  out.double_click_p_value =
      binomial_upper_tail(out.double_clicks, records.size(), expected_double_click_prob);
  const bool alarm =
      out.correlation_p_value < cfg.nabc_alpha || out.double_click_p_value < cfg.nabc_alpha;
  out.verdict = alarm ? NabcVerdict::alarm : NabcVerdict::pass;
  return out;
}

}  // namespace ucp::monitors
