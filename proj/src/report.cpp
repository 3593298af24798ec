#include "ucp/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ucp/adversary.hpp"

namespace ucp::harness {

using nlohmann::json;

namespace {

json attack_section(const RunReport& rep) {
  const auto& cfg = rep.config;
  const auto& a = cfg.channel.eve;
  const auto& rx = cfg.receiver;
  json out = {{"kind", adversary::to_string(a.kind)}, {"blinded_cycles", rep.blinded_cycles}};
  if (a.kind == adversary::AttackKind::trojan_probe) {
    const double width = a.width_ps > 0.0 ? a.width_ps : rx.signal_width_ps;
    const auto leak = adversary::trojan_leak_estimate(a.wavelength_nm, a.peak_power_w, width, rx.pre,
                                                      cfg.back_reflection_db, rx.pump_band());
    out["trojan"] = {{"probe_nm", a.wavelength_nm},
                     {"injected_photons", leak.injected_photons},
                     {"returned_photons", leak.returned_photons},
                     {"one_way_attenuation_db", leak.one_way_attenuation_db},
                     {"back_reflection_db", leak.back_reflection_db},
                     {"carries_basis_info", leak.carries_basis_info},
                     {"basis_info_photons", leak.basis_info_photons}};
  }
  if (a.kind == adversary::AttackKind::laser_damage) {
    const double nm = a.wavelength_nm > 0.0 ? a.wavelength_nm : rx.signal_nm;
    const auto v = adversary::damage_assessment(a.cw_power_w, nm, rx);
    out["damage_assessment"] = {{"wavelength_nm", nm},
                                {"in_waveguide_w", v.in_waveguide_w},
                                {"linear_leak_w", v.linear_leak_w},
                                {"converted_w", v.converted_w},
                                {"at_detectors_w", v.at_detectors_w},
                                {"fused", v.fused},
                                {"safe", v.safe}};
  }
  return out;
}

}  // namespace

json report_json(const RunReport& rep) {
  const Analytics an = analytics(rep.config);

  json alarm_counts = json::object();
  for (std::size_t k = 0; k < kAlarmKinds; ++k) {
    alarm_counts[to_string(static_cast<AlarmKind>(k))] = rep.alarm_counts[k];
  }

  json windows = json::array();
  for (const auto& w : rep.nabc_windows) {
    const auto& o = w.outcome;
    windows.push_back({{"first_cycle", w.first_cycle},
                       {"last_cycle", w.last_cycle},
                       {"verdict", monitors::to_string(o.verdict)},
                       {"samples", o.samples},
                       {"single_detector_clicks", o.single_detector_clicks},
                       {"matches", o.matches},
                       {"correlation", o.correlation},
                       {"correlation_p_value", o.correlation_p_value},
                       {"double_clicks", o.double_clicks},
                       {"double_click_p_value", o.double_click_p_value}});
  }

  json violations = json::array();
  for (const auto& v : rep.lwi_violations) {
    violations.push_back({{"wavelength_nm", v.wavelength_nm}, {"attenuation_db", v.attenuation_db}});
  }

  return {
      {"model_version", kModelVersion},
      {"parameters", to_json(rep.config)},
      {"cycles",
       {{"requested", rep.cycles_requested},
        {"run", rep.cycles_run},
        {"terminated_early", rep.terminated_early},
        {"termination_reason", rep.termination_reason}}},
      {"key",
       {{"sifted_bits", rep.sifted_bits},
        {"sifted_errors", rep.sifted_errors},
        {"qber", rep.qber()},
        {"sifted_rate_bps", rep.sifted_rate_bps()},
        {"double_clicks", rep.double_clicks},
        {"double_click_rate", rep.double_click_rate()},
        {"no_click", rep.no_click},
        {"basis_mismatch", rep.basis_mismatch},
        {"detector_clicks", rep.detector_clicks},
        {"dead_time_suppressed", rep.dead_time_suppressed}}},
      {"analytics",
       {{"key_rate_formula", "f_R * mu * T_channel * eta_ov * 1/2 (basis) * 1/2 (middle bin)"},
        {"key_rate_estimate_bps", an.key_rate_estimate_bps},
        {"sifted_probability_per_cycle", an.sifted_probability_per_cycle},
        {"channel_transmission", an.channel_transmission},
        {"overall_efficiency", an.overall_efficiency},
        {"filter_transmission", an.filter_transmission},
        {"sum_nm", an.sum_nm},
        {"min_detectable_peak_w", an.min_detectable_peak_w},
        {"gated_bound_on_sum_power_w", an.gated_bound_w},
        {"flux_bound_on_sum_power_w", an.flux_bound_w}}},
      {"monitors",
       {{"alarm_counts", alarm_counts},
        {"cycles_with_alarm", rep.cycles_with_alarm},
        {"alarm_probability", rep.alarm_probability()},
        {"max_zeta", rep.max_zeta},
        {"max_residual_photons", rep.max_residual_photons},
        {"max_out_of_gate_photons", rep.max_out_of_gate_photons},
        {"max_out_of_gate_peak_w", rep.max_out_of_gate_peak_w}}},
      {"nabc",
       {{"sampling_cycles", rep.sampling_cycles},
        {"expected_double_click_prob", rep.nabc_expected_double_click_prob},
        {"windows", windows}}},
      {"lwi", {{"threshold_db", rep.config.lwi.threshold_db}, {"violations", violations}}},
      {"attack", attack_section(rep)},
  };
}

std::string cycles_csv(std::span<const CycleRecord> cycles) {
  std::string out =
      "cycle_index,alice_bit,alice_basis,bob_basis,single_pulse,bins,zeta,residual_photons,alarms\n";
  char line[256];
  for (const auto& c : cycles) {
    std::string bins;
    for (std::uint8_t i = 0; i < c.n_outcomes; ++i) {
      const auto& o = c.outcomes[i];
      if (!bins.empty()) bins += ' ';
      bins += detection::to_string(o.bin) + ":" + (o.d0_click ? "1" : "0") + (o.d1_click ? "1" : "0");
    }
    std::snprintf(line, sizeof line, "%llu,%d,%s,%zu,%d,%s,%.9g,%.9g,%u\n",
                  static_cast<unsigned long long>(c.cycle_index), c.alice.bit,
                  c.alice.basis == Basis::X ? "X" : "Z", c.bob_basis, c.single_pulse ? 1 : 0,
                  bins.c_str(), c.zeta, c.residual_signal_photons, static_cast<unsigned>(c.alarms));
    out += line;
  }
  return out;
}

std::string sweep_csv(const std::string& key, std::span<const SweepRow> rows) {
  std::string out = key + ",alarm_prob,nabc_alarm_fraction,qber,sifted_rate\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g,%.9g,%.9g\n", r.value, r.alarm_prob,
                  r.nabc_alarm_fraction, r.qber, r.sifted_rate_bps);
    out += line;
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<std::filesystem::path> emit(const RunReport& rep, const std::filesystem::path& dir,
                                        const EmitOptions& opts) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& contents) {
    const auto path = dir / name;
    write_text(path, contents);
    written.push_back(path);
  };
  put("report.json", report_json(rep).dump(2) + "\n");
  put("alarms.csv", monitors::alarms_csv(rep.alarms));
  if (opts.lwi_chart) {
    const auto& cfg = rep.config;
    const auto grid = photonics::wavelength_grid(cfg.lwi.start_nm, cfg.lwi.stop_nm, cfg.lwi.step_nm);
    put("lwi_chart.csv", photonics::lwi_csv(photonics::lwi_sweep(cfg.receiver.pre, cfg.receiver.post, grid)));
  }
  if (opts.cycles_csv) put("cycles.csv", cycles_csv(rep.cycles));
  return written;
}

}  // namespace ucp::harness
