#include "ucp/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ucp::adversary {

using photonics::kPi;
using photonics::stack_attenuation;
using photonics::stack_transmission;

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::faked_state: return "faked_state";
    case AttackKind::time_shift: return "time_shift";
    case AttackKind::blinding_plus_faked: return "blinding_plus_faked";
    case AttackKind::trojan_probe: return "trojan_probe";
    case AttackKind::wavelength_scan: return "wavelength_scan";
    case AttackKind::laser_damage: return "laser_damage";
  }
  return "none";
}

AttackKind attack_kind_from_string(const std::string& name) {
  for (auto k : {AttackKind::none, AttackKind::faked_state, AttackKind::time_shift,
                 AttackKind::blinding_plus_faked, AttackKind::trojan_probe,
                 AttackKind::wavelength_scan, AttackKind::laser_damage}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown attack kind '" + name + "'");
}

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw std::invalid_argument("attack." + key + " " + what);
}

bool wavelength_ok(double nm) {
  return nm == 0.0 || (nm > photonics::kModelMinNm && nm < photonics::kModelMaxNm);
}

}  // namespace

void AttackStrategy::validate() const {
  require(peak_power_w >= 0.0, "peak_power_w", "must be >= 0");
  require(cw_power_w >= 0.0, "cw_power_w", "must be >= 0");
  require(width_ps >= 0.0, "width_ps", "must be >= 0");
  require(wavelength_ok(wavelength_nm), "wavelength_nm", "must lie in (200, 3000) nm");
  require(resend_prob > 0.0 && resend_prob <= 1.0, "resend_prob", "must lie in (0, 1]");

  const std::string k = to_string(kind);
  switch (kind) {
    case AttackKind::none:
      require(peak_power_w == 0.0 && cw_power_w == 0.0 && offset_ps == 0.0, "kind",
              "'none' takes no parameters");
      break;
    case AttackKind::faked_state:
      require(peak_power_w > 0.0, "peak_power_w", "must be > 0 for " + k);
      require(cw_power_w == 0.0, "cw_power_w", "is not used by " + k);
      break;
    case AttackKind::time_shift:
      require(peak_power_w == 0.0 && cw_power_w == 0.0, "peak_power_w", "is not used by " + k);
      break;
    case AttackKind::blinding_plus_faked:
      require(peak_power_w > 0.0, "peak_power_w", "must be > 0 for " + k);
      require(cw_power_w > 0.0, "cw_power_w", "must be > 0 for " + k);
      break;
    case AttackKind::trojan_probe:
    case AttackKind::wavelength_scan:
      require(peak_power_w > 0.0, "peak_power_w", "must be > 0 for " + k);
      require(wavelength_nm > 0.0, "wavelength_nm", "is required for " + k);
      break;
    case AttackKind::laser_damage:
      require(cw_power_w > 0.0, "cw_power_w", "must be > 0 for " + k);
      break;
  }
}

namespace {

// Idealized intercept: Eve reads Alice's basis-dependent phase perfectly when
// her random basis matches, and guesses the bit otherwise.
std::vector<OpticalPulse> faked_pair(const AttackStrategy& s, std::span<const OpticalPulse> honest,
                                     Rng& rng, ChannelOutput& out) {
  const int eve_basis = std::uniform_int_distribution<int>(0, 1)(rng);
  const int guess = std::uniform_int_distribution<int>(0, 1)(rng);
  const bool resend = bernoulli(rng, s.resend_prob);

  const double alice_dphi = photonics::normalize_phase(honest[1].phase_rad() - honest[0].phase_rad());
  // Alice's phases are multiples of pi/2; odd multiples mean the X basis.
  const long quarter = std::lround(alice_dphi / (kPi / 2.0)) % 4;
  const int alice_basis = static_cast<int>(quarter % 2);
  const int alice_bit = static_cast<int>(quarter / 2);
  const int bit = eve_basis == alice_basis ? alice_bit : guess;
  out.eve_basis = eve_basis;
  out.eve_bit = bit;
  if (!resend) return {};

  const double dphi = s.relative_phase_rad.value_or(bit * kPi + eve_basis * kPi / 2.0);
  const double nm = s.wavelength_nm > 0.0 ? s.wavelength_nm : honest[0].wavelength_nm();
  const double width = s.width_ps > 0.0 ? s.width_ps : honest[0].width_ps();

  std::vector<OpticalPulse> pulses;
  for (std::size_t k = 0; k < 2; ++k) {
    // Keep the faked pulse centered where the honest one was.
    const double start = honest[k].center_ps() - 0.5 * width + s.offset_ps;
    pulses.push_back(OpticalPulse::classical(nm, s.peak_power_w, width, start, k == 0 ? 0.0 : dphi));
  }
  return pulses;
}

}  // namespace

ChannelOutput apply_attack(const AttackStrategy& s, std::span<const OpticalPulse> honest, Rng& rng) {
  ChannelOutput out;
  const double signal_nm = honest.empty() ? 0.0 : honest[0].wavelength_nm();
  const double nm = s.wavelength_nm > 0.0 ? s.wavelength_nm : signal_nm;

  if (s.cw_power_w > kFuseLimitW || s.peak_power_w > kFuseLimitW) {
    out.fused = true;
    return out;
  }

  switch (s.kind) {
    case AttackKind::none:
      out.pulses.assign(honest.begin(), honest.end());
      break;
    case AttackKind::faked_state:
      out.pulses = faked_pair(s, honest, rng, out);
      break;
    case AttackKind::time_shift:
      for (const auto& p : honest) out.pulses.push_back(p.delayed(s.offset_ps));
      break;
    case AttackKind::blinding_plus_faked:
      out.pulses = faked_pair(s, honest, rng, out);
      out.cw = CwBackground{signal_nm, s.cw_power_w};
      break;
    case AttackKind::trojan_probe:
    case AttackKind::wavelength_scan: {
      out.pulses.assign(honest.begin(), honest.end());
      const double width = s.width_ps > 0.0 ? s.width_ps : honest[0].width_ps();
      out.pulses.push_back(
          OpticalPulse::classical(nm, s.peak_power_w, width, honest[0].arrival_ps() + s.offset_ps));
      break;
    }
    case AttackKind::laser_damage:
      out.pulses.assign(honest.begin(), honest.end());
      out.cw = CwBackground{nm, s.cw_power_w};
      break;
  }
  return out;
}

TrojanLeak trojan_leak_estimate(double probe_nm, double power_w, double probe_width_ps,
                                const photonics::FilterStack& path, double back_reflection_db,
                                const photonics::Band& pump_band) {
  TrojanLeak leak;
  leak.one_way_attenuation_db = stack_attenuation(path, probe_nm);
  leak.back_reflection_db = back_reflection_db;
  leak.injected_photons = photonics::photon_number(power_w, probe_width_ps, probe_nm);
  leak.returned_photons = leak.injected_photons *
                          std::pow(10.0, -(2.0 * leak.one_way_attenuation_db + back_reflection_db) / 10.0);
  leak.carries_basis_info = pump_band.contains(probe_nm);
  leak.basis_info_photons = leak.carries_basis_info ? leak.returned_photons : 0.0;
  return leak;
}

DamageVerdict damage_assessment(double cw_power_w, double wavelength_nm, const ReceiverConfig& rx) {
  DamageVerdict v;
  if (cw_power_w > kFuseLimitW) {
    v.fused = true;
    return v;
  }
  const auto& wg = rx.waveguide;
  const auto& pump = rx.pump;
  v.in_waveguide_w = cw_power_w * stack_transmission(rx.pre, wavelength_nm) * wg.input_transmission();
  v.linear_leak_w = v.in_waveguide_w * wg.output_transmission() * stack_transmission(rx.post, wavelength_nm);

  // Average pump power available for conversion inside the waveguide.
  const double duty = pump.duty_cycle();
  const double pump_avg_w =
      (pump.peak_power_w * duty + pump.pedestal_w() * (1.0 - duty)) * wg.input_transmission();

  double converted_in_wg = 0.0;
  if (wg.phase_matched(wavelength_nm)) {
    const double sum_nm = photonics::sum_wavelength(pump.wavelength_nm, wavelength_nm);
    const double signal_limited = v.in_waveguide_w * wavelength_nm / sum_nm;
    const double pump_limited = pump_avg_w * pump.wavelength_nm / sum_nm;
    converted_in_wg = std::min(signal_limited, pump_limited);
  } else if (rx.pump_band().contains(wavelength_nm)) {
    // Injected light acting as pump on Alice's signal: bounded by its own flux.
    const double sum_nm = photonics::sum_wavelength(wavelength_nm, rx.signal_nm);
    converted_in_wg = v.in_waveguide_w * wavelength_nm / sum_nm;
  }
  if (converted_in_wg > 0.0) {
    const double sum_nm = wg.phase_matched(wavelength_nm)
                              ? photonics::sum_wavelength(pump.wavelength_nm, wavelength_nm)
                              : photonics::sum_wavelength(wavelength_nm, rx.signal_nm);
    v.converted_w = converted_in_wg * wg.output_transmission() * stack_transmission(rx.post, sum_nm);
  }
  v.at_detectors_w = v.linear_leak_w + v.converted_w;
  v.safe = v.at_detectors_w < rx.detector.damage_threshold_w;
  return v;
}

}  // namespace ucp::adversary
