#include "ucp/upconversion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ucp::upconversion {

using photonics::db_to_transmission;
using photonics::normalize_phase;
using photonics::photon_number;
using photonics::PulseKind;
using photonics::sum_wavelength;

double WaveguideModel::input_transmission() const {
  return db_to_transmission(in_coupling_db + propagation_loss_db);
}

double WaveguideModel::output_transmission() const { return db_to_transmission(out_coupling_db); }

bool WaveguideModel::phase_matched(double signal_nm) const {
  return std::abs(signal_nm - pm_center_nm) <= 0.5 * pm_bandwidth_nm;
}

void WaveguideModel::validate() const {
  if (!(eta_max >= 0.0 && eta_max <= 1.0)) throw std::invalid_argument("eta_max must lie in [0, 1]");
  if (!(p_full_w > 0.0)) throw std::invalid_argument("p_full_w must be > 0");
  if (propagation_loss_db < 0.0 || in_coupling_db < 0.0 || out_coupling_db < 0.0) {
    throw std::invalid_argument("waveguide losses must be >= 0");
  }
  if (!(pm_bandwidth_nm >= 0.0)) throw std::invalid_argument("pm_bandwidth_nm must be >= 0");
}

double PumpConfig::pedestal_w() const {
  if (std::isinf(extinction_ratio_db)) return 0.0;
  return peak_power_w * std::pow(10.0, -extinction_ratio_db / 10.0);
}

void PumpConfig::validate() const {
  if (!(width_ps > 0.0)) throw std::invalid_argument("pump width_ps must be > 0");
  if (!(width_ps < pair_separation_ps)) {
    throw std::invalid_argument("pump width_ps must be smaller than pair_separation_ps");
  }
  if (!(peak_power_w >= 0.0)) throw std::invalid_argument("pump peak_power_w must be >= 0");
  if (!(extinction_ratio_db >= 0.0)) throw std::invalid_argument("extinction_ratio_db must be >= 0");
  if (!(jitter_ps >= 0.0)) throw std::invalid_argument("jitter_ps must be >= 0");
  if (!(rep_rate_hz > 0.0)) throw std::invalid_argument("rep_rate_hz must be > 0");
  if (!(single_pulse_prob >= 0.0 && single_pulse_prob <= 1.0)) {
    throw std::invalid_argument("single_pulse_prob must lie in [0, 1]");
  }
  if (phase_alphabet.empty()) throw std::invalid_argument("phase_alphabet must not be empty");
  if (arrival_ps + 2.0 * pair_separation_ps + width_ps > period_ps()) {
    throw std::invalid_argument("pump pair and AMZI delay do not fit inside one cycle period");
  }
}

double conversion_efficiency(double pump_power_w, const WaveguideModel& wg) {
  if (pump_power_w <= 0.0) return 0.0;
  if (pump_power_w >= wg.p_full_w) return wg.eta_max;
  const double s = std::sin(0.5 * photonics::kPi * std::sqrt(pump_power_w / wg.p_full_w));
  return wg.eta_max * s * s;
}

double SfgResult::pump_depletion() const {
  const double before = depleted_pump.mean_photons() + converted_from_pulse;
  if (before <= 0.0) return 0.0;
  return converted_from_pulse / before;
}

SfgResult convert_in_waveguide(const OpticalPulse& signal, const OpticalPulse& pump,
                               const WaveguideModel& wg, double pedestal_w) {
  const double overlap = std::max(
      0.0, std::min(signal.end_ps(), pump.end_ps()) - std::max(signal.arrival_ps(), pump.arrival_ps()));
  const double f = std::min(1.0, overlap / signal.width_ps());
  const double n_sig = signal.mean_photons();

  const double pulse_photons = photon_number(pump.peak_power_w(), overlap, pump.wavelength_nm());
  const double pedestal_photons =
      photon_number(pedestal_w, std::max(0.0, signal.width_ps() - overlap), pump.wavelength_nm());

  double from_pulse = 0.0;
  double from_pedestal = 0.0;
  if (wg.phase_matched(signal.wavelength_nm())) {
    // Each time segment is limited by the pump photons it contains.
    // Rounding in the overlap can exceed the pulse by an ulp; never take more than it holds.
    from_pulse = std::min({n_sig * f * conversion_efficiency(pump.peak_power_w(), wg), pulse_photons,
                           pump.mean_photons()});
    from_pedestal =
        std::min(n_sig * (1.0 - f) * conversion_efficiency(pedestal_w, wg), pedestal_photons);
  }
  const double converted = from_pulse + from_pedestal;

  const double sum_nm = sum_wavelength(pump.wavelength_nm(), signal.wavelength_nm());
  const bool gated = f > 0.0;
  const double width = gated ? std::min(signal.width_ps(), pump.width_ps()) : signal.width_ps();
  const double arrival = gated ? std::max(signal.arrival_ps(), pump.arrival_ps()) : signal.arrival_ps();

  return SfgResult{
      .sfg_pulse = OpticalPulse::from_photons(signal.kind(), sum_nm, converted, width, arrival,
                                              signal.phase_rad() + pump.phase_rad()),
      .depleted_pump = pump.with_photons(pump.mean_photons() - from_pulse),
      .residual_signal = signal.with_photons(std::max(0.0, n_sig - converted)),
      .converted_photons = converted,
      .converted_from_pulse = from_pulse,
      .converted_from_pedestal = from_pedestal,
      .incident_signal_photons = n_sig,
      .available_pump_photons = pulse_photons + pedestal_photons,
      .overlap_fraction = f,
  };
}

SfgResult upconvert(const OpticalPulse& signal, const OpticalPulse& pump, const WaveguideModel& wg,
                    double pedestal_w) {
  const double t_in = wg.input_transmission();
  return convert_in_waveguide(signal.attenuated(t_in), pump.attenuated(t_in), wg, pedestal_w * t_in);
}

OpticalPulse couple_out(const OpticalPulse& pulse, const WaveguideModel& wg) {
  return pulse.attenuated(wg.output_transmission());
}

std::vector<OpticalPulse> PumpTrain::pulses() const {
  std::vector<OpticalPulse> out;
  for (const auto& slot : slots) {
    if (slot) out.push_back(*slot);
  }
  return out;
}

PumpTrain pump_pulse_train(const PumpConfig& cfg, Rng& rng) {
  PumpTrain train;
  train.pedestal_w = cfg.pedestal_w();
  train.single_pulse = bernoulli(rng, cfg.single_pulse_prob);
  train.basis_index =
      std::uniform_int_distribution<std::size_t>(0, cfg.phase_alphabet.size() - 1)(rng);
  train.basis_phase_rad = cfg.phase_alphabet[train.basis_index];

  std::normal_distribution<double> jitter(0.0, 1.0);
  const double j0 = cfg.jitter_ps * jitter(rng);
  const double j1 = cfg.jitter_ps * jitter(rng);
  if (cfg.interpulse_randomization) train.pedestal_phase_rad = photonics::kTwoPi * uniform01(rng);

  // The modulator is calibrated so the late-minus-early pump phase is -phi_B,
  // whichever arm carries it.
  const std::size_t phased_slot = cfg.phase_on_late_pulse ? 1 : 0;
  const double applied = cfg.phase_on_late_pulse ? -train.basis_phase_rad : train.basis_phase_rad;

  const std::array<double, 2> starts{cfg.arrival_ps + j0, cfg.arrival_ps + cfg.pair_separation_ps + j1};
  for (std::size_t k = 0; k < 2; ++k) {
    // A sampling cycle keeps only the pulse that carries the basis phase.
    if (train.single_pulse && k != phased_slot) continue;
    const double phase = k == phased_slot ? applied : 0.0;
    train.slots[k] =
        OpticalPulse::classical(cfg.wavelength_nm, cfg.peak_power_w, cfg.width_ps, starts[k], phase);
  }
  return train;
}

double gate_width_ps(const PumpConfig& cfg) {
  if (cfg.extinction_ratio_db > 10.0) return cfg.width_ps;
  return cfg.period_ps();
}

double gated_bound_on_sum_power(const PumpConfig& cfg, double signal_nm) {
  const double sum_nm = sum_wavelength(cfg.wavelength_nm, signal_nm);
  return cfg.pedestal_w() * signal_nm / sum_nm;
}

double flux_bound_on_sum_power(const PumpConfig& cfg, double signal_nm) {
  const double sum_nm = sum_wavelength(cfg.wavelength_nm, signal_nm);
  return cfg.pedestal_w() * cfg.wavelength_nm / sum_nm;
}

}  // namespace ucp::upconversion
