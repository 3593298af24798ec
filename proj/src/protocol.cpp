#include "ucp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ucp::protocol {

using detection::Bin;
using detection::BinTable;
using detection::SlotField;
using photonics::OpticalPulse;
using photonics::stack_transmission;

double ChannelModel::transmission() const {
  return photonics::db_to_transmission(length_km * loss_db_per_km);
}

void ChannelModel::validate() const {
  if (!(length_km >= 0.0)) throw std::invalid_argument("channel.length_km must be >= 0");
  if (!(loss_db_per_km >= 0.0)) throw std::invalid_argument("channel.loss_db_per_km must be >= 0");
  eve.validate();
}

AliceChoice draw_alice(double mu, Rng& rng) {
  const int bit = std::uniform_int_distribution<int>(0, 1)(rng);
  const int basis = std::uniform_int_distribution<int>(0, 1)(rng);
  return AliceChoice::make(bit, basis == 0 ? Basis::Z : Basis::X, mu);
}

std::array<OpticalPulse, 2> alice_prepare(const AliceChoice& choice, const ReceiverConfig& rx) {
  if (!(choice.mu > 0.0)) throw std::invalid_argument("alice_prepare: mu must be > 0");
  const double start = rx.signal_arrival_ps();
  const double half = 0.5 * choice.mu;
  return {OpticalPulse::quantum(rx.signal_nm, half, rx.signal_width_ps, start, 0.0),
          OpticalPulse::quantum(rx.signal_nm, half, rx.signal_width_ps, start + rx.delay_ps(),
                                choice.phase_rad)};
}

double bin_time_ps(std::uint64_t cycle_index, Bin bin, const ReceiverConfig& rx) {
  return static_cast<double>(cycle_index) * rx.pump.period_ps() + rx.pump.arrival_ps +
         static_cast<double>(bin) * rx.delay_ps() + 0.5 * rx.pump.width_ps;
}

namespace {

// Sum-band light collected for one pump slot after the post-waveguide filters.
struct SlotAccumulator {
  double photons = 0.0;
  double dominant = -1.0;
  double phase_rad = 0.0;
  double width_ps = 0.0;
  double leak_photons = 0.0;  // unconverted light leaking straight through

  void add(const OpticalPulse& p) {
    photons += p.mean_photons();
    if (p.mean_photons() > dominant) {
      dominant = p.mean_photons();
      phase_rad = p.phase_rad();
      width_ps = p.width_ps();
    }
  }
  SlotField field() const { return {photons, phase_rad, width_ps}; }
};

}  // namespace

double cw_average_at_detectors(const adversary::CwBackground& cw, const ReceiverConfig& rx) {
  const auto& wg = rx.waveguide;
  const auto& pump = rx.pump;
  const double t_in = wg.input_transmission();
  const double p_wg = cw.power_w * stack_transmission(rx.pre, cw.wavelength_nm) * t_in;
  const double period = pump.period_ps();
  const double pulses = 2.0 - pump.single_pulse_prob;  // expected pump pulses per cycle
  const double pulse_ps = pulses * pump.width_ps;
  const double pedestal_ps = std::max(0.0, period - pulse_ps);
  const double pump_in = pump.peak_power_w * t_in;
  const double ped_in = pump.pedestal_w() * t_in;

  double converted = 0.0;
  if (wg.phase_matched(cw.wavelength_nm)) {
    const double per_pulse =
        std::min(photonics::photon_number(p_wg, pump.width_ps, cw.wavelength_nm) *
                     upconversion::conversion_efficiency(pump_in, wg),
                 photonics::photon_number(pump_in, pump.width_ps, pump.wavelength_nm));
    const double on_pedestal =
        std::min(photonics::photon_number(p_wg, pedestal_ps, cw.wavelength_nm) *
                     upconversion::conversion_efficiency(ped_in, wg),
                 photonics::photon_number(ped_in, pedestal_ps, pump.wavelength_nm));
    converted = pulses * per_pulse + on_pedestal;
  }
  const double residual = photonics::photon_number(p_wg, period, cw.wavelength_nm) - converted;
  const double sum_nm = photonics::sum_wavelength(pump.wavelength_nm, cw.wavelength_nm);
  const double t_out = wg.output_transmission();
  const double energy =
      converted * t_out * stack_transmission(rx.post, sum_nm) * photonics::photon_energy(sum_nm) +
      std::max(0.0, residual) * t_out * stack_transmission(rx.post, cw.wavelength_nm) *
          photonics::photon_energy(cw.wavelength_nm);
  return energy / (period * 1e-12);
}

CycleRecord run_cycle(const AliceChoice& alice, const ChannelModel& channel, const ReceiverConfig& rx,
                      std::uint64_t cycle_index, Rng& rng) {
  CycleRecord rec;
  rec.cycle_index = cycle_index;
  rec.alice = alice;

  auto signal = alice_prepare(alice, rx);
  const double t_ch = channel.transmission();
  for (auto& p : signal) p = p.attenuated(t_ch);

  const adversary::ChannelOutput input = adversary::apply_attack(channel.eve, signal, rng);
  const upconversion::PumpTrain train = upconversion::pump_pulse_train(rx.pump, rng);
  rec.bob_basis = train.basis_index;
  rec.bob_phase_rad = train.basis_phase_rad;
  rec.single_pulse = train.single_pulse;

  const std::size_t lit_slot = rx.pump.phase_on_late_pulse ? 1 : 0;
  const std::array<Bin, 3> all_bins{Bin::early, Bin::middle, Bin::late};
  const std::size_t first_bin = rec.single_pulse ? lit_slot : 0;
  rec.n_outcomes = rec.single_pulse ? 2 : 3;
  for (std::size_t i = 0; i < rec.n_outcomes; ++i) rec.outcomes[i].bin = all_bins[first_bin + i];

  if (input.fused) {
    rec.fuse = true;
    rec.alarms = monitors::evaluate_alarms(monitors::readings_of(rec), rx.monitor);
    return rec;
  }

  const auto& wg = rx.waveguide;
  const auto& pump_cfg = rx.pump;
  const double t_in = wg.input_transmission();
  const double t_out = wg.output_transmission();
  const double ped_in = train.pedestal_w * t_in;

  // Pump seen by each slot inside the waveguide. A missing pulse leaves only
  // the pedestal, represented as a pedestal-level pulse at the nominal slot.
  std::array<OpticalPulse, 2> slot_pump{
      OpticalPulse::classical(pump_cfg.wavelength_nm, ped_in, pump_cfg.width_ps, pump_cfg.arrival_ps,
                              train.pedestal_phase_rad),
      OpticalPulse::classical(pump_cfg.wavelength_nm, ped_in, pump_cfg.width_ps,
                              pump_cfg.arrival_ps + pump_cfg.pair_separation_ps, train.pedestal_phase_rad)};
  std::array<bool, 2> present{false, false};
  for (std::size_t k = 0; k < 2; ++k) {
    if (train.slots[k]) {
      slot_pump[k] = train.slots[k]->attenuated(t_in);
      present[k] = true;
    }
  }

  std::array<std::vector<OpticalPulse>, 2> items;
  for (const auto& p : input.pulses) {
    const OpticalPulse in_wg = p.attenuated(stack_transmission(rx.pre, p.wavelength_nm()) * t_in);
    const double d0 = std::abs(p.center_ps() - slot_pump[0].center_ps());
    const double d1 = std::abs(p.center_ps() - slot_pump[1].center_ps());
    items[d1 < d0 ? 1 : 0].push_back(in_wg);
  }

  if (input.cw) {
    const double nm = input.cw->wavelength_nm;
    const double p_wg = input.cw->power_w * stack_transmission(rx.pre, nm) * t_in;
    // In-window segments ride with the pump pulses.
    for (std::size_t k = 0; k < 2; ++k) {
      items[k].push_back(OpticalPulse::classical(nm, p_wg, slot_pump[k].width_ps(),
                                                 slot_pump[k].arrival_ps(), 0.0));
    }
    // Outside the pulses only the pedestal converts; the remainder reaches the
    // signal monitor.
    const double off_ps = pump_cfg.period_ps() - slot_pump[0].width_ps() - slot_pump[1].width_ps();
    if (off_ps > 0.0) {
      const double n_off = photonics::photon_number(p_wg, off_ps, nm);
      double converted = 0.0;
      if (wg.phase_matched(nm)) {
        converted = std::min(n_off * upconversion::conversion_efficiency(ped_in, wg),
                             photonics::photon_number(ped_in, off_ps, pump_cfg.wavelength_nm));
      }
      rec.residual_signal_photons += n_off - converted;
    }
  }

  std::array<SlotAccumulator, 2> acc;
  const double half_window = rx.bin_half_window_ps();
  for (std::size_t k = 0; k < 2; ++k) {
    OpticalPulse pump = slot_pump[k];
    const double pump_photons = pump.mean_photons();
    double from_pulse = 0.0;
    for (std::size_t i = 0; i < items[k].size(); ++i) {
      const OpticalPulse& item = items[k][i];
      const auto res = upconversion::convert_in_waveguide(item, pump, wg, ped_in);
      pump = res.depleted_pump;
      from_pulse += res.converted_from_pulse;
      rec.residual_signal_photons += res.residual_signal.mean_photons();

      const double leak = res.residual_signal.mean_photons() * t_out *
                          stack_transmission(rx.post, item.wavelength_nm());
      acc[k].leak_photons += leak;

      const OpticalPulse sfg = couple_out(res.sfg_pulse, wg)
                                   .attenuated(stack_transmission(rx.post, res.sfg_pulse.wavelength_nm()));
      if (std::abs(sfg.center_ps() - slot_pump[k].center_ps()) < half_window) {
        acc[k].add(sfg);
      } else {
        rec.out_of_gate_photons += sfg.mean_photons();
        rec.out_of_gate_peak_w = std::max(rec.out_of_gate_peak_w, res.sfg_pulse.peak_power_w());
      }
    }
    if (present[k] && pump_photons > 0.0) rec.zeta = std::max(rec.zeta, from_pulse / pump_photons);
  }

  BinTable table = detection::amzi_bins(acc[0].field(), acc[1].field(), rec.single_pulse);
  // Unconverted leak light does not interfere; it spreads evenly over the two
  // bins fed by its slot.
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t b = k; b <= k + 1; ++b) {
      table.bins[b].d0_photons += 0.25 * acc[k].leak_photons;
      table.bins[b].d1_photons += 0.25 * acc[k].leak_photons;
      if (table.bins[b].width_ps <= 0.0) table.bins[b].width_ps = rx.signal_width_ps;
    }
  }

  const double sum_nm = rx.sum_nm();
  const double continuous = input.cw ? 0.5 * cw_average_at_detectors(*input.cw, rx) : 0.0;
  for (std::size_t i = 0; i < rec.n_outcomes; ++i) {
    auto& outcome = rec.outcomes[i];
    const auto& light = table[outcome.bin];
    const double width = light.width_ps > 0.0 ? light.width_ps : rx.signal_width_ps;
    for (int d = 0; d < 2; ++d) {
      const double photons = d == 0 ? light.d0_photons : light.d1_photons;
      const detection::SpadIncident incident{
          .mean_photons = photons,
          .peak_power_w = photons * photonics::photon_energy(sum_nm) / (width * 1e-12),
          .continuous_power_w = continuous,
          .window_ps = pump_cfg.width_ps,
      };
      const auto resp = detection::spad_response(incident, rx.detector, rng);
      (d == 0 ? outcome.d0_click : outcome.d1_click) = resp.click;
      rec.damage = rec.damage || resp.damage;
      rec.blinded = rec.blinded || resp.blinded;
      rec.peak_detector_power_w =
          std::max({rec.peak_detector_power_w, incident.peak_power_w, incident.continuous_power_w});
    }
  }

  rec.alarms = monitors::evaluate_alarms(monitors::readings_of(rec), rx.monitor);
  return rec;
}

SiftStatus sift_one(const CycleRecord& rec, SiftedPair& pair) {
  if (rec.single_pulse) return SiftStatus::single_pulse;
  const auto* m = rec.middle();
  if (m == nullptr || !m->any()) return SiftStatus::no_click;
  if (m->double_click()) return SiftStatus::double_click;
  const std::size_t alice_basis = rec.alice.basis == Basis::X ? 1 : 0;
  if (alice_basis != rec.bob_basis) return SiftStatus::basis_mismatch;
  pair = {rec.alice.bit, m->d1_click ? 1 : 0};
  return SiftStatus::kept;
}

SiftResult sift(std::span<const CycleRecord> records) {
  SiftResult out;
  for (const auto& rec : records) {
    SiftedPair pair;
    switch (sift_one(rec, pair)) {
      case SiftStatus::kept: out.pairs.push_back(pair); break;
      case SiftStatus::single_pulse: ++out.single_pulse; break;
      case SiftStatus::no_click: ++out.no_click; break;
      case SiftStatus::double_click: ++out.double_clicks; break;
      case SiftStatus::basis_mismatch: ++out.basis_mismatch; break;
    }
  }
  return out;
}

double qber(std::span<const SiftedPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("qber: no sifted pairs");
  std::size_t errors = 0;
  for (const auto& p : pairs) errors += p.alice_bit != p.bob_bit ? 1 : 0;
  return static_cast<double>(errors) / static_cast<double>(pairs.size());
}

double key_rate_estimate(const KeyRateParams& p) {
  return p.rep_rate_hz * p.mu * p.channel_transmission * p.overall_efficiency * p.basis_factor *
         p.middle_bin_factor;
}

namespace {

// Honest photons reaching the AMZI from one signal pulse of mu/2.
double honest_slot_photons(const ReceiverConfig& rx, const ChannelModel& channel, double mu) {
  const auto& wg = rx.waveguide;
  const double p_int = rx.pump.peak_power_w * wg.input_transmission();
  return 0.5 * mu * channel.transmission() * rx.filter_transmission() * wg.input_transmission() *
         upconversion::conversion_efficiency(p_int, wg) * wg.output_transmission();
}

}  // namespace

double sifted_probability_per_cycle(const ReceiverConfig& rx, const ChannelModel& channel, double mu) {
  const double a = honest_slot_photons(rx, channel, mu);
  const auto& det = rx.detector;
  const double window = rx.pump.width_ps;
  // With matched bases the middle bin carries one slot's worth of photons to one detector.
  const double p_right = detection::geiger_click_probability(a, det, window);
  const double p_wrong = detection::geiger_click_probability(0.0, det, window);
  const double exactly_one = p_right * (1.0 - p_wrong) + p_wrong * (1.0 - p_right);
  return (1.0 - rx.pump.single_pulse_prob) * 0.5 * exactly_one;
}

double honest_double_click_probability(const ReceiverConfig& rx, const ChannelModel& channel, double mu) {
  const double a = honest_slot_photons(rx, channel, mu);
  const double p = detection::geiger_click_probability(0.25 * a, rx.detector, rx.pump.width_ps);
  const double per_bin = p * p;
  return 1.0 - (1.0 - per_bin) * (1.0 - per_bin);
}

}  // namespace ucp::protocol
