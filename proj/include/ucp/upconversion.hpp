#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "ucp/photonics.hpp"
#include "ucp/rng.hpp"

namespace ucp::upconversion {

using photonics::OpticalPulse;

// Periodically-poled waveguide performing the sum-frequency interaction.
struct WaveguideModel {
  double eta_max = 0.95;          // peak internal conversion probability
  double p_full_w = 0.1;          // in-waveguide pump peak giving eta_max
  double propagation_loss_db = 0.1;
  double in_coupling_db = 0.1;
  double out_coupling_db = 0.1;
  double pm_center_nm = 1530.0;
  double pm_bandwidth_nm = 1.0;   // full width of the phase-matching acceptance

  /// Transmission from the waveguide input facet to the interaction region.
  double input_transmission() const;
  double output_transmission() const;
  bool phase_matched(double signal_nm) const;
  void validate() const;
};

inline constexpr double kInfiniteExtinction = std::numeric_limits<double>::infinity();

struct PumpConfig {
  double wavelength_nm = 1810.0;
  double width_ps = 110.0;
  double peak_power_w = 0.1;  // launched into the waveguide
  double extinction_ratio_db = 30.0;
  double jitter_ps = 2.0;
  double pair_separation_ps = 350.0;
  double rep_rate_hz = 1e9;
  std::vector<double> phase_alphabet{0.0, photonics::kPi / 2.0};
  double single_pulse_prob = 0.01;
  bool interpulse_randomization = false;
  // The basis phase goes on the late pulse of the pair unless this is false.
  bool phase_on_late_pulse = true;
  double arrival_ps = 0.0;  // nominal start of the early pump pulse in the cycle

  double pedestal_w() const;
  double period_ps() const { return 1e12 / rep_rate_hz; }
  /// Fraction of the cycle covered by the pulses of a pair.
  double duty_cycle() const { return 2.0 * width_ps / period_ps(); }
  void validate() const;
};

/// eta_max * sin^2(pi/2 * sqrt(P / p_full)), held at eta_max above p_full.
double conversion_efficiency(double pump_power_w, const WaveguideModel& wg);

struct SfgResult {
  OpticalPulse sfg_pulse;        // at the sum wavelength, interaction plane
  OpticalPulse depleted_pump;    // pump pulse after conversion
  OpticalPulse residual_signal;  // unconverted signal
  double converted_photons = 0.0;
  double converted_from_pulse = 0.0;     // drawn from the pump pulse
  double converted_from_pedestal = 0.0;  // drawn from the inter-pulse pedestal
  double incident_signal_photons = 0.0;
  double available_pump_photons = 0.0;   // pump photons inside the signal window
  double overlap_fraction = 0.0;

  /// Fractional energy lost by the pump pulse.
  double pump_depletion() const;
};

/// Interaction-plane conversion. Inputs are already inside the waveguide.
SfgResult convert_in_waveguide(const OpticalPulse& signal, const OpticalPulse& pump,
                               const WaveguideModel& wg, double pedestal_w = 0.0);

/// Couples signal, pump and pedestal into the waveguide, then converts.
SfgResult upconvert(const OpticalPulse& signal, const OpticalPulse& pump,
                    const WaveguideModel& wg, double pedestal_w = 0.0);

/// Applies out-coupling loss to a pulse leaving the waveguide.
OpticalPulse couple_out(const OpticalPulse& pulse, const WaveguideModel& wg);

// Pump pulses emitted for one cycle. Slot 0 is the early pulse, slot 1 the late one.
struct PumpTrain {
  std::array<std::optional<OpticalPulse>, 2> slots;
  double pedestal_w = 0.0;
  double pedestal_phase_rad = 0.0;
  bool single_pulse = false;
  std::size_t basis_index = 0;
  double basis_phase_rad = 0.0;

  std::vector<OpticalPulse> pulses() const;
};

PumpTrain pump_pulse_train(const PumpConfig& cfg, Rng& rng);

/// Width of the optical gate: the span where the pump exceeds ten times its
/// pedestal. With extinction of 10 dB or less the whole cycle is open.
double gate_width_ps(const PumpConfig& cfg);

/// Peak sum-frequency power producible from the pedestal outside the pump
/// pulse: P_ped * signal / sum.
double gated_bound_on_sum_power(const PumpConfig& cfg, double signal_nm);

/// Pump-photon-flux ceiling on the same quantity: P_ped * pump / sum.
double flux_bound_on_sum_power(const PumpConfig& cfg, double signal_nm);

}  // namespace ucp::upconversion
