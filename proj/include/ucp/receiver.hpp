#pragma once

#include "ucp/detection.hpp"
#include "ucp/monitors.hpp"
#include "ucp/photonics.hpp"
#include "ucp/upconversion.hpp"

namespace ucp {

// Everything on Bob's side of the channel.
struct ReceiverConfig {
  double signal_nm = 1530.0;
  double signal_width_ps = 90.0;
  upconversion::PumpConfig pump;
  upconversion::WaveguideModel waveguide;
  photonics::FilterStack pre = photonics::reference_pre_stack({});
  photonics::FilterStack post = photonics::reference_post_stack({});
  detection::DetectorModel detector;
  monitors::MonitorConfig monitor;

  double sum_nm() const { return photonics::sum_wavelength(pump.wavelength_nm, signal_nm); }
  double delay_ps() const { return pump.pair_separation_ps; }
  /// Start of the early signal pulse when it sits centered on the early pump pulse.
  double signal_arrival_ps() const { return pump.arrival_ps + 0.5 * (pump.width_ps - signal_width_ps); }
  /// Half-width of the time window that assigns sum-band light to a pump slot.
  double bin_half_window_ps() const { return pump.width_ps; }

  /// Linear filter transmission on the detection path, pre at the signal and
  /// post at the sum wavelength.
  double filter_transmission() const;
  /// Probability that a photon entering the receiver at the signal wavelength
  /// inside the gate produces a click.
  double overall_efficiency() const;

  /// Pump wavelengths that would reach the interaction through the pump path.
  photonics::Band pump_band() const;

  void validate() const;
};

}  // namespace ucp
