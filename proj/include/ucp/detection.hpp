#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "ucp/photonics.hpp"
#include "ucp/rng.hpp"

namespace ucp::detection {

// Free-running Si SPAD with a two-threshold blinding model.
struct DetectorModel {
  double eta_d = 0.8;
  double dark_cps = 100.0;
  double dead_time_ns = 25.0;
  double max_rate_cps = 40e6;
  double blind_power_w = 10e-6;       // continuous power that quenches Geiger mode
  double click_threshold_w = 200e-6;  // peak power that fires a blinded detector
  double damage_threshold_w = 0.2;

  /// Longer of the quench dead time and the saturation interval, in ps.
  double effective_dead_time_ps() const;
  void validate() const;
};

enum class Bin : std::uint8_t { early = 0, middle = 1, late = 2 };

std::string to_string(Bin bin);

struct BinOutcome {
  Bin bin = Bin::middle;
  bool d0_click = false;
  bool d1_click = false;

  bool any() const { return d0_click || d1_click; }
  bool double_click() const { return d0_click && d1_click; }
};

// Mean photon number reaching each detector in one output time bin.
struct BinLight {
  double d0_photons = 0.0;
  double d1_photons = 0.0;
  double width_ps = 0.0;  // duration of the light in the bin, for peak power

  double total() const { return d0_photons + d1_photons; }
};

struct BinTable {
  std::array<BinLight, 3> bins;
  bool single_pulse = false;

  const BinLight& operator[](Bin b) const { return bins[static_cast<std::size_t>(b)]; }
  BinLight& operator[](Bin b) { return bins[static_cast<std::size_t>(b)]; }
  double total() const;
};

// Light entering the AMZI from one pump slot: photon number, optical phase
// and pulse width. Zero photons means the slot is dark.
struct SlotField {
  double photons = 0.0;
  double phase_rad = 0.0;
  double width_ps = 0.0;
};

/// Splits the early and late slot fields over the three output bins. Early
/// light exits half in the early bin (D0) and half in the middle bin; late light
/// half in the middle bin and half in the late bin (D1). Middle-bin light
/// interferes with D0 share (a+b)/4 + sqrt(ab)/2 cos(late - early) unless
/// `single_pulse`, in which case every bin splits evenly between detectors.
BinTable amzi_bins(const SlotField& early, const SlotField& late, bool single_pulse);

/// Pulse-pair form. Throws std::domain_error when the pulses are not separated
/// by `delay_ps` to within half a pulse width.
BinTable amzi_bin_distribution(const photonics::OpticalPulse& early,
                               const photonics::OpticalPulse& late, double delay_ps,
                               bool single_pulse);

/// Geiger-mode click probability 1 - exp(-mu*eta_d) * exp(-dark * window).
double geiger_click_probability(double mean_photons, const DetectorModel& det, double window_ps);

struct SpadIncident {
  double mean_photons = 0.0;
  double peak_power_w = 0.0;
  double continuous_power_w = 0.0;
  double window_ps = 110.0;
};

struct SpadResponse {
  bool click = false;
  bool blinded = false;
  bool damage = false;
};

/// What the detector does to light if it is alive and not dead-timed. Draws
/// exactly one uniform from `rng`.
SpadResponse spad_response(const SpadIncident& in, const DetectorModel& det, Rng& rng);

struct SpadState {
  double last_click_ps = -std::numeric_limits<double>::infinity();
  bool damaged = false;
  std::uint64_t suppressed_clicks = 0;

  /// Applies damage and dead time to a candidate click at `time_ps`; returns
  /// whether the click is registered.
  bool admit(bool candidate, bool damage_event, double time_ps, const DetectorModel& det);
};

/// Response plus state update in one step.
SpadResponse spad_detect(const SpadIncident& in, const DetectorModel& det, SpadState& state,
                         double time_ps, Rng& rng);

}  // namespace ucp::detection
