#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucp/photonics.hpp"
#include "ucp/receiver.hpp"
#include "ucp/rng.hpp"

namespace ucp::adversary {

using photonics::OpticalPulse;

enum class AttackKind {
  none,
  faked_state,
  time_shift,
  blinding_plus_faked,
  trojan_probe,
  wavelength_scan,
  laser_damage,
};

std::string to_string(AttackKind kind);
AttackKind attack_kind_from_string(const std::string& name);

/// Power above which the input fiber fuses and disconnects the receiver.
inline constexpr double kFuseLimitW = 10.0;

// Eve's per-cycle behavior. Zero wavelength or width means "same as the
// honest signal".
struct AttackStrategy {
  AttackKind kind = AttackKind::none;
  double peak_power_w = 0.0;  // faked or probe pulse peak at Bob's input
  double offset_ps = 0.0;     // time offset relative to the honest pulses
  double width_ps = 0.0;
  double cw_power_w = 0.0;    // continuous background (blinding, damage)
  double wavelength_nm = 0.0;
  // Fixed late-minus-early phase of the faked pair. When unset Eve uses the
  // phase of her intercept-resend guess.
  std::optional<double> relative_phase_rad;
  // Fraction of cycles in which a faked pair is actually sent; in the others
  // Eve blocks the signal and sends only her background light.
  double resend_prob = 1.0;

  /// Throws std::invalid_argument naming the offending parameter.
  void validate() const;
};

struct CwBackground {
  double wavelength_nm = 0.0;
  double power_w = 0.0;
};

struct ChannelOutput {
  std::vector<OpticalPulse> pulses;
  std::optional<CwBackground> cw;
  bool fused = false;
  int eve_basis = -1;  // -1 when Eve does not measure
  int eve_bit = -1;
};

/// Applies Eve to the honest pulse pair arriving at Bob's input.
ChannelOutput apply_attack(const AttackStrategy& strategy, std::span<const OpticalPulse> honest,
                           Rng& rng);

struct TrojanLeak {
  double injected_photons = 0.0;
  double returned_photons = 0.0;
  double one_way_attenuation_db = 0.0;
  double back_reflection_db = 0.0;
  bool carries_basis_info = false;
  double basis_info_photons = 0.0;  // returned photons that picked up the pump phase
};

/// Round trip through `path` with a reflection of `back_reflection_db`.
/// Basis information returns only for probes inside `pump_band`.
TrojanLeak trojan_leak_estimate(double probe_nm, double power_w, double probe_width_ps,
                                const photonics::FilterStack& path, double back_reflection_db,
                                const photonics::Band& pump_band);

struct DamageVerdict {
  double in_waveguide_w = 0.0;     // input light reaching the interaction region
  double linear_leak_w = 0.0;      // light passing straight through to the detectors
  double converted_w = 0.0;        // worst-case sum-band light at the detectors
  double at_detectors_w = 0.0;
  bool fused = false;
  bool safe = true;
};

/// Worst-case average power at the detectors for CW input. Conversion is taken
/// at unity, capped by the pump photon flux.
DamageVerdict damage_assessment(double cw_power_w, double wavelength_nm, const ReceiverConfig& rx);

}  // namespace ucp::adversary
