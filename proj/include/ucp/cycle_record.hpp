#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "ucp/detection.hpp"

namespace ucp {

enum class Basis : std::uint8_t { Z = 0, X = 1 };

// Alice's preparation for one cycle. The relative phase of the pair is
// bit*pi + basis*pi/2.
struct AliceChoice {
  int bit = 0;
  Basis basis = Basis::Z;
  double phase_rad = 0.0;
  double mu = 0.2;

  static AliceChoice make(int bit, Basis basis, double mu);
};

enum class AlarmKind : std::uint8_t { pump_depletion = 0, signal_residual, nabc_statistics, damage, fuse };

inline constexpr std::size_t kAlarmKinds = 5;

std::string to_string(AlarmKind kind);

constexpr std::uint8_t alarm_bit(AlarmKind kind) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(kind));
}

struct CycleRecord {
  std::uint64_t cycle_index = 0;
  AliceChoice alice;
  std::size_t bob_basis = 0;  // index into the pump phase alphabet
  double bob_phase_rad = 0.0;
  bool single_pulse = false;

  // Evaluated output bins, in time order. Single-pulse cycles use two.
  std::array<detection::BinOutcome, 3> outcomes{};
  std::uint8_t n_outcomes = 0;

  double zeta = 0.0;                      // raw pump depletion, largest over present pulses
  double residual_signal_photons = 0.0;   // unconverted light seen by the signal monitor
  double out_of_gate_photons = 0.0;       // sum-band photons landing outside every bin window
  double out_of_gate_peak_w = 0.0;        // largest such pulse peak, in the waveguide
  double peak_detector_power_w = 0.0;
  bool blinded = false;
  bool damage = false;
  bool fuse = false;
  std::uint8_t alarms = 0;  // bitmask of alarm_bit(kind)

  const detection::BinOutcome* middle() const;
};

}  // namespace ucp
