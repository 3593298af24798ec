#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ucp/adversary.hpp"
#include "ucp/cycle_record.hpp"
#include "ucp/receiver.hpp"
#include "ucp/rng.hpp"

namespace ucp::protocol {

struct ChannelModel {
  double length_km = 100.0;
  double loss_db_per_km = 0.2;
  adversary::AttackStrategy eve;

  double transmission() const;
  void validate() const;
};

/// Uniform bit and basis.
AliceChoice draw_alice(double mu, Rng& rng);

/// Signal pair at Bob's nominal arrival time, mu/2 photons in each pulse.
std::array<photonics::OpticalPulse, 2> alice_prepare(const AliceChoice& choice, const ReceiverConfig& rx);

/// Time-averaged power that Eve's continuous background delivers to the two
/// detectors together. Blinding responds to this average rather than to the
/// pump pattern of a single cycle.
double cw_average_at_detectors(const adversary::CwBackground& cw, const ReceiverConfig& rx);

/// One protocol cycle up to candidate detector clicks. Dead time and absorbing
/// detector damage depend on earlier cycles and are applied by the caller.
CycleRecord run_cycle(const AliceChoice& alice, const ChannelModel& channel, const ReceiverConfig& rx,
                      std::uint64_t cycle_index, Rng& rng);

/// Absolute time of an output bin, used for dead-time bookkeeping.
double bin_time_ps(std::uint64_t cycle_index, detection::Bin bin, const ReceiverConfig& rx);

struct SiftedPair {
  int alice_bit = 0;
  int bob_bit = 0;
};

enum class SiftStatus { kept, single_pulse, no_click, double_click, basis_mismatch };

/// Classifies one record and, when kept, yields the bit pair. Bob's basis
/// index 0 is Z, 1 is X.
SiftStatus sift_one(const CycleRecord& rec, SiftedPair& pair);

struct SiftResult {
  std::vector<SiftedPair> pairs;
  std::size_t double_clicks = 0;
  std::size_t basis_mismatch = 0;
  std::size_t no_click = 0;
  std::size_t single_pulse = 0;
};

SiftResult sift(std::span<const CycleRecord> records);

/// Errors over total. Throws std::invalid_argument on empty input.
double qber(std::span<const SiftedPair> pairs);

struct KeyRateParams {
  double rep_rate_hz = 1e9;
  double mu = 0.2;
  double channel_transmission = 0.01;
  double overall_efficiency = 0.35;
  double basis_factor = 0.5;
  double middle_bin_factor = 0.5;
};

/// f_R * mu * T_ch * eta_ov * basis_factor * middle_bin_factor, in bits/s.
double key_rate_estimate(const KeyRateParams& p);

/// Expected sifted-bit probability per cycle for the honest model, including
/// the fraction of cycles spent on single-pulse sampling.
double sifted_probability_per_cycle(const ReceiverConfig& rx, const ChannelModel& channel, double mu);

/// Honest probability that a sampling cycle contains a bin where both
/// detectors fire.
double honest_double_click_probability(const ReceiverConfig& rx, const ChannelModel& channel, double mu);

}  // namespace ucp::protocol
