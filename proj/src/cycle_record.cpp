#include "ucp/cycle_record.hpp"

#include <stdexcept>

#include "ucp/photonics.hpp"

namespace ucp {

AliceChoice AliceChoice::make(int bit, Basis basis, double mu) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("AliceChoice: bit must be 0 or 1");
  const double phase = bit * photonics::kPi + (basis == Basis::X ? photonics::kPi / 2.0 : 0.0);
  return {bit, basis, phase, mu};
}

std::string to_string(AlarmKind kind) {
  switch (kind) {
    case AlarmKind::pump_depletion: return "pump-depletion";
    case AlarmKind::signal_residual: return "signal-residual";
    case AlarmKind::nabc_statistics: return "nabc-statistics";
    case AlarmKind::damage: return "damage";
    case AlarmKind::fuse: return "fuse";
  }
  return "pump-depletion";
}

const detection::BinOutcome* CycleRecord::middle() const {
  for (std::uint8_t i = 0; i < n_outcomes; ++i) {
    if (outcomes[i].bin == detection::Bin::middle) return &outcomes[i];
  }
  return nullptr;
}

}  // namespace ucp
