#include "ucp/receiver.hpp"

#include <stdexcept>

namespace ucp {

using photonics::stack_transmission;

double ReceiverConfig::filter_transmission() const {
  return stack_transmission(pre, signal_nm) * stack_transmission(post, sum_nm());
}

double ReceiverConfig::overall_efficiency() const {
  const double p_int = pump.peak_power_w * waveguide.input_transmission();
  return filter_transmission() * waveguide.input_transmission() *
         upconversion::conversion_efficiency(p_int, waveguide) * waveguide.output_transmission() *
         detector.eta_d;
}

photonics::Band ReceiverConfig::pump_band() const {
  constexpr double kPumpPathHalfWidthNm = 20.0;
  return {pump.wavelength_nm - kPumpPathHalfWidthNm, pump.wavelength_nm + kPumpPathHalfWidthNm};
}

void ReceiverConfig::validate() const {
  if (!(signal_width_ps > 0.0)) throw std::invalid_argument("signal width_ps must be > 0");
  if (!(signal_width_ps <= pump.width_ps)) {
    throw std::invalid_argument("signal width_ps must not exceed the pump width");
  }
  if (!(signal_nm > photonics::kModelMinNm && signal_nm < photonics::kModelMaxNm)) {
    throw std::invalid_argument("signal wavelength outside the modeled range");
  }
  pump.validate();
  waveguide.validate();
  detector.validate();
  monitor.validate();
  for (const auto& e : pre.elements) e.validate();
  for (const auto& e : post.elements) e.validate();
}

}  // namespace ucp
