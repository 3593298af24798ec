#include "ucp/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ucp::detection {

double DetectorModel::effective_dead_time_ps() const {
  const double saturation_ps = max_rate_cps > 0.0 ? 1e12 / max_rate_cps : 0.0;
  return std::max(dead_time_ns * 1e3, saturation_ps);
}

void DetectorModel::validate() const {
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) throw std::invalid_argument("eta_d must lie in [0, 1]");
  if (!(dark_cps >= 0.0)) throw std::invalid_argument("dark_cps must be >= 0");
  if (!(dead_time_ns >= 0.0)) throw std::invalid_argument("dead_time_ns must be >= 0");
  if (!(max_rate_cps > 0.0)) throw std::invalid_argument("max_rate_cps must be > 0");
  if (!(blind_power_w > 0.0)) throw std::invalid_argument("blind_power_w must be > 0");
  if (!(click_threshold_w > 0.0)) throw std::invalid_argument("click_threshold_w must be > 0");
  if (!(damage_threshold_w > click_threshold_w)) {
    throw std::invalid_argument("damage_threshold_w must exceed click_threshold_w");
  }
}

std::string to_string(Bin bin) {
  switch (bin) {
    case Bin::early: return "early";
    case Bin::middle: return "middle";
    case Bin::late: return "late";
  }
  return "middle";
}

double BinTable::total() const {
  double t = 0.0;
  for (const auto& b : bins) t += b.total();
  return t;
}

namespace {

double joint_width(const SlotField& a, const SlotField& b) {
  if (a.photons <= 0.0) return b.width_ps;
  if (b.photons <= 0.0) return a.width_ps;
  return std::min(a.width_ps, b.width_ps);
}

}  // namespace

BinTable amzi_bins(const SlotField& early, const SlotField& late, bool single_pulse) {
  const double a = std::max(0.0, early.photons);
  const double b = std::max(0.0, late.photons);
  BinTable t;
  t.single_pulse = single_pulse;

  auto& e = t[Bin::early];
  auto& m = t[Bin::middle];
  auto& l = t[Bin::late];
  e.width_ps = early.width_ps;
  l.width_ps = late.width_ps;
  m.width_ps = joint_width(early, late);

  if (single_pulse) {
    e.d0_photons = e.d1_photons = 0.25 * a;
    l.d0_photons = l.d1_photons = 0.25 * b;
    m.d0_photons = m.d1_photons = 0.25 * (a + b);
    return t;
  }

  e.d0_photons = 0.5 * a;
  l.d1_photons = 0.5 * b;
  const double dphi = late.phase_rad - early.phase_rad;
  const double cross = 0.5 * std::sqrt(a * b) * std::cos(dphi);
  // Clamp the rounding residue so the shares never go negative.
  m.d0_photons = std::max(0.0, 0.25 * (a + b) + cross);
  m.d1_photons = std::max(0.0, 0.25 * (a + b) - cross);
  return t;
}

BinTable amzi_bin_distribution(const photonics::OpticalPulse& early,
                               const photonics::OpticalPulse& late, double delay_ps,
                               bool single_pulse) {
  const double separation = late.arrival_ps() - early.arrival_ps();
  const double tolerance = 0.5 * std::max(early.width_ps(), late.width_ps());
  if (std::abs(separation - delay_ps) > tolerance) {
    throw std::domain_error("amzi_bin_distribution: pulse separation does not match the AMZI delay");
  }
  return amzi_bins({early.mean_photons(), early.phase_rad(), early.width_ps()},
                   {late.mean_photons(), late.phase_rad(), late.width_ps()}, single_pulse);
}

double geiger_click_probability(double mean_photons, const DetectorModel& det, double window_ps) {
  const double exponent = mean_photons * det.eta_d + det.dark_cps * window_ps * 1e-12;
  return -std::expm1(-exponent);
}

SpadResponse spad_response(const SpadIncident& in, const DetectorModel& det, Rng& rng) {
  const double u = uniform01(rng);
  SpadResponse r;
  if (in.peak_power_w >= det.damage_threshold_w || in.continuous_power_w >= det.damage_threshold_w) {
    r.damage = true;
    return r;
  }
  if (in.continuous_power_w >= det.blind_power_w) {
    r.blinded = true;
    r.click = in.peak_power_w >= det.click_threshold_w;
    return r;
  }
  r.click = u < geiger_click_probability(in.mean_photons, det, in.window_ps);
  return r;
}

bool SpadState::admit(bool candidate, bool damage_event, double time_ps, const DetectorModel& det) {
  if (damage_event) damaged = true;
  if (damaged || !candidate) return false;
  if (time_ps - last_click_ps < det.effective_dead_time_ps()) {
    ++suppressed_clicks;
    return false;
  }
  last_click_ps = time_ps;
  return true;
}

SpadResponse spad_detect(const SpadIncident& in, const DetectorModel& det, SpadState& state,
                         double time_ps, Rng& rng) {
  SpadResponse r = spad_response(in, det, rng);
  r.click = state.admit(r.click, r.damage, time_ps, det);
  return r;
}

}  // namespace ucp::detection
