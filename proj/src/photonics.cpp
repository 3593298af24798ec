#include "ucp/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ucp::photonics {

double normalize_phase(double phase_rad) {
  double wrapped = std::fmod(phase_rad, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a value just below a multiple of 2*pi can round up to 2*pi.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

double sum_wavelength(double pump_nm, double signal_nm) {
  if (!(pump_nm > 0.0) || !(signal_nm > 0.0)) {
    throw std::domain_error("sum_wavelength: wavelengths must be positive");
  }
  return 1.0 / (1.0 / pump_nm + 1.0 / signal_nm);
}

double photon_number(double power_w, double width_ps, double wavelength_nm) {
  return power_w * (width_ps * 1e-12) * (wavelength_nm * 1e-9) / kPlanckTimesC;
}

double photon_energy(double wavelength_nm) { return kPlanckTimesC / (wavelength_nm * 1e-9); }

double db_to_transmission(double loss_db) {
  if (std::isinf(loss_db) && loss_db > 0) return 0.0;
  return std::pow(10.0, -loss_db / 10.0);
}

OpticalPulse::OpticalPulse(PulseKind kind, double wavelength_nm, double peak_power_w,
                           double width_ps, double arrival_ps, double phase_rad,
                           double mean_photons)
    : kind_(kind),
      wavelength_nm_(wavelength_nm),
      peak_power_w_(peak_power_w),
      width_ps_(width_ps),
      arrival_ps_(arrival_ps),
      phase_rad_(normalize_phase(phase_rad)),
      mean_photons_(mean_photons) {
  if (!(wavelength_nm > 0.0)) throw std::invalid_argument("OpticalPulse: wavelength must be > 0");
  if (!(width_ps > 0.0)) throw std::invalid_argument("OpticalPulse: width must be > 0");
  if (peak_power_w < 0.0 || mean_photons < 0.0) {
    throw std::invalid_argument("OpticalPulse: power and photon number must be >= 0");
  }
}

OpticalPulse OpticalPulse::quantum(double wavelength_nm, double mean_photons, double width_ps,
                                   double arrival_ps, double phase_rad) {
  return from_photons(PulseKind::quantum, wavelength_nm, mean_photons, width_ps, arrival_ps,
                      phase_rad);
}

OpticalPulse OpticalPulse::classical(double wavelength_nm, double peak_power_w, double width_ps,
                                     double arrival_ps, double phase_rad) {
  return {PulseKind::classical, wavelength_nm,       peak_power_w,
          width_ps,             arrival_ps,          phase_rad,
          photon_number(peak_power_w, width_ps, wavelength_nm)};
}

OpticalPulse OpticalPulse::from_photons(PulseKind kind, double wavelength_nm, double mean_photons,
                                        double width_ps, double arrival_ps, double phase_rad) {
  const double power = mean_photons * photon_energy(wavelength_nm) / (width_ps * 1e-12);
  return {kind, wavelength_nm, power, width_ps, arrival_ps, phase_rad, mean_photons};
}

double OpticalPulse::energy_j() const { return mean_photons_ * photon_energy(wavelength_nm_); }

OpticalPulse OpticalPulse::attenuated(double transmission) const {
  return with_photons(mean_photons_ * transmission);
}

OpticalPulse OpticalPulse::with_photons(double mean_photons) const {
  const double power = mean_photons * photon_energy(wavelength_nm_) / (width_ps_ * 1e-12);
  return {kind_, wavelength_nm_, power, width_ps_, arrival_ps_, phase_rad_, mean_photons};
}

OpticalPulse OpticalPulse::delayed(double offset_ps) const {
  OpticalPulse out = *this;
  out.arrival_ps_ += offset_ps;
  return out;
}

OpticalPulse OpticalPulse::with_phase(double phase_rad) const {
  OpticalPulse out = *this;
  out.phase_rad_ = normalize_phase(phase_rad);
  return out;
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::short_pass: return "short-pass";
    case FilterKind::band_pass: return "band-pass";
    case FilterKind::dichroic_port: return "dichroic-port";
    case FilterKind::waveguide_transparency: return "waveguide-transparency";
    case FilterKind::coiled_fiber: return "coiled-fiber";
  }
  return "band-pass";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "short-pass") return FilterKind::short_pass;
  if (name == "band-pass") return FilterKind::band_pass;
  if (name == "dichroic-port") return FilterKind::dichroic_port;
  if (name == "waveguide-transparency") return FilterKind::waveguide_transparency;
  if (name == "coiled-fiber") return FilterKind::coiled_fiber;
  throw std::invalid_argument("unknown filter kind '" + name + "'");
}

double FilterElement::attenuation_db(double wavelength_nm) const {
  const double outside = std::max({passband.lo_nm - wavelength_nm, wavelength_nm - passband.hi_nm, 0.0});
  if (outside == 0.0) return insertion_loss_db;
  if (outside >= edge_width_nm) return stopband_attenuation_db;
  return insertion_loss_db + (stopband_attenuation_db - insertion_loss_db) * outside / edge_width_nm;
}

void FilterElement::validate() const {
  if (insertion_loss_db < 0.0) throw std::invalid_argument("filter insertion_loss_db must be >= 0");
  if (stopband_attenuation_db < insertion_loss_db) {
    throw std::invalid_argument("filter stopband_attenuation_db must be >= insertion_loss_db");
  }
  if (!(edge_width_nm > 0.0)) throw std::invalid_argument("filter edge_width_nm must be > 0");
  if (!(passband.hi_nm >= passband.lo_nm)) throw std::invalid_argument("filter passband is inverted");
}

namespace {

FilterElement make(FilterKind kind, Band band, double il, double sb, double edge, std::string label) {
  FilterElement e{kind, band, il, sb, edge, std::move(label)};
  e.validate();
  return e;
}

}  // namespace

FilterElement short_pass(double cutoff_nm, double insertion_loss_db, double stopband_db,
                         double edge_width_nm, std::string label) {
  return make(FilterKind::short_pass, {0.0, cutoff_nm - edge_width_nm}, insertion_loss_db,
              stopband_db, edge_width_nm, std::move(label));
}

FilterElement band_pass(double center_nm, double width_nm, double insertion_loss_db,
                        double stopband_db, double edge_width_nm, std::string label) {
  return make(FilterKind::band_pass, {center_nm - 0.5 * width_nm, center_nm + 0.5 * width_nm},
              insertion_loss_db, stopband_db, edge_width_nm, std::move(label));
}

FilterElement dichroic_port(Band passband, double insertion_loss_db, double stopband_db,
                            double edge_width_nm, std::string label) {
  return make(FilterKind::dichroic_port, passband, insertion_loss_db, stopband_db, edge_width_nm,
              std::move(label));
}

FilterElement coiled_fiber(double cutoff_nm, double insertion_loss_db, double stopband_db,
                           double edge_width_nm) {
  return make(FilterKind::coiled_fiber, {0.0, cutoff_nm - edge_width_nm}, insertion_loss_db,
              stopband_db, edge_width_nm, "coiled-fiber");
}

FilterElement waveguide_transparency(double cutoff_nm, double stopband_db, double edge_width_nm) {
  return make(FilterKind::waveguide_transparency,
              {cutoff_nm + edge_width_nm, std::numeric_limits<double>::max()}, 0.0, stopband_db,
              edge_width_nm, "waveguide");
}

double stack_attenuation(const FilterStack& stack, double wavelength_nm) {
  if (!(wavelength_nm > kModelMinNm && wavelength_nm < kModelMaxNm)) {
    throw std::domain_error("stack_attenuation: wavelength outside modeled range (200, 3000) nm");
  }
  double total = 0.0;
  for (const auto& e : stack.elements) total += e.attenuation_db(wavelength_nm);
  return total;
}

double stack_transmission(const FilterStack& stack, double wavelength_nm) {
  return db_to_transmission(stack_attenuation(stack, wavelength_nm));
}

FilterStack concatenate(const FilterStack& a, const FilterStack& b) {
  FilterStack out = a;
  out.elements.insert(out.elements.end(), b.elements.begin(), b.elements.end());
  return out;
}

std::vector<double> wavelength_grid(double start_nm, double stop_nm, double step_nm) {
  if (!(step_nm > 0.0) || stop_nm < start_nm) throw std::invalid_argument("invalid wavelength grid");
  const auto n = static_cast<std::size_t>(std::floor((stop_nm - start_nm) / step_nm + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = start_nm + static_cast<double>(i) * step_nm;
  return grid;
}

std::vector<LwiSample> lwi_sweep(const FilterStack& pre, const FilterStack& post,
                                 std::span<const double> grid_nm) {
  std::vector<LwiSample> out;
  out.reserve(grid_nm.size());
  for (double nm : grid_nm) {
    out.push_back({nm, stack_attenuation(pre, nm) + stack_attenuation(post, nm)});
  }
  return out;
}

std::vector<LwiSample> check_lwi(const FilterStack& pre, const FilterStack& post,
                                 std::span<const double> grid_nm, const LwiExclusions& exclusions,
                                 double threshold_db) {
  std::vector<LwiSample> violations;
  for (const auto& s : lwi_sweep(pre, post, grid_nm)) {
    if (exclusions.excludes(s.wavelength_nm)) continue;
    if (s.attenuation_db < threshold_db) violations.push_back(s);
  }
  return violations;
}

std::string lwi_csv(std::span<const LwiSample> samples) {
  std::string out = "wavelength_nm,attenuation_db\n";
  char line[64];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof line, "%.6g,%.6f\n", s.wavelength_nm, s.attenuation_db);
    out += line;
  }
  return out;
}

namespace {
constexpr double kSignalBpfEdgeNm = 2.0;
constexpr double kSumBpfEdgeNm = 1.0;
}  // namespace

LwiExclusions ReferenceBands::exclusions() const {
  const double half_sig = 0.5 * signal_bandwidth_nm + kSignalBpfEdgeNm;
  const double half_sum = 0.5 * sum_bandwidth_nm + kSumBpfEdgeNm;
  const double sum = sum_nm();
  return {{signal_nm - half_sig, signal_nm + half_sig}, {sum - half_sum, sum + half_sum}};
}

FilterStack reference_pre_stack(const ReferenceBands& bands) {
  FilterStack s;
  s.location = StackLocation::pre_waveguide;
  s.elements = {
      coiled_fiber(),
      coiled_fiber(),
      dichroic_port({1450.0, 1650.0}, 0.3, 20.0, 20.0, "DM_in"),
      band_pass(bands.signal_nm, bands.signal_bandwidth_nm, 1.0, 30.0, kSignalBpfEdgeNm, "BPF_sig"),
  };
  return s;
}

FilterStack reference_post_stack(const ReferenceBands& bands) {
  FilterStack s;
  s.location = StackLocation::post_waveguide;
  s.elements = {
      waveguide_transparency(),
      dichroic_port({700.0, 1000.0}, 0.3, 20.0, 20.0, "DM_out"),
      short_pass(1000.0, 0.2, 50.0, 20.0, "SPF_sig"),
      band_pass(bands.sum_nm(), bands.sum_bandwidth_nm, 1.0, 40.0, kSumBpfEdgeNm, "BPF_sum"),
  };
  return s;
}

}  // namespace ucp::photonics
