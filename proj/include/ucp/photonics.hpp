#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ucp::photonics {

// Planck constant times the speed of light, in J*m (exact SI values).
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPlanckTimesC = kPlanck * kSpeedOfLight;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.14159265358979323846264338327950;

// Wavelength range over which filter transmission is modeled.
inline constexpr double kModelMinNm = 200.0;
inline constexpr double kModelMaxNm = 3000.0;

/// Wraps a phase into [0, 2*pi).
double normalize_phase(double phase_rad);

/// Sum-frequency wavelength (1/pump + 1/signal)^-1. Throws std::domain_error
/// on non-positive inputs.
double sum_wavelength(double pump_nm, double signal_nm);

/// Photon number of a rectangular pulse: N = P * tau * lambda / (h c).
double photon_number(double power_w, double width_ps, double wavelength_nm);

/// Energy of a single photon at the given wavelength, in J.
double photon_energy(double wavelength_nm);

/// Converts a loss in dB to a linear power transmission.
double db_to_transmission(double loss_db);

enum class PulseKind { quantum, classical };

// A rectangular optical pulse within one protocol cycle. Quantum pulses are
// tracked by mean photon number, classical ones by peak power; the other
// quantity is always derived so both views agree.
class OpticalPulse {
 public:
  static OpticalPulse quantum(double wavelength_nm, double mean_photons, double width_ps,
                              double arrival_ps = 0.0, double phase_rad = 0.0);
  static OpticalPulse classical(double wavelength_nm, double peak_power_w, double width_ps,
                                double arrival_ps = 0.0, double phase_rad = 0.0);
  static OpticalPulse from_photons(PulseKind kind, double wavelength_nm, double mean_photons,
                                   double width_ps, double arrival_ps = 0.0,
                                   double phase_rad = 0.0);

  PulseKind kind() const { return kind_; }
  bool is_quantum() const { return kind_ == PulseKind::quantum; }
  double wavelength_nm() const { return wavelength_nm_; }
  double peak_power_w() const { return peak_power_w_; }
  double width_ps() const { return width_ps_; }
  double arrival_ps() const { return arrival_ps_; }
  double end_ps() const { return arrival_ps_ + width_ps_; }
  double center_ps() const { return arrival_ps_ + 0.5 * width_ps_; }
  double phase_rad() const { return phase_rad_; }
  double mean_photons() const { return mean_photons_; }
  double energy_j() const;

  /// Same pulse with photon number (and power) scaled by a linear transmission.
  OpticalPulse attenuated(double transmission) const;
  OpticalPulse with_photons(double mean_photons) const;
  OpticalPulse delayed(double offset_ps) const;
  OpticalPulse with_phase(double phase_rad) const;

 private:
  OpticalPulse(PulseKind kind, double wavelength_nm, double peak_power_w, double width_ps,
               double arrival_ps, double phase_rad, double mean_photons);

  PulseKind kind_;
  double wavelength_nm_;
  double peak_power_w_;
  double width_ps_;
  double arrival_ps_;
  double phase_rad_;
  double mean_photons_;
};

struct Band {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
  bool contains(double nm) const { return nm >= lo_nm && nm <= hi_nm; }
};

enum class FilterKind { short_pass, band_pass, dichroic_port, waveguide_transparency, coiled_fiber };

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

// One wavelength-dependent element. Attenuation is flat inside the passband,
// flat at the stopband value beyond one edge width from it, and linear in dB
// across the edge.
struct FilterElement {
  FilterKind kind = FilterKind::band_pass;
  Band passband;
  double insertion_loss_db = 0.0;
  double stopband_attenuation_db = 0.0;
  double edge_width_nm = 20.0;
  std::string label;

  /// Attenuation in dB (positive number) at the given wavelength.
  double attenuation_db(double wavelength_nm) const;

  /// Throws std::invalid_argument if the element violates its invariants.
  void validate() const;
};

FilterElement short_pass(double cutoff_nm, double insertion_loss_db, double stopband_db,
                         double edge_width_nm = 20.0, std::string label = {});
FilterElement band_pass(double center_nm, double width_nm, double insertion_loss_db,
                        double stopband_db, double edge_width_nm = 20.0, std::string label = {});
FilterElement dichroic_port(Band passband, double insertion_loss_db, double stopband_db,
                            double edge_width_nm = 20.0, std::string label = {});
/// Coiled-fiber short-pass unit: full stopband reached at `cutoff_nm`.
FilterElement coiled_fiber(double cutoff_nm = 1800.0, double insertion_loss_db = 0.1,
                           double stopband_db = 40.0, double edge_width_nm = 20.0);
/// Absorption edge of the waveguide: opaque below `cutoff_nm`.
FilterElement waveguide_transparency(double cutoff_nm = 350.0, double stopband_db = 60.0,
                                     double edge_width_nm = 20.0);

enum class StackLocation { pre_waveguide, post_waveguide, pump_path };

struct FilterStack {
  std::vector<FilterElement> elements;
  StackLocation location = StackLocation::pre_waveguide;
};

/// Total attenuation in dB; throws std::domain_error outside (200, 3000) nm.
double stack_attenuation(const FilterStack& stack, double wavelength_nm);

/// Linear transmission of the stack at a wavelength.
double stack_transmission(const FilterStack& stack, double wavelength_nm);

FilterStack concatenate(const FilterStack& a, const FilterStack& b);

/// Wavelength grid with inclusive endpoints.
std::vector<double> wavelength_grid(double start_nm, double stop_nm, double step_nm = 1.0);

struct LwiSample {
  double wavelength_nm = 0.0;
  double attenuation_db = 0.0;
};

// Bands where light is meant to pass: the signal band ahead of the waveguide
// and the sum band after it.
struct LwiExclusions {
  Band signal;
  Band sum;
  bool excludes(double nm) const { return signal.contains(nm) || sum.contains(nm); }
};

inline constexpr double kLwiThresholdDb = 60.0;

/// Linear detector-path attenuation (pre + post) at each grid point.
std::vector<LwiSample> lwi_sweep(const FilterStack& pre, const FilterStack& post,
                                 std::span<const double> grid_nm);

/// Grid points where the detector path attenuates less than the threshold,
/// skipping the excluded passbands. Empty result means the isolation holds.
std::vector<LwiSample> check_lwi(const FilterStack& pre, const FilterStack& post,
                                 std::span<const double> grid_nm, const LwiExclusions& exclusions,
                                 double threshold_db = kLwiThresholdDb);

/// Two-column CSV (wavelength_nm,attenuation_db).
std::string lwi_csv(std::span<const LwiSample> samples);

// Band layout of the reference receiver.
struct ReferenceBands {
  double signal_nm = 1530.0;
  double pump_nm = 1810.0;
  double signal_bandwidth_nm = 15.0;
  double sum_bandwidth_nm = 3.5;

  double sum_nm() const { return sum_wavelength(pump_nm, signal_nm); }
  LwiExclusions exclusions() const;
};

/// Coiled fibers, input dichroic and signal band-pass ahead of the waveguide.
FilterStack reference_pre_stack(const ReferenceBands& bands);
/// Waveguide absorption edge, output dichroic, short-pass and sum band-pass.
FilterStack reference_post_stack(const ReferenceBands& bands);

}  // namespace ucp::photonics
