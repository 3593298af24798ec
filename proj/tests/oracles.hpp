#pragma once

// Independent reference computations used to check the library. These take a
// different route to each quantity (frequencies instead of wavelengths,
// complex fields instead of the closed-form interference split, brute-force
// sums instead of library distributions) so a shared mistake is unlikely.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace oracle {

inline constexpr long double kH = 6.62607015e-34L;
inline constexpr long double kC = 299792458.0L;

/// Sum wavelength via optical frequency addition.
inline double sum_wavelength_nm(double pump_nm, double signal_nm) {
  const long double nu = kC / (pump_nm * 1e-9L) + kC / (signal_nm * 1e-9L);
  return static_cast<double>(kC / nu * 1e9L);
}

/// Photons in a rectangular pulse: energy over h*nu.
inline double photons(double power_w, double width_ps, double wavelength_nm) {
  const long double energy = static_cast<long double>(power_w) * width_ps * 1e-12L;
  const long double nu = kC / (wavelength_nm * 1e-9L);
  return static_cast<double>(energy / (kH * nu));
}

/// Signal peak whose photon count equals zeta * (pump photons), by bisection
/// on the photon bookkeeping rather than the closed form.
inline double depletion_threshold_by_bisection(double zeta, double pump_w, double pump_ps, double pump_nm,
                                               double sig_ps, double sig_nm) {
  const double target = zeta * photons(pump_w, pump_ps, pump_nm);
  double lo = 0.0;
  double hi = 10.0 * pump_w + 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (photons(mid, sig_ps, sig_nm) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Middle-bin detector powers from superposing the two delayed fields with a
/// 50:50 recombiner: |(E_early +/- E_late)/2|^2 (times 2 for the two arms feeding
/// the middle bin), for slot photon numbers a and b.
inline std::pair<double, double> middle_bin_fields(double a, double b, double dphi) {
  const std::complex<double> e = std::sqrt(a);
  const std::complex<double> l = std::sqrt(b) * std::polar(1.0, dphi);
  const double d0 = std::norm((e + l) * 0.5);
  const double d1 = std::norm((e - l) * 0.5);
  return {d0, d1};
}

/// P(X = k) for Binomial(n, p) through log-gamma.
inline long double binomial_pmf(std::size_t k, std::size_t n, long double p) {
  if (p <= 0.0L) return k == 0 ? 1.0L : 0.0L;
  if (p >= 1.0L) return k == n ? 1.0L : 0.0L;
  const long double lg = std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
                         std::lgamma(static_cast<long double>(n - k) + 1);
  return std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
}

/// Two-sided p-value by summing every outcome no more likely than k.
inline double binomial_two_sided_brute(std::size_t k, std::size_t n, long double p = 0.5L) {
  const long double pk = binomial_pmf(k, n, p);
  long double total = 0.0L;
  for (std::size_t i = 0; i <= n; ++i) {
    const long double pi = binomial_pmf(i, n, p);
    if (pi <= pk * (1.0L + 1e-9L)) total += pi;
  }
  return static_cast<double>(std::min<long double>(1.0L, total));
}

inline double binomial_upper_brute(std::size_t k, std::size_t n, long double p) {
  long double total = 0.0L;
  for (std::size_t i = k; i <= n; ++i) total += binomial_pmf(i, n, p);
  return static_cast<double>(std::min<long double>(1.0L, total));
}

/// Key rate with all losses summed in dB first.
inline double key_rate_db_route(double rep_hz, double mu, double channel_db, double component_db,
                                double eta_conv, double eta_d) {
  return rep_hz * mu * std::pow(10.0, -(channel_db + component_db) / 10.0) * eta_conv * eta_d * 0.25;
}

// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
