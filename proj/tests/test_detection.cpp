#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ucp/detection.hpp"

using namespace ucp::detection;
using ucp::photonics::kPi;

TEST_CASE("Geiger click probability") {
  const DetectorModel det;
  CHECK(geiger_click_probability(1.0, det, 110.0) == doctest::Approx(0.5506710).epsilon(1e-6));
  CHECK(geiger_click_probability(0.0, det, 110.0) == doctest::Approx(100.0 * 110e-12).epsilon(1e-6));
  DetectorModel quiet = det;
  quiet.dark_cps = 0.0;
  CHECK(geiger_click_probability(0.0, quiet, 110.0) == 0.0);
}

TEST_CASE("effective dead time takes the longer interval") {
  DetectorModel det;
  CHECK(det.effective_dead_time_ps() == doctest::Approx(25000.0));
  det.dead_time_ns = 10.0;
  CHECK(det.effective_dead_time_ps() == doctest::Approx(25000.0));  // 40 Mcps saturation
  det.max_rate_cps = 1e9;
  CHECK(det.effective_dead_time_ps() == doctest::Approx(10000.0));
}

TEST_CASE("detector validation needs damage above click threshold") {
  DetectorModel det;
  CHECK_NOTHROW(det.validate());
  det.damage_threshold_w = 100e-6;
  CHECK_THROWS_AS(det.validate(), std::invalid_argument);
}

TEST_CASE("AMZI split in the matched and orthogonal cases") {
  const double a = 0.1;
  auto t = amzi_bins({a, 0.0, 90.0}, {a, 0.0, 90.0}, false);
  CHECK(t[Bin::early].d0_photons == doctest::Approx(0.05));
  CHECK(t[Bin::early].d1_photons == 0.0);
  CHECK(t[Bin::late].d1_photons == doctest::Approx(0.05));
  CHECK(t[Bin::middle].d0_photons == doctest::Approx(0.1));
  CHECK(t[Bin::middle].d1_photons == doctest::Approx(0.0).scale(1.0));

  t = amzi_bins({a, 0.0, 90.0}, {a, kPi, 90.0}, false);
  CHECK(t[Bin::middle].d0_photons == doctest::Approx(0.0).scale(1.0));
  CHECK(t[Bin::middle].d1_photons == doctest::Approx(0.1));

  t = amzi_bins({a, 0.0, 90.0}, {a, kPi / 2.0, 90.0}, false);
  CHECK(t[Bin::middle].d0_photons == doctest::Approx(0.05));
  CHECK(t[Bin::middle].d1_photons == doctest::Approx(0.05));
}

TEST_CASE("property: middle bin matches superposed fields and conserves photons") {
  oracle::Gen g(11);
  for (int i = 0; i < 5000; ++i) {
    const double a = g.log_uniform(1e-6, 1e6);
    const double b = g.log_uniform(1e-6, 1e6);
    const double pe = g.uniform(-10.0, 10.0);
    const double pl = g.uniform(-10.0, 10.0);
    const auto t = amzi_bins({a, pe, 90.0}, {b, pl, 90.0}, false);
    const auto [d0, d1] = oracle::middle_bin_fields(a, b, pl - pe);
    const double scale = a + b;
    CHECK(std::abs(t[Bin::middle].d0_photons - d0) <= 1e-12 * scale);
    CHECK(std::abs(t[Bin::middle].d1_photons - d1) <= 1e-12 * scale);
    CHECK(std::abs(t.total() - scale) <= 1e-12 * scale);
    CHECK(t[Bin::middle].d0_photons >= 0.0);
    CHECK(t[Bin::middle].d1_photons >= 0.0);

    const auto s = amzi_bins({a, pe, 90.0}, {b, pl, 90.0}, true);
    for (auto bin : {Bin::early, Bin::middle, Bin::late}) CHECK(s[bin].d0_photons == s[bin].d1_photons);
    CHECK(std::abs(s.total() - scale) <= 1e-12 * scale);
  }
}

TEST_CASE("pulse-pair form checks the delay") {
  using ucp::photonics::OpticalPulse;
  const auto e = OpticalPulse::quantum(829.13, 0.1, 90.0, 10.0);
  const auto l = OpticalPulse::quantum(829.13, 0.1, 90.0, 360.0, kPi);
  const auto t = amzi_bin_distribution(e, l, 350.0, false);
  CHECK(t[Bin::middle].d1_photons == doctest::Approx(0.1));
  CHECK_THROWS_AS(amzi_bin_distribution(e, l.delayed(100.0), 350.0, false), std::domain_error);
}

TEST_CASE("blinding and damage regimes") {
  const DetectorModel det;
  ucp::Rng rng(3);
  SpadIncident in;
  in.continuous_power_w = 20e-6;
  in.mean_photons = 1e6;  // bright but below the click threshold
  in.peak_power_w = 150e-6;
  for (int i = 0; i < 100; ++i) {
    const auto r = spad_response(in, det, rng);
    CHECK(r.blinded);
    CHECK_FALSE(r.click);
  }
  in.peak_power_w = 250e-6;
  for (int i = 0; i < 100; ++i) CHECK(spad_response(in, det, rng).click);

  in.peak_power_w = 0.2;
  const auto dmg = spad_response(in, det, rng);
  CHECK(dmg.damage);
  CHECK_FALSE(dmg.click);

  SpadState state;
  CHECK_FALSE(state.admit(true, true, 0.0, det));
  CHECK(state.damaged);
  CHECK_FALSE(state.admit(true, false, 1e9, det));
}

TEST_CASE("spad_response consumes one uniform in every regime") {
  const DetectorModel det;
  for (double cw : {0.0, 20e-6, 1.0}) {
    ucp::Rng a(9), b(9);
    SpadIncident in;
    in.continuous_power_w = cw;
    (void)spad_response(in, det, a);
    (void)ucp::uniform01(b);
    CHECK(a() == b());
  }
}

TEST_CASE("property: dead time caps the registered click rate") {
  oracle::Gen g(77);
  for (int trial = 0; trial < 20; ++trial) {
    DetectorModel det;
    det.dead_time_ns = g.uniform(1.0, 100.0);
    det.max_rate_cps = g.log_uniform(1e6, 1e9);
    SpadState state;
    ucp::Rng rng(static_cast<std::uint64_t>(trial));
    SpadIncident in;
    in.mean_photons = g.log_uniform(0.1, 100.0);
    const double period = g.uniform(100.0, 5000.0);
    const int n = 20000;
    std::uint64_t clicks = 0;
    double last = -1e300;
    for (int i = 0; i < n; ++i) {
      const double t = i * period;
      if (spad_detect(in, det, state, t, rng).click) {
        CHECK(t - last >= det.effective_dead_time_ps());
        last = t;
        ++clicks;
      }
    }
    const double duration_s = n * period * 1e-12;
    const double cap = std::min(1e12 / det.effective_dead_time_ps(), 1e12 / period);
    CHECK(static_cast<double>(clicks) <= cap * duration_s + 1.0);
  }
}

TEST_CASE("single-pulse cycles are equiprobable at the detectors") {
  // Uniform over both detectors regardless of phase, checked by click counts.
  DetectorModel det;
  det.dark_cps = 0.0;
  ucp::Rng rng(21);
  int d0 = 0, d1 = 0;
  for (int i = 0; i < 200000; ++i) {
    const auto t = amzi_bins({0.0, 0.0, 110.0}, {0.2, 1.3 * i, 110.0}, true);
    SpadIncident a{t[Bin::middle].d0_photons, 0.0, 0.0, 110.0};
    SpadIncident b{t[Bin::middle].d1_photons, 0.0, 0.0, 110.0};
    d0 += spad_response(a, det, rng).click;
    d1 += spad_response(b, det, rng).click;
  }
  const double n = d0 + d1;
  // 5 sigma on a fair split.
  CHECK(std::abs(d0 - 0.5 * n) < 5.0 * std::sqrt(0.25 * n));
}
