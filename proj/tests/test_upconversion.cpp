#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ucp/upconversion.hpp"

using namespace ucp::upconversion;
using ucp::photonics::kPi;
using ucp::photonics::OpticalPulse;

namespace {

WaveguideModel lossless(double eta_max = 0.95) {
  WaveguideModel wg;
  wg.eta_max = eta_max;
  wg.propagation_loss_db = wg.in_coupling_db = wg.out_coupling_db = 0.0;
  return wg;
}

}  // namespace

TEST_CASE("conversion efficiency curve") {
  const WaveguideModel wg;
  CHECK(conversion_efficiency(0.0, wg) == 0.0);
  CHECK(conversion_efficiency(0.1, wg) == doctest::Approx(0.95));
  CHECK(conversion_efficiency(0.025, wg) == doctest::Approx(0.95 * 0.5).epsilon(1e-12));  // sin^2(pi/4)
  CHECK(conversion_efficiency(1.0, wg) == 0.95);
  double prev = 0.0;
  for (double p = 0.0; p <= 0.12; p += 0.001) {
    const double e = conversion_efficiency(p, wg);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("pedestal from extinction ratio") {
  PumpConfig cfg;
  CHECK(cfg.pedestal_w() == doctest::Approx(100e-6));
  cfg.extinction_ratio_db = kInfiniteExtinction;
  CHECK(cfg.pedestal_w() == 0.0);
}

TEST_CASE("gated and flux bounds") {
  PumpConfig cfg;
  CHECK(gated_bound_on_sum_power(cfg, 1530.0) == doctest::Approx(184.53e-6).epsilon(1e-4));
  CHECK(flux_bound_on_sum_power(cfg, 1530.0) == doctest::Approx(218.30e-6).epsilon(1e-4));
  cfg.extinction_ratio_db = 20.0;
  CHECK(gated_bound_on_sum_power(cfg, 1530.0) == doctest::Approx(1.8453e-3).epsilon(1e-4));
  cfg.extinction_ratio_db = kInfiniteExtinction;
  CHECK(gated_bound_on_sum_power(cfg, 1530.0) == 0.0);
}

TEST_CASE("gate width") {
  PumpConfig cfg;
  CHECK(gate_width_ps(cfg) == cfg.width_ps);
  cfg.extinction_ratio_db = 10.0;
  CHECK(gate_width_ps(cfg) == cfg.period_ps());
}

TEST_CASE("pump config validation") {
  PumpConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.width_ps = 400.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PumpConfig{};
  cfg.rep_rate_hz = 2e9;  // pair plus AMZI delay no longer fits in 500 ps
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("full overlap converts eta of the signal") {
  const auto wg = lossless();
  const auto pump = OpticalPulse::classical(1810.0, 0.1, 110.0, 0.0);
  const auto sig = OpticalPulse::quantum(1530.0, 0.5, 90.0, 10.0, 0.3);
  const auto r = convert_in_waveguide(sig, pump, wg, 100e-6);
  CHECK(r.overlap_fraction == 1.0);
  CHECK(r.converted_photons == doctest::Approx(0.5 * 0.95));
  CHECK(r.converted_from_pedestal == 0.0);
  CHECK(r.sfg_pulse.wavelength_nm() == doctest::Approx(829.1317365));
  CHECK(r.sfg_pulse.phase_rad() == doctest::Approx(0.3));
}

TEST_CASE("saturation clips at the pump photon flux") {
  const auto wg = lossless(1.0);
  const auto pump = OpticalPulse::classical(1810.0, 0.1, 100.0, 0.0);
  const auto sig = OpticalPulse::classical(1530.0, 1.0, 80.0, 10.0);
  const auto r = convert_in_waveguide(sig, pump, wg);
  const double pump_in_window = oracle::photons(0.1, 80.0, 1810.0);
  CHECK(r.converted_photons == doctest::Approx(pump_in_window).epsilon(1e-12));
  CHECK(r.pump_depletion() == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("gating with infinite extinction") {
  const auto wg = lossless();
  const auto pump = OpticalPulse::classical(1810.0, 0.1, 110.0, 0.0);
  const auto outside = OpticalPulse::classical(1530.0, 1e-3, 90.0, 200.0);
  const auto r = convert_in_waveguide(outside, pump, wg, 0.0);
  CHECK(r.converted_photons == 0.0);
  CHECK(r.residual_signal.mean_photons() == doctest::Approx(outside.mean_photons()));
}

TEST_CASE("outside the phase-matching band nothing converts") {
  const auto wg = lossless();
  const auto pump = OpticalPulse::classical(1810.0, 0.1, 110.0, 0.0);
  const auto sig = OpticalPulse::classical(1540.0, 1e-3, 90.0, 10.0);
  CHECK(convert_in_waveguide(sig, pump, wg, 1e-4).converted_photons == 0.0);
}

TEST_CASE("upconvert applies in-coupling to signal, pump and pedestal") {
  const WaveguideModel wg;
  const auto pump = OpticalPulse::classical(1810.0, 0.1, 110.0, 0.0);
  const auto sig = OpticalPulse::quantum(1530.0, 1.0, 90.0, 10.0);
  const auto r = upconvert(sig, pump, wg, 1e-4);
  const double t_in = std::pow(10.0, -0.02);
  CHECK(r.incident_signal_photons == doctest::Approx(t_in));
  CHECK(r.converted_photons == doctest::Approx(t_in * conversion_efficiency(0.1 * t_in, wg)));
  CHECK(couple_out(r.sfg_pulse, wg).mean_photons() ==
        doctest::Approx(r.converted_photons * std::pow(10.0, -0.01)));
}

TEST_CASE("property: flux limit, energy bookkeeping, phase additivity, monotonicity") {
  oracle::Gen g(2024);
  for (int i = 0; i < 2000; ++i) {
    WaveguideModel wg = lossless(g.uniform(0.0, 1.0));
    wg.p_full_w = g.log_uniform(1e-3, 1.0);
    const double pump_w = g.log_uniform(1e-4, 1.0);
    const double pump_ps = g.uniform(50.0, 200.0);
    const auto pump = OpticalPulse::classical(1810.0, pump_w, pump_ps, g.uniform(-50.0, 50.0), g.uniform(0.0, 7.0));
    const auto sig = OpticalPulse::classical(1530.0, g.log_uniform(1e-9, 10.0), g.uniform(20.0, 200.0),
                                             g.uniform(-150.0, 150.0), g.uniform(0.0, 7.0));
    const double ped = g.coin() ? 0.0 : pump_w * g.log_uniform(1e-6, 1e-1);
    const auto r = convert_in_waveguide(sig, pump, wg, ped);

    const double overlap = std::max(0.0, std::min(sig.end_ps(), pump.end_ps()) - std::max(sig.arrival_ps(), pump.arrival_ps()));
    const double pulse_avail = oracle::photons(pump_w, overlap, 1810.0);
    const double ped_avail = oracle::photons(ped, std::max(0.0, sig.width_ps() - overlap), 1810.0);
    CHECK(r.converted_from_pulse <= pulse_avail * (1.0 + 1e-12));
    CHECK(r.converted_from_pedestal <= ped_avail * (1.0 + 1e-12) + 1e-300);
    CHECK(r.converted_photons <= r.incident_signal_photons * (1.0 + 1e-12));

    // Energy * wavelength is photon number * hc for each of the three fields.
    const double hc = ucp::photonics::kPlanckTimesC;
    const double scale = std::max(pump.mean_photons(), sig.mean_photons()) * hc;
    const double pump_loss = (pump.mean_photons() - r.depleted_pump.mean_photons() + r.converted_from_pedestal) * hc;
    const double sig_loss = (sig.mean_photons() - r.residual_signal.mean_photons()) * hc;
    const double sfg = r.sfg_pulse.energy_j() * r.sfg_pulse.wavelength_nm() * 1e-9;
    const double nc = r.converted_photons * hc;
    CHECK(std::abs(pump_loss - nc) <= 1e-12 * scale);
    CHECK(std::abs(sig_loss - nc) <= 1e-12 * scale);
    CHECK(std::abs(sfg - nc) <= 1e-12 * std::max(nc, 1e-300) + 1e-12 * scale);

    if (r.converted_photons > 0.0) {
      const double d = ucp::photonics::normalize_phase(r.sfg_pulse.phase_rad() - sig.phase_rad() - pump.phase_rad());
      CHECK(std::min(d, ucp::photonics::kTwoPi - d) < 1e-9);
    }

    const auto brighter = convert_in_waveguide(sig.attenuated(g.uniform(1.0, 5.0)), pump, wg, ped);
    CHECK(brighter.converted_photons >= r.converted_photons);
  }
}

TEST_CASE("property: conversion grows with overlap") {
  const auto wg = lossless();
  const auto pump = OpticalPulse::classical(1810.0, 0.05, 110.0, 0.0);
  double prev = -1.0;
  for (double shift = 200.0; shift >= 10.0; shift -= 2.0) {
    const auto r = convert_in_waveguide(OpticalPulse::quantum(1530.0, 1.0, 90.0, shift), pump, wg, 1e-5);
    CHECK(r.converted_photons >= prev);
    prev = r.converted_photons;
  }
}

TEST_CASE("pump pulse train") {
  PumpConfig cfg;
  cfg.single_pulse_prob = 0.0;
  ucp::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto t = pump_pulse_train(cfg, rng);
    REQUIRE(t.slots[0].has_value());
    REQUIRE(t.slots[1].has_value());
    // Late minus early carries -phi_B.
    const double d = ucp::photonics::normalize_phase(t.slots[1]->phase_rad() - t.slots[0]->phase_rad() +
                                                     t.basis_phase_rad);
    CHECK(std::min(d, ucp::photonics::kTwoPi - d) < 1e-12);
    CHECK(std::abs(t.slots[1]->arrival_ps() - t.slots[0]->arrival_ps() - 350.0) < 30.0);
  }

  cfg.single_pulse_prob = 1.0;
  const auto t = pump_pulse_train(cfg, rng);
  CHECK(t.single_pulse);
  CHECK_FALSE(t.slots[0].has_value());
  CHECK(t.slots[1].has_value());
  CHECK(t.pulses().size() == 1);

  cfg.phase_on_late_pulse = false;
  const auto early = pump_pulse_train(cfg, rng);
  CHECK(early.slots[0].has_value());
  CHECK_FALSE(early.slots[1].has_value());
  CHECK(early.slots[0]->phase_rad() == doctest::Approx(ucp::photonics::normalize_phase(early.basis_phase_rad)));
}

TEST_CASE("pump train is reproducible from the same stream") {
  PumpConfig cfg;
  auto a = ucp::cycle_rng(7, 123);
  auto b = ucp::cycle_rng(7, 123);
  const auto ta = pump_pulse_train(cfg, a);
  const auto tb = pump_pulse_train(cfg, b);
  CHECK(ta.basis_index == tb.basis_index);
  CHECK(ta.slots[1]->arrival_ps() == tb.slots[1]->arrival_ps());
}
