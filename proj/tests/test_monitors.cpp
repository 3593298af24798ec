#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ucp/monitors.hpp"

using namespace ucp::monitors;
using ucp::AlarmKind;
using ucp::CycleRecord;

TEST_CASE("depletion reading") {
  CHECK(depletion(1.0, 0.999) == doctest::Approx(1e-3));
  CHECK(depletion(2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(depletion(0.0, 1.0), std::domain_error);
}

TEST_CASE("property: depletion is scale invariant") {
  oracle::Gen g(4);
  for (int i = 0; i < 1000; ++i) {
    const double ref = g.log_uniform(1e-9, 10.0);
    const double meas = ref * g.uniform(0.0, 2.0);
    const double k = g.log_uniform(1e-6, 1e6);
    CHECK(depletion(k * ref, k * meas) == doctest::Approx(depletion(ref, meas)).epsilon(1e-12));
  }
}

TEST_CASE("minimum detectable peak") {
  CHECK(min_detectable_peak(1e-3, 0.1, 100.0, 1810.0, 80.0, 1530.0) ==
        doctest::Approx(1.47876e-4).epsilon(1e-5));
  const MonitorConfig cfg;
  ucp::upconversion::PumpConfig pump;
  CHECK(min_detectable_peak(cfg, pump, 90.0, 1530.0) ==
        doctest::Approx(min_detectable_peak(1e-3, 0.1, 110.0, 1810.0, 90.0, 1530.0)));
}

TEST_CASE("property: minimum detectable peak agrees with photon bookkeeping") {
  oracle::Gen g(8);
  for (int i = 0; i < 500; ++i) {
    const double zeta = g.log_uniform(1e-5, 1e-1);
    const double pw = g.log_uniform(1e-3, 1.0);
    const double pt = g.uniform(50.0, 200.0);
    const double pnm = g.uniform(1700.0, 1900.0);
    const double st = g.uniform(20.0, pt);
    const double snm = g.uniform(1500.0, 1600.0);
    const double got = min_detectable_peak(zeta, pw, pt, pnm, st, snm);
    CHECK(got == doctest::Approx(oracle::depletion_threshold_by_bisection(zeta, pw, pt, pnm, st, snm))
                     .epsilon(1e-9));
  }
}

TEST_CASE("quantized depletion and signal monitor") {
  const MonitorConfig cfg;
  CHECK(quantize_depletion(0.5e-3, cfg) == 0.0);
  CHECK(quantize_depletion(1e-3, cfg) == 1e-3);
  CHECK_FALSE(signal_monitor(999.0, cfg));
  CHECK(signal_monitor(1000.0, cfg));
}

TEST_CASE("alarm aggregation is cycle ordered") {
  const MonitorConfig cfg;
  std::vector<CycleReadings> r{
      {7, 2e-3, 5000.0, false, false},
      {3, 0.0, 0.0, true, false},
      {5, 0.0, 0.0, false, false},
  };
  const auto alarms = aggregate_alarms(r, cfg);
  REQUIRE(alarms.size() == 3);
  CHECK(alarms[0].cycle_index == 3);
  CHECK(alarms[0].kind == AlarmKind::damage);
  CHECK(alarms[1].kind == AlarmKind::pump_depletion);
  CHECK(alarms[2].kind == AlarmKind::signal_residual);
  const auto csv = alarms_csv(alarms);
  CHECK(csv.rfind("cycle_index,kind,value\n3,damage,1\n7,pump-depletion,", 0) == 0);
}

TEST_CASE("binomial p-values against direct summation") {
  oracle::Gen g(15);
  for (int i = 0; i < 300; ++i) {
    const auto n = static_cast<std::size_t>(g.integer(1, 400));
    const auto k = static_cast<std::size_t>(g.integer(0, static_cast<int>(n)));
    CHECK(binomial_two_sided_half(k, n) == doctest::Approx(oracle::binomial_two_sided_brute(k, n)).epsilon(1e-9));
    const double p = g.log_uniform(1e-4, 0.5);
    const double want = oracle::binomial_upper_brute(k, n, p);
    CHECK(std::abs(binomial_upper_tail(k, n, p) - want) <= 1e-9 * want + 1e-300);
  }
  CHECK(binomial_upper_tail(0, 10, 0.3) == 1.0);
}

namespace {

CycleRecord sample(std::size_t bob_basis, bool d0, bool d1) {
  CycleRecord r;
  r.single_pulse = true;
  r.bob_basis = bob_basis;
  r.n_outcomes = 2;
  r.outcomes[0].bin = ucp::detection::Bin::middle;
  r.outcomes[0].d0_click = d0;
  r.outcomes[0].d1_click = d1;
  r.outcomes[1].bin = ucp::detection::Bin::late;
  return r;
}

}  // namespace

TEST_CASE("NABC flags detector-basis correlation") {
  MonitorConfig cfg;
  cfg.nabc_window = 200;
  std::vector<CycleRecord> recs;
  ucp::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::size_t basis = rng() % 2;
    // Eve's faked states make the firing detector follow Bob's phase.
    const bool hit = i % 10 == 0;
    recs.push_back(sample(basis, hit && basis == 0, hit && basis == 1));
  }
  const auto out = nabc_sample_test(recs, cfg, 1e-6);
  CHECK(out.verdict == NabcVerdict::alarm);
  CHECK(out.correlation == doctest::Approx(1.0));
  CHECK(out.matches == out.single_detector_clicks);
}

TEST_CASE("NABC flags excess double clicks") {
  MonitorConfig cfg;
  cfg.nabc_window = 100;
  std::vector<CycleRecord> recs;
  for (int i = 0; i < 100; ++i) recs.push_back(sample(i % 2, i % 20 == 0, i % 20 == 0));
  const auto out = nabc_sample_test(recs, cfg, 1e-4);
  CHECK(out.double_clicks == 5);
  CHECK(out.double_click_p_value < 1e-6);
  CHECK(out.verdict == NabcVerdict::alarm);
}

TEST_CASE("NABC passes uncorrelated clicks") {
  MonitorConfig cfg;
  cfg.nabc_window = 400;
  std::vector<CycleRecord> recs;
  for (int i = 0; i < 400; ++i) {
    const bool fire = i % 4 == 0;
    const bool which = (i / 4) % 2 == 0;
    recs.push_back(sample(static_cast<std::size_t>((i / 8) % 2), fire && which, fire && !which));
  }
  const auto out = nabc_sample_test(recs, cfg, 0.0);
  CHECK(out.verdict == NabcVerdict::pass);
  CHECK(out.correlation == doctest::Approx(0.0));
}

TEST_CASE("NABC is inconclusive on short or dark windows") {
  MonitorConfig cfg;
  cfg.nabc_window = 50;
  std::vector<CycleRecord> recs(40, sample(0, true, false));
  CHECK(nabc_sample_test(recs, cfg, 0.0).verdict == NabcVerdict::inconclusive);
  std::vector<CycleRecord> dark(60, sample(0, false, false));
  CHECK(nabc_sample_test(dark, cfg, 0.0).verdict == NabcVerdict::inconclusive);
  std::vector<CycleRecord> bad(60, sample(0, true, false));
  bad[3].single_pulse = false;
  CHECK_THROWS_AS(nabc_sample_test(bad, cfg, 0.0), std::invalid_argument);
}

TEST_CASE("monitor config validation") {
  MonitorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.nabc_alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
