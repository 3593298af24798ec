#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "ucp/photonics.hpp"

using namespace ucp::photonics;

TEST_CASE("sum wavelength of the reference bands") {
  CHECK(sum_wavelength(1810.0, 1530.0) == doctest::Approx(829.1317365).epsilon(1e-9));
  // Long-wavelength corner of the band table.
  CHECK(sum_wavelength(1830.0, 1550.0) == doctest::Approx(839.2011834).epsilon(1e-9));
  CHECK_THROWS_AS(sum_wavelength(0.0, 1530.0), std::domain_error);
  CHECK_THROWS_AS(sum_wavelength(1810.0, -1.0), std::domain_error);
}

TEST_CASE("sum wavelength agrees with frequency addition") {
  oracle::Gen g(11);
  for (int i = 0; i < 1000; ++i) {
    const double p = g.uniform(1000.0, 2500.0);
    const double s = g.uniform(1000.0, 2500.0);
    CHECK(sum_wavelength(p, s) == doctest::Approx(oracle::sum_wavelength_nm(p, s)).epsilon(1e-13));
    CHECK(sum_wavelength(p, s) == doctest::Approx(sum_wavelength(s, p)).epsilon(1e-15));
  }
}

TEST_CASE("photon number and pulse views agree") {
  CHECK(photon_number(150e-6, 80.0, 1530.0) == doctest::Approx(92426.38018).epsilon(1e-9));
  CHECK(photon_number(0.0, 80.0, 1530.0) == 0.0);

  oracle::Gen g(12);
  for (int i = 0; i < 500; ++i) {
    const double p = g.log_uniform(1e-9, 1.0);
    const double w = g.uniform(10.0, 500.0);
    const double nm = g.uniform(500.0, 2000.0);
    CHECK(photon_number(p, w, nm) == doctest::Approx(oracle::photons(p, w, nm)).epsilon(1e-12));
    const auto pulse = OpticalPulse::classical(nm, p, w);
    const auto back = OpticalPulse::quantum(nm, pulse.mean_photons(), w);
    CHECK(back.peak_power_w() == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("phase normalization") {
  CHECK(normalize_phase(0.0) == 0.0);
  CHECK(normalize_phase(-kPi / 2.0) == doctest::Approx(1.5 * kPi));
  CHECK(normalize_phase(5.0 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_phase(std::nextafter(kTwoPi, 0.0)) < kTwoPi);
}

TEST_CASE("filter element edges are linear in dB") {
  const auto bpf = band_pass(1530.0, 15.0, 1.0, 30.0, 2.0);
  CHECK(bpf.attenuation_db(1530.0) == 1.0);
  CHECK(bpf.attenuation_db(1537.5) == 1.0);
  CHECK(bpf.attenuation_db(1538.5) == doctest::Approx(15.5));
  CHECK(bpf.attenuation_db(1539.5) == 30.0);
  CHECK(bpf.attenuation_db(1400.0) == 30.0);

  const auto fiber = coiled_fiber();
  CHECK(fiber.attenuation_db(1780.0) == doctest::Approx(0.1));
  CHECK(fiber.attenuation_db(1790.0) == doctest::Approx(20.05));
  CHECK(fiber.attenuation_db(1800.0) == 40.0);

  CHECK_THROWS_AS((FilterElement{FilterKind::band_pass, {1.0, 2.0}, 5.0, 1.0, 1.0, ""}.validate()),
                  std::invalid_argument);
}

TEST_CASE("reference stacks: values read off the element table") {
  const ReferenceBands bands;
  const auto pre = reference_pre_stack(bands);
  const auto post = reference_post_stack(bands);
  // Pre at the signal: fibers 0.1 + 0.1, input dichroic 0.3, signal BPF 1.0.
  CHECK(stack_attenuation(pre, 1530.0) == doctest::Approx(1.5));
  // Pre at the pump: fibers 40 + 40, dichroic 20, signal BPF 30.
  CHECK(stack_attenuation(pre, 1810.0) == doctest::Approx(130.0));
  // Post at the sum: dichroic 0.3, short-pass 0.2, sum BPF 1.0.
  CHECK(stack_attenuation(post, bands.sum_nm()) == doctest::Approx(1.5));
  CHECK(stack_transmission(concatenate(pre, post), 1530.0) ==
        doctest::Approx(stack_transmission(pre, 1530.0) * stack_transmission(post, 1530.0)));
  CHECK_THROWS_AS(stack_attenuation(pre, 200.0), std::domain_error);
  CHECK_THROWS_AS(stack_attenuation(pre, 3000.0), std::domain_error);
}

TEST_CASE("LWI holds for the reference stack and fails without the sum band-pass") {
  const ReferenceBands bands;
  const auto pre = reference_pre_stack(bands);
  auto post = reference_post_stack(bands);
  const auto grid = wavelength_grid(300.0, 1850.0, 1.0);
  CHECK(grid.size() == 1551);
  CHECK(check_lwi(pre, post, grid, bands.exclusions()).empty());

  post.elements.pop_back();
  const auto violations = check_lwi(pre, post, grid, bands.exclusions());
  REQUIRE_FALSE(violations.empty());
  bool near_sum = false;
  for (const auto& v : violations) near_sum = near_sum || std::abs(v.wavelength_nm - bands.sum_nm()) < 20.0;
  CHECK(near_sum);
}

TEST_CASE("LWI sweep is monotone in added elements") {
  const ReferenceBands bands;
  const auto pre = reference_pre_stack(bands);
  const auto post = reference_post_stack(bands);
  auto extra = post;
  extra.elements.push_back(short_pass(1200.0, 0.5, 30.0));
  const auto grid = wavelength_grid(300.0, 1850.0, 5.0);
  const auto a = lwi_sweep(pre, post, grid);
  const auto b = lwi_sweep(pre, extra, grid);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].attenuation_db >= a[i].attenuation_db);
}

TEST_CASE("LWI csv layout") {
  const std::vector<LwiSample> s{{300.0, 150.25}, {301.0, 149.5}};
  CHECK(lwi_csv(s) == "wavelength_nm,attenuation_db\n300,150.250000\n301,149.500000\n");
}
