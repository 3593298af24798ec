#include "ucp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "ucp/protocol.hpp"
#include "ucp/rng.hpp"

namespace ucp::harness {

namespace {

constexpr std::size_t kChunkCycles = 1 << 16;

CycleRecord simulate_cycle(const ScenarioConfig& cfg, std::uint64_t index) {
  Rng rng = cycle_rng(cfg.seed, index);
  const AliceChoice alice = protocol::draw_alice(cfg.mu, rng);
  return protocol::run_cycle(alice, cfg.channel, cfg.receiver, index, rng);
}

// Fills `out` with cycles [first, first + out.size()). Each worker owns a
// contiguous slice, so the result does not depend on scheduling.
void simulate_chunk(const ScenarioConfig& cfg, std::uint64_t first, std::vector<CycleRecord>& out,
                    unsigned workers) {
  const std::size_t n = out.size();
  const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  if (parts == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = simulate_cycle(cfg, first + i);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(parts);
  const std::size_t per = (n + parts - 1) / parts;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t lo = p * per;
    const std::size_t hi = std::min(n, lo + per);
    if (lo >= hi) break;
    threads.emplace_back([&cfg, &out, first, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = simulate_cycle(cfg, first + i);
    });
  }
}

// Sequential part of the run: detector history, NABC windows and tallies.
class Folder {
 public:
  Folder(const ScenarioConfig& cfg, RunReport& rep, bool keep_cycles)
      : cfg_(cfg), rep_(rep), keep_cycles_(keep_cycles) {
    protocol::ChannelModel honest = cfg.channel;
    honest.eve = {};
    rep_.nabc_expected_double_click_prob =
        protocol::honest_double_click_probability(cfg.receiver, honest, cfg.mu);
  }

  bool stopped() const { return rep_.terminated_early; }

  void add(CycleRecord rec) {
    const auto& rx = cfg_.receiver;
    ++rep_.cycles_run;
    if (rec.blinded) ++rep_.blinded_cycles;

    for (std::uint8_t i = 0; i < rec.n_outcomes; ++i) {
      auto& o = rec.outcomes[i];
      const double t = protocol::bin_time_ps(rec.cycle_index, o.bin, rx);
      o.d0_click = d0_.admit(o.d0_click, rec.damage, t, rx.detector);
      o.d1_click = d1_.admit(o.d1_click, rec.damage, t, rx.detector);
      rep_.detector_clicks[0] += o.d0_click ? 1 : 0;
      rep_.detector_clicks[1] += o.d1_click ? 1 : 0;
    }

    rep_.max_zeta = std::max(rep_.max_zeta, rec.zeta);
    rep_.max_residual_photons = std::max(rep_.max_residual_photons, rec.residual_signal_photons);
    rep_.max_out_of_gate_photons = std::max(rep_.max_out_of_gate_photons, rec.out_of_gate_photons);
    rep_.max_out_of_gate_peak_w = std::max(rep_.max_out_of_gate_peak_w, rec.out_of_gate_peak_w);

    record_alarms(rec);

    protocol::SiftedPair pair;
    switch (protocol::sift_one(rec, pair)) {
      case protocol::SiftStatus::kept:
        ++rep_.sifted_bits;
        rep_.sifted_errors += pair.alice_bit != pair.bob_bit ? 1 : 0;
        break;
      case protocol::SiftStatus::single_pulse: break;
      case protocol::SiftStatus::no_click: ++rep_.no_click; break;
      case protocol::SiftStatus::double_click: ++rep_.double_clicks; break;
      case protocol::SiftStatus::basis_mismatch: ++rep_.basis_mismatch; break;
    }

    if (rec.single_pulse) {
      ++rep_.sampling_cycles;
      window_.push_back(rec);
      if (window_.size() >= rx.monitor.nabc_window) close_window();
    }

    if (rec.fuse) stop("fuse");
    else if (rec.damage) stop("detector damage");
    if (keep_cycles_) rep_.cycles.push_back(rec);
  }

  void finish() {
    if (!window_.empty()) close_window();
    rep_.dead_time_suppressed = d0_.suppressed_clicks + d1_.suppressed_clicks;
  }

 private:
  void record_alarms(const CycleRecord& rec) {
    if (rec.alarms == 0) return;
    ++rep_.cycles_with_alarm;
    const std::array<std::pair<AlarmKind, double>, 4> kinds{{
        {AlarmKind::pump_depletion, rec.zeta},
        {AlarmKind::signal_residual, rec.residual_signal_photons},
        {AlarmKind::damage, rec.peak_detector_power_w},
        {AlarmKind::fuse, 1.0},
    }};
    for (const auto& [kind, value] : kinds) {
      if (rec.alarms & alarm_bit(kind)) {
        ++rep_.alarm_counts[static_cast<std::size_t>(kind)];
        rep_.alarms.push_back({rec.cycle_index, kind, value});
      }
    }
  }

  void close_window() {
    NabcWindow w{window_.front().cycle_index, window_.back().cycle_index,
                 monitors::nabc_sample_test(window_, cfg_.receiver.monitor,
                                            rep_.nabc_expected_double_click_prob)};
    if (w.outcome.verdict == monitors::NabcVerdict::alarm) {
      ++rep_.alarm_counts[static_cast<std::size_t>(AlarmKind::nabc_statistics)];
      rep_.alarms.push_back({w.last_cycle, AlarmKind::nabc_statistics,
                             std::min(w.outcome.correlation_p_value, w.outcome.double_click_p_value)});
    }
    rep_.nabc_windows.push_back(w);
    window_.clear();
  }

  void stop(const char* reason) {
    rep_.terminated_early = true;
    rep_.termination_reason = reason;
  }

  const ScenarioConfig& cfg_;
  RunReport& rep_;
  bool keep_cycles_;
  detection::SpadState d0_;
  detection::SpadState d1_;
  std::vector<CycleRecord> window_;
};

}  // namespace

double RunReport::qber() const {
  if (sifted_bits == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(sifted_errors) / static_cast<double>(sifted_bits);
}

double RunReport::sifted_rate_bps() const {
  if (cycles_run == 0) return 0.0;
  return static_cast<double>(sifted_bits) / static_cast<double>(cycles_run) *
         config.receiver.pump.rep_rate_hz;
}

double RunReport::double_click_rate() const {
  if (cycles_run == 0) return 0.0;
  return static_cast<double>(double_clicks) / static_cast<double>(cycles_run);
}

double RunReport::alarm_probability() const {
  if (cycles_run == 0) return 0.0;
  return static_cast<double>(cycles_with_alarm) / static_cast<double>(cycles_run);
}

std::uint64_t RunReport::nabc_alarms() const {
  return alarm_counts[static_cast<std::size_t>(AlarmKind::nabc_statistics)];
}

bool RunReport::any_alarm() const {
  for (auto c : alarm_counts) {
    if (c > 0) return true;
  }
  return false;
}

RunReport run(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  RunReport rep;
  rep.config = cfg;
  rep.cycles_requested = cfg.n_cycles;

  const auto grid = photonics::wavelength_grid(cfg.lwi.start_nm, cfg.lwi.stop_nm, cfg.lwi.step_nm);
  rep.lwi_violations = photonics::check_lwi(cfg.receiver.pre, cfg.receiver.post, grid,
                                            cfg.lwi_exclusions(), cfg.lwi.threshold_db);

  const unsigned workers = opts.workers > 0 ? opts.workers : cfg.workers;
  Folder folder(cfg, rep, opts.keep_cycles);
  std::vector<CycleRecord> chunk;
  for (std::uint64_t first = 0; first < cfg.n_cycles && !folder.stopped(); first += kChunkCycles) {
    chunk.resize(static_cast<std::size_t>(std::min<std::uint64_t>(kChunkCycles, cfg.n_cycles - first)));
    simulate_chunk(cfg, first, chunk, workers);
    for (auto& rec : chunk) {
      folder.add(rec);
      if (folder.stopped()) break;
    }
  }
  folder.finish();
  return rep;
}

Analytics analytics(const ScenarioConfig& cfg) {
  const auto& rx = cfg.receiver;
  Analytics a;
  a.channel_transmission = cfg.channel.transmission();
  a.overall_efficiency = rx.overall_efficiency();
  a.filter_transmission = rx.filter_transmission();
  a.key_rate_estimate_bps = protocol::key_rate_estimate({.rep_rate_hz = rx.pump.rep_rate_hz,
                                                         .mu = cfg.mu,
                                                         .channel_transmission = a.channel_transmission,
                                                         .overall_efficiency = a.overall_efficiency});
  protocol::ChannelModel honest = cfg.channel;
  honest.eve = {};
  a.sifted_probability_per_cycle = protocol::sifted_probability_per_cycle(rx, honest, cfg.mu);
  a.min_detectable_peak_w =
      monitors::min_detectable_peak(rx.monitor, rx.pump, rx.signal_width_ps, rx.signal_nm);
  a.gated_bound_w = upconversion::gated_bound_on_sum_power(rx.pump, rx.signal_nm);
  a.flux_bound_w = upconversion::flux_bound_on_sum_power(rx.pump, rx.signal_nm);
  a.sum_nm = rx.sum_nm();
  return a;
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const std::string& key, double start,
                            double stop, std::size_t steps, const RunOptions& opts) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < steps; ++i) {
    const double value =
        steps == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    const RunReport rep = run(with_override(cfg, key, value), opts);
    SweepRow row;
    row.value = value;
    row.alarm_prob = rep.alarm_probability();
    row.nabc_alarm_fraction =
        rep.nabc_windows.empty()
            ? 0.0
            : static_cast<double>(rep.nabc_alarms()) / static_cast<double>(rep.nabc_windows.size());
    row.qber = rep.qber();
    row.sifted_rate_bps = rep.sifted_rate_bps();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ucp::harness
