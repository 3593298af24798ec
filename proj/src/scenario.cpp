#include "ucp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ucp::harness {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be rejected.
class Section {
 public:
  Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ != nullptr && !obj_->is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (obj_ == nullptr) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(key_path(key), "must be a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(key_path(key), "must be finite");
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(key_path(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<long long>() < 0)) {
        throw ConfigError(key_path(key), "must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void read(const std::string& key, unsigned& out) {
    std::uint64_t tmp = out;
    read(key, tmp);
    out = static_cast<unsigned>(tmp);
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(key_path(key), "must be a string");
      out = v->get<std::string>();
    }
  }

  Section child(const std::string& key) { return Section(find(key), key_path(key)); }

  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [key, _] : obj_->items()) {
      if (!seen_.contains(key)) throw ConfigError(key_path(key), "unknown key");
    }
  }

 private:
  const json* obj_;
  std::string path_;
  std::set<std::string> seen_;
};

photonics::FilterElement parse_element(const json& j, const std::string& path) {
  Section s(&j, path);
  photonics::FilterElement e;
  std::string kind;
  s.read("kind", kind);
  if (kind.empty()) throw ConfigError(s.key_path("kind"), "is required");
  try {
    e.kind = photonics::filter_kind_from_string(kind);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(s.key_path("kind"), err.what());
  }
  if (const json* pb = s.find("passband_nm")) {
    if (!pb->is_array() || pb->size() != 2 || !(*pb)[0].is_number() || !(*pb)[1].is_number()) {
      throw ConfigError(s.key_path("passband_nm"), "must be [lo, hi]");
    }
    e.passband = {(*pb)[0].get<double>(), (*pb)[1].get<double>()};
  } else {
    throw ConfigError(s.key_path("passband_nm"), "is required");
  }
  s.read("insertion_loss_db", e.insertion_loss_db);
  s.read("stopband_attenuation_db", e.stopband_attenuation_db);
  s.read("edge_width_nm", e.edge_width_nm);
  s.read("label", e.label);
  s.finish();
  try {
    e.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path, err.what());
  }
  return e;
}

photonics::FilterStack parse_stack(const json& j, const std::string& path, photonics::StackLocation loc) {
  if (!j.is_array()) throw ConfigError(path, "must be an array of filter elements");
  photonics::FilterStack stack;
  stack.location = loc;
  for (std::size_t i = 0; i < j.size(); ++i) {
    stack.elements.push_back(parse_element(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return stack;
}

json element_to_json(const photonics::FilterElement& e) {
  return {{"kind", photonics::to_string(e.kind)},
          {"passband_nm", {e.passband.lo_nm, e.passband.hi_nm}},
          {"insertion_loss_db", e.insertion_loss_db},
          {"stopband_attenuation_db", e.stopband_attenuation_db},
          {"edge_width_nm", e.edge_width_nm},
          {"label", e.label}};
}

json stack_to_json(const photonics::FilterStack& s) {
  json arr = json::array();
  for (const auto& e : s.elements) arr.push_back(element_to_json(e));
  return arr;
}

template <class F>
void checked(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(key, err.what());
  }
}

}  // namespace

photonics::ReferenceBands ScenarioConfig::bands() const {
  return {receiver.signal_nm, receiver.pump.wavelength_nm, signal_bandwidth_nm, sum_bandwidth_nm};
}

photonics::LwiExclusions ScenarioConfig::lwi_exclusions() const { return bands().exclusions(); }

void ScenarioConfig::validate() const {
  if (!(mu > 0.0)) throw ConfigError("alice.mu", "must be > 0");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (!(signal_bandwidth_nm > 0.0)) throw ConfigError("filters.signal_bandwidth_nm", "must be > 0");
  if (!(sum_bandwidth_nm > 0.0)) throw ConfigError("filters.sum_bandwidth_nm", "must be > 0");
  if (receiver.pump.width_ps >= receiver.pump.pair_separation_ps) {
    throw ConfigError("pump.width_ps", "must be smaller than pump.pair_separation_ps");
  }
  if (!(lwi.step_nm > 0.0) || lwi.stop_nm < lwi.start_nm || lwi.start_nm <= photonics::kModelMinNm ||
      lwi.stop_nm >= photonics::kModelMaxNm) {
    throw ConfigError("lwi", "grid must be increasing, with positive step, inside (200, 3000) nm");
  }
  checked("pump", [&] { receiver.pump.validate(); });
  checked("waveguide", [&] { receiver.waveguide.validate(); });
  checked("detector", [&] { receiver.detector.validate(); });
  checked("monitor", [&] { receiver.monitor.validate(); });
  checked("alice", [&] { receiver.validate(); });
  checked("channel", [&] { channel.validate(); });
}

ScenarioConfig scenario_from_json(const json& doc) {
  ScenarioConfig cfg;
  Section root(&doc, "");
  root.read("seed", cfg.seed);
  root.read("n_cycles", cfg.n_cycles);
  root.read("workers", cfg.workers);

  auto& rx = cfg.receiver;
  {
    Section s = root.child("alice");
    s.read("mu", cfg.mu);
    s.read("signal_nm", rx.signal_nm);
    s.read("width_ps", rx.signal_width_ps);
    s.finish();
  }
  {
    Section s = root.child("pump");
    auto& p = rx.pump;
    s.read("wavelength_nm", p.wavelength_nm);
    s.read("width_ps", p.width_ps);
    s.read("peak_power_w", p.peak_power_w);
    if (const json* er = s.find("extinction_ratio_db")) {
      if (er->is_string() && er->get<std::string>() == "inf") {
        p.extinction_ratio_db = upconversion::kInfiniteExtinction;
      } else if (er->is_number()) {
        p.extinction_ratio_db = er->get<double>();
      } else {
        throw ConfigError("pump.extinction_ratio_db", "must be a number or \"inf\"");
      }
    }
    s.read("jitter_ps", p.jitter_ps);
    s.read("pair_separation_ps", p.pair_separation_ps);
    s.read("rep_rate_hz", p.rep_rate_hz);
    if (const json* alph = s.find("phase_alphabet_rad")) {
      if (!alph->is_array() || alph->empty()) {
        throw ConfigError("pump.phase_alphabet_rad", "must be a non-empty array of numbers");
      }
      p.phase_alphabet.clear();
      for (const auto& v : *alph) {
        if (!v.is_number()) throw ConfigError("pump.phase_alphabet_rad", "must contain numbers");
        p.phase_alphabet.push_back(v.get<double>());
      }
    }
    s.read("single_pulse_prob", p.single_pulse_prob);
    s.read("interpulse_randomization", p.interpulse_randomization);
    s.read("phase_on_late_pulse", p.phase_on_late_pulse);
    s.read("arrival_ps", p.arrival_ps);
    s.finish();
  }
  {
    Section s = root.child("waveguide");
    auto& w = rx.waveguide;
    w.pm_center_nm = rx.signal_nm;
    s.read("eta_max", w.eta_max);
    s.read("p_full_w", w.p_full_w);
    s.read("propagation_loss_db", w.propagation_loss_db);
    s.read("in_coupling_db", w.in_coupling_db);
    s.read("out_coupling_db", w.out_coupling_db);
    s.read("pm_center_nm", w.pm_center_nm);
    s.read("pm_bandwidth_nm", w.pm_bandwidth_nm);
    s.finish();
  }
  {
    Section s = root.child("filters");
    s.read("signal_bandwidth_nm", cfg.signal_bandwidth_nm);
    s.read("sum_bandwidth_nm", cfg.sum_bandwidth_nm);
    const auto bands = cfg.bands();
    if (const json* pre = s.find("pre")) {
      rx.pre = parse_stack(*pre, "filters.pre", photonics::StackLocation::pre_waveguide);
    } else {
      rx.pre = photonics::reference_pre_stack(bands);
    }
    if (const json* post = s.find("post")) {
      rx.post = parse_stack(*post, "filters.post", photonics::StackLocation::post_waveguide);
    } else {
      rx.post = photonics::reference_post_stack(bands);
    }
    s.finish();
  }
  {
    Section s = root.child("detector");
    auto& d = rx.detector;
    s.read("eta_d", d.eta_d);
    s.read("dark_cps", d.dark_cps);
    s.read("dead_time_ns", d.dead_time_ns);
    s.read("max_rate_cps", d.max_rate_cps);
    s.read("blind_power_w", d.blind_power_w);
    s.read("click_threshold_w", d.click_threshold_w);
    s.read("damage_threshold_w", d.damage_threshold_w);
    s.finish();
  }
  {
    Section s = root.child("monitor");
    auto& m = rx.monitor;
    std::uint64_t window = m.nabc_window;
    s.read("zeta_min", m.zeta_min);
    s.read("signal_monitor_min_photons", m.signal_monitor_min_photons);
    s.read("nabc_window", window);
    s.read("nabc_alpha", m.nabc_alpha);
    m.nabc_window = static_cast<std::size_t>(window);
    s.finish();
  }
  {
    Section s = root.child("channel");
    s.read("length_km", cfg.channel.length_km);
    s.read("loss_db_per_km", cfg.channel.loss_db_per_km);
    s.finish();
  }
  {
    Section s = root.child("attack");
    auto& a = cfg.channel.eve;
    std::string kind = adversary::to_string(a.kind);
    s.read("kind", kind);
    try {
      a.kind = adversary::attack_kind_from_string(kind);
    } catch (const std::invalid_argument& err) {
      throw ConfigError("attack.kind", err.what());
    }
    s.read("peak_power_w", a.peak_power_w);
    s.read("offset_ps", a.offset_ps);
    s.read("width_ps", a.width_ps);
    s.read("cw_power_w", a.cw_power_w);
    s.read("wavelength_nm", a.wavelength_nm);
    s.read("resend_prob", a.resend_prob);
    if (const json* ph = s.find("relative_phase_rad"); ph != nullptr && !ph->is_null()) {
      if (!ph->is_number()) throw ConfigError("attack.relative_phase_rad", "must be a number or null");
      a.relative_phase_rad = ph->get<double>();
    }
    s.finish();
  }
  {
    Section s = root.child("lwi");
    s.read("start_nm", cfg.lwi.start_nm);
    s.read("stop_nm", cfg.lwi.stop_nm);
    s.read("step_nm", cfg.lwi.step_nm);
    s.read("threshold_db", cfg.lwi.threshold_db);
    s.finish();
  }
  {
    Section s = root.child("trojan");
    s.read("back_reflection_db", cfg.back_reflection_db);
    s.finish();
  }
  {
    Section s = root.child("output");
    s.read("dir", cfg.output.dir);
    s.read("lwi_chart", cfg.output.lwi_chart);
    s.read("cycles_csv", cfg.output.cycles_csv);
    s.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + err.what());
  }
  return scenario_from_json(doc);
}

json to_json(const ScenarioConfig& cfg) {
  const auto& rx = cfg.receiver;
  const auto& p = rx.pump;
  const auto& w = rx.waveguide;
  const auto& d = rx.detector;
  const auto& m = rx.monitor;
  const auto& a = cfg.channel.eve;

  json er = std::isinf(p.extinction_ratio_db) ? json("inf") : json(p.extinction_ratio_db);
  return {
      {"seed", cfg.seed},
      {"n_cycles", cfg.n_cycles},
      {"workers", cfg.workers},
      {"alice", {{"mu", cfg.mu}, {"signal_nm", rx.signal_nm}, {"width_ps", rx.signal_width_ps}}},
      {"pump",
       {{"wavelength_nm", p.wavelength_nm},
        {"width_ps", p.width_ps},
        {"peak_power_w", p.peak_power_w},
        {"extinction_ratio_db", er},
        {"jitter_ps", p.jitter_ps},
        {"pair_separation_ps", p.pair_separation_ps},
        {"rep_rate_hz", p.rep_rate_hz},
        {"phase_alphabet_rad", p.phase_alphabet},
        {"single_pulse_prob", p.single_pulse_prob},
        {"interpulse_randomization", p.interpulse_randomization},
        {"phase_on_late_pulse", p.phase_on_late_pulse},
        {"arrival_ps", p.arrival_ps}}},
      {"waveguide",
       {{"eta_max", w.eta_max},
        {"p_full_w", w.p_full_w},
        {"propagation_loss_db", w.propagation_loss_db},
        {"in_coupling_db", w.in_coupling_db},
        {"out_coupling_db", w.out_coupling_db},
        {"pm_center_nm", w.pm_center_nm},
        {"pm_bandwidth_nm", w.pm_bandwidth_nm}}},
      {"filters",
       {{"signal_bandwidth_nm", cfg.signal_bandwidth_nm},
        {"sum_bandwidth_nm", cfg.sum_bandwidth_nm},
        {"pre", stack_to_json(rx.pre)},
        {"post", stack_to_json(rx.post)}}},
      {"detector",
       {{"eta_d", d.eta_d},
        {"dark_cps", d.dark_cps},
        {"dead_time_ns", d.dead_time_ns},
        {"max_rate_cps", d.max_rate_cps},
        {"blind_power_w", d.blind_power_w},
        {"click_threshold_w", d.click_threshold_w},
        {"damage_threshold_w", d.damage_threshold_w}}},
      {"monitor",
       {{"zeta_min", m.zeta_min},
        {"signal_monitor_min_photons", m.signal_monitor_min_photons},
        {"nabc_window", m.nabc_window},
        {"nabc_alpha", m.nabc_alpha}}},
      {"channel", {{"length_km", cfg.channel.length_km}, {"loss_db_per_km", cfg.channel.loss_db_per_km}}},
      {"attack",
       {{"kind", adversary::to_string(a.kind)},
        {"peak_power_w", a.peak_power_w},
        {"offset_ps", a.offset_ps},
        {"width_ps", a.width_ps},
        {"cw_power_w", a.cw_power_w},
        {"wavelength_nm", a.wavelength_nm},
        {"resend_prob", a.resend_prob},
        {"relative_phase_rad", a.relative_phase_rad ? json(*a.relative_phase_rad) : json(nullptr)}}},
      {"lwi",
       {{"start_nm", cfg.lwi.start_nm},
        {"stop_nm", cfg.lwi.stop_nm},
        {"step_nm", cfg.lwi.step_nm},
        {"threshold_db", cfg.lwi.threshold_db}}},
      {"trojan", {{"back_reflection_db", cfg.back_reflection_db}}},
      {"output",
       {{"dir", cfg.output.dir}, {"lwi_chart", cfg.output.lwi_chart}, {"cycles_csv", cfg.output.cycles_csv}}},
  };
}

ScenarioConfig with_override(const ScenarioConfig& cfg, const std::string& dotted_key, double value) {
  json doc = to_json(cfg);
  std::string pointer;
  std::stringstream ss(dotted_key);
  for (std::string part; std::getline(ss, part, '.');) pointer += "/" + part;
  const json::json_pointer ptr(pointer);
  if (!doc.contains(ptr)) throw ConfigError(dotted_key, "unknown key");
  json& slot = doc[ptr];
  if (slot.is_number_unsigned()) {
    if (value < 0.0) throw ConfigError(dotted_key, "must be a non-negative integer");
    slot = static_cast<std::uint64_t>(std::llround(value));
  } else {
    slot = value;
  }
  return scenario_from_json(doc);
}

}  // namespace ucp::harness
