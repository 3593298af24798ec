#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ucp/protocol.hpp"
#include "ucp/receiver.hpp"

namespace ucp::harness {

// Raised for schema or consistency problems; `key` is the dotted path of the
// offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct LwiConfig {
  double start_nm = 300.0;
  double stop_nm = 1850.0;
  double step_nm = 1.0;
  double threshold_db = photonics::kLwiThresholdDb;
};

struct OutputConfig {
  std::string dir;
  bool lwi_chart = false;
  bool cycles_csv = false;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::uint64_t n_cycles = 100000;
  unsigned workers = 1;
  double mu = 0.2;
  double signal_bandwidth_nm = 15.0;
  double sum_bandwidth_nm = 3.5;
  ReceiverConfig receiver;
  protocol::ChannelModel channel;
  double back_reflection_db = 40.0;
  LwiConfig lwi;
  OutputConfig output;

  photonics::ReferenceBands bands() const;
  photonics::LwiExclusions lwi_exclusions() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Defaults for every omitted key; unknown keys and bad values throw ConfigError.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Complete parameter echo; feeding it back to scenario_from_json gives an
/// equivalent config.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Sets one numeric entry addressed by a dotted key, e.g. "attack.peak_power_w".
ScenarioConfig with_override(const ScenarioConfig& cfg, const std::string& dotted_key, double value);

}  // namespace ucp::harness
