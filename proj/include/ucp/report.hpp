#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucp/engine.hpp"

namespace ucp::harness {

/// Deterministic JSON document: parameter echo, statistics, analytics,
/// alarm counts, NABC windows and LWI violations. No timing data.
nlohmann::json report_json(const RunReport& rep);

std::string cycles_csv(std::span<const CycleRecord> cycles);
std::string sweep_csv(const std::string& key, std::span<const SweepRow> rows);

struct EmitOptions {
  bool lwi_chart = false;
  bool cycles_csv = false;
};

/// Writes report.json and alarms.csv, plus lwi_chart.csv and cycles.csv when
/// asked. Returns the written paths. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> emit(const RunReport& rep, const std::filesystem::path& dir,
                                        const EmitOptions& opts);

/// Writes `contents` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace ucp::harness
