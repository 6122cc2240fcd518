#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace infoval {

inline constexpr const char* kEngineVersion = "0.1.0";

/// FNV-1a 64 over raw bytes, as a fixed-width hex string.
std::string digest_bytes(const std::string& bytes);

/// Append-only record of one engine invocation. The body carries the
/// structured outputs; tables inside it render in the human-readable report.
struct RunRecord {
  std::string engine_version = kEngineVersion;
  std::string command;
  std::string scenario_name;
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::string verdict;  // "pass", "fail", or "" for plain computations
  nlohmann::ordered_json body = nlohmann::ordered_json::object();
  long long wall_ms = 0;
};

enum class ReportFormat { kJson, kTable };

/// Deterministic rendering of a record: machine-readable JSON, or aligned
/// tables for humans. Wall-clock time is excluded so identical runs render
/// byte-identically.
std::string emit_report(const RunRecord& record, ReportFormat format);

/// Writes the record into the run-log directory (one timestamped JSON file
/// plus an index line) and returns the file path. Creates the directory.
std::string write_run_record(const std::string& directory, const RunRecord& record);

/// Helper for building table entries in a record body.
nlohmann::ordered_json make_table(const std::string& title, std::vector<std::string> columns,
                                  std::vector<std::vector<std::string>> rows);

/// Fixed-format numeric cell (12 significant digits, no locale).
std::string num_cell(double value);

}  // namespace infoval
