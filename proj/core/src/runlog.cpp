#include "infoval/runlog.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace infoval {

using nlohmann::ordered_json;

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << hash;
  return out.str();
}

std::string num_cell(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

ordered_json make_table(const std::string& title, std::vector<std::string> columns,
                        std::vector<std::vector<std::string>> rows) {
  ordered_json table;
  table["title"] = title;
  table["columns"] = columns;
  table["rows"] = rows;
  return table;
}

namespace {

std::string render_table(const ordered_json& table) {
  std::vector<std::string> columns = table["columns"].get<std::vector<std::string>>();
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : table["rows"]) {
    rows.push_back(row.get<std::vector<std::string>>());
  }
  std::vector<std::size_t> widths(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) widths[c] = columns[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  out << table["title"].get<std::string>() << "\n";
  auto emit_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < widths.size(); ++c) {
      std::string cell = c < cells.size() ? cells[c] : "";
      out << "  " << std::left << std::setw(static_cast<int>(widths[c])) << cell;
    }
    out << "\n";
  };
  emit_row(columns);
  std::vector<std::string> rule;
  for (std::size_t c = 0; c < widths.size(); ++c) rule.push_back(std::string(widths[c], '-'));
  emit_row(rule);
  for (const auto& row : rows) emit_row(row);
  return out.str();
}

void render_value(std::ostringstream& out, const std::string& key, const ordered_json& value) {
  if (value.is_object() && value.contains("title") && value.contains("columns")) {
    out << render_table(value);
    return;
  }
  out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
}

}  // namespace

std::string emit_report(const RunRecord& record, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json doc;
    doc["engine_version"] = record.engine_version;
    doc["command"] = record.command;
    if (!record.scenario_name.empty()) doc["scenario"] = record.scenario_name;
    if (!record.scenario_digest.empty()) doc["scenario_digest"] = record.scenario_digest;
    doc["seed"] = record.seed;
    if (!record.verdict.empty()) doc["verdict"] = record.verdict;
    doc["output"] = record.body;
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "== " << record.command;
  if (!record.scenario_name.empty()) out << " [" << record.scenario_name << "]";
  out << " ==\n";
  for (const auto& [key, value] : record.body.items()) {
    render_value(out, key, value);
  }
  if (!record.verdict.empty()) out << "verdict: " << record.verdict << "\n";
  return out.str();
}

std::string write_run_record(const std::string& directory, const RunRecord& record) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) %
            1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%dT%H%M%S") << std::setfill('0') << std::setw(3)
        << ms.count();

  ordered_json doc;
  doc["engine_version"] = record.engine_version;
  doc["command"] = record.command;
  doc["scenario"] = record.scenario_name;
  doc["scenario_digest"] = record.scenario_digest;
  doc["seed"] = record.seed;
  doc["verdict"] = record.verdict;
  doc["wall_ms"] = record.wall_ms;
  doc["started"] = stamp.str();
  doc["output"] = record.body;

  std::string short_digest =
      record.scenario_digest.empty() ? "none" : record.scenario_digest.substr(0, 8);
  fs::path file = fs::path(directory) / (stamp.str() + "-" + record.command.substr(0, 24) +
                                         "-" + short_digest + ".json");
  {
    std::ofstream out(file, std::ios::binary);
    out << doc.dump(2) << "\n";
  }
  {
    std::ofstream index(fs::path(directory) / "index.jsonl", std::ios::app | std::ios::binary);
    ordered_json line;
    line["file"] = file.filename().string();
    line["command"] = record.command;
    line["scenario"] = record.scenario_name;
    line["verdict"] = record.verdict;
    index << line.dump() << "\n";
  }
  return file.string();
}

}  // namespace infoval
