#pragma once

#include "mocsim/reliability.hpp"
#include "mocsim/scenario.hpp"
#include "mocsim/switcher.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace mocsim {

/// x rounded to six significant digits, the precision of every report value.
double round6(double x);

/// {"columns": [...], "rows": [[...], ...]}; the oracle row's window is "oracle".
nlohmann::json reactive_table_json(const ReactiveTable& t);
nlohmann::json curves_json(const std::vector<CurveRow>& rows);

/// Full report. The `policies` key is omitted when no policy ran.
nlohmann::json report_json(const ScenarioResult& r);

/// Writes a {"columns", "rows"} table as CSV.
std::string table_csv(const nlohmann::json& table);
/// Inverse of table_csv; numeric cells become numbers.
nlohmann::json table_from_csv(const std::string& text);

/// report.json, or one CSV file per table. Throws IoError when the directory
/// cannot be written.
void emit_report(const ScenarioResult& r, ReportFormat format, const std::filesystem::path& dir);

/// Reads the tabular sections (reactive_table, curves) of a CSV report.
nlohmann::json load_csv_tables(const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace mocsim
