#pragma once
//---------------------------------------------------------------------------
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>
#include "mrsim/metrics.hpp"
//---------------------------------------------------------------------------
namespace mrsim::report {
//---------------------------------------------------------------------------
enum class Format { Csv, Json };
Format formatFromString(std::string_view text);
//---------------------------------------------------------------------------
/// Header plus one line per row; numbers with 3 decimals
std::string formatCsv(std::span<const metrics::JobReport> rows);
/// Array of row objects with the CSV field names, plus mode and per-task records
std::string formatJson(std::span<const metrics::JobReport> rows);
std::string format(std::span<const metrics::JobReport> rows, Format fmt);
/// Inverse of formatJson
std::vector<metrics::JobReport> parseJson(std::string_view text);
/// Per-task lines: job id, task id, kind, VM id, start, exec, finish
std::string formatTaskCsv(std::span<const metrics::JobReport> rows);

/// Write `content` to `path`, creating parent directories; throws IoError
void writeFile(const std::filesystem::path& path, std::string_view content);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
