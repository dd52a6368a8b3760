#include "mrsim/report.hpp"
#include <cmath>
#include <fstream>
#include <fmt/format.h>
#include <json.hpp>
//---------------------------------------------------------------------------
namespace mrsim::report {
//---------------------------------------------------------------------------
using nlohmann::json;
using metrics::JobReport;
using metrics::TaskRecord;
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
constexpr std::string_view kCsvHeader = "job_id,mr_combination,vm_count,vm_type,job_type,avg_exec_s,max_exec_s,min_exec_s,makespan_s,delay_s,vm_cost,network_cost";
//---------------------------------------------------------------------------
/// Nearest double to the value printed with 3 decimals
double round3(double value) {
   return std::round(value * 1000.0) / 1000.0;
}
//---------------------------------------------------------------------------
std::string csvField(const std::string& text) {
   if (text.find_first_of(",\"\n") == std::string::npos) return text;
   std::string quoted = "\"";
   for (char c : text) {
      if (c == '"') quoted += '"';
      quoted += c;
   }
   return quoted + "\"";
}
//---------------------------------------------------------------------------
template <typename T>
T field(const json& obj, const char* key) {
   if (!obj.contains(key)) throw ValidationError(fmt::format("report JSON row lacks '{}'", key));
   try {
      return obj.at(key).get<T>();
   } catch (const json::exception& e) {
      throw ValidationError(fmt::format("report JSON field '{}': {}", key, e.what()));
   }
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
Format formatFromString(std::string_view text) {
   if (text == "csv") return Format::Csv;
   if (text == "json") return Format::Json;
   throw ValidationError(fmt::format("unknown report format '{}' (expected csv or json)", text));
}
//---------------------------------------------------------------------------
std::string formatCsv(std::span<const JobReport> rows) {
   std::string out(kCsvHeader);
   out += '\n';
   for (const auto& r : rows) {
      out += fmt::format("{},{},{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}\n", r.jobId, csvField(r.mrCombination), r.vmCount, csvField(r.vmType), csvField(r.jobType),
                         r.avgExec, r.maxExec, r.minExec, r.makespan, r.delayTime, r.vmCost, r.networkCost);
   }
   return out;
}
//---------------------------------------------------------------------------
std::string formatJson(std::span<const JobReport> rows) {
   json doc = json::array();
   for (const auto& r : rows) {
      json tasks = json::array();
      for (const auto& t : r.tasks) {
         tasks.push_back({{"task_id", t.taskId},
                          {"job_id", t.jobId},
                          {"kind", mapreduce::toString(t.kind)},
                          {"vm_id", t.vmId},
                          {"start_s", round3(t.startTime)},
                          {"finish_s", round3(t.finishTime)}});
      }
      doc.push_back({{"job_id", r.jobId},
                     {"mr_combination", r.mrCombination},
                     {"vm_count", r.vmCount},
                     {"vm_type", r.vmType},
                     {"job_type", r.jobType},
                     {"mode", r.mode},
                     {"avg_exec_s", round3(r.avgExec)},
                     {"max_exec_s", round3(r.maxExec)},
                     {"min_exec_s", round3(r.minExec)},
                     {"makespan_s", round3(r.makespan)},
                     {"delay_s", round3(r.delayTime)},
                     {"vm_cost", round3(r.vmCost)},
                     {"network_cost", round3(r.networkCost)},
                     {"tasks", std::move(tasks)}});
   }
   return doc.dump(2) + "\n";
}
//---------------------------------------------------------------------------
std::string format(std::span<const JobReport> rows, Format fmt) {
   return fmt == Format::Json ? formatJson(rows) : formatCsv(rows);
}
//---------------------------------------------------------------------------
std::vector<JobReport> parseJson(std::string_view text) {
   json doc;
   try {
      doc = json::parse(text);
   } catch (const json::parse_error& e) {
      throw ValidationError(fmt::format("malformed report JSON: {}", e.what()));
   }
   if (!doc.is_array()) throw ValidationError("report JSON must be an array of rows");
   std::vector<JobReport> rows;
   for (const auto& obj : doc) {
      JobReport r;
      r.jobId = field<int>(obj, "job_id");
      r.mrCombination = field<std::string>(obj, "mr_combination");
      r.vmCount = field<int>(obj, "vm_count");
      r.vmType = field<std::string>(obj, "vm_type");
      r.jobType = field<std::string>(obj, "job_type");
      r.mode = field<std::string>(obj, "mode");
      r.avgExec = field<double>(obj, "avg_exec_s");
      r.maxExec = field<double>(obj, "max_exec_s");
      r.minExec = field<double>(obj, "min_exec_s");
      r.makespan = field<double>(obj, "makespan_s");
      r.delayTime = field<double>(obj, "delay_s");
      r.vmCost = field<double>(obj, "vm_cost");
      r.networkCost = field<double>(obj, "network_cost");
      for (const auto& t : field<json>(obj, "tasks")) {
         TaskRecord rec;
         rec.taskId = field<std::int64_t>(t, "task_id");
         rec.jobId = field<int>(t, "job_id");
         auto kind = field<std::string>(t, "kind");
         if (kind != "map" && kind != "reduce") throw ValidationError(fmt::format("unknown task kind '{}'", kind));
         rec.kind = kind == "map" ? metrics::TaskKind::Map : metrics::TaskKind::Reduce;
         rec.vmId = field<int>(t, "vm_id");
         rec.startTime = field<double>(t, "start_s");
         rec.finishTime = field<double>(t, "finish_s");
         r.tasks.push_back(rec);
      }
      rows.push_back(std::move(r));
   }
   return rows;
}
//---------------------------------------------------------------------------
std::string formatTaskCsv(std::span<const JobReport> rows) {
   std::string out = "job_id,task_id,kind,vm_id,start_s,exec_s,finish_s\n";
   for (const auto& r : rows)
      for (const auto& t : r.tasks)
         out += fmt::format("{},{},{},{},{:.3f},{:.3f},{:.3f}\n", t.jobId, t.taskId, mapreduce::toString(t.kind), t.vmId, t.startTime, t.execTime(), t.finishTime);
   return out;
}
//---------------------------------------------------------------------------
void writeFile(const std::filesystem::path& path, std::string_view content) {
   std::error_code ec;
   if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
   std::ofstream out(path, std::ios::binary | std::ios::trunc);
   if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
   out.write(content.data(), static_cast<std::streamsize>(content.size()));
   if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
