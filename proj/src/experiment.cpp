#include "mrsim/experiment.hpp"
#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>
#include <fmt/format.h>
//---------------------------------------------------------------------------
namespace mrsim::experiment {
//---------------------------------------------------------------------------
ExperimentGroup groupFromNumber(int number) {
   if (number < 1 || number > 4) throw ValidationError(fmt::format("experiment group must be 1-4, got {}", number));
   return static_cast<ExperimentGroup>(number);
}
//---------------------------------------------------------------------------
std::string_view describe(ExperimentGroup group) {
   switch (group) {
      case ExperimentGroup::MrCombination: return "MR combination M1R1..M20R1";
      case ExperimentGroup::VmCount: return "VM count {3, 6, 9} x MR combination";
      case ExperimentGroup::VmType: return "VM type {Small, Medium, Large} x MR combination";
      case ExperimentGroup::JobType: return "job type {Small, Medium, Big} x MR combination";
   }
   return "?";
}
//---------------------------------------------------------------------------
scenario::Scenario groupScenario(ExperimentGroup group, net::DelayMode mode) {
   scenario::Scenario sc;
   sc.name = fmt::format("group{}-{}", static_cast<int>(group), net::toString(mode));
   sc.base.vmSpec = sc.catalog.find("Small");
   sc.base.vmCount = 3;
   sc.base.jobs = {mapreduce::jobPreset("Small", 1)};
   sc.base.delay.mode = mode;
   sc.sweep.mr = scenario::MrRange{1, 20, 1};
   switch (group) {
      case ExperimentGroup::MrCombination: break;
      case ExperimentGroup::VmCount:
         sc.sweep.axis = scenario::SweepAxis::VmCount;
         sc.sweep.vmCounts = {3, 6, 9};
         break;
      case ExperimentGroup::VmType:
         sc.sweep.axis = scenario::SweepAxis::VmType;
         sc.sweep.vmTypes = {"Small", "Medium", "Large"};
         break;
      case ExperimentGroup::JobType:
         sc.sweep.axis = scenario::SweepAxis::JobType;
         sc.sweep.jobTypes = {"Small", "Medium", "Big"};
         break;
   }
   return sc;
}
//---------------------------------------------------------------------------
SweepResult runScenario(const scenario::Scenario& sc, const RunOptions& options) {
   SweepResult out;
   out.points = scenario::expandSweep(sc);
   size_t n = out.points.size();
   out.results.resize(n);
   std::vector<std::string> traces(n);
   std::vector<std::exception_ptr> errors(n);

   std::atomic<size_t> next{0};
   auto worker = [&] {
      for (size_t i = next++; i < n; i = next++) {
         try {
            std::ostringstream trace;
            out.results[i] = simulate(out.points[i].config, options.captureTrace ? &trace : nullptr);
            traces[i] = trace.str();
         } catch (...) {
            errors[i] = std::current_exception();
         }
      }
   };
   unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
   threads = static_cast<unsigned>(std::min<size_t>(threads, n));
   if (threads <= 1) {
      worker();
   } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
   }

   for (size_t i = 0; i < n; ++i) {
      if (!errors[i]) continue;
      auto label = out.points[i].label.empty() ? std::string("run") : out.points[i].label;
      try {
         std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
         throw Error(e.category(), fmt::format("sweep point {} ({}): {}", i, label, e.what()));
      }
   }
   for (size_t i = 0; i < n; ++i) {
      out.trace += traces[i];
      for (auto& row : out.results[i].reports) out.rows.push_back(row);
   }
   return out;
}
//---------------------------------------------------------------------------
SweepResult runGroup(ExperimentGroup group, net::DelayMode mode, const RunOptions& options) {
   return runScenario(groupScenario(group, mode), options);
}
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
using Metric = std::function<double(const metrics::JobReport&)>;
using Key = std::function<std::string(const metrics::JobReport&)>;
//---------------------------------------------------------------------------
/// One line per MR combination, one column per distinct key value (in first-seen order)
std::string pivot(const std::vector<metrics::JobReport>& rows, const Key& key, const std::string& keyPrefix, const Metric& metric) {
   std::vector<std::string> columns, mrs;
   for (auto& r : rows) {
      if (std::find(columns.begin(), columns.end(), key(r)) == columns.end()) columns.push_back(key(r));
      if (std::find(mrs.begin(), mrs.end(), r.mrCombination) == mrs.end()) mrs.push_back(r.mrCombination);
   }
   std::string csv = "mr_combination";
   for (auto& c : columns) csv += "," + keyPrefix + c;
   csv += '\n';
   for (auto& mr : mrs) {
      csv += mr;
      for (auto& c : columns) {
         auto it = std::find_if(rows.begin(), rows.end(), [&](auto& r) { return r.mrCombination == mr && key(r) == c; });
         csv += it == rows.end() ? "," : fmt::format(",{:.3f}", metric(*it));
      }
      csv += '\n';
   }
   return csv;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
std::vector<PlotFile> plotSeries(ExperimentGroup group, const SweepResult& result, const SweepResult* contrast) {
   std::vector<PlotFile> files;
   auto avg = [](auto& r) { return r.avgExec; };
   switch (group) {
      case ExperimentGroup::MrCombination: {
         std::string csv = "mr_combination,avg_exec_s,max_exec_s,min_exec_s\n";
         for (auto& r : result.rows) csv += fmt::format("{},{:.3f},{:.3f},{:.3f}\n", r.mrCombination, r.avgExec, r.maxExec, r.minExec);
         files.push_back({"exec_time_vs_mr.csv", csv});
         if (contrast) {
            auto rows = result.rows;
            rows.insert(rows.end(), contrast->rows.begin(), contrast->rows.end());
            files.push_back({"makespan_vs_mr.csv", pivot(rows, [](auto& r) { return r.mode; }, "makespan_", [](auto& r) { return r.makespan; })});
         }
         break;
      }
      case ExperimentGroup::VmCount: {
         auto key = [](auto& r) { return std::to_string(r.vmCount); };
         files.push_back({"avg_exec_vs_vm_count.csv", pivot(result.rows, key, "vm_count_", avg)});
         files.push_back({"network_cost_vs_vm_count.csv", pivot(result.rows, key, "vm_count_", [](auto& r) { return r.networkCost; })});
         break;
      }
      case ExperimentGroup::VmType:
         files.push_back({"avg_exec_vs_vm_type.csv", pivot(result.rows, [](auto& r) { return r.vmType; }, "", avg)});
         break;
      case ExperimentGroup::JobType:
         files.push_back({"vm_cost_vs_job_type.csv", pivot(result.rows, [](auto& r) { return r.jobType; }, "", [](auto& r) { return r.vmCost; })});
         break;
   }
   return files;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
