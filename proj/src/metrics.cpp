#include "mrsim/metrics.hpp"
#include <algorithm>
#include <fmt/format.h>
//---------------------------------------------------------------------------
namespace mrsim::metrics {
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
struct Phases {
   std::vector<const TaskRecord*> maps;
   std::vector<const TaskRecord*> reduces;
};
//---------------------------------------------------------------------------
Phases phases(std::span<const TaskRecord> records) {
   Phases p;
   for (const auto& r : records) {
      if (!(r.finishTime > r.startTime))
         throw MetricError(fmt::format("task {} has non-positive execution time ({} -> {})", r.taskId, r.startTime, r.finishTime));
      (r.kind == TaskKind::Map ? p.maps : p.reduces).push_back(&r);
   }
   if (p.maps.empty()) throw MetricError("no completed map tasks");
   if (p.reduces.empty()) throw MetricError("no completed reduce tasks");
   return p;
}
//---------------------------------------------------------------------------
template <typename Pick>
double pickExec(const std::vector<const TaskRecord*>& tasks, Pick pick) {
   double value = tasks.front()->execTime();
   for (auto* t : tasks) value = pick(value, t->execTime());
   return value;
}
//---------------------------------------------------------------------------
/// Clamped to the phase's [min, max] so summation rounding cannot push it outside
double meanExec(const std::vector<const TaskRecord*>& tasks) {
   double sum = 0;
   for (auto* t : tasks) sum += t->execTime();
   double lo = pickExec(tasks, [](double a, double b) { return std::min(a, b); });
   double hi = pickExec(tasks, [](double a, double b) { return std::max(a, b); });
   return std::clamp(sum / static_cast<double>(tasks.size()), lo, hi);
}
//---------------------------------------------------------------------------
const TaskRecord* lastByTaskId(const std::vector<const TaskRecord*>& tasks) {
   return *std::max_element(tasks.begin(), tasks.end(), [](auto* a, auto* b) { return a->taskId < b->taskId; });
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
double averageExecutionTime(std::span<const TaskRecord> records) {
   auto p = phases(records);
   return meanExec(p.maps) + meanExec(p.reduces);
}
//---------------------------------------------------------------------------
double maxExecutionTime(std::span<const TaskRecord> records) {
   auto p = phases(records);
   auto max = [](double a, double b) { return std::max(a, b); };
   return pickExec(p.maps, max) + pickExec(p.reduces, max);
}
//---------------------------------------------------------------------------
double minExecutionTime(std::span<const TaskRecord> records) {
   auto p = phases(records);
   auto min = [](double a, double b) { return std::min(a, b); };
   return pickExec(p.maps, min) + pickExec(p.reduces, min);
}
//---------------------------------------------------------------------------
double makespan(std::span<const TaskRecord> records, double submitTime) {
   auto p = phases(records);
   double last = 0;
   for (auto* r : p.reduces) last = std::max(last, r->finishTime);
   return last - submitTime;
}
//---------------------------------------------------------------------------
double vmComputationCost(std::span<const TaskRecord> records, const std::map<int, double>& costPerSecByVm) {
   phases(records);
   // Accumulate per VM first so the result does not depend on record order across VMs
   std::map<int, double> execByVm;
   for (const auto& r : records) execByVm[r.vmId] += r.execTime();
   double cost = 0;
   for (auto& [vm, exec] : execByVm) {
      auto it = costPerSecByVm.find(vm);
      if (it == costPerSecByVm.end()) throw MetricError(fmt::format("no cost rate for VM {}", vm));
      cost += exec * it->second;
   }
   return cost;
}
//---------------------------------------------------------------------------
double delayTime(std::span<const TaskRecord> records, double submitTime) {
   auto p = phases(records);
   double lastMapFinish = 0;
   for (auto* m : p.maps) lastMapFinish = std::max(lastMapFinish, m->finishTime);
   double fetch = lastByTaskId(p.maps)->startTime - submitTime;
   double shuffle = lastByTaskId(p.reduces)->startTime - lastMapFinish;
   return fetch + shuffle;
}
//---------------------------------------------------------------------------
std::vector<TaskRecord> recordsOf(const mapreduce::JobRecord& job) {
   std::vector<TaskRecord> records;
   for (const auto* phase : {&job.split.maps, &job.split.reduces})
      for (const auto& t : *phase) {
         if (t.status != mapreduce::TaskStatus::Done) throw MetricError(fmt::format("task {} of job {} did not complete", t.taskId, t.jobId));
         records.push_back(TaskRecord{t.taskId, t.jobId, t.kind, t.vmId, t.startTime, t.finishTime});
      }
   return records;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
