#include "mrsim/simulation.hpp"
#include <set>
#include <fmt/format.h>
//---------------------------------------------------------------------------
namespace mrsim {
//---------------------------------------------------------------------------
metrics::JobReport buildReport(const mapreduce::JobRecord& job, const SimulationConfig& config, const std::map<int, double>& costPerSecByVm) {
   metrics::JobReport report;
   report.jobId = job.spec.jobId;
   report.mrCombination = job.spec.mrCombination();
   report.vmCount = static_cast<int>(job.vmIds.size());
   report.vmType = config.vmSpec.name;
   report.jobType = job.spec.jobType;
   report.mode = std::string(net::toString(config.delay.mode));

   report.tasks = metrics::recordsOf(job);
   report.avgExec = metrics::averageExecutionTime(report.tasks);
   report.maxExec = metrics::maxExecutionTime(report.tasks);
   report.minExec = metrics::minExecutionTime(report.tasks);
   report.makespan = metrics::makespan(report.tasks);
   report.delayTime = metrics::delayTime(report.tasks);
   report.vmCost = metrics::vmComputationCost(report.tasks, costPerSecByVm);
   report.networkCost = config.delay.mode == net::DelayMode::NetworkDelay ? net::networkCost(job.spec, config.delay) : 0.0;
   return report;
}
//---------------------------------------------------------------------------
SimulationResult simulate(const SimulationConfig& config, std::ostream* trace) {
   if (config.jobs.empty()) throw ValidationError("simulation needs at least one job");
   config.delay.validate();
   std::set<int> ids;
   for (auto& job : config.jobs) {
      job.validate();
      if (!ids.insert(job.jobId).second) throw ValidationError(fmt::format("duplicate job id {}", job.jobId));
   }

   infra::CapacityPool pool(config.datacenter);
   auto vms = pool.provision(config.vmSpec, config.vmCount, config.capacity);
   std::vector<int> vmIds;
   std::map<int, double> costPerSec;
   for (auto& vm : vms) {
      vmIds.push_back(vm.id());
      costPerSec[vm.id()] = vm.spec().costPerSec;
   }

   sim::Engine engine;
   engine.setTrace(trace);
   auto& datacenter = engine.create<mapreduce::DatacenterEntity>("datacenter", std::move(vms));
   auto& broker = engine.create<mapreduce::SequentialBroker>("broker", datacenter.id());
   auto& taskTracker = engine.create<mapreduce::TaskTracker>("task-tracker", broker.id());
   auto& jobTracker = engine.create<mapreduce::JobTracker>("job-tracker", config.delay, vmIds);
   broker.setJobTracker(jobTracker.id());
   broker.setStatusListener(taskTracker.id());
   taskTracker.setJobTracker(jobTracker.id());
   jobTracker.setBroker(broker.id());
   jobTracker.setTaskTracker(taskTracker.id());
   for (auto& job : config.jobs) broker.submitJob(job);

   SimulationResult result;
   result.finalClock = engine.run();
   result.dispatchedEvents = engine.dispatchedCount();
   result.pesUsed = pool.pesUsed();
   result.ramUsed = pool.ramUsed();
   result.storageUsed = pool.storageUsed();

   for (auto& [jobId, rec] : jobTracker.jobs()) {
      if (!rec.complete) throw ProtocolError(fmt::format("job {} did not complete", jobId));
      result.jobs.push_back(rec);
   }
   // report rows follow submission order
   for (auto& job : config.jobs) result.reports.push_back(buildReport(jobTracker.jobs().at(job.jobId), config, costPerSec));
   for (auto& vm : datacenter.vms()) result.vms.push_back(VmStats{vm.id(), vm.capacity(), vm.workDone(), vm.busyTime()});
   result.statusLog = taskTracker.statusLog();
   return result;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
