#pragma once
//---------------------------------------------------------------------------
#include <ostream>
#include <vector>
#include "mrsim/infra.hpp"
#include "mrsim/mapreduce.hpp"
#include "mrsim/metrics.hpp"
#include "mrsim/storage_net.hpp"
//---------------------------------------------------------------------------
namespace mrsim {
//---------------------------------------------------------------------------
/// Everything one simulation run needs
struct SimulationConfig {
   infra::DatacenterConfig datacenter;
   infra::VmSpec vmSpec = infra::smallVm();
   int vmCount = 3;
   infra::CapacityModel capacity = infra::CapacityModel::VmMips;
   std::vector<mapreduce::JobSpec> jobs;
   net::DelayModel delay;

   bool operator==(const SimulationConfig&) const = default;
};
//---------------------------------------------------------------------------
struct VmStats {
   int vmId;
   double capacity;
   double workDone;
   double busyTime;
};
//---------------------------------------------------------------------------
struct SimulationResult {
   double finalClock = 0;
   std::vector<metrics::JobReport> reports;
   std::vector<mapreduce::JobRecord> jobs;
   std::vector<VmStats> vms;
   std::vector<mapreduce::StatusUpdate> statusLog;
   std::uint64_t dispatchedEvents = 0;
   std::int64_t pesUsed = 0;
   double ramUsed = 0;
   double storageUsed = 0;
};
//---------------------------------------------------------------------------
/// Provision, run to completion, and report. Provisioning failures throw before any event runs.
SimulationResult simulate(const SimulationConfig& config, std::ostream* trace = nullptr);
/// Build the report row of one finished job
metrics::JobReport buildReport(const mapreduce::JobRecord& job, const SimulationConfig& config, const std::map<int, double>& costPerSecByVm);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
