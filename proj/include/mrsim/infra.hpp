#pragma once
//---------------------------------------------------------------------------
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>
#include "mrsim/errors.hpp"
//---------------------------------------------------------------------------
// Datacenter capacity, VM provisioning, and time-shared execution on VMs
//---------------------------------------------------------------------------
namespace mrsim::infra {
//---------------------------------------------------------------------------
/// Total physical capacity of a datacenter. Defaults are the evaluation setup.
struct DatacenterConfig {
   std::int64_t pesTotal = 500;
   /// MB
   double ramTotal = 20480;
   /// MB
   double storageTotal = 1000000;
   /// MB/s
   double bandwidth = 1000;
   /// MI/s per pe
   double mipsPerPe = 1000;

   void validate() const;
   bool operator==(const DatacenterConfig&) const = default;
};
//---------------------------------------------------------------------------
/// How a VM turns its spec into a processing rate shared by its tasks
enum class CapacityModel {
   /// The VM processes `mips` MI/s in total; pes only count against provisioning
   VmMips,
   /// The VM processes `mips * pes` MI/s in total
   AggregatePes,
};
std::string_view toString(CapacityModel model);
CapacityModel capacityModelFromString(std::string_view text);
//---------------------------------------------------------------------------
struct VmSpec {
   std::string name;
   /// MB
   double imageSize = 0;
   /// MB
   double ram = 0;
   /// MI/s
   double mips = 0;
   /// MB/s
   double bandwidth = 0;
   int pes = 1;
   double costPerSec = 0;

   void validate() const;
   /// Total MI/s available to the VM's run queue
   double capacity(CapacityModel model) const { return model == CapacityModel::AggregatePes ? mips * pes : mips; }
   bool operator==(const VmSpec&) const = default;
};

VmSpec smallVm();
VmSpec mediumVm();
VmSpec largeVm();
//---------------------------------------------------------------------------
/// Named VM types; starts with the Small/Medium/Large rows
class VmCatalog {
   public:
   VmCatalog();
   static VmCatalog empty() { return VmCatalog(0); }

   void add(VmSpec spec);
   bool contains(std::string_view name) const;
   const VmSpec& find(std::string_view name) const;
   std::vector<std::string> names() const;

   private:
   explicit VmCatalog(int) {}
   std::map<std::string, VmSpec, std::less<>> specs_;
};
//---------------------------------------------------------------------------
enum class Dimension { Pes, Ram, Storage };
std::string_view toString(Dimension dim);

class ProvisioningError : public Error {
   public:
   ProvisioningError(std::vector<Dimension> violated, const std::string& what) : Error(ErrorCategory::Provisioning, what), violated_(std::move(violated)) {}
   const std::vector<Dimension>& violated() const { return violated_; }

   private:
   std::vector<Dimension> violated_;
};
//---------------------------------------------------------------------------
using TaskRef = std::int64_t;

/// A provisioned VM with an equal-share run queue.
///
/// Every queued task progresses at capacity / k MI/s where k is the queue
/// length. Between queue changes the rates are constant, so advancing by the
/// exact distance to the next completion integrates the sharing exactly.
class VmInstance {
   public:
   VmInstance(int id, VmSpec spec, CapacityModel model = CapacityModel::VmMips);

   int id() const { return id_; }
   const VmSpec& spec() const { return spec_; }
   double capacity() const { return capacity_; }
   CapacityModel capacityModel() const { return model_; }

   void assignTask(TaskRef task, double length);
   /// Progress all queued tasks by dt seconds; returns the tasks that finished, in queue order
   std::vector<TaskRef> advance(double dt);

   /// Seconds until the first queued task finishes at the current share
   std::optional<double> timeToNextCompletion() const;
   /// Finish offsets of every queued task assuming no further arrivals
   std::vector<std::pair<TaskRef, double>> projectedFinishTimes() const;

   bool idle() const { return queue_.empty(); }
   size_t queueSize() const { return queue_.size(); }
   bool hosts(TaskRef task) const;
   double remaining(TaskRef task) const;

   /// MI processed so far
   double workDone() const { return workDone_; }
   /// Seconds with a non-empty queue
   double busyTime() const { return busyTime_; }

   private:
   struct Entry {
      TaskRef task;
      double length;
      double remaining;
   };

   int id_;
   VmSpec spec_;
   CapacityModel model_;
   double capacity_;
   std::vector<Entry> queue_;
   double workDone_ = 0;
   double busyTime_ = 0;
};
//---------------------------------------------------------------------------
/// The datacenter as a single capacity pool that VMs draw from
class CapacityPool {
   public:
   explicit CapacityPool(DatacenterConfig config = {});

   /// Admit `count` VMs of `spec` or throw ProvisioningError naming every exceeded dimension
   std::vector<VmInstance> provision(const VmSpec& spec, int count, CapacityModel model = CapacityModel::VmMips);

   const DatacenterConfig& config() const { return config_; }
   std::int64_t pesUsed() const { return pesUsed_; }
   double ramUsed() const { return ramUsed_; }
   double storageUsed() const { return storageUsed_; }
   int vmCount() const { return nextVmId_; }

   private:
   DatacenterConfig config_;
   std::int64_t pesUsed_ = 0;
   double ramUsed_ = 0;
   double storageUsed_ = 0;
   int nextVmId_ = 0;
};

/// Free-function form of CapacityPool::provision against a fresh pool
std::vector<VmInstance> provision(const DatacenterConfig& config, const VmSpec& spec, int count, CapacityModel model = CapacityModel::VmMips);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
