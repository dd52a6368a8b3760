#pragma once
//---------------------------------------------------------------------------
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>
#include "mrsim/infra.hpp"
#include "mrsim/kernel.hpp"
#include "mrsim/storage_net.hpp"
//---------------------------------------------------------------------------
// MapReduce job lifecycle: splitting, placement, tracker entities, and the
// sequential broker that keeps reduces behind their maps
//---------------------------------------------------------------------------
namespace mrsim::mapreduce {
//---------------------------------------------------------------------------
using infra::TaskRef;
//---------------------------------------------------------------------------
struct JobSpec {
   int jobId = 0;
   /// Small, Medium, Big, or a custom label
   std::string jobType = "Small";
   /// MI
   double length = 362880;
   /// MB
   double dataSize = 200000;
   int nm = 1;
   int nr = 1;
   /// Total reduce work is reduceRatio * length / nm
   double reduceRatio = 1.0;
   /// Indices into the provisioned VM list; empty means every VM
   std::vector<int> vmSubset;

   void validate() const;
   /// "M<nm>R<nr>"
   std::string mrCombination() const;
   bool operator==(const JobSpec&) const = default;
};

/// Job with the preset length/data size of a named job type
JobSpec jobPreset(std::string_view jobType, int jobId = 0, int nm = 1, int nr = 1);
bool isJobPreset(std::string_view jobType);
/// Parse "M3R1" into (3, 1)
std::pair<int, int> parseMrCombination(std::string_view text);
//---------------------------------------------------------------------------
enum class TaskKind { Map, Reduce };
enum class TaskStatus { Pending, Fetching, Running, Done };
std::string_view toString(TaskKind kind);
std::string_view toString(TaskStatus status);

struct Task {
   TaskRef taskId = 0;
   int jobId = 0;
   TaskKind kind = TaskKind::Map;
   /// Position within its phase, 0-based
   int index = 0;
   double length = 0;
   double inputShare = 0;
   TaskStatus status = TaskStatus::Pending;
   int vmId = -1;
   double startTime = -1;
   double finishTime = -1;
};

struct JobSplit {
   std::vector<Task> maps;
   std::vector<Task> reduces;
};

/// Split into nm equal maps and nr equal reduces; the last task of each phase absorbs rounding
JobSplit splitJob(const JobSpec& job, TaskRef firstTaskId = 0);

/// Round-robin over `vmIds` by task order
std::map<TaskRef, int> placeTasks(std::span<const Task> tasks, std::span<const int> vmIds);
//---------------------------------------------------------------------------
struct ReduceLaunch {
   int jobId;
   double shuffleDelay;
};

/// Map/reduce counters of one job and the map-to-reduce barrier
class JobProgress {
   public:
   JobProgress(int jobId, std::vector<TaskRef> mapIds, std::vector<TaskRef> reduceIds, double shuffleDelay);

   /// Returns the reduce launch exactly once, on the last map
   std::optional<ReduceLaunch> onMapComplete(TaskRef task);
   /// True when this was the job's last reduce
   bool onReduceComplete(TaskRef task);

   int mapsDone() const { return static_cast<int>(mapsDone_.size()); }
   int reducesDone() const { return static_cast<int>(reducesDone_.size()); }
   bool reducesLaunched() const { return launched_; }
   bool complete() const { return reducesDone_.size() == reduceIds_.size(); }

   private:
   int jobId_;
   std::vector<TaskRef> mapIds_;
   std::vector<TaskRef> reduceIds_;
   double shuffleDelay_;
   std::vector<TaskRef> mapsDone_;
   std::vector<TaskRef> reducesDone_;
   bool launched_ = false;
};
//---------------------------------------------------------------------------
// Event payloads
//---------------------------------------------------------------------------
struct TaskDispatch {
   TaskRef taskId;
   int jobId;
   TaskKind kind;
   int vmId;
   double length;
   sim::EntityId replyTo = sim::kKernel;
};

struct TaskCompletion {
   TaskRef taskId;
   int jobId;
   TaskKind kind;
   int vmId;
   double startTime;
   double finishTime;
};

enum class ListGate {
   /// Next list goes out as soon as the previous one completes
   Auto,
   /// Next list additionally waits for a ListRelease
   External,
};

struct SequentialSubmission {
   int jobId;
   std::vector<std::vector<TaskDispatch>> lists;
   ListGate gate = ListGate::Auto;
};

struct ListRelease {
   int jobId;
   size_t listIndex;
};

struct JobAssignment {
   JobSpec job;
   JobSplit split;
   std::vector<int> vmIds;
};

struct VmUpdate {
   int vmId;
   std::uint64_t epoch;
};
//---------------------------------------------------------------------------
/// Hosts the VMs and runs their time-shared queues
class DatacenterEntity : public sim::SimEntity {
   public:
   DatacenterEntity(std::string name, std::vector<infra::VmInstance> vms);

   const std::vector<infra::VmInstance>& vms() const { return vms_; }
   const infra::VmInstance& vm(int vmId) const;

   protected:
   void processEvent(const sim::SimEvent& ev) override;

   private:
   struct Running {
      TaskDispatch dispatch;
      double startTime;
   };

   size_t vmIndex(int vmId) const;
   void updateVm(size_t index);
   void reschedule(size_t index);

   std::vector<infra::VmInstance> vms_;
   std::vector<double> lastUpdate_;
   std::vector<std::uint64_t> epoch_;
   std::map<TaskRef, Running> running_;
};
//---------------------------------------------------------------------------
/// Broker that executes task lists of a job strictly one after another
class SequentialBroker : public sim::SimEntity {
   public:
   SequentialBroker(std::string name, sim::EntityId datacenter);

   void setJobTracker(sim::EntityId id) { jobTracker_ = id; }
   void setStatusListener(sim::EntityId id) { statusListener_ = id; }
   /// Queue a job for submission to the job tracker at broker start
   void submitJob(JobSpec job);
   /// List k+1 of `jobId` is dispatched only after every task of list k completed
   void submitSequential(int jobId, std::vector<std::vector<TaskDispatch>> lists, ListGate gate = ListGate::Auto);

   const std::vector<TaskCompletion>& completions() const { return completions_; }
   bool allListsDone() const;

   protected:
   void startEntity() override;
   void processEvent(const sim::SimEvent& ev) override;

   private:
   struct Sequence {
      std::vector<std::vector<TaskDispatch>> lists;
      ListGate gate = ListGate::Auto;
      size_t current = 0;
      size_t completedInCurrent = 0;
      bool dispatched = false;
      std::vector<bool> released;
   };

   void release(int jobId, size_t listIndex);
   void tryDispatch(int jobId);
   void onCompletion(const TaskCompletion& done);

   sim::EntityId datacenter_;
   sim::EntityId jobTracker_ = sim::kKernel;
   sim::EntityId statusListener_ = sim::kKernel;
   std::vector<JobSpec> pendingJobs_;
   std::map<int, Sequence> sequences_;
   std::map<int, std::vector<size_t>> earlyReleases_;
   std::vector<TaskCompletion> completions_;
   bool started_ = false;
};
//---------------------------------------------------------------------------
struct StatusUpdate {
   double time;
   TaskRef taskId;
   int jobId;
   int vmId;
   TaskStatus status;
};

/// Places split tasks on VMs, hands them to the broker, and relays task status to the job tracker
class TaskTracker : public sim::SimEntity {
   public:
   TaskTracker(std::string name, sim::EntityId broker);
   void setJobTracker(sim::EntityId id) { jobTracker_ = id; }

   const std::vector<StatusUpdate>& statusLog() const { return log_; }
   /// Tasks placed on a VM that have not completed yet
   int activeSlots(int vmId) const;
   const std::map<TaskRef, int>& placement() const { return placement_; }

   protected:
   void processEvent(const sim::SimEvent& ev) override;

   private:
   sim::EntityId broker_;
   sim::EntityId jobTracker_ = sim::kKernel;
   std::map<int, int> activeSlots_;
   std::map<TaskRef, int> placement_;
   std::vector<StatusUpdate> log_;
};
//---------------------------------------------------------------------------
struct JobRecord {
   JobSpec spec;
   JobSplit split;
   net::DelayBreakdown delay;
   std::vector<int> vmIds;
   bool complete = false;
   double completionTime = -1;
};

/// Accepts jobs, splits them, fetches input, and launches reduces after the barrier
class JobTracker : public sim::SimEntity {
   public:
   JobTracker(std::string name, net::DelayModel delay, std::vector<int> vmIds);
   void setBroker(sim::EntityId id) { broker_ = id; }
   void setTaskTracker(sim::EntityId id) { taskTracker_ = id; }

   const std::map<int, JobRecord>& jobs() const { return jobs_; }
   const JobProgress& progress(int jobId) const;

   protected:
   void processEvent(const sim::SimEvent& ev) override;

   private:
   void onJobSubmit(const JobSpec& job);
   void onFetchComplete(int jobId);
   void onTaskComplete(const TaskCompletion& done);
   void onShuffleComplete(int jobId);
   JobRecord& record(int jobId);

   net::DelayModel delay_;
   std::vector<int> vmIds_;
   sim::EntityId broker_ = sim::kKernel;
   sim::EntityId taskTracker_ = sim::kKernel;
   std::map<int, JobRecord> jobs_;
   std::map<int, JobProgress> progress_;
   TaskRef nextTaskId_ = 0;
};
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
