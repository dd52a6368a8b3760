#include "mrsim/mapreduce.hpp"
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
//---------------------------------------------------------------------------
namespace mrsim::mapreduce {
//---------------------------------------------------------------------------
using sim::EventTag;
using sim::SimEvent;
//---------------------------------------------------------------------------
void JobSpec::validate() const {
   if (!(length > 0) || !std::isfinite(length)) throw ValidationError(fmt::format("job {}: length must be positive", jobId));
   if (!(dataSize > 0) || !std::isfinite(dataSize)) throw ValidationError(fmt::format("job {}: data size must be positive", jobId));
   if (nm < 1) throw ValidationError(fmt::format("job {}: map count must be at least 1, got {}", jobId, nm));
   if (nr < 1) throw ValidationError(fmt::format("job {}: reduce count must be at least 1, got {}", jobId, nr));
   if (!(reduceRatio > 0) || !std::isfinite(reduceRatio)) throw ValidationError(fmt::format("job {}: reduce ratio must be positive", jobId));
   for (int v : vmSubset)
      if (v < 0) throw ValidationError(fmt::format("job {}: negative VM index {}", jobId, v));
}
//---------------------------------------------------------------------------
std::string JobSpec::mrCombination() const {
   return fmt::format("M{}R{}", nm, nr);
}
//---------------------------------------------------------------------------
bool isJobPreset(std::string_view jobType) {
   return jobType == "Small" || jobType == "Medium" || jobType == "Big";
}
//---------------------------------------------------------------------------
JobSpec jobPreset(std::string_view jobType, int jobId, int nm, int nr) {
   JobSpec job;
   job.jobId = jobId;
   job.jobType = std::string(jobType);
   job.nm = nm;
   job.nr = nr;
   if (jobType == "Small") {
      job.length = 362880;
      job.dataSize = 200000;
   } else if (jobType == "Medium") {
      job.length = 725760;
      job.dataSize = 400000;
   } else if (jobType == "Big") {
      job.length = 1451520;
      job.dataSize = 800000;
   } else {
      throw ValidationError(fmt::format("unknown job type '{}' (expected Small, Medium or Big)", jobType));
   }
   return job;
}
//---------------------------------------------------------------------------
std::pair<int, int> parseMrCombination(std::string_view text) {
   auto fail = [&]() -> std::pair<int, int> { throw ValidationError(fmt::format("malformed MR combination '{}' (expected e.g. M3R1)", text)); };
   if (text.size() < 4 || text.front() != 'M') return fail();
   auto r = text.find('R');
   if (r == std::string_view::npos) return fail();
   int nm = 0, nr = 0;
   auto mPart = text.substr(1, r - 1);
   auto rPart = text.substr(r + 1);
   auto [pm, em] = std::from_chars(mPart.data(), mPart.data() + mPart.size(), nm);
   auto [pr, er] = std::from_chars(rPart.data(), rPart.data() + rPart.size(), nr);
   if (em != std::errc() || er != std::errc() || pm != mPart.data() + mPart.size() || pr != rPart.data() + rPart.size()) return fail();
   if (nm < 1 || nr < 1) throw ValidationError(fmt::format("MR combination '{}' needs at least one map and one reduce", text));
   return {nm, nr};
}
//---------------------------------------------------------------------------
std::string_view toString(TaskKind kind) {
   return kind == TaskKind::Map ? "map" : "reduce";
}
//---------------------------------------------------------------------------
std::string_view toString(TaskStatus status) {
   switch (status) {
      case TaskStatus::Pending: return "pending";
      case TaskStatus::Fetching: return "fetching";
      case TaskStatus::Running: return "running";
      case TaskStatus::Done: return "done";
   }
   return "?";
}
//---------------------------------------------------------------------------
namespace {
/// `count` equal parts of `total`; the last part takes what rounding left over
std::vector<double> equalParts(double total, int count) {
   double part = total / count;
   std::vector<double> parts(count, part);
   parts.back() = total - part * (count - 1);
   return parts;
}
}
//---------------------------------------------------------------------------
JobSplit splitJob(const JobSpec& job, TaskRef firstTaskId) {
   job.validate();
   JobSplit split;
   double share = job.dataSize / (job.nm + job.nr);
   TaskRef next = firstTaskId;

   auto mapLengths = equalParts(job.length, job.nm);
   for (int i = 0; i < job.nm; ++i)
      split.maps.push_back(Task{next++, job.jobId, TaskKind::Map, i, mapLengths[i], share});

   auto reduceLengths = equalParts(job.reduceRatio * job.length / job.nm, job.nr);
   for (int i = 0; i < job.nr; ++i)
      split.reduces.push_back(Task{next++, job.jobId, TaskKind::Reduce, i, reduceLengths[i], share});
   return split;
}
//---------------------------------------------------------------------------
std::map<TaskRef, int> placeTasks(std::span<const Task> tasks, std::span<const int> vmIds) {
   if (vmIds.empty()) throw SchedulingError("cannot place tasks: no VMs available");
   std::map<TaskRef, int> assignment;
   for (size_t i = 0; i < tasks.size(); ++i) {
      if (!assignment.emplace(tasks[i].taskId, vmIds[i % vmIds.size()]).second)
         throw SchedulingError(fmt::format("task {} listed twice for placement", tasks[i].taskId));
   }
   return assignment;
}
//---------------------------------------------------------------------------
JobProgress::JobProgress(int jobId, std::vector<TaskRef> mapIds, std::vector<TaskRef> reduceIds, double shuffleDelay)
   : jobId_(jobId), mapIds_(std::move(mapIds)), reduceIds_(std::move(reduceIds)), shuffleDelay_(shuffleDelay) {
   if (mapIds_.empty() || reduceIds_.empty()) throw ValidationError(fmt::format("job {} needs maps and reduces", jobId));
}
//---------------------------------------------------------------------------
std::optional<ReduceLaunch> JobProgress::onMapComplete(TaskRef task) {
   if (std::find(mapIds_.begin(), mapIds_.end(), task) == mapIds_.end())
      throw ProtocolError(fmt::format("task {} is not a map of job {}", task, jobId_));
   if (std::find(mapsDone_.begin(), mapsDone_.end(), task) != mapsDone_.end())
      throw ProtocolError(fmt::format("duplicate completion of map {} in job {}", task, jobId_));
   mapsDone_.push_back(task);
   if (mapsDone_.size() < mapIds_.size()) return std::nullopt;
   launched_ = true;
   return ReduceLaunch{jobId_, shuffleDelay_};
}
//---------------------------------------------------------------------------
bool JobProgress::onReduceComplete(TaskRef task) {
   if (std::find(reduceIds_.begin(), reduceIds_.end(), task) == reduceIds_.end())
      throw ProtocolError(fmt::format("task {} is not a reduce of job {}", task, jobId_));
   if (!launched_) throw ProtocolError(fmt::format("reduce {} of job {} completed before the map barrier", task, jobId_));
   if (std::find(reducesDone_.begin(), reducesDone_.end(), task) != reducesDone_.end())
      throw ProtocolError(fmt::format("duplicate completion of reduce {} in job {}", task, jobId_));
   reducesDone_.push_back(task);
   return complete();
}
//---------------------------------------------------------------------------
// DatacenterEntity
//---------------------------------------------------------------------------
DatacenterEntity::DatacenterEntity(std::string name, std::vector<infra::VmInstance> vms)
   : SimEntity(std::move(name)), vms_(std::move(vms)), lastUpdate_(vms_.size(), 0.0), epoch_(vms_.size(), 0) {}
//---------------------------------------------------------------------------
size_t DatacenterEntity::vmIndex(int vmId) const {
   for (size_t i = 0; i < vms_.size(); ++i)
      if (vms_[i].id() == vmId) return i;
   throw SchedulingError(fmt::format("datacenter '{}' has no VM {}", name(), vmId));
}
//---------------------------------------------------------------------------
const infra::VmInstance& DatacenterEntity::vm(int vmId) const {
   return vms_[vmIndex(vmId)];
}
//---------------------------------------------------------------------------
void DatacenterEntity::processEvent(const SimEvent& ev) {
   switch (ev.tag) {
      case EventTag::TaskSubmit: {
         const auto& dispatch = ev.as<TaskDispatch>();
         size_t index = vmIndex(dispatch.vmId);
         if (running_.contains(dispatch.taskId)) throw ProtocolError(fmt::format("task {} submitted twice", dispatch.taskId));
         updateVm(index);
         vms_[index].assignTask(dispatch.taskId, dispatch.length);
         running_.emplace(dispatch.taskId, Running{dispatch, clock()});
         reschedule(index);
         break;
      }
      case EventTag::VmProcessingUpdate: {
         const auto& update = ev.as<VmUpdate>();
         size_t index = vmIndex(update.vmId);
         if (update.epoch != epoch_[index]) break; // superseded by a later queue change
         updateVm(index);
         reschedule(index);
         break;
      }
      default:
         throw ProtocolError(fmt::format("datacenter '{}' cannot handle {}", name(), sim::toString(ev.tag)));
   }
}
//---------------------------------------------------------------------------
void DatacenterEntity::updateVm(size_t index) {
   double now = clock();
   auto finished = vms_[index].advance(now - lastUpdate_[index]);
   lastUpdate_[index] = now;
   for (TaskRef task : finished) {
      auto it = running_.find(task);
      const auto& d = it->second.dispatch;
      if (d.replyTo != sim::kKernel)
         sendNow(d.replyTo, EventTag::TaskComplete, sim::makePayload(TaskCompletion{d.taskId, d.jobId, d.kind, d.vmId, it->second.startTime, now}));
      running_.erase(it);
   }
}
//---------------------------------------------------------------------------
void DatacenterEntity::reschedule(size_t index) {
   ++epoch_[index];
   if (auto next = vms_[index].timeToNextCompletion())
      send(id(), *next, EventTag::VmProcessingUpdate, sim::makePayload(VmUpdate{vms_[index].id(), epoch_[index]}));
}
//---------------------------------------------------------------------------
// SequentialBroker
//---------------------------------------------------------------------------
SequentialBroker::SequentialBroker(std::string name, sim::EntityId datacenter) : SimEntity(std::move(name)), datacenter_(datacenter) {}
//---------------------------------------------------------------------------
void SequentialBroker::submitJob(JobSpec job) {
   job.validate();
   if (started_) {
      if (jobTracker_ == sim::kKernel) throw ProtocolError("broker has no job tracker");
      sendNow(jobTracker_, EventTag::JobSubmit, sim::makePayload(std::move(job)));
   } else {
      pendingJobs_.push_back(std::move(job));
   }
}
//---------------------------------------------------------------------------
void SequentialBroker::submitSequential(int jobId, std::vector<std::vector<TaskDispatch>> lists, ListGate gate) {
   if (sequences_.contains(jobId)) throw ProtocolError(fmt::format("job {} already has a task sequence", jobId));
   Sequence seq;
   seq.released.assign(lists.size(), false);
   seq.lists = std::move(lists);
   seq.gate = gate;
   for (auto& list : seq.lists)
      for (auto& d : list) d.replyTo = id();
   sequences_.emplace(jobId, std::move(seq));
   if (auto it = earlyReleases_.find(jobId); it != earlyReleases_.end()) {
      auto indices = std::move(it->second);
      earlyReleases_.erase(it);
      for (size_t i : indices) release(jobId, i);
   }
   if (started_) tryDispatch(jobId);
}
//---------------------------------------------------------------------------
bool SequentialBroker::allListsDone() const {
   return std::all_of(sequences_.begin(), sequences_.end(), [](const auto& kv) { return kv.second.current >= kv.second.lists.size(); });
}
//---------------------------------------------------------------------------
void SequentialBroker::startEntity() {
   started_ = true;
   for (auto& job : pendingJobs_) {
      if (jobTracker_ == sim::kKernel) throw ProtocolError("broker has jobs but no job tracker");
      sendNow(jobTracker_, EventTag::JobSubmit, sim::makePayload(std::move(job)));
   }
   pendingJobs_.clear();
   for (auto& [jobId, seq] : sequences_) tryDispatch(jobId);
}
//---------------------------------------------------------------------------
void SequentialBroker::processEvent(const SimEvent& ev) {
   switch (ev.tag) {
      case EventTag::TaskSubmit:
         if (ev.holds<SequentialSubmission>()) {
            const auto& sub = ev.as<SequentialSubmission>();
            submitSequential(sub.jobId, sub.lists, sub.gate);
         } else {
            const auto& rel = ev.as<ListRelease>();
            release(rel.jobId, rel.listIndex);
         }
         break;
      case EventTag::TaskComplete:
         onCompletion(ev.as<TaskCompletion>());
         break;
      default:
         throw ProtocolError(fmt::format("broker '{}' cannot handle {}", name(), sim::toString(ev.tag)));
   }
}
//---------------------------------------------------------------------------
void SequentialBroker::release(int jobId, size_t listIndex) {
   auto it = sequences_.find(jobId);
   if (it == sequences_.end()) {
      earlyReleases_[jobId].push_back(listIndex);
      return;
   }
   auto& seq = it->second;
   if (listIndex >= seq.lists.size()) throw ProtocolError(fmt::format("job {} has no task list {}", jobId, listIndex));
   if (seq.released[listIndex]) throw ProtocolError(fmt::format("task list {} of job {} released twice", listIndex, jobId));
   seq.released[listIndex] = true;
   if (started_) tryDispatch(jobId);
}
//---------------------------------------------------------------------------
void SequentialBroker::tryDispatch(int jobId) {
   auto& seq = sequences_.at(jobId);
   while (seq.current < seq.lists.size()) {
      auto& list = seq.lists[seq.current];
      if (list.empty()) {
         spdlog::warn("job {}: task list {} is empty, skipping", jobId, seq.current);
         ++seq.current;
         continue;
      }
      if (seq.dispatched) return;
      if (seq.gate == ListGate::External && !seq.released[seq.current]) return;
      for (const auto& d : list) sendNow(datacenter_, EventTag::TaskSubmit, sim::makePayload(d));
      seq.dispatched = true;
      return;
   }
}
//---------------------------------------------------------------------------
void SequentialBroker::onCompletion(const TaskCompletion& done) {
   auto it = sequences_.find(done.jobId);
   if (it == sequences_.end()) throw ProtocolError(fmt::format("completion for unknown job {}", done.jobId));
   auto& seq = it->second;
   if (seq.current >= seq.lists.size() || !seq.dispatched) throw ProtocolError(fmt::format("unexpected completion of task {}", done.taskId));
   const auto& list = seq.lists[seq.current];
   if (std::none_of(list.begin(), list.end(), [&](const TaskDispatch& d) { return d.taskId == done.taskId; }))
      throw ProtocolError(fmt::format("task {} is not in the active list of job {}", done.taskId, done.jobId));

   completions_.push_back(done);
   if (statusListener_ != sim::kKernel) sendNow(statusListener_, EventTag::TaskComplete, sim::makePayload(done));

   if (++seq.completedInCurrent == list.size()) {
      ++seq.current;
      seq.completedInCurrent = 0;
      seq.dispatched = false;
      tryDispatch(done.jobId);
   }
}
//---------------------------------------------------------------------------
// TaskTracker
//---------------------------------------------------------------------------
TaskTracker::TaskTracker(std::string name, sim::EntityId broker) : SimEntity(std::move(name)), broker_(broker) {}
//---------------------------------------------------------------------------
int TaskTracker::activeSlots(int vmId) const {
   auto it = activeSlots_.find(vmId);
   return it == activeSlots_.end() ? 0 : it->second;
}
//---------------------------------------------------------------------------
void TaskTracker::processEvent(const SimEvent& ev) {
   switch (ev.tag) {
      case EventTag::TaskSubmit: {
         const auto& assignment = ev.as<JobAssignment>();
         SequentialSubmission sub{assignment.job.jobId, {}, ListGate::External};
         for (const auto* phase : {&assignment.split.maps, &assignment.split.reduces}) {
            auto placed = placeTasks(*phase, assignment.vmIds);
            std::vector<TaskDispatch> list;
            for (const auto& task : *phase) {
               int vm = placed.at(task.taskId);
               placement_[task.taskId] = vm;
               ++activeSlots_[vm];
               log_.push_back(StatusUpdate{clock(), task.taskId, task.jobId, vm, TaskStatus::Pending});
               list.push_back(TaskDispatch{task.taskId, task.jobId, task.kind, vm, task.length});
            }
            sub.lists.push_back(std::move(list));
         }
         sendNow(broker_, EventTag::TaskSubmit, sim::makePayload(std::move(sub)));
         break;
      }
      case EventTag::TaskComplete: {
         const auto& done = ev.as<TaskCompletion>();
         --activeSlots_[done.vmId];
         log_.push_back(StatusUpdate{clock(), done.taskId, done.jobId, done.vmId, TaskStatus::Done});
         if (jobTracker_ != sim::kKernel) sendNow(jobTracker_, EventTag::TaskComplete, ev.payload);
         break;
      }
      default:
         throw ProtocolError(fmt::format("task tracker '{}' cannot handle {}", name(), sim::toString(ev.tag)));
   }
}
//---------------------------------------------------------------------------
// JobTracker
//---------------------------------------------------------------------------
JobTracker::JobTracker(std::string name, net::DelayModel delay, std::vector<int> vmIds)
   : SimEntity(std::move(name)), delay_(delay), vmIds_(std::move(vmIds)) {
   delay_.validate();
}
//---------------------------------------------------------------------------
const JobProgress& JobTracker::progress(int jobId) const {
   auto it = progress_.find(jobId);
   if (it == progress_.end()) throw ValidationError(fmt::format("unknown job {}", jobId));
   return it->second;
}
//---------------------------------------------------------------------------
JobRecord& JobTracker::record(int jobId) {
   auto it = jobs_.find(jobId);
   if (it == jobs_.end()) throw ProtocolError(fmt::format("job tracker knows no job {}", jobId));
   return it->second;
}
//---------------------------------------------------------------------------
void JobTracker::processEvent(const SimEvent& ev) {
   switch (ev.tag) {
      case EventTag::JobSubmit: onJobSubmit(ev.as<JobSpec>()); break;
      case EventTag::DataFetchComplete: onFetchComplete(ev.as<int>()); break;
      case EventTag::TaskComplete: onTaskComplete(ev.as<TaskCompletion>()); break;
      case EventTag::ShuffleComplete: onShuffleComplete(ev.as<int>()); break;
      default:
         throw ProtocolError(fmt::format("job tracker '{}' cannot handle {}", name(), sim::toString(ev.tag)));
   }
}
//---------------------------------------------------------------------------
void JobTracker::onJobSubmit(const JobSpec& job) {
   job.validate();
   if (jobs_.contains(job.jobId)) throw ProtocolError(fmt::format("job id {} submitted twice", job.jobId));

   JobRecord rec;
   rec.spec = job;
   rec.split = splitJob(job, nextTaskId_);
   nextTaskId_ += job.nm + job.nr;
   rec.delay = net::delayBreakdown(job, delay_);
   if (job.vmSubset.empty()) {
      rec.vmIds = vmIds_;
   } else {
      for (int index : job.vmSubset) {
         if (static_cast<size_t>(index) >= vmIds_.size())
            throw SchedulingError(fmt::format("job {} references VM index {} but only {} VMs exist", job.jobId, index, vmIds_.size()));
         rec.vmIds.push_back(vmIds_[index]);
      }
   }
   for (auto& m : rec.split.maps) m.status = TaskStatus::Fetching;

   std::vector<TaskRef> mapIds, reduceIds;
   for (auto& m : rec.split.maps) mapIds.push_back(m.taskId);
   for (auto& r : rec.split.reduces) reduceIds.push_back(r.taskId);
   progress_.emplace(job.jobId, JobProgress(job.jobId, std::move(mapIds), std::move(reduceIds), rec.delay.shuffleDelay));

   sendNow(taskTracker_, EventTag::TaskSubmit, sim::makePayload(JobAssignment{job, rec.split, rec.vmIds}));
   send(id(), rec.delay.fetchDelay, EventTag::DataFetchComplete, sim::makePayload(job.jobId));
   jobs_.emplace(job.jobId, std::move(rec));
}
//---------------------------------------------------------------------------
void JobTracker::onFetchComplete(int jobId) {
   auto& rec = record(jobId);
   for (auto& m : rec.split.maps) m.status = TaskStatus::Running;
   sendNow(broker_, EventTag::TaskSubmit, sim::makePayload(ListRelease{jobId, 0}));
}
//---------------------------------------------------------------------------
void JobTracker::onTaskComplete(const TaskCompletion& done) {
   auto& rec = record(done.jobId);
   auto& tasks = done.kind == TaskKind::Map ? rec.split.maps : rec.split.reduces;
   auto it = std::find_if(tasks.begin(), tasks.end(), [&](const Task& t) { return t.taskId == done.taskId; });
   if (it == tasks.end()) throw ProtocolError(fmt::format("job {} has no {} task {}", done.jobId, toString(done.kind), done.taskId));
   it->vmId = done.vmId;
   it->startTime = done.startTime;
   it->finishTime = done.finishTime;
   it->status = TaskStatus::Done;

   auto& prog = progress_.at(done.jobId);
   if (done.kind == TaskKind::Map) {
      if (auto launch = prog.onMapComplete(done.taskId)) {
         spdlog::debug("job {}: maps done at t={}, reduces after {} s shuffle", done.jobId, clock(), launch->shuffleDelay);
         send(id(), launch->shuffleDelay, EventTag::ShuffleComplete, sim::makePayload(done.jobId));
      }
   } else if (prog.onReduceComplete(done.taskId)) {
      rec.complete = true;
      rec.completionTime = clock();
      spdlog::debug("job {} complete at t={}", done.jobId, clock());
   }
}
//---------------------------------------------------------------------------
void JobTracker::onShuffleComplete(int jobId) {
   auto& rec = record(jobId);
   for (auto& r : rec.split.reduces) r.status = TaskStatus::Running;
   sendNow(broker_, EventTag::TaskSubmit, sim::makePayload(ListRelease{jobId, 1}));
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
