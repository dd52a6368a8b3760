#include "mrsim/infra.hpp"
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
//---------------------------------------------------------------------------
namespace mrsim::infra {
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
void requirePositive(double value, std::string_view what) {
   if (!(value > 0) || !std::isfinite(value)) throw ValidationError(fmt::format("{} must be positive, got {}", what, value));
}
//---------------------------------------------------------------------------
/// Remaining work below this is treated as finished (absorbs rounding in dt)
double completionSlack(double length) {
   return std::max(1e-9, 1e-12 * length);
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
void DatacenterConfig::validate() const {
   if (pesTotal <= 0) throw ValidationError("datacenter pes must be positive");
   requirePositive(ramTotal, "datacenter ram");
   requirePositive(storageTotal, "datacenter storage");
   requirePositive(bandwidth, "datacenter bandwidth");
   requirePositive(mipsPerPe, "datacenter mips");
}
//---------------------------------------------------------------------------
std::string_view toString(CapacityModel model) {
   return model == CapacityModel::AggregatePes ? "mips_x_pes" : "mips";
}
//---------------------------------------------------------------------------
CapacityModel capacityModelFromString(std::string_view text) {
   if (text == "mips") return CapacityModel::VmMips;
   if (text == "mips_x_pes") return CapacityModel::AggregatePes;
   throw ValidationError(fmt::format("unknown capacity model '{}' (expected mips or mips_x_pes)", text));
}
//---------------------------------------------------------------------------
void VmSpec::validate() const {
   if (name.empty()) throw ValidationError("VM spec needs a name");
   requirePositive(mips, "VM mips");
   if (pes < 1) throw ValidationError("VM pes must be at least 1");
   if (!(costPerSec >= 0) || !std::isfinite(costPerSec)) throw ValidationError("VM cost per second must be non-negative");
   if (!(imageSize >= 0) || !(ram >= 0) || !(bandwidth >= 0)) throw ValidationError("VM sizes must be non-negative");
}
//---------------------------------------------------------------------------
VmSpec smallVm() { return VmSpec{"Small", 10000, 512, 250, 1000, 1, 1}; }
VmSpec mediumVm() { return VmSpec{"Medium", 20000, 1024, 500, 1000, 2, 2}; }
VmSpec largeVm() { return VmSpec{"Large", 40000, 2048, 1000, 1000, 4, 4}; }
//---------------------------------------------------------------------------
VmCatalog::VmCatalog() {
   add(smallVm());
   add(mediumVm());
   add(largeVm());
}
//---------------------------------------------------------------------------
void VmCatalog::add(VmSpec spec) {
   spec.validate();
   auto name = spec.name;
   specs_.insert_or_assign(std::move(name), std::move(spec));
}
//---------------------------------------------------------------------------
bool VmCatalog::contains(std::string_view name) const {
   return specs_.find(name) != specs_.end();
}
//---------------------------------------------------------------------------
const VmSpec& VmCatalog::find(std::string_view name) const {
   auto it = specs_.find(name);
   if (it == specs_.end()) throw ValidationError(fmt::format("unknown VM type '{}'", name));
   return it->second;
}
//---------------------------------------------------------------------------
std::vector<std::string> VmCatalog::names() const {
   std::vector<std::string> result;
   for (auto& [name, spec] : specs_) result.push_back(name);
   return result;
}
//---------------------------------------------------------------------------
std::string_view toString(Dimension dim) {
   switch (dim) {
      case Dimension::Pes: return "pes";
      case Dimension::Ram: return "ram";
      case Dimension::Storage: return "storage";
   }
   return "?";
}
//---------------------------------------------------------------------------
VmInstance::VmInstance(int id, VmSpec spec, CapacityModel model)
   : id_(id), spec_(std::move(spec)), model_(model), capacity_(spec_.capacity(model)) {
   spec_.validate();
}
//---------------------------------------------------------------------------
bool VmInstance::hosts(TaskRef task) const {
   return std::any_of(queue_.begin(), queue_.end(), [&](const Entry& e) { return e.task == task; });
}
//---------------------------------------------------------------------------
double VmInstance::remaining(TaskRef task) const {
   for (auto& e : queue_)
      if (e.task == task) return e.remaining;
   throw ValidationError(fmt::format("task {} is not queued on VM {}", task, id_));
}
//---------------------------------------------------------------------------
void VmInstance::assignTask(TaskRef task, double length) {
   if (!(length > 0) || !std::isfinite(length)) throw ValidationError(fmt::format("task {} length must be positive, got {}", task, length));
   if (hosts(task)) throw ProtocolError(fmt::format("task {} is already queued on VM {}", task, id_));
   queue_.push_back(Entry{task, length, length});
}
//---------------------------------------------------------------------------
std::vector<TaskRef> VmInstance::advance(double dt) {
   if (!(dt >= 0) || !std::isfinite(dt)) throw ValidationError(fmt::format("advance needs dt >= 0, got {}", dt));
   std::vector<TaskRef> completed;
   if (dt == 0 || queue_.empty()) return completed;

   double share = capacity_ / static_cast<double>(queue_.size());
   double progress = share * dt;
   busyTime_ += dt;
   for (auto& e : queue_) {
      double step = std::min(e.remaining, progress);
      workDone_ += step;
      e.remaining -= step;
      if (e.remaining <= completionSlack(e.length)) {
         workDone_ += e.remaining;
         e.remaining = 0;
      }
   }
   for (auto& e : queue_)
      if (e.remaining == 0) completed.push_back(e.task);
   std::erase_if(queue_, [](const Entry& e) { return e.remaining == 0; });
   return completed;
}
//---------------------------------------------------------------------------
std::optional<double> VmInstance::timeToNextCompletion() const {
   if (queue_.empty()) return std::nullopt;
   double least = std::min_element(queue_.begin(), queue_.end(), [](const Entry& a, const Entry& b) { return a.remaining < b.remaining; })->remaining;
   return least * static_cast<double>(queue_.size()) / capacity_;
}
//---------------------------------------------------------------------------
std::vector<std::pair<TaskRef, double>> VmInstance::projectedFinishTimes() const {
   // Shortest remaining finishes first; after it leaves, the rest speed up
   std::vector<Entry> order = queue_;
   std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) { return a.remaining < b.remaining; });
   std::vector<std::pair<TaskRef, double>> finish;
   double t = 0, done = 0;
   size_t k = order.size();
   for (size_t i = 0; i < order.size(); ++i, --k) {
      t += (order[i].remaining - done) * static_cast<double>(k) / capacity_;
      done = order[i].remaining;
      finish.emplace_back(order[i].task, t);
   }
   return finish;
}
//---------------------------------------------------------------------------
CapacityPool::CapacityPool(DatacenterConfig config) : config_(config) {
   config_.validate();
}
//---------------------------------------------------------------------------
std::vector<VmInstance> CapacityPool::provision(const VmSpec& spec, int count, CapacityModel model) {
   if (count < 1) throw ValidationError(fmt::format("VM count must be at least 1, got {}", count));
   spec.validate();

   auto pes = pesUsed_ + static_cast<std::int64_t>(count) * spec.pes;
   double ram = ramUsed_ + count * spec.ram;
   double storage = storageUsed_ + count * spec.imageSize;

   std::vector<Dimension> violated;
   std::string detail;
   if (pes > config_.pesTotal) {
      violated.push_back(Dimension::Pes);
      detail += fmt::format(" pes {} > {};", pes, config_.pesTotal);
   }
   if (ram > config_.ramTotal) {
      violated.push_back(Dimension::Ram);
      detail += fmt::format(" ram {} > {};", ram, config_.ramTotal);
   }
   if (storage > config_.storageTotal) {
      violated.push_back(Dimension::Storage);
      detail += fmt::format(" storage {} > {};", storage, config_.storageTotal);
   }
   if (!violated.empty()) {
      detail.pop_back();
      throw ProvisioningError(std::move(violated), fmt::format("cannot provision {} {} VM(s):{}", count, spec.name, detail));
   }

   pesUsed_ = pes;
   ramUsed_ = ram;
   storageUsed_ = storage;
   std::vector<VmInstance> vms;
   vms.reserve(count);
   for (int i = 0; i < count; ++i) vms.emplace_back(nextVmId_++, spec, model);
   return vms;
}
//---------------------------------------------------------------------------
std::vector<VmInstance> provision(const DatacenterConfig& config, const VmSpec& spec, int count, CapacityModel model) {
   CapacityPool pool(config);
   return pool.provision(spec, count, model);
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
