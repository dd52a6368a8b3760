#include "mrsim/storage_net.hpp"
#include <cmath>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include "mrsim/errors.hpp"
#include "mrsim/mapreduce.hpp"
//---------------------------------------------------------------------------
namespace mrsim::net {
//---------------------------------------------------------------------------
std::string_view toString(DelayMode mode) {
   return mode == DelayMode::NetworkDelay ? "network" : "none";
}
//---------------------------------------------------------------------------
DelayMode delayModeFromString(std::string_view text) {
   if (text == "none" || text == "nodelay") return DelayMode::NoDelay;
   if (text == "network" || text == "delay") return DelayMode::NetworkDelay;
   throw ValidationError(fmt::format("unknown delay mode '{}' (expected none or network)", text));
}
//---------------------------------------------------------------------------
void DelayModel::validate() const {
   if (!(storageBandwidth > 0) || !std::isfinite(storageBandwidth)) throw ValidationError("storage bandwidth must be positive");
   if (!(networkCostPerUnit >= 0) || !std::isfinite(networkCostPerUnit)) throw ValidationError("network cost per unit must be non-negative");
}
//---------------------------------------------------------------------------
namespace {
double perTaskTransfer(const mapreduce::JobSpec& job, const DelayModel& model) {
   job.validate();
   model.validate();
   if (model.mode == DelayMode::NoDelay) return 0.0;
   return job.dataSize / (static_cast<double>(job.nm + job.nr) * model.storageBandwidth);
}
}
//---------------------------------------------------------------------------
double fetchDelay(const mapreduce::JobSpec& job, const DelayModel& model) {
   return perTaskTransfer(job, model);
}
//---------------------------------------------------------------------------
double shuffleDelay(const mapreduce::JobSpec& job, const DelayModel& model) {
   // intermediate output per task is taken equal to the input share
   return perTaskTransfer(job, model);
}
//---------------------------------------------------------------------------
DelayBreakdown delayBreakdown(const mapreduce::JobSpec& job, const DelayModel& model) {
   return DelayBreakdown{fetchDelay(job, model), shuffleDelay(job, model)};
}
//---------------------------------------------------------------------------
double networkCost(const mapreduce::JobSpec& job, const DelayModel& model) {
   if (model.mode == DelayMode::NoDelay) {
      spdlog::warn("network cost requested for job {} without network delay; reporting 0", job.jobId);
      return 0.0;
   }
   return delayBreakdown(job, model).delayTime() * model.networkCostPerUnit;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
