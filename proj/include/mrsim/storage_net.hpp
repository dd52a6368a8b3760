#pragma once
//---------------------------------------------------------------------------
#include <string_view>
//---------------------------------------------------------------------------
namespace mrsim::mapreduce {
struct JobSpec;
}
//---------------------------------------------------------------------------
namespace mrsim::net {
//---------------------------------------------------------------------------
enum class DelayMode { NoDelay, NetworkDelay };
std::string_view toString(DelayMode mode);
DelayMode delayModeFromString(std::string_view text);
//---------------------------------------------------------------------------
/// Storage fetch and shuffle are modeled analytically: every task moves
/// data_size / (nm + nr) MB at the full storage bandwidth, once before the
/// maps start and once between the last map and the reduces.
struct DelayModel {
   DelayMode mode = DelayMode::NoDelay;
   /// MB/s
   double storageBandwidth = 1000;
   /// Currency per second of delay. Fitted so the default job reproduces the published cost table.
   double networkCostPerUnit = 10.625;

   void validate() const;
   bool operator==(const DelayModel&) const = default;
};
//---------------------------------------------------------------------------
struct DelayBreakdown {
   double fetchDelay = 0;
   double shuffleDelay = 0;
   double delayTime() const { return fetchDelay + shuffleDelay; }
};
//---------------------------------------------------------------------------
/// Seconds between job submission and the start of its maps
double fetchDelay(const mapreduce::JobSpec& job, const DelayModel& model);
/// Seconds between the last map finish and the start of the reduces
double shuffleDelay(const mapreduce::JobSpec& job, const DelayModel& model);
DelayBreakdown delayBreakdown(const mapreduce::JobSpec& job, const DelayModel& model);
/// Delay time times the per-unit rate; zero (with a warning) in NoDelay mode
double networkCost(const mapreduce::JobSpec& job, const DelayModel& model);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
