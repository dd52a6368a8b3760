#pragma once
//---------------------------------------------------------------------------
#include <string>
#include <vector>
#include "mrsim/scenario.hpp"
#include "mrsim/simulation.hpp"
//---------------------------------------------------------------------------
// The four preset experiment groups and the sweep runner behind them
//---------------------------------------------------------------------------
namespace mrsim::experiment {
//---------------------------------------------------------------------------
/// Every group sweeps M1R1..M20R1 on a Small job with 3 Small VMs, varying at most one more variable
enum class ExperimentGroup {
   MrCombination = 1,
   VmCount = 2,
   VmType = 3,
   JobType = 4,
};
ExperimentGroup groupFromNumber(int number);
std::string_view describe(ExperimentGroup group);

scenario::Scenario groupScenario(ExperimentGroup group, net::DelayMode mode);
//---------------------------------------------------------------------------
struct RunOptions {
   /// Worker threads for sweep points; 0 picks the hardware concurrency
   unsigned threads = 0;
   bool captureTrace = false;
};

struct SweepResult {
   std::vector<scenario::SweepPoint> points;
   std::vector<SimulationResult> results;
   /// All report rows, ordered by sweep point then job
   std::vector<metrics::JobReport> rows;
   /// Dispatch traces of all points concatenated in point order
   std::string trace;
};

/// Run every sweep point (share-nothing, possibly in parallel); a failure names its point
SweepResult runScenario(const scenario::Scenario& scenario, const RunOptions& options = {});
SweepResult runGroup(ExperimentGroup group, net::DelayMode mode, const RunOptions& options = {});
//---------------------------------------------------------------------------
struct PlotFile {
   std::string name;
   std::string csv;
};

/// x/y series for charting a group's results. Pass the other delay mode's
/// result as `contrast` to get the makespan comparison of group 1.
std::vector<PlotFile> plotSeries(ExperimentGroup group, const SweepResult& result, const SweepResult* contrast = nullptr);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
