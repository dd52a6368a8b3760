// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include "mrsim/experiment.hpp"
#include "mrsim/report.hpp"
#include "oracles.hpp"
//---------------------------------------------------------------------------
using namespace mrsim;
using experiment::ExperimentGroup;
using experiment::SweepResult;
using metrics::JobReport;
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
// Tolerances
constexpr double kTableAbs = 0.001;
constexpr double kTableRuntimeSeconds = 5.0;
constexpr double kFlatteningShare = 0.20;
constexpr double kExactAbs = 1e-9;
constexpr double kReduction6 = 40.0, kReduction9 = 50.0, kReductionBand = 15.0;
constexpr double kVmTypeRel = 1e-12;
constexpr double kJobCostRel = 1e-6;
constexpr double kConservationRel = 1e-9;
constexpr double kOracleAbs = 1e-6;
//---------------------------------------------------------------------------
struct Outcome {
   bool pass = true;
   std::string detail;
   std::vector<std::string> failures;

   void require(bool ok, const std::string& what) {
      if (ok) return;
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
   }
};
//---------------------------------------------------------------------------
bool relClose(double a, double b, double rel) {
   return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}
//---------------------------------------------------------------------------
std::vector<const JobReport*> rowsWhere(const SweepResult& r, const std::function<bool(const JobReport&)>& pred) {
   std::vector<const JobReport*> out;
   for (auto& row : r.rows)
      if (pred(row)) out.push_back(&row);
   return out;
}
//---------------------------------------------------------------------------
SweepResult group(ExperimentGroup g, net::DelayMode mode, bool trace = false) {
   return experiment::runGroup(g, mode, {0, trace});
}
//---------------------------------------------------------------------------
Outcome tableReproduction() {
   Outcome o;
   auto begin = std::chrono::steady_clock::now();
   auto result = group(ExperimentGroup::VmCount, net::DelayMode::NetworkDelay);
   double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
   o.require(result.rows.size() == 60, fmt::format("expected 60 rows, got {}", result.rows.size()));
   double worst = 0;
   for (int vms : {3, 6, 9}) {
      auto rows = rowsWhere(result, [&](auto& r) { return r.vmCount == vms; });
      o.require(rows.size() == 20, fmt::format("{} VMs: {} rows", vms, rows.size()));
      for (size_t i = 0; i < rows.size() && i < 20; ++i) {
         double err = std::abs(rows[i]->networkCost - testing::kPublishedNetworkCost[i]);
         worst = std::max(worst, err);
         o.require(err <= kTableAbs, fmt::format("{} VMs {}: {} vs {}", vms, rows[i]->mrCombination, rows[i]->networkCost, testing::kPublishedNetworkCost[i]));
         auto first = rowsWhere(result, [&](auto& r) { return r.vmCount == 3 && r.mrCombination == rows[i]->mrCombination; });
         o.require(!first.empty() && first[0]->networkCost == rows[i]->networkCost, fmt::format("{} differs between VM counts", rows[i]->mrCombination));
      }
   }
   o.require(seconds < kTableRuntimeSeconds, fmt::format("took {:.3f} s", seconds));
   o.detail = fmt::format("60 values, max |err| {:.2e}, {:.3f} s", worst, seconds);
   return o;
}
//---------------------------------------------------------------------------
Outcome execTimeShape() {
   Outcome o;
   double flatWorst = 0, drop23 = 0;
   for (auto mode : {net::DelayMode::NoDelay, net::DelayMode::NetworkDelay}) {
      auto rows = group(ExperimentGroup::MrCombination, mode).rows;
      o.require(rows.size() == 20, "expected 20 rows");
      if (rows.size() != 20) return o;
      for (int nm = 1; nm < 3; ++nm) {
         auto& r = rows[nm - 1];
         o.require(r.avgExec == r.maxExec && r.avgExec == r.minExec, fmt::format("M{}R1: avg/max/min {} {} {}", nm, r.avgExec, r.maxExec, r.minExec));
      }
      for (int nm = 1; nm < 20; ++nm)
         o.require(rows[nm].avgExec <= rows[nm - 1].avgExec, fmt::format("avg rises from M{}R1 to M{}R1", nm, nm + 1));
      drop23 = rows[1].avgExec - rows[2].avgExec;
      for (int nm = 10; nm < 20; ++nm) {
         double step = std::abs(rows[nm].avgExec - rows[nm - 1].avgExec);
         flatWorst = std::max(flatWorst, step);
         o.require(step < kFlatteningShare * drop23, fmt::format("step M{}->M{} = {} vs drop {}", nm, nm + 1, step, drop23));
      }
   }
   o.detail = fmt::format("drop M2->M3 {:.3f} s, largest step beyond M10 {:.3f} s ({:.1f}%)", drop23, flatWorst, 100 * flatWorst / drop23);
   return o;
}
//---------------------------------------------------------------------------
Outcome makespanGap() {
   Outcome o;
   auto none = group(ExperimentGroup::MrCombination, net::DelayMode::NoDelay).rows;
   auto delayed = group(ExperimentGroup::MrCombination, net::DelayMode::NetworkDelay).rows;
   o.require(none.size() == 20 && delayed.size() == 20, "expected 20 rows per mode");
   if (none.size() != 20 || delayed.size() != 20) return o;
   double previous = INFINITY;
   for (size_t i = 0; i < 20; ++i) {
      double gap = delayed[i].makespan - none[i].makespan;
      o.require(delayed[i].makespan > none[i].makespan, fmt::format("{}: no gap", none[i].mrCombination));
      o.require(std::abs(gap - delayed[i].delayTime) <= kExactAbs * std::max(1.0, gap), fmt::format("{}: gap {} vs delay {}", none[i].mrCombination, gap, delayed[i].delayTime));
      o.require(gap < previous, fmt::format("{}: gap {} not below {}", none[i].mrCombination, gap, previous));
      previous = gap;
   }
   double first = delayed[0].makespan - none[0].makespan;
   o.require(std::abs(first - 200.0) <= kExactAbs * 200, fmt::format("M1R1 gap {}", first));
   o.detail = fmt::format("gap M1R1 {:.3f} s, M20R1 {:.3f} s", first, previous);
   return o;
}
//---------------------------------------------------------------------------
Outcome vmCountReduction() {
   Outcome o;
   auto result = group(ExperimentGroup::VmCount, net::DelayMode::NoDelay);
   auto by = [&](int vms) { return rowsWhere(result, [&](auto& r) { return r.vmCount == vms; }); };
   auto r3 = by(3), r6 = by(6), r9 = by(9);
   o.require(r3.size() == 20 && r6.size() == 20 && r9.size() == 20, "expected 20 rows per VM count");
   if (!o.pass) return o;
   double sum6 = 0, sum9 = 0;
   for (size_t i = 0; i < 20; ++i) {
      sum6 += 100 * (1 - r6[i]->avgExec / r3[i]->avgExec);
      sum9 += 100 * (1 - r9[i]->avgExec / r3[i]->avgExec);
      o.require(r6[i]->avgExec <= r3[i]->avgExec && r9[i]->avgExec <= r6[i]->avgExec, fmt::format("{}: more VMs raised avg exec", r3[i]->mrCombination));
   }
   double mean6 = sum6 / 20, mean9 = sum9 / 20;
   o.require(std::abs(mean6 - kReduction6) <= kReductionBand, fmt::format("3->6 reduction {:.2f}%", mean6));
   o.require(std::abs(mean9 - kReduction9) <= kReductionBand, fmt::format("3->9 reduction {:.2f}%", mean9));
   o.detail = fmt::format("mean reduction 3->6 {:.1f}%, 3->9 {:.1f}% (reduce_ratio 1.0)", mean6, mean9);
   return o;
}
//---------------------------------------------------------------------------
Outcome vmTypeScaling() {
   Outcome o;
   auto result = group(ExperimentGroup::VmType, net::DelayMode::NoDelay);
   auto by = [&](const char* type) { return rowsWhere(result, [&](auto& r) { return r.vmType == type; }); };
   auto small = by("Small"), medium = by("Medium"), large = by("Large");
   o.require(small.size() == 20 && medium.size() == 20 && large.size() == 20, "expected 20 rows per VM type");
   if (!o.pass) return o;
   double worst = 0;
   for (size_t i = 0; i < 20; ++i) {
      o.require(relClose(medium[i]->avgExec, 0.5 * small[i]->avgExec, kVmTypeRel), fmt::format("{}: Medium {} vs Small {}", small[i]->mrCombination, medium[i]->avgExec, small[i]->avgExec));
      o.require(relClose(large[i]->avgExec, 0.25 * small[i]->avgExec, kVmTypeRel), fmt::format("{}: Large {} vs Small {}", small[i]->mrCombination, large[i]->avgExec, small[i]->avgExec));
      // the placement is identical, so every task scales on its own
      for (size_t t = 0; t < small[i]->tasks.size(); ++t) {
         double ref = small[i]->tasks[t].execTime();
         o.require(relClose(medium[i]->tasks[t].execTime(), ref / 2, kVmTypeRel) && relClose(large[i]->tasks[t].execTime(), ref / 4, kVmTypeRel),
                   fmt::format("{} task {} does not scale as 1/MIPS", small[i]->mrCombination, t));
         o.require(medium[i]->tasks[t].vmId == small[i]->tasks[t].vmId, "placement differs between VM types");
      }
      worst = std::max({worst, std::abs(medium[i]->avgExec / small[i]->avgExec - 0.5), std::abs(large[i]->avgExec / small[i]->avgExec - 0.25)});
   }
   o.detail = fmt::format("Medium -50%, Large -75% at every MR point (max ratio err {:.1e})", worst);
   return o;
}
//---------------------------------------------------------------------------
Outcome jobTypeCost() {
   Outcome o;
   auto result = group(ExperimentGroup::JobType, net::DelayMode::NoDelay);
   auto by = [&](const char* type) { return rowsWhere(result, [&](auto& r) { return r.jobType == type; }); };
   auto small = by("Small"), medium = by("Medium"), big = by("Big");
   o.require(small.size() == 20 && medium.size() == 20 && big.size() == 20, "expected 20 rows per job type");
   if (!o.pass) return o;
   double worst = 0;
   for (size_t i = 0; i < 20; ++i) {
      o.require(relClose(big[i]->vmCost, 2 * medium[i]->vmCost, kJobCostRel), fmt::format("{}: Big {} vs Medium {}", small[i]->mrCombination, big[i]->vmCost, medium[i]->vmCost));
      o.require(relClose(medium[i]->vmCost, 2 * small[i]->vmCost, kJobCostRel), fmt::format("{}: Medium {} vs Small {}", small[i]->mrCombination, medium[i]->vmCost, small[i]->vmCost));
      worst = std::max({worst, std::abs(big[i]->vmCost / medium[i]->vmCost - 2), std::abs(medium[i]->vmCost / small[i]->vmCost - 2)});
   }
   o.detail = fmt::format("Small:Medium:Big = 1:2:4 at every MR point (max ratio err {:.1e})", worst);
   return o;
}
//---------------------------------------------------------------------------
Outcome determinism() {
   Outcome o;
   size_t bytes = 0;
   for (int g = 1; g <= 4; ++g)
      for (auto mode : {net::DelayMode::NoDelay, net::DelayMode::NetworkDelay}) {
         auto a = group(experiment::groupFromNumber(g), mode, true);
         auto b = experiment::runGroup(experiment::groupFromNumber(g), mode, {1, true});
         o.require(!a.trace.empty() && a.trace == b.trace, fmt::format("group {} {} trace differs", g, net::toString(mode)));
         o.require(report::formatCsv(a.rows) == report::formatCsv(b.rows), fmt::format("group {} {} CSV differs", g, net::toString(mode)));
         o.require(report::formatJson(a.rows) == report::formatJson(b.rows), fmt::format("group {} {} JSON differs", g, net::toString(mode)));
         bytes += a.trace.size();
      }
   o.detail = fmt::format("4 groups x 2 modes, {} trace bytes compared", bytes);
   return o;
}
//---------------------------------------------------------------------------
void checkRun(Outcome& o, const SimulationConfig& config, const SimulationResult& result, const std::string& label) {
   for (auto& job : result.jobs) {
      double lastMap = 0;
      for (auto& m : job.split.maps) lastMap = std::max(lastMap, m.finishTime);
      for (auto& r : job.split.reduces) o.require(r.startTime >= lastMap, fmt::format("{} job {}: reduce starts before last map", label, job.spec.jobId));
   }
   std::map<int, double> lengthOnVm;
   for (auto& job : result.jobs)
      for (const auto* phase : {&job.split.maps, &job.split.reduces})
         for (auto& t : *phase) lengthOnVm[t.vmId] += t.length;
   for (auto& vm : result.vms) {
      o.require(relClose(vm.workDone, vm.capacity * vm.busyTime, kConservationRel), fmt::format("{} VM {}: work {} vs capacity x busy {}", label, vm.vmId, vm.workDone, vm.capacity * vm.busyTime));
      o.require(relClose(vm.workDone, lengthOnVm[vm.vmId], kConservationRel) || (vm.workDone == 0 && lengthOnVm[vm.vmId] == 0),
                fmt::format("{} VM {}: work {} vs assigned {}", label, vm.vmId, vm.workDone, lengthOnVm[vm.vmId]));
   }
   for (auto& r : result.reports) o.require(r.minExec <= r.avgExec && r.avgExec <= r.maxExec, fmt::format("{} job {}: min/avg/max out of order", label, r.jobId));
   auto& dc = config.datacenter;
   o.require(result.pesUsed <= dc.pesTotal && result.ramUsed <= dc.ramTotal && result.storageUsed <= dc.storageTotal, fmt::format("{}: datacenter over-committed", label));
}
//---------------------------------------------------------------------------
Outcome invariants() {
   Outcome o;
   size_t runs = 0;
   for (int g = 1; g <= 4; ++g)
      for (auto mode : {net::DelayMode::NoDelay, net::DelayMode::NetworkDelay}) {
         auto result = group(experiment::groupFromNumber(g), mode);
         for (size_t i = 0; i < result.points.size(); ++i, ++runs) checkRun(o, result.points[i].config, result.results[i], result.points[i].label);
      }
   // multi-job runs with staggered arrivals on shared VMs
   for (int nm = 1; nm <= 8; ++nm)
      for (int vms : {1, 2, 5}) {
         SimulationConfig config;
         config.vmCount = vms;
         config.vmSpec = nm % 2 ? infra::mediumVm() : infra::smallVm();
         config.delay.mode = net::DelayMode::NetworkDelay;
         config.jobs = {mapreduce::jobPreset("Small", 1, nm, 1), mapreduce::jobPreset("Big", 2, 9 - nm, 2), mapreduce::jobPreset("Medium", 3, nm + 2, 3)};
         config.jobs[2].reduceRatio = 0.3;
         checkRun(o, config, simulate(config), fmt::format("mixed nm={} vms={}", nm, vms));
         ++runs;
      }
   o.detail = fmt::format("{} runs: barrier, work conservation, min<=avg<=max, capacity", runs);
   return o;
}
//---------------------------------------------------------------------------
Outcome oracleEquivalence() {
   Outcome o;
   size_t cases = 0, tasks = 0;
   double worst = 0;
   for (int nm = 1; nm <= 5; ++nm)
      for (int nr = 1; nr <= 3; ++nr)
         for (int vms = 1; vms <= 3; ++vms)
            for (auto spec : {infra::smallVm(), infra::mediumVm(), infra::largeVm()})
               for (double ratio : {1.0, 0.4, 2.5}) {
                  SimulationConfig config;
                  config.vmSpec = spec;
                  config.vmCount = vms;
                  auto job = mapreduce::jobPreset("Small", 1, nm, nr);
                  job.reduceRatio = ratio;
                  config.jobs = {job};
                  auto report = simulate(config).reports.front();
                  auto expected = testing::singleJobOracle(job.length, nm, nr, ratio, vms, spec.mips);
                  o.require(report.tasks.size() == expected.size(), "task count differs");
                  if (report.tasks.size() != expected.size()) continue;
                  for (size_t t = 0; t < expected.size(); ++t) {
                     auto& got = report.tasks[t];
                     auto& want = expected[t];
                     double err = std::max(std::abs(got.finishTime - want.finish), std::abs(got.startTime - want.start));
                     worst = std::max(worst, err);
                     o.require(err <= kOracleAbs && (got.kind == metrics::TaskKind::Reduce) == want.reduce && got.vmId == want.vm,
                               fmt::format("M{}R{} {} VMs {} ratio {} task {}: ({}, {}) vs ({}, {})", nm, nr, vms, spec.name, ratio, t, got.startTime, got.finishTime, want.start, want.finish));
                     ++tasks;
                  }
                  ++cases;
               }
   o.detail = fmt::format("{} cases, {} tasks, max |err| {:.1e} s", cases, tasks, worst);
   return o;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
int main() {
   spdlog::set_level(spdlog::level::err);
   struct Criterion {
      const char* name;
      Outcome (*check)();
   };
   const Criterion criteria[] = {
      {"network cost table for 3/6/9 VMs", tableReproduction},
      {"exec time vs MR combination: equal at nm<3, non-increasing, flattening", execTimeShape},
      {"makespan gap equals delay time and narrows", makespanGap},
      {"VM count 3->6->9 reduces average exec time", vmCountReduction},
      {"VM type scales exec time as 1/MIPS", vmTypeScaling},
      {"VM cost doubles with job size", jobTypeCost},
      {"kernel determinism on all group presets", determinism},
      {"invariant suite", invariants},
      {"closed-form processor-sharing oracle", oracleEquivalence},
   };
   int failed = 0;
   int index = 0;
   for (auto& c : criteria) {
      ++index;
      Outcome o;
      try {
         o = c.check();
      } catch (const std::exception& e) {
         o.pass = false;
         o.failures.push_back(fmt::format("exception: {}", e.what()));
      }
      std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
      for (auto& f : o.failures) std::printf("       %s\n", f.c_str());
      if (!o.pass) ++failed;
   }
   std::printf("%d/%d criteria passed\n", index - failed, index);
   return failed == 0 ? 0 : 1;
}
//---------------------------------------------------------------------------
