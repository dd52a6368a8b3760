#include <doctest.h>
#include "mrsim/metrics.hpp"
#include "mrsim/simulation.hpp"
//---------------------------------------------------------------------------
using namespace mrsim;
using namespace mrsim::metrics;
using mrsim::mapreduce::jobPreset;
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
TaskRecord rec(TaskRef id, TaskKind kind, int vm, double start, double finish) {
   return TaskRecord{id, 1, kind, vm, start, finish};
}
//---------------------------------------------------------------------------
std::vector<TaskRecord> twoMapsOneReduce() {
   return {rec(0, TaskKind::Map, 0, 0, 10), rec(1, TaskKind::Map, 1, 0, 20), rec(2, TaskKind::Reduce, 0, 20, 50)};
}
//---------------------------------------------------------------------------
JobReport runSmall(int nm, net::DelayMode mode = net::DelayMode::NoDelay, infra::VmSpec vm = infra::smallVm()) {
   SimulationConfig config;
   config.vmSpec = vm;
   config.jobs = {jobPreset("Small", 1, nm, 1)};
   config.delay.mode = mode;
   return simulate(config).reports.front();
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
TEST_SUITE("metrics") {
   TEST_CASE("execution time aggregates on a hand-made record set") {
      auto r = twoMapsOneReduce();
      CHECK(averageExecutionTime(r) == 45);
      CHECK(maxExecutionTime(r) == 50);
      CHECK(minExecutionTime(r) == 40);
      CHECK(makespan(r) == 50);
      CHECK(delayTime(r) == 0);
      CHECK(vmComputationCost(r, {{0, 1.0}, {1, 2.0}}) == 10 + 40 + 30);
   }

   TEST_CASE("missing phases and bad records are metric errors") {
      std::vector<TaskRecord> onlyMaps{rec(0, TaskKind::Map, 0, 0, 10)};
      CHECK_THROWS_AS(averageExecutionTime(onlyMaps), MetricError);
      CHECK_THROWS_AS(maxExecutionTime(onlyMaps), MetricError);
      CHECK_THROWS_AS(minExecutionTime(onlyMaps), MetricError);
      std::vector<TaskRecord> zero{rec(0, TaskKind::Map, 0, 5, 5), rec(1, TaskKind::Reduce, 0, 5, 6)};
      CHECK_THROWS_AS(averageExecutionTime(zero), MetricError);
      CHECK_THROWS_AS(vmComputationCost(twoMapsOneReduce(), {{0, 1.0}}), MetricError);
   }

   TEST_CASE("single map and reduce collapse avg, max, and min") {
      std::vector<TaskRecord> r{rec(0, TaskKind::Map, 0, 0, 7), rec(1, TaskKind::Reduce, 0, 7, 10)};
      CHECK(averageExecutionTime(r) == maxExecutionTime(r));
      CHECK(minExecutionTime(r) == maxExecutionTime(r));
   }

   TEST_CASE("small job M1R1 report") {
      auto r = runSmall(1);
      CHECK(r.avgExec == doctest::Approx(2903.04).epsilon(1e-12));
      CHECK(r.maxExec == r.avgExec);
      CHECK(r.minExec == r.avgExec);
      CHECK(r.makespan == doctest::Approx(2903.04).epsilon(1e-12));
      CHECK(r.vmCost == doctest::Approx(2903.04).epsilon(1e-12));
      CHECK(r.delayTime == 0);
      CHECK(r.networkCost == 0);
      CHECK(r.mrCombination == "M1R1");
      CHECK(r.mode == "none");
   }

   TEST_CASE("small job M3R1 on three VMs has no contention") {
      auto r = runSmall(3);
      CHECK(r.maxExec == doctest::Approx(967.68).epsilon(1e-12));
      CHECK(r.minExec == r.maxExec);
   }

   TEST_CASE("network delay adds fetch and shuffle to the makespan") {
      auto none = runSmall(1);
      auto delayed = runSmall(1, net::DelayMode::NetworkDelay);
      CHECK(delayed.makespan == doctest::Approx(3103.04).epsilon(1e-12));
      CHECK(delayed.delayTime == doctest::Approx(200).epsilon(1e-12));
      CHECK(delayed.makespan - none.makespan == doctest::Approx(delayed.delayTime).epsilon(1e-12));
      CHECK(delayed.networkCost == doctest::Approx(2125).epsilon(1e-12));
      CHECK(delayed.avgExec == none.avgExec);
   }

   TEST_CASE("measured delay times the rate matches the network cost") {
      for (int nm = 1; nm <= 20; ++nm) {
         auto r = runSmall(nm, net::DelayMode::NetworkDelay);
         CHECK(r.delayTime * 10.625 == doctest::Approx(r.networkCost).epsilon(1e-12));
      }
   }

   TEST_CASE("large VM cost equals small VM cost for the same work") {
      auto small = runSmall(1);
      auto large = runSmall(1, net::DelayMode::NoDelay, infra::largeVm());
      CHECK(large.avgExec == doctest::Approx(small.avgExec / 4).epsilon(1e-12));
      CHECK(large.vmCost == doctest::Approx(2903.04).epsilon(1e-12));
   }

   TEST_CASE("scaling job length scales exec, makespan, and cost") {
      for (int nm : {1, 4, 7, 13}) {
         SimulationConfig config;
         auto job = jobPreset("Small", 1, nm, 1);
         config.jobs = {job};
         auto base = simulate(config).reports.front();
         config.jobs[0].length *= 3;
         auto scaled = simulate(config).reports.front();
         CHECK(scaled.avgExec == doctest::Approx(3 * base.avgExec).epsilon(1e-12));
         CHECK(scaled.maxExec == doctest::Approx(3 * base.maxExec).epsilon(1e-12));
         CHECK(scaled.minExec == doctest::Approx(3 * base.minExec).epsilon(1e-12));
         CHECK(scaled.makespan == doctest::Approx(3 * base.makespan).epsilon(1e-12));
         CHECK(scaled.vmCost == doctest::Approx(3 * base.vmCost).epsilon(1e-12));
      }
   }

   TEST_CASE("report invariants across a sweep") {
      for (int nm = 1; nm <= 20; ++nm)
         for (auto mode : {net::DelayMode::NoDelay, net::DelayMode::NetworkDelay}) {
            auto r = runSmall(nm, mode);
            CHECK(r.minExec <= r.avgExec + 1e-9);
            CHECK(r.avgExec <= r.maxExec + 1e-9);
            double lastFinish = 0;
            for (auto& t : r.tasks) lastFinish = std::max(lastFinish, t.finishTime);
            CHECK(r.makespan == lastFinish);
            CHECK(r.makespan >= r.maxExec);
         }
   }
}
//---------------------------------------------------------------------------
