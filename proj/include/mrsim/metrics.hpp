#pragma once
//---------------------------------------------------------------------------
#include <map>
#include <span>
#include <string>
#include <vector>
#include "mrsim/mapreduce.hpp"
//---------------------------------------------------------------------------
namespace mrsim::metrics {
//---------------------------------------------------------------------------
using mapreduce::TaskKind;
using mapreduce::TaskRef;
//---------------------------------------------------------------------------
struct TaskRecord {
   TaskRef taskId = 0;
   int jobId = 0;
   TaskKind kind = TaskKind::Map;
   int vmId = -1;
   double startTime = 0;
   double finishTime = 0;

   /// Pure processing time; fetch and shuffle delays are not included
   double execTime() const { return finishTime - startTime; }
   bool operator==(const TaskRecord&) const = default;
};
//---------------------------------------------------------------------------
/// One row of results: configuration echo plus the seven dependent variables
struct JobReport {
   int jobId = 0;
   std::string mrCombination;
   int vmCount = 0;
   std::string vmType;
   std::string jobType;
   std::string mode;

   double avgExec = 0;
   double maxExec = 0;
   double minExec = 0;
   double makespan = 0;
   double delayTime = 0;
   double vmCost = 0;
   double networkCost = 0;

   std::vector<TaskRecord> tasks;

   bool operator==(const JobReport&) const = default;
};
//---------------------------------------------------------------------------
/// Mean map exec time plus mean reduce exec time
double averageExecutionTime(std::span<const TaskRecord> records);
/// Longest map plus longest reduce
double maxExecutionTime(std::span<const TaskRecord> records);
/// Shortest map plus shortest reduce
double minExecutionTime(std::span<const TaskRecord> records);
/// Finish of the last reduce, measured from `submitTime`
double makespan(std::span<const TaskRecord> records, double submitTime = 0.0);
/// Sum of exec times, each billed at the rate of the VM that ran it
double vmComputationCost(std::span<const TaskRecord> records, const std::map<int, double>& costPerSecByVm);
/// Start of the last map (from `submitTime`) plus start of the last reduce minus the latest map finish
double delayTime(std::span<const TaskRecord> records, double submitTime = 0.0);

/// Records of completed tasks of one job
std::vector<TaskRecord> recordsOf(const mapreduce::JobRecord& job);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
