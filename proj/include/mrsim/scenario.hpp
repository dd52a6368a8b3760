#pragma once
//---------------------------------------------------------------------------
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>
#include "mrsim/simulation.hpp"
//---------------------------------------------------------------------------
// Scenario files
//
// A scenario is a YAML document. Every section except `vm` and `jobs` is
// optional and falls back to the evaluation defaults:
//
//   name: smoke
//   datacenter: {pes: 500, ram: 20480, storage: 1000000, bandwidth: 1000, mips: 1000}
//   vm_types:                      # extra or overriding catalog rows
//     - {name: Tiny, image_size: 5000, ram: 256, mips: 125, bandwidth: 1000, pes: 1, cost_per_sec: 0.5}
//   vm: {type: Small, count: 3, capacity: mips}     # capacity: mips | mips_x_pes
//   jobs:
//     - {id: 1, type: Small, mr: M3R1, reduce_ratio: 1.0, vms: [0, 1]}
//     - {id: 2, length: 100000, data_size: 50000, mr: M2R1}
//   delay: {mode: network, storage_bandwidth: 1000, network_cost_per_unit: 10.625}
//   sweep:
//     mr: {from: 1, to: 20, reduces: 1}
//     vm_count: [3, 6, 9]          # or vm_type: [...] or job_type: [...]
//   output: {format: csv, path: out.csv, trace: trace.csv, plots: plots/}
//---------------------------------------------------------------------------
namespace mrsim::scenario {
//---------------------------------------------------------------------------
/// Malformed scenario text; line is 1-based, 0 when unknown
class ParseError : public Error {
   public:
   ParseError(int line, std::string field, const std::string& message);
   int line() const { return line_; }
   const std::string& field() const { return field_; }

   private:
   int line_;
   std::string field_;
};
//---------------------------------------------------------------------------
enum class SweepAxis { None, VmCount, VmType, JobType };
std::string_view toString(SweepAxis axis);

struct MrRange {
   int from = 1;
   int to = 20;
   int reduces = 1;
   bool operator==(const MrRange&) const = default;
};

struct Sweep {
   /// Base axis; applied to every job of the scenario
   std::optional<MrRange> mr;
   /// At most one secondary axis
   SweepAxis axis = SweepAxis::None;
   std::vector<int> vmCounts;
   std::vector<std::string> vmTypes;
   std::vector<std::string> jobTypes;
};

struct OutputSpec {
   std::string format = "csv";
   std::string path;
   std::string trace;
   std::string plots;
};

struct Scenario {
   std::string name;
   SimulationConfig base;
   infra::VmCatalog catalog;
   Sweep sweep;
   OutputSpec output;
};
//---------------------------------------------------------------------------
struct SweepPoint {
   size_t index;
   /// e.g. "vm_count=6 M4R1"
   std::string label;
   SimulationConfig config;
};

/// Points in row order: secondary axis value (outer), then map count (inner)
std::vector<SweepPoint> expandSweep(const Scenario& scenario);
/// Admission-check every point against the datacenter; throws infra::ProvisioningError
void checkProvisioning(const Scenario& scenario);

/// Parse and validate, including a provisioning dry run
Scenario parseScenario(std::string_view text);
Scenario loadScenario(const std::filesystem::path& path);
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
