#include "mrsim/scenario.hpp"
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <fmt/format.h>
#include <yaml-cpp/yaml.h>
//---------------------------------------------------------------------------
namespace mrsim::scenario {
//---------------------------------------------------------------------------
ParseError::ParseError(int line, std::string field, const std::string& message)
   : Error(ErrorCategory::Parse, line > 0 ? fmt::format("line {}: {}: {}", line, field, message) : fmt::format("{}: {}", field, message)),
     line_(line), field_(std::move(field)) {}
//---------------------------------------------------------------------------
std::string_view toString(SweepAxis axis) {
   switch (axis) {
      case SweepAxis::None: return "none";
      case SweepAxis::VmCount: return "vm_count";
      case SweepAxis::VmType: return "vm_type";
      case SweepAxis::JobType: return "job_type";
   }
   return "?";
}
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
int lineOf(const YAML::Node& node) {
   auto mark = node.Mark();
   return mark.line >= 0 ? mark.line + 1 : 0;
}
//---------------------------------------------------------------------------
std::string join(const std::string& path, const std::string& key) {
   return path.empty() ? key : path + "." + key;
}
//---------------------------------------------------------------------------
void requireMap(const YAML::Node& node, const std::string& path) {
   if (!node.IsMap()) throw ParseError(lineOf(node), path, "expected a mapping");
}
//---------------------------------------------------------------------------
void checkKeys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
   requireMap(node, path);
   for (auto it = node.begin(); it != node.end(); ++it) {
      auto key = it->first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
         throw ParseError(lineOf(it->first), join(path, key), "unknown key");
   }
}
//---------------------------------------------------------------------------
template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
   if (!node.IsScalar()) throw ParseError(lineOf(node), path, "expected a scalar value");
   try {
      return node.as<T>();
   } catch (const YAML::BadConversion&) {
      throw ParseError(lineOf(node), path, fmt::format("cannot interpret '{}'", node.Scalar()));
   }
}
//---------------------------------------------------------------------------
template <typename T>
void optional(const YAML::Node& parent, const std::string& path, const char* key, T& out) {
   if (auto child = parent[key]) out = scalar<T>(child, join(path, key));
}
//---------------------------------------------------------------------------
template <typename T>
T required(const YAML::Node& parent, const std::string& path, const char* key) {
   auto child = parent[key];
   if (!child) throw ParseError(lineOf(parent), join(path, key), "missing required field");
   return scalar<T>(child, join(path, key));
}
//---------------------------------------------------------------------------
template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& path) {
   if (!node.IsSequence()) throw ParseError(lineOf(node), path, "expected a list");
   std::vector<T> values;
   for (size_t i = 0; i < node.size(); ++i) values.push_back(scalar<T>(node[i], fmt::format("{}[{}]", path, i)));
   if (values.empty()) throw ParseError(lineOf(node), path, "list is empty");
   return values;
}
//---------------------------------------------------------------------------
/// Run a domain validation and report its failure at `node`
template <typename F>
void validated(const YAML::Node& node, const std::string& path, F&& check) {
   try {
      check();
   } catch (const ValidationError& e) {
      throw ParseError(lineOf(node), path, e.what());
   }
}
//---------------------------------------------------------------------------
infra::VmSpec parseVmSpec(const YAML::Node& node, const std::string& path) {
   checkKeys(node, path, {"name", "image_size", "ram", "mips", "bandwidth", "pes", "cost_per_sec"});
   infra::VmSpec spec;
   spec.name = required<std::string>(node, path, "name");
   spec.mips = required<double>(node, path, "mips");
   optional(node, path, "image_size", spec.imageSize);
   optional(node, path, "ram", spec.ram);
   optional(node, path, "bandwidth", spec.bandwidth);
   optional(node, path, "pes", spec.pes);
   optional(node, path, "cost_per_sec", spec.costPerSec);
   validated(node, path, [&] { spec.validate(); });
   return spec;
}
//---------------------------------------------------------------------------
mapreduce::JobSpec parseJob(const YAML::Node& node, const std::string& path, int position) {
   checkKeys(node, path, {"id", "type", "mr", "length", "data_size", "reduce_ratio", "vms"});
   mapreduce::JobSpec job;
   int id = position + 1;
   optional(node, path, "id", id);
   std::string type = "custom";
   optional(node, path, "type", type);
   validated(node, path, [&] {
      if (mapreduce::isJobPreset(type)) job = mapreduce::jobPreset(type, id);
   });
   job.jobId = id;
   job.jobType = type;
   if (!mapreduce::isJobPreset(type) && (!node["length"] || !node["data_size"]))
      throw ParseError(lineOf(node), path, "custom job types need length and data_size");
   optional(node, path, "length", job.length);
   optional(node, path, "data_size", job.dataSize);
   optional(node, path, "reduce_ratio", job.reduceRatio);

   auto mr = required<std::string>(node, path, "mr");
   validated(node["mr"], join(path, "mr"), [&] { std::tie(job.nm, job.nr) = mapreduce::parseMrCombination(mr); });
   if (auto vms = node["vms"]) job.vmSubset = list<int>(vms, join(path, "vms"));
   validated(node, path, [&] { job.validate(); });
   return job;
}
//---------------------------------------------------------------------------
void parseSweep(const YAML::Node& node, Scenario& sc) {
   const std::string path = "sweep";
   checkKeys(node, path, {"mr", "vm_count", "vm_type", "job_type"});
   if (auto mr = node["mr"]) {
      auto p = join(path, "mr");
      checkKeys(mr, p, {"from", "to", "reduces"});
      MrRange range;
      optional(mr, p, "from", range.from);
      optional(mr, p, "to", range.to);
      optional(mr, p, "reduces", range.reduces);
      if (range.from < 1 || range.to < range.from || range.reduces < 1)
         throw ParseError(lineOf(mr), p, "needs 1 <= from <= to and reduces >= 1");
      sc.sweep.mr = range;
   }
   int axes = 0;
   if (auto v = node["vm_count"]) {
      ++axes;
      sc.sweep.axis = SweepAxis::VmCount;
      sc.sweep.vmCounts = list<int>(v, join(path, "vm_count"));
      for (int count : sc.sweep.vmCounts)
         if (count < 1) throw ParseError(lineOf(v), join(path, "vm_count"), "VM counts must be at least 1");
   }
   if (auto v = node["vm_type"]) {
      ++axes;
      sc.sweep.axis = SweepAxis::VmType;
      sc.sweep.vmTypes = list<std::string>(v, join(path, "vm_type"));
      for (auto& name : sc.sweep.vmTypes)
         if (!sc.catalog.contains(name)) throw ParseError(lineOf(v), join(path, "vm_type"), fmt::format("unknown VM type '{}'", name));
   }
   if (auto v = node["job_type"]) {
      ++axes;
      sc.sweep.axis = SweepAxis::JobType;
      sc.sweep.jobTypes = list<std::string>(v, join(path, "job_type"));
      for (auto& name : sc.sweep.jobTypes)
         if (!mapreduce::isJobPreset(name)) throw ParseError(lineOf(v), join(path, "job_type"), fmt::format("unknown job type '{}'", name));
   }
   if (axes > 1) throw ParseError(lineOf(node), path, "at most one of vm_count, vm_type, job_type may be swept");
}
//---------------------------------------------------------------------------
Scenario parseDocument(const YAML::Node& root) {
   if (!root || root.IsNull()) throw ParseError(0, "<document>", "scenario is empty");
   checkKeys(root, "", {"name", "datacenter", "vm_types", "vm", "jobs", "delay", "sweep", "output"});
   Scenario sc;
   optional(root, "", "name", sc.name);

   if (auto dc = root["datacenter"]) {
      checkKeys(dc, "datacenter", {"pes", "ram", "storage", "bandwidth", "mips"});
      auto& cfg = sc.base.datacenter;
      optional(dc, "datacenter", "pes", cfg.pesTotal);
      optional(dc, "datacenter", "ram", cfg.ramTotal);
      optional(dc, "datacenter", "storage", cfg.storageTotal);
      optional(dc, "datacenter", "bandwidth", cfg.bandwidth);
      optional(dc, "datacenter", "mips", cfg.mipsPerPe);
      validated(dc, "datacenter", [&] { cfg.validate(); });
   }

   if (auto types = root["vm_types"]) {
      if (!types.IsSequence()) throw ParseError(lineOf(types), "vm_types", "expected a list");
      for (size_t i = 0; i < types.size(); ++i) sc.catalog.add(parseVmSpec(types[i], fmt::format("vm_types[{}]", i)));
   }

   auto vm = root["vm"];
   if (!vm) throw ParseError(lineOf(root), "vm", "missing required field");
   checkKeys(vm, "vm", {"type", "spec", "count", "capacity"});
   if (vm["spec"] && vm["type"]) throw ParseError(lineOf(vm), "vm", "give either type or spec, not both");
   if (auto spec = vm["spec"]) {
      sc.base.vmSpec = parseVmSpec(spec, "vm.spec");
      sc.catalog.add(sc.base.vmSpec);
   } else {
      auto type = required<std::string>(vm, "vm", "type");
      validated(vm["type"], "vm.type", [&] { sc.base.vmSpec = sc.catalog.find(type); });
   }
   sc.base.vmCount = required<int>(vm, "vm", "count");
   if (sc.base.vmCount < 1) throw ParseError(lineOf(vm["count"]), "vm.count", "must be at least 1");
   if (auto cap = vm["capacity"]) {
      auto text = scalar<std::string>(cap, "vm.capacity");
      validated(cap, "vm.capacity", [&] { sc.base.capacity = infra::capacityModelFromString(text); });
   }

   auto jobs = root["jobs"];
   if (!jobs) throw ParseError(lineOf(root), "jobs", "missing required field");
   if (!jobs.IsSequence() || jobs.size() == 0) throw ParseError(lineOf(jobs), "jobs", "expected a non-empty list");
   std::set<int> ids;
   for (size_t i = 0; i < jobs.size(); ++i) {
      auto path = fmt::format("jobs[{}]", i);
      auto job = parseJob(jobs[i], path, static_cast<int>(i));
      if (!ids.insert(job.jobId).second) throw ParseError(lineOf(jobs[i]), path, fmt::format("duplicate job id {}", job.jobId));
      sc.base.jobs.push_back(std::move(job));
   }

   if (auto delay = root["delay"]) {
      checkKeys(delay, "delay", {"mode", "storage_bandwidth", "network_cost_per_unit"});
      auto& model = sc.base.delay;
      if (auto mode = delay["mode"]) {
         auto text = scalar<std::string>(mode, "delay.mode");
         validated(mode, "delay.mode", [&] { model.mode = net::delayModeFromString(text); });
      }
      optional(delay, "delay", "storage_bandwidth", model.storageBandwidth);
      optional(delay, "delay", "network_cost_per_unit", model.networkCostPerUnit);
      validated(delay, "delay", [&] { model.validate(); });
   }

   if (auto sweep = root["sweep"]) parseSweep(sweep, sc);

   if (auto out = root["output"]) {
      checkKeys(out, "output", {"format", "path", "trace", "plots"});
      optional(out, "output", "format", sc.output.format);
      optional(out, "output", "path", sc.output.path);
      optional(out, "output", "trace", sc.output.trace);
      optional(out, "output", "plots", sc.output.plots);
      if (sc.output.format != "csv" && sc.output.format != "json")
         throw ParseError(lineOf(out["format"]), "output.format", "expected csv or json");
   }
   return sc;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
std::vector<SweepPoint> expandSweep(const Scenario& sc) {
   // secondary axis values, each a transformation of the base config
   struct Variant {
      std::string label;
      SimulationConfig config;
   };
   std::vector<Variant> variants;
   switch (sc.sweep.axis) {
      case SweepAxis::None: variants.push_back({"", sc.base}); break;
      case SweepAxis::VmCount: {
         auto counts = sc.sweep.vmCounts;
         std::sort(counts.begin(), counts.end());
         for (int count : counts) {
            auto cfg = sc.base;
            cfg.vmCount = count;
            variants.push_back({fmt::format("vm_count={}", count), cfg});
         }
         break;
      }
      case SweepAxis::VmType:
         for (auto& name : sc.sweep.vmTypes) {
            auto cfg = sc.base;
            cfg.vmSpec = sc.catalog.find(name);
            variants.push_back({"vm_type=" + name, cfg});
         }
         break;
      case SweepAxis::JobType:
         for (auto& name : sc.sweep.jobTypes) {
            auto cfg = sc.base;
            for (auto& job : cfg.jobs) {
               auto preset = mapreduce::jobPreset(name, job.jobId, job.nm, job.nr);
               preset.reduceRatio = job.reduceRatio;
               preset.vmSubset = job.vmSubset;
               job = preset;
            }
            variants.push_back({"job_type=" + name, cfg});
         }
         break;
   }

   std::vector<SweepPoint> points;
   for (auto& v : variants) {
      if (!sc.sweep.mr) {
         points.push_back(SweepPoint{points.size(), v.label, v.config});
         continue;
      }
      for (int nm = sc.sweep.mr->from; nm <= sc.sweep.mr->to; ++nm) {
         auto cfg = v.config;
         for (auto& job : cfg.jobs) {
            job.nm = nm;
            job.nr = sc.sweep.mr->reduces;
         }
         auto mr = fmt::format("M{}R{}", nm, sc.sweep.mr->reduces);
         points.push_back(SweepPoint{points.size(), v.label.empty() ? mr : v.label + " " + mr, std::move(cfg)});
      }
   }
   return points;
}
//---------------------------------------------------------------------------
void checkProvisioning(const Scenario& sc) {
   for (const auto& point : expandSweep(sc)) {
      infra::CapacityPool pool(point.config.datacenter);
      pool.provision(point.config.vmSpec, point.config.vmCount, point.config.capacity);
      for (auto& job : point.config.jobs)
         for (int index : job.vmSubset)
            if (index >= point.config.vmCount)
               throw ParseError(0, "jobs.vms", fmt::format("{}job {} references VM index {} but only {} VMs exist", point.label.empty() ? "" : point.label + ": ", job.jobId, index, point.config.vmCount));
   }
}
//---------------------------------------------------------------------------
Scenario parseScenario(std::string_view text) {
   YAML::Node root;
   try {
      root = YAML::Load(std::string(text));
   } catch (const YAML::ParserException& e) {
      throw ParseError(e.mark.line >= 0 ? e.mark.line + 1 : 0, "<document>", e.msg);
   }
   Scenario sc = parseDocument(root);
   checkProvisioning(sc);
   return sc;
}
//---------------------------------------------------------------------------
Scenario loadScenario(const std::filesystem::path& path) {
   std::ifstream in(path, std::ios::binary);
   if (!in) throw IoError(fmt::format("cannot open scenario file '{}'", path.string()));
   std::ostringstream buffer;
   buffer << in.rdbuf();
   return parseScenario(buffer.str());
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
