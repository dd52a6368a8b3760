// mrsim: run MapReduce-on-cloud simulations from scenario files or the preset experiment groups
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include "mrsim/experiment.hpp"
#include "mrsim/report.hpp"
#include "mrsim/scenario.hpp"
//---------------------------------------------------------------------------
namespace fs = std::filesystem;
using namespace mrsim;
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
enum ExitCode { Ok = 0, Usage = 1, ParseFailure = 2, ProvisionFailure = 3, RunFailure = 4, IoFailure = 5 };
//---------------------------------------------------------------------------
int exitCodeFor(ErrorCategory category) {
   switch (category) {
      case ErrorCategory::Parse:
      case ErrorCategory::Validation: return ParseFailure;
      case ErrorCategory::Provisioning: return ProvisionFailure;
      case ErrorCategory::Protocol:
      case ErrorCategory::Run: return RunFailure;
      case ErrorCategory::Io: return IoFailure;
   }
   return RunFailure;
}
//---------------------------------------------------------------------------
/// Relative output paths land under $MRSIM_OUTPUT_DIR when it is set
fs::path outputPath(const std::string& path) {
   fs::path p(path);
   if (p.is_relative())
      if (const char* dir = std::getenv("MRSIM_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p;
   return p;
}
//---------------------------------------------------------------------------
void emit(const std::string& path, const std::string& content) {
   if (path.empty() || path == "-")
      std::cout << content;
   else
      report::writeFile(outputPath(path), content);
}
//---------------------------------------------------------------------------
struct OutputOptions {
   std::string format;
   std::string out;
   std::string trace;
   std::string plots;
   std::string tasks;
   unsigned threads = 0;
};
//---------------------------------------------------------------------------
void writeOutputs(const experiment::SweepResult& result, const OutputOptions& opts) {
   emit(opts.out, report::format(result.rows, report::formatFromString(opts.format)));
   if (!opts.trace.empty()) emit(opts.trace, result.trace);
   if (!opts.tasks.empty()) emit(opts.tasks, report::formatTaskCsv(result.rows));
}
//---------------------------------------------------------------------------
int runScenarioFile(const std::string& file, OutputOptions opts) {
   auto sc = scenario::loadScenario(file);
   // command-line flags win over the scenario's output section
   if (opts.format.empty()) opts.format = sc.output.format;
   if (opts.out.empty()) opts.out = sc.output.path;
   if (opts.trace.empty()) opts.trace = sc.output.trace;
   auto result = experiment::runScenario(sc, {opts.threads, !opts.trace.empty()});
   writeOutputs(result, opts);
   return Ok;
}
//---------------------------------------------------------------------------
int runGroup(int number, bool delay, OutputOptions opts) {
   auto group = experiment::groupFromNumber(number);
   auto mode = delay ? net::DelayMode::NetworkDelay : net::DelayMode::NoDelay;
   if (opts.format.empty()) opts.format = "csv";
   spdlog::info("group {}: {} ({})", number, experiment::describe(group), net::toString(mode));
   auto result = experiment::runGroup(group, mode, {opts.threads, !opts.trace.empty()});
   writeOutputs(result, opts);
   if (!opts.plots.empty()) {
      std::optional<experiment::SweepResult> contrast;
      if (group == experiment::ExperimentGroup::MrCombination)
         contrast = experiment::runGroup(group, delay ? net::DelayMode::NoDelay : net::DelayMode::NetworkDelay, {opts.threads, false});
      for (auto& plot : experiment::plotSeries(group, result, contrast ? &*contrast : nullptr))
         report::writeFile(outputPath(opts.plots) / plot.name, plot.csv);
   }
   return Ok;
}
//---------------------------------------------------------------------------
int validateScenarioFile(const std::string& file) {
   auto sc = scenario::loadScenario(file);
   auto points = scenario::expandSweep(sc);
   std::cout << fmt::format("ok: {} job(s), {} x {} VM(s), {} sweep point(s)\n", sc.base.jobs.size(), sc.base.vmCount, sc.base.vmSpec.name, points.size());
   return Ok;
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
int main(int argc, char** argv) {
   spdlog::set_level(spdlog::level::warn);
   spdlog::set_pattern("%l: %v");
   CLI::App app{"Discrete-event simulator for MapReduce jobs on simulated cloud datacenters"};
   app.require_subcommand(1);

   OutputOptions opts;
   bool verbose = false;
   app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

   auto addOutputFlags = [&](CLI::App* cmd) {
      cmd->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
      cmd->add_option("--out", opts.out, "Report path (default: stdout)");
      cmd->add_option("--trace", opts.trace, "Write the event dispatch trace here");
      cmd->add_option("--tasks", opts.tasks, "Write per-task records (CSV) here");
      cmd->add_option("--threads", opts.threads, "Worker threads for sweep points (0 = all cores)");
   };

   std::string scenarioFile;
   auto* run = app.add_subcommand("run", "Run a scenario file");
   run->add_option("scenario", scenarioFile, "Scenario file (YAML)")->required();
   addOutputFlags(run);

   int groupNumber = 0;
   bool delay = false;
   auto* group = app.add_subcommand("group", "Run a preset experiment group");
   group->add_option("number", groupNumber, "1: MR sweep, 2: VM count, 3: VM type, 4: job type")->required()->check(CLI::Range(1, 4));
   group->add_flag("--delay", delay, "Model storage fetch and shuffle delays");
   group->add_option("--plots", opts.plots, "Directory for chart series CSVs");
   addOutputFlags(group);

   auto* validate = app.add_subcommand("validate", "Parse and admission-check a scenario file");
   validate->add_option("scenario", scenarioFile, "Scenario file (YAML)")->required();

   try {
      app.parse(argc, argv);
   } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? Ok : Usage;
   }
   if (verbose) spdlog::set_level(spdlog::level::info);

   try {
      if (*run) return runScenarioFile(scenarioFile, opts);
      if (*group) return runGroup(groupNumber, delay, opts);
      if (*validate) return validateScenarioFile(scenarioFile);
   } catch (const mrsim::Error& e) {
      std::cerr << "mrsim: " << e.what() << '\n';
      return exitCodeFor(e.category());
   } catch (const std::exception& e) {
      std::cerr << "mrsim: " << e.what() << '\n';
      return RunFailure;
   }
   return Usage;
}
//---------------------------------------------------------------------------
