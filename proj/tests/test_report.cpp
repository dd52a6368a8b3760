#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include "mrsim/experiment.hpp"
#include "mrsim/report.hpp"
//---------------------------------------------------------------------------
using namespace mrsim;
using namespace mrsim::report;
//---------------------------------------------------------------------------
namespace {
//---------------------------------------------------------------------------
const std::string kHeader = "job_id,mr_combination,vm_count,vm_type,job_type,avg_exec_s,max_exec_s,min_exec_s,makespan_s,delay_s,vm_cost,network_cost\n";
//---------------------------------------------------------------------------
size_t lineCount(const std::string& text) {
   return static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
TEST_SUITE("report") {
   TEST_CASE("empty table is a header-only CSV") {
      CHECK(formatCsv({}) == kHeader);
      CHECK(formatJson({}) == "[]\n");
   }

   TEST_CASE("group 1 CSV has 20 data rows with three decimals") {
      auto result = experiment::runGroup(experiment::ExperimentGroup::MrCombination, net::DelayMode::NetworkDelay);
      auto csv = formatCsv(result.rows);
      CHECK(lineCount(csv) == 21);
      CHECK(csv.rfind(kHeader, 0) == 0);
      CHECK(csv.find("\n1,M1R1,3,Small,Small,2903.040,2903.040,2903.040,3103.040,200.000,2903.040,2125.000\n") != std::string::npos);
      CHECK(csv.find("\n1,M20R1,3,Small,Small,") != std::string::npos);
      CHECK(csv.find(",202.381\n") != std::string::npos);
   }

   TEST_CASE("JSON mirrors the CSV field names plus mode and tasks") {
      auto result = experiment::runGroup(experiment::ExperimentGroup::MrCombination, net::DelayMode::NoDelay);
      auto json = formatJson(result.rows);
      for (const char* key : {"job_id", "mr_combination", "vm_count", "vm_type", "job_type", "avg_exec_s", "max_exec_s", "min_exec_s", "makespan_s",
                              "delay_s", "vm_cost", "network_cost", "mode", "tasks", "task_id", "start_s", "finish_s"})
         CHECK(json.find(std::string("\"") + key + "\"") != std::string::npos);
   }

   TEST_CASE("JSON round trip is bit-exact") {
      for (auto group : {experiment::ExperimentGroup::MrCombination, experiment::ExperimentGroup::VmCount}) {
         auto result = experiment::runGroup(group, net::DelayMode::NetworkDelay);
         auto json = formatJson(result.rows);
         auto parsed = parseJson(json);
         REQUIRE(parsed.size() == result.rows.size());
         CHECK(formatJson(parsed) == json);
         CHECK(parseJson(formatJson(parsed)) == parsed);
         CHECK(formatCsv(parsed) == formatCsv(result.rows));
      }
   }

   TEST_CASE("malformed report JSON is rejected") {
      CHECK_THROWS_AS(parseJson("{"), ValidationError);
      CHECK_THROWS_AS(parseJson("{}"), ValidationError);
      CHECK_THROWS_AS(parseJson("[{\"job_id\": 1}]"), ValidationError);
   }

   TEST_CASE("format names") {
      CHECK((formatFromString("csv") == Format::Csv));
      CHECK((formatFromString("json") == Format::Json));
      CHECK_THROWS_AS(formatFromString("xml"), ValidationError);
   }

   TEST_CASE("task CSV lists every task") {
      auto result = experiment::runGroup(experiment::ExperimentGroup::MrCombination, net::DelayMode::NoDelay);
      // sum over nm of (nm + 1) tasks
      CHECK(lineCount(formatTaskCsv(result.rows)) == 1 + 230);
   }

   TEST_CASE("writeFile creates directories and reports unwritable paths") {
      auto dir = std::filesystem::temp_directory_path() / "mrsim_report_test" / "nested";
      std::filesystem::remove_all(dir.parent_path());
      writeFile(dir / "out.csv", kHeader);
      std::ifstream in(dir / "out.csv");
      std::stringstream content;
      content << in.rdbuf();
      CHECK(content.str() == kHeader);
      std::filesystem::remove_all(dir.parent_path());
      CHECK_THROWS_AS(writeFile("/proc/mrsim/forbidden.csv", "x"), IoError);
   }
}
//---------------------------------------------------------------------------
