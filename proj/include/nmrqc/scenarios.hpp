#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nmrqc/config.hpp"

namespace nmrqc {

inline constexpr const char* tool_version = "1.0.0";

struct ScenarioContext {
  std::uint64_t seed = 0;  // derived per scenario from the run seed
  unsigned workers = 1;
  std::filesystem::path out_dir;  // the scenario's own directory
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::vector<std::string> outputs;  // file names written into the scenario directory
  std::function<void(const ParamSet&, const ScenarioContext&)> run;
};

// static registry in a fixed order
const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& find_scenario(const std::string& name);

// FNV-1a of the name mixed into the run seed with splitmix64
std::uint64_t scenario_seed(std::uint64_t run_seed, const std::string& name);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned jobs = 1;                  // concurrent scenarios
  unsigned workers = 0;               // threads inside a scenario, 0 = hardware concurrency
};

struct ScenarioTiming {
  std::string name;
  double seconds = 0.0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::vector<std::string> scenarios;
  std::vector<ScenarioTiming> timings;
};

inline constexpr std::uint64_t default_seed = 42;

// Validates every section before any computation, then runs the scenarios.
// Writes <out>/<scenario>/..., <out>/manifest.json (deterministic) and
// <out>/timing.json (wall times).
RunSummary run_config(const Config& config, const RunOptions& opts);

// CSV with "%.11e" numbers and LF line endings
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(const std::string& v);
  void end_row();
  void close();
  ~CsvWriter();

 private:
  std::filesystem::path path_;
  std::string buf_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
  bool closed_ = false;
};

}  // namespace nmrqc
