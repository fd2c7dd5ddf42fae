#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

// Physical dimension of a configuration value; values are stored in SI after
// unit conversion (angular rates in rad/s, frequencies in Hz).
enum class Dimension { none, field, temperature, time, frequency, angular_rate, length, volume, power };

std::string to_string(Dimension d);

// unit suffix -> (dimension, factor to SI)
struct UnitInfo {
  Dimension dim = Dimension::none;
  double factor = 1.0;
};
std::optional<UnitInfo> lookup_unit(std::string_view suffix);

struct ConfigEntry {
  std::string key;
  std::string text;  // value text without the unit
  std::string unit;  // empty when absent
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;
};

// Text format:
//   # comment
//   seed = 42                (optional, before the first section)
//   [scenario-name]
//   key = value [unit]
struct Config {
  std::string source;
  std::optional<std::uint64_t> seed;
  std::vector<ConfigSection> sections;
};

Config parse_config(std::string_view text, const std::string& source = "<config>");
Config load_config(const std::filesystem::path& path);

enum class ParamKind { quantity, real, integer, text };

struct ParamSpec {
  std::string key;
  ParamKind kind = ParamKind::real;
  Dimension dim = Dimension::none;
  std::string default_value;  // parsed like a config entry, e.g. "1 T"
  std::string help;
};

// resolved values of one section
class ParamSet {
 public:
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  // canonical "key = value unit" lines in declaration order, for manifests
  const std::vector<std::pair<std::string, std::string>>& canonical() const { return canonical_; }

 private:
  friend ParamSet resolve_params(const ConfigSection&, const std::vector<ParamSpec>&, const std::string&);
  std::map<std::string, double> numbers_;
  std::map<std::string, std::string> texts_;
  std::vector<std::pair<std::string, std::string>> canonical_;
};

// checks every entry against the schema (unknown keys, missing or wrong units,
// malformed numbers) and fills defaults; throws ConfigError naming source, line and key
ParamSet resolve_params(const ConfigSection& section, const std::vector<ParamSpec>& schema,
                        const std::string& source = "<config>");

// "%.11e" formatting shared by CSV output and manifests
std::string format_number(double v);

}  // namespace nmrqc
