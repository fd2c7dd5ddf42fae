#include "nmrqc/config.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nmrqc/errors.hpp"

namespace nmrqc {

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::none: return "dimensionless";
    case Dimension::field: return "magnetic field";
    case Dimension::temperature: return "temperature";
    case Dimension::time: return "time";
    case Dimension::frequency: return "frequency";
    case Dimension::angular_rate: return "angular rate";
    case Dimension::length: return "length";
    case Dimension::volume: return "volume";
    case Dimension::power: return "power";
  }
  return "?";
}

std::optional<UnitInfo> lookup_unit(std::string_view s) {
  static const std::map<std::string, UnitInfo, std::less<>> table = {
      {"T", {Dimension::field, 1.0}},          {"mT", {Dimension::field, 1e-3}},
      {"uT", {Dimension::field, 1e-6}},        {"K", {Dimension::temperature, 1.0}},
      {"mK", {Dimension::temperature, 1e-3}},  {"uK", {Dimension::temperature, 1e-6}},
      {"s", {Dimension::time, 1.0}},           {"ms", {Dimension::time, 1e-3}},
      {"us", {Dimension::time, 1e-6}},         {"ns", {Dimension::time, 1e-9}},
      {"Hz", {Dimension::frequency, 1.0}},     {"kHz", {Dimension::frequency, 1e3}},
      {"MHz", {Dimension::frequency, 1e6}},    {"GHz", {Dimension::frequency, 1e9}},
      {"rad/s", {Dimension::angular_rate, 1.0}}, {"1/s", {Dimension::angular_rate, 1.0}},
      {"m", {Dimension::length, 1.0}},         {"cm", {Dimension::length, 1e-2}},
      {"mm", {Dimension::length, 1e-3}},       {"um", {Dimension::length, 1e-6}},
      {"nm", {Dimension::length, 1e-9}},       {"m3", {Dimension::volume, 1.0}},
      {"cm3", {Dimension::volume, 1e-6}},      {"mm3", {Dimension::volume, 1e-9}},
      {"W", {Dimension::power, 1.0}},          {"mW", {Dimension::power, 1e-3}},
  };
  const auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* b = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (end != b + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Config parse_config(std::string_view text, const std::string& source) {
  Config cfg;
  cfg.source = source;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  std::set<std::string> names;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(source, lineno, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) fail(source, lineno, "invalid section name '" + name + "'");
      if (!names.insert(name).second) fail(source, lineno, "duplicate section [" + name + "]");
      cfg.sections.push_back({name, lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(source, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string rhs = trim(line.substr(eq + 1));
    if (!valid_name(key)) fail(source, lineno, "invalid key '" + key + "'");
    if (rhs.empty()) fail(source, lineno, "missing value for '" + key + "'");
    ConfigEntry e;
    e.key = key;
    e.line = lineno;
    const auto sp = rhs.find_first_of(" \t");
    if (sp == std::string::npos) {
      e.text = rhs;
    } else {
      e.text = rhs.substr(0, sp);
      e.unit = trim(rhs.substr(sp));
      if (e.unit.find_first_of(" \t") != std::string::npos)
        fail(source, lineno, "unexpected trailing text after unit for '" + key + "'");
    }
    if (cfg.sections.empty()) {
      if (key != "seed") fail(source, lineno, "unknown top-level key '" + key + "' (only 'seed' is allowed)");
      if (!e.unit.empty()) fail(source, lineno, "seed takes no unit");
      std::uint64_t v = 0;
      const auto r = std::from_chars(e.text.data(), e.text.data() + e.text.size(), v);
      if (r.ec != std::errc() || r.ptr != e.text.data() + e.text.size())
        fail(source, lineno, "seed must be an unsigned 64-bit integer");
      if (cfg.seed) fail(source, lineno, "duplicate key 'seed'");
      cfg.seed = v;
      continue;
    }
    for (const auto& prev : cfg.sections.back().entries)
      if (prev.key == key) fail(source, lineno, "duplicate key '" + key + "'");
    cfg.sections.back().entries.push_back(std::move(e));
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string());
}

double ParamSet::number(const std::string& key) const {
  const auto it = numbers_.find(key);
  if (it == numbers_.end()) throw ConfigError("parameter '" + key + "' is not numeric or not declared");
  return it->second;
}

long long ParamSet::integer(const std::string& key) const {
  return static_cast<long long>(std::llround(number(key)));
}

const std::string& ParamSet::text(const std::string& key) const {
  const auto it = texts_.find(key);
  if (it == texts_.end()) throw ConfigError("parameter '" + key + "' is not text or not declared");
  return it->second;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

namespace {

void apply_entry(std::map<std::string, double>& numbers,
                 std::map<std::string, std::string>& texts, const ParamSpec& spec,
                 const ConfigEntry& e, const std::string& source) {
  const auto where = [&](const std::string& what) { fail(source, e.line, "key '" + e.key + "': " + what); };
  switch (spec.kind) {
    case ParamKind::text:
      if (!e.unit.empty()) where("text value must be a single token");
      texts[spec.key] = e.text;
      return;
    case ParamKind::real:
    case ParamKind::integer: {
      if (!e.unit.empty()) where("dimensionless value takes no unit (got '" + e.unit + "')");
      const auto v = parse_double(e.text);
      if (!v) where("malformed number '" + e.text + "'");
      if (spec.kind == ParamKind::integer && *v != std::round(*v)) where("expected an integer");
      numbers[spec.key] = *v;
      return;
    }
    case ParamKind::quantity: {
      if (e.unit.empty()) where("missing unit, expected a " + to_string(spec.dim));
      const auto u = lookup_unit(e.unit);
      if (!u) where("unknown unit '" + e.unit + "'");
      if (u->dim != spec.dim)
        where("unit '" + e.unit + "' is a " + to_string(u->dim) + ", expected a " + to_string(spec.dim));
      const auto v = parse_double(e.text);
      if (!v) where("malformed number '" + e.text + "'");
      numbers[spec.key] = *v * u->factor;
      return;
    }
  }
}

}  // namespace

ParamSet resolve_params(const ConfigSection& section, const std::vector<ParamSpec>& schema,
                        const std::string& source) {
  ParamSet out;
  std::map<std::string, const ConfigEntry*> given;
  for (const auto& e : section.entries) {
    bool known = false;
    for (const auto& s : schema) known = known || s.key == e.key;
    if (!known) fail(source, e.line, "unknown key '" + e.key + "' in [" + section.name + "]");
    given[e.key] = &e;
  }
  for (const auto& spec : schema) {
    ConfigEntry e;
    if (const auto it = given.find(spec.key); it != given.end()) {
      e = *it->second;
    } else {
      const auto sp = spec.default_value.find(' ');
      e.key = spec.key;
      e.text = spec.default_value.substr(0, sp);
      e.unit = sp == std::string::npos ? "" : spec.default_value.substr(sp + 1);
      e.line = section.line;
    }
    apply_entry(out.numbers_, out.texts_, spec, e, source);
    out.canonical_.emplace_back(spec.key, e.unit.empty() ? e.text : e.text + " " + e.unit);
  }
  return out;
}

}  // namespace nmrqc
