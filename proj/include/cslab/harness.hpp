#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cslab {

using json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "cslab-config/1";
inline constexpr const char* kResultSchema = "cslab-result/1";
inline constexpr const char* kVersion = "0.1.0";

/// Subcommands understood by the harness.
const std::vector<std::string>& experiment_commands();

/// Validated key/value parameters of one subcommand. Every key has a
/// default; setting an unknown key or an out-of-range value throws
/// ValidationError naming the field and its bound.
class ExperimentConfig {
 public:
  explicit ExperimentConfig(std::string command);

  /// Flat "key = value" text: one pair per line, '#' starts a comment.
  static ExperimentConfig parse(const std::string& command, const std::string& text,
                                const std::map<std::string, std::string>& overrides = {});
  static ExperimentConfig from_file(const std::string& command, const std::string& path,
                                    const std::map<std::string, std::string>& overrides = {});

  const std::string& command() const noexcept { return command_; }
  void set(const std::string& key, const std::string& value);
  bool has_key(const std::string& key) const;
  std::vector<std::string> keys() const;

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  std::vector<int> integer_list(const std::string& key) const;

  /// Every key with its effective value, defaults included.
  json snapshot() const;
  static ExperimentConfig from_snapshot(const json& snap);

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

/// One persisted result: the value fields are deterministic given the
/// config (seed and worker count included); wall time is not.
struct ResultRecord {
  std::string command;
  std::string kind;  // e.g. "estimate", "extrapolation", "summary"
  json config;
  json values;
  double wall_time = 0.0;
  std::string version = kVersion;

  /// Flat object: schema, command, kind, the value fields, config, wall_time, version.
  json to_json() const;
  static ResultRecord from_json(const json& j);
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// RFC-4180: CRLF line ends, fields with separators, quotes or line breaks quoted.
void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(const std::string& text);

/// Round-trip decimal form of a double.
std::string format_real(double x);

struct RunOutput {
  std::vector<ResultRecord> records;
  std::optional<CsvTable> table;
  bool audit_failed = false;
};

/// Dispatches to the owning module. Module errors are rethrown with the
/// subcommand prefixed to the message (ValidationError keeps its type).
RunOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace cslab
