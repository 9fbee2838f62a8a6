#include <charconv>
#include <set>

#include "cslab/errors.hpp"
#include "cslab/harness.hpp"

namespace cslab {

namespace {

const std::set<std::string>& reserved() {
  static const std::set<std::string> keys{"schema", "command", "kind", "config", "wall_time", "version"};
  return keys;
}

}  // namespace

json ResultRecord::to_json() const {
  json j;
  j["schema"] = kResultSchema;
  j["command"] = command;
  j["kind"] = kind;
  for (const auto& [k, v] : values.items()) {
    if (reserved().count(k)) throw ParameterError("value field uses a reserved name: " + k);
    j[k] = v;
  }
  j["config"] = config;
  j["wall_time"] = wall_time;
  j["version"] = version;
  return j;
}

ResultRecord ResultRecord::from_json(const json& j) {
  if (j.value("schema", "") != kResultSchema) throw ValidationError("schema", kResultSchema);
  ResultRecord r;
  r.command = j.at("command").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.config = j.at("config");
  r.wall_time = j.at("wall_time").get<double>();
  r.version = j.at("version").get<std::string>();
  r.values = json::object();
  for (const auto& [k, v] : j.items())
    if (!reserved().count(k)) r.values[k] = v;
  return r;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw ParameterError("CSV row width differs from the header");
  rows.push_back(std::move(row));
}

namespace {

void write_field(std::ostream& os, const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) {
    os << f;
    return;
  }
  os << '"';
  for (char c : f) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) os << ',';
    write_field(os, fields[k]);
  }
  os << "\r\n";
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
  write_line(os, table.header);
  for (const auto& row : table.rows) write_line(os, row);
}

CsvTable read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> current;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      current.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        current.push_back(field);
        lines.push_back(current);
      }
      current.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParameterError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    current.push_back(field);
    lines.push_back(current);
  }
  CsvTable t;
  if (lines.empty()) return t;
  t.header = lines.front();
  for (std::size_t k = 1; k < lines.size(); ++k) t.add_row(lines[k]);
  return t;
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace cslab
