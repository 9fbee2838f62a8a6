#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "cslab/errors.hpp"
#include "cslab/harness.hpp"

namespace cslab {

namespace {

enum class Kind { real, integer, text, real_list, integer_list };

struct KeySpec {
  std::string fallback;
  Kind kind;
  std::string bound;
  std::function<bool(double)> accepts = [](double) { return true; };
  std::vector<std::string> choices = {};
};

using Registry = std::map<std::string, KeySpec>;

KeySpec real(std::string d, std::string bound = "a finite real", std::function<bool(double)> ok = [](double) {
  return true;
}) {
  return {std::move(d), Kind::real, std::move(bound), std::move(ok)};
}
KeySpec positive(std::string d) {
  return real(std::move(d), "> 0", [](double x) { return x > 0.0; });
}
KeySpec nonnegative(std::string d) {
  return real(std::move(d), ">= 0", [](double x) { return x >= 0.0; });
}
KeySpec integer(std::string d, long low) {
  return {std::move(d), Kind::integer, "an integer >= " + std::to_string(low),
          [low](double x) { return x >= static_cast<double>(low); }};
}
KeySpec choice(std::string d, std::vector<std::string> options) {
  std::string bound = "one of";
  for (const auto& o : options) bound += " " + o;
  return {std::move(d), Kind::text, bound, [](double) { return true; }, std::move(options)};
}
KeySpec text(std::string d) { return {std::move(d), Kind::text, "text"}; }

void add_common(Registry& r) {
  r["hbar"] = positive("1");
  r["dim"] = integer("64", 2);
  r["seed"] = integer("0", 0);
  r["workers"] = integer("1", 0);
  r["out"] = text("");
}

void add_endpoints(Registry& r, const char* sp, const char* sq, const char* ep, const char* eq) {
  r["start_p"] = real(sp);
  r["start_q"] = real(sq);
  r["end_p"] = real(ep);
  r["end_q"] = real(eq);
}

void add_wiener(Registry& r) {
  r["steps"] = integer("0", 0);
  r["samples"] = integer("100000", 2);
  r["T"] = positive("1");
  r["hamiltonian"] = choice("free", {"free", "harmonic", "quartic"});
  r["lambda"] = nonnegative("0.1");
  r["estimator"] = choice("auto", {"auto", "plain", "conditional"});
  r["symbol"] = choice("antinormal", {"antinormal", "normal"});
  r["confidence"] = positive("0.1");
  add_endpoints(r, "0", "0", "0", "1");
}

const std::map<std::string, Registry>& registry() {
  static const std::map<std::string, Registry> table = [] {
    std::map<std::string, Registry> t;
    {
      Registry r;
      add_common(r);
      r["bra_p"] = real("0.5");
      r["bra_q"] = real("-0.3");
      r["ket_p"] = real("0");
      r["ket_q"] = real("1");
      r["mass"] = positive("1");
      r["grid"] = integer("0", 0);
      r["extent"] = positive("2");
      t["overlap"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["radius"] = positive("8");
      r["spacing"] = positive("0.2");
      t["resolve-unity"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["method"] = choice("exact", {"exact", "sliced-q", "sliced-cs"});
      r["hamiltonian"] = choice("harmonic", {"free", "harmonic", "quartic"});
      r["lambda"] = nonnegative("0.1");
      r["T"] = real("0.5", "a finite nonzero real", [](double x) { return x != 0.0; });
      r["slices"] = integer("8", 0);
      r["grid_points"] = integer("65", 3);
      r["grid_spacing"] = positive("0.2");
      r["cs_spacing"] = positive("0.5");
      r["cs_radius"] = positive("8");
      r["convergence"] = {"", Kind::integer_list, "a comma list of integers >= 1", [](double x) { return x >= 1.0; }};
      add_endpoints(r, "0", "0", "0", "1");
      t["propagate"] = r;
    }
    {
      Registry r;
      add_common(r);
      add_wiener(r);
      r["nu"] = {"8", Kind::real_list, "a comma list of reals > 0", [](double x) { return x > 0.0; }};
      t["wiener"] = r;
    }
    {
      Registry r;
      add_common(r);
      add_wiener(r);
      r["nu"] = positive("8");
      r["map"] = choice("rotation", {"identity", "rotation", "translation"});
      r["angle"] = real("1.5707963267948966");
      r["shift_p"] = real("0.8");
      r["shift_q"] = real("-0.5");
      t["covariance"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["hamiltonian"] = choice("quartic", {"harmonic", "quartic", "cubic", "linear"});
      r["lambda"] = nonnegative("0.05");
      r["T"] = nonnegative("2");
      r["dt"] = positive("0.001");
      r["start_p"] = real("0");
      r["start_q"] = real("1");
      r["record_every"] = integer("10", 1);
      t["classical"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["N"] = integer("3", 1);
      r["m0"] = positive("1");
      r["lambda0"] = nonnegative("0.1");
      r["T"] = nonnegative("10");
      r["dt"] = positive("0.001");
      r["record_every"] = integer("10", 1);
      r["init"] = choice("plane", {"plane", "collinear", "random"});
      t["rotsym-classical"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["m"] = positive("1");
      r["zeta"] = real("0.5", "0 <= zeta < 1", [](double x) { return x >= 0.0 && x < 1.0; });
      r["beta"] = nonnegative("2");
      r["dim_per_mode"] = integer("24", 4);
      r["p"] = real("0");
      r["q"] = real("1");
      r["draws"] = integer("0", 0);
      r["span_probes"] = integer("0", 0);
      t["rotsym-quantum"] = r;
    }
    {
      Registry r;
      add_common(r);
      r["suite"] = choice("all", {"all", "fock", "propagators", "wiener", "classical", "rotsym"});
      r["samples"] = integer("100000", 2);
      t["audit"] = r;
    }
    return t;
  }();
  return table;
}

const Registry& keys_of(const std::string& command) {
  const auto it = registry().find(command);
  if (it == registry().end()) {
    std::string names;
    for (const auto& c : experiment_commands()) names += (names.empty() ? "" : ", ") + c;
    throw ValidationError("command", "one of " + names);
  }
  return it->second;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

bool is_integral(const std::string& s) {
  if (s.empty()) return false;
  const std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return start < s.size() && std::all_of(s.begin() + start, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names{"overlap",  "resolve-unity",    "propagate",      "wiener", "covariance",
                                              "classical", "rotsym-classical", "rotsym-quantum", "audit"};
  return names;
}

ExperimentConfig::ExperimentConfig(std::string command) : command_(std::move(command)) {
  for (const auto& [key, spec] : keys_of(command_)) values_[key] = spec.fallback;
}

bool ExperimentConfig::has_key(const std::string& key) const { return values_.count(canonical_key(key)) > 0; }

std::vector<std::string> ExperimentConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = canonical_key(trim(raw_key));
  const std::string value = trim(raw_value);
  const Registry& reg = keys_of(command_);
  const auto it = reg.find(key);
  if (it == reg.end()) throw ValidationError(key, "a known key for '" + command_ + "'");
  const KeySpec& spec = it->second;
  double x = 0.0;
  switch (spec.kind) {
    case Kind::real:
      if (!parse_number(value, x) || !spec.accepts(x)) throw ValidationError(key, spec.bound);
      break;
    case Kind::integer:
      if (!is_integral(value) || !parse_number(value, x) || !spec.accepts(x)) throw ValidationError(key, spec.bound);
      if (key == "seed") {
        try {
          (void)std::stoull(value);
        } catch (const std::exception&) {
          throw ValidationError(key, "an unsigned 64-bit integer");
        }
      }
      break;
    case Kind::text:
      if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end())
        throw ValidationError(key, spec.bound);
      break;
    case Kind::real_list:
    case Kind::integer_list: {
      const auto items = split_list(value);
      if (items.empty() && !spec.fallback.empty()) throw ValidationError(key, spec.bound);
      for (const auto& item : items) {
        if (spec.kind == Kind::integer_list && !is_integral(item)) throw ValidationError(key, spec.bound);
        if (!parse_number(item, x) || !spec.accepts(x)) throw ValidationError(key, spec.bound);
      }
      break;
    }
  }
  values_[key] = value;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto it = values_.find(canonical_key(key));
  if (it == values_.end()) throw ValidationError(key, "a known key for '" + command_ + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const { return std::stod(text(key)); }

long ExperimentConfig::integer(const std::string& key) const { return std::stol(text(key)); }

std::vector<double> ExperimentConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) out.push_back(std::stod(item));
  return out;
}

std::vector<int> ExperimentConfig::integer_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(text(key))) out.push_back(std::stoi(item));
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& command, const std::string& text,
                                         const std::map<std::string, std::string>& overrides) {
  ExperimentConfig cfg(command);
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(number), "key = value");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  for (const auto& [k, v] : overrides) cfg.set(k, v);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& command, const std::string& path,
                                             const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "a readable file (" + path + ")");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(command, buf.str(), overrides);
}

json ExperimentConfig::snapshot() const {
  json j;
  j["schema"] = kConfigSchema;
  j["command"] = command_;
  json params = json::object();
  for (const auto& [k, v] : values_) params[k] = v;
  j["parameters"] = params;
  return j;
}

ExperimentConfig ExperimentConfig::from_snapshot(const json& snap) {
  if (snap.value("schema", "") != kConfigSchema) throw ValidationError("schema", kConfigSchema);
  ExperimentConfig cfg(snap.at("command").get<std::string>());
  for (const auto& [k, v] : snap.at("parameters").items()) cfg.set(k, v.get<std::string>());
  return cfg;
}

}  // namespace cslab
