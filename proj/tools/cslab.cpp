#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cslab/errors.hpp"
#include "cslab/harness.hpp"

namespace {

struct CommonFlags {
  std::string hbar, dim, seed, workers, out, config;
  std::vector<std::string> sets;
};

const std::map<std::string, std::string> kDescriptions{
    {"overlap", "coherent-state overlap: truncated Fock states against the closed form"},
    {"resolve-unity", "disc quadrature of the coherent-state resolution of unity"},
    {"propagate", "propagator <end|exp(-iHT/hbar)|start>: exact, position lattice or coherent-state lattice"},
    {"wiener", "Brownian-bridge Monte Carlo propagator, one run per nu, extrapolated when nu has 3+ values"},
    {"covariance", "Wiener propagator in original and canonically transformed coordinates"},
    {"classical", "Ehrenfest mean values against the Hamilton flow of the normal symbol (CSV)"},
    {"rotsym-classical", "N-dimensional rotationally symmetric quartic flow with invariants (CSV)"},
    {"rotsym-quantum", "reducible-representation symbol: truncated two-mode value against the closed form"},
    {"audit", "invariant suites; exit code 3 when any check fails"},
};

// "--key value" and "--key=value" pairs left over by the parser.
void collect_extras(const std::vector<std::string>& extras, std::map<std::string, std::string>& out) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string tok = extras[i];
    if (tok.rfind("--", 0) != 0) throw cslab::ValidationError(tok, "--key value");
    tok = tok.substr(2);
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      out[tok.substr(0, eq)] = tok.substr(eq + 1);
    } else if (i + 1 < extras.size()) {
      out[tok] = extras[++i];
    } else {
      throw cslab::ValidationError(tok, "a value");
    }
  }
}

void emit_records(std::ostream& os, const std::vector<cslab::ResultRecord>& records) {
  for (const auto& r : records) os << r.to_json().dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cslab: coherent-state path integral and classical-limit laboratory"};
  app.require_subcommand(1);
  std::map<std::string, CommonFlags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : cslab::experiment_commands()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    CommonFlags& f = flags[name];
    sub->add_option("--hbar", f.hbar, "Planck constant (default 1)");
    sub->add_option("--dim", f.dim, "truncation dimension (default 64)");
    sub->add_option("--seed", f.seed, "random seed (default 0)");
    sub->add_option("--workers", f.workers, "worker threads, 0 for all cores (default 1)");
    sub->add_option("--out", f.out, "output file; CSV for series commands, JSON lines otherwise");
    sub->add_option("--config", f.config, "flat key = value file; command-line values win");
    sub->add_option("--set", f.sets, "key=value override, repeatable");
    sub->allow_extras();
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;
  const CommonFlags& f = flags[command];
  CLI::App* sub = subs[command];

  try {
    std::map<std::string, std::string> overrides;
    for (const auto& s : f.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw cslab::ValidationError(s, "key=value");
      overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    collect_extras(sub->remaining(), overrides);
    for (const auto& [key, value] : {std::pair{"hbar", &f.hbar}, std::pair{"dim", &f.dim}, std::pair{"seed", &f.seed},
                                     std::pair{"workers", &f.workers}, std::pair{"out", &f.out}})
      if (sub->count(std::string("--") + key) > 0) overrides[key] = *value;

    const cslab::ExperimentConfig cfg = f.config.empty() ? cslab::ExperimentConfig::parse(command, "", overrides)
                                                         : cslab::ExperimentConfig::from_file(command, f.config, overrides);
    const cslab::RunOutput result = cslab::run_experiment(cfg);
    const std::string& out = cfg.text("out");

    std::ofstream file;
    if (!out.empty()) {
      file.open(out, std::ios::binary);
      if (!file) throw cslab::Error("cannot open output file " + out);
    }
    std::ostream& primary = out.empty() ? std::cout : static_cast<std::ostream&>(file);
    if (result.table) {
      cslab::write_csv(primary, *result.table);
      emit_records(out.empty() ? std::cerr : std::cout, result.records);
    } else {
      emit_records(primary, result.records);
    }
    if (file.is_open() && !file) throw cslab::Error("write failed for " + out);
    return result.audit_failed ? 3 : 0;
  } catch (const cslab::ValidationError& e) {
    std::cerr << cslab::json{{"error", "validation"}, {"field", e.field()}, {"bound", e.bound()}, {"message", e.what()}}.dump()
              << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << cslab::json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
