#include "doctest.h"

#include <cstdio>
#include <functional>
#include <fstream>
#include <sstream>

#include "cslab/errors.hpp"
#include "cslab/harness.hpp"

using namespace cslab;

namespace {

std::vector<const ResultRecord*> of_kind(const RunOutput& out, const std::string& kind) {
  std::vector<const ResultRecord*> r;
  for (const auto& rec : out.records)
    if (rec.kind == kind) r.push_back(&rec);
  return r;
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.field() + "|" + e.bound();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config resolves to defaults") {
  for (const auto& cmd : experiment_commands()) {
    const ExperimentConfig c = ExperimentConfig::parse(cmd, "");
    CHECK(c.real("hbar") == 1.0);
    CHECK(c.integer("dim") == 64);
    CHECK(c.text("seed") == "0");
  }
  const json snap = ExperimentConfig::parse("wiener", "").snapshot();
  CHECK(snap["schema"] == kConfigSchema);
  CHECK(snap["parameters"]["nu"] == "8");
}

TEST_CASE("validation names the field and bound") {
  CHECK(field_of([] { ExperimentConfig::parse("rotsym-quantum", "zeta = 1.2"); }) == "zeta|0 <= zeta < 1");
  CHECK(field_of([] { ExperimentConfig::parse("rotsym-quantum", "zeta = -0.1"); }).rfind("zeta|", 0) == 0);
  CHECK(field_of([] { ExperimentConfig::parse("overlap", "hbar = 0"); }).rfind("hbar|", 0) == 0);
  CHECK(field_of([] { ExperimentConfig::parse("overlap", "dim = 1.5"); }).rfind("dim|", 0) == 0);
  CHECK(field_of([] { ExperimentConfig::parse("overlap", "colour = red"); }) == "colour|a known key for 'overlap'");
  CHECK(field_of([] { ExperimentConfig::parse("overlap", "no equals sign"); }) != "");
  CHECK(field_of([] { ExperimentConfig::parse("wiener", "nu = 4,x"); }).rfind("nu|", 0) == 0);
  CHECK_THROWS_AS(ExperimentConfig("teleport"), ValidationError);
}

TEST_CASE("file values, comments and overrides") {
  const std::string text = "# comment\nhbar = 0.5\n\nbra-p=2  # trailing\nseed = 7\n";
  const ExperimentConfig c = ExperimentConfig::parse("overlap", text, {{"seed", "9"}, {"ket-q", "3"}});
  CHECK(c.real("hbar") == 0.5);
  CHECK(c.real("bra_p") == 2.0);
  CHECK(c.text("seed") == "9");
  CHECK(c.real("ket_q") == 3.0);

  const std::string path = "harness_config_test.cfg";
  {
    std::ofstream f(path);
    f << text;
  }
  const ExperimentConfig g = ExperimentConfig::from_file("overlap", path, {{"hbar", "0.25"}});
  std::remove(path.c_str());
  CHECK(g.real("hbar") == 0.25);
  CHECK(g.text("seed") == "7");
  CHECK_THROWS_AS(ExperimentConfig::from_file("overlap", "no/such/file.cfg"), Error);

  const ExperimentConfig back = ExperimentConfig::from_snapshot(c.snapshot());
  CHECK(back.snapshot() == c.snapshot());
}

TEST_CASE("records and tables round-trip") {
  ResultRecord r;
  r.command = "wiener";
  r.kind = "estimate";
  r.config = ExperimentConfig::parse("wiener", "").snapshot();
  r.values = {{"nu", 8.0}, {"value_re", 0.1 + 0.2}, {"samples", 1000}};
  r.wall_time = 0.5;
  const json j = json::parse(r.to_json().dump());
  CHECK(j["schema"] == kResultSchema);
  CHECK(j["value_re"].get<double>() == 0.1 + 0.2);
  const ResultRecord back = ResultRecord::from_json(j);
  CHECK(back.values == r.values);
  CHECK(back.config == r.config);
  CHECK(back.kind == "estimate");

  ResultRecord bad = r;
  bad.values["kind"] = "x";
  CHECK_THROWS_AS(bad.to_json(), ParameterError);

  CsvTable t;
  t.header = {"t", "label"};
  t.add_row({format_real(0.1), "plain"});
  t.add_row({format_real(-1e-300), "a,b"});
  t.add_row({"2", "say \"hi\"\nthere"});
  t.add_row({"3", ""});
  CHECK_THROWS_AS(t.add_row({"1"}), ParameterError);
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str().rfind("t,label\r\n0.1,plain\r\n", 0) == 0);
  CHECK(os.str().find("\"say \"\"hi\"\"\nthere\"") != std::string::npos);
  const CsvTable u = read_csv(os.str());
  CHECK(u.header == t.header);
  CHECK(u.rows == t.rows);
  CHECK(std::stod(u.rows[1][0]) == -1e-300);
}

TEST_CASE("wiener runs one record per nu") {
  const ExperimentConfig c = ExperimentConfig::parse("wiener", "nu = 4,8,16\nsamples = 4000\nT = 0.5");
  const RunOutput out = run_experiment(c);
  const auto est = of_kind(out, "estimate");
  REQUIRE(est.size() == 3);
  CHECK(of_kind(out, "extrapolation").size() == 1);
  for (const char* key : {"nu", "value_re", "value_im", "stderr", "samples", "steps", "seed"})
    for (const auto* r : est) CHECK(r->values.contains(key));
  CHECK(est[0]->values["nu"].get<double>() == 4.0);
  CHECK(est[2]->values["samples"].get<long>() == 4000);

  // Identical config gives identical values, whatever the worker count.
  const RunOutput again = run_experiment(ExperimentConfig::parse("wiener", "nu = 4,8,16\nsamples = 4000\nT = 0.5\nworkers = 3"));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(again.records[k].values["value_re"] == out.records[k].values["value_re"]);
    CHECK(again.records[k].values["stderr"] == out.records[k].values["stderr"]);
  }
  const RunOutput other = run_experiment(ExperimentConfig::parse("wiener", "nu = 4\nsamples = 4000\nT = 0.5\nseed = 1"));
  CHECK(other.records[0].values["value_re"] != out.records[0].values["value_re"]);
}

TEST_CASE("propagate and overlap records") {
  const RunOutput ex = run_experiment(ExperimentConfig::parse("propagate", "method = exact\nhamiltonian = harmonic"));
  REQUIRE(ex.records.size() == 1);
  CHECK(ex.records[0].values["unitarity_defect"].get<double>() <= 1e-10);

  const RunOutput conv =
      run_experiment(ExperimentConfig::parse("propagate", "method = sliced-q\nhamiltonian = harmonic\nconvergence = 16,4,8\nend_q = 0.4"));
  REQUIRE(conv.table);
  REQUIRE(conv.table->rows.size() == 3);
  CHECK(conv.table->rows[0][0] == "4");
  CHECK(conv.table->rows[2][0] == "16");

  const RunOutput ov = run_experiment(ExperimentConfig::parse("overlap", ""));
  CHECK(ov.records[0].values["difference"].get<double>() <= 1e-10);
}

TEST_CASE("classical table and rotsym records") {
  const RunOutput cl = run_experiment(ExperimentConfig::parse("classical", "T = 0.2\nrecord_every = 50"));
  REQUIRE(cl.table);
  CHECK(cl.table->header == std::vector<std::string>{"t", "p", "q", "energy", "source-tag"});
  CHECK(cl.table->rows.size() == 10);
  CHECK(cl.table->rows[0][4] == "quantum");
  CHECK(cl.table->rows[1][4] == "classical");

  const RunOutput rc = run_experiment(ExperimentConfig::parse("rotsym-classical", "T = 1\nrecord_every = 100"));
  REQUIRE(rc.table);
  CHECK(rc.table->rows.size() == 11);

  const RunOutput rq = run_experiment(ExperimentConfig::parse("rotsym-quantum", "dim_per_mode = 16"));
  const json& v = rq.records[0].values;
  CHECK(v.contains("closed"));
  CHECK(v.contains("fock"));
  CHECK(v["difference"].get<double>() <= 1e-5);
}

TEST_CASE("audit reports one check per invariant") {
  const RunOutput a = run_experiment(ExperimentConfig::parse("audit", "suite = fock"));
  CHECK_FALSE(a.audit_failed);
  REQUIRE(a.records.size() >= 2);
  for (const auto& r : a.records) {
    CHECK(r.kind == "check");
    CHECK(r.values["suite"] == "fock");
    CHECK(r.values["pass"].get<bool>());
  }
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::parse("audit", "suite = nothing")), ValidationError);
}
