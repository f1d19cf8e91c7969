#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "corrlab/diagram.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/report.hpp"
#include "kinematics_oracle.hpp"

using namespace corrlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  auto d = fs::temp_directory_path() / "corrlab_report_test";
  fs::create_directories(d);
  return d;
}

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("plot data emission and parsing") {
    Table empty;
    empty.header = {"tau", "value"};
    CHECK(emit_plotdata(empty) == "tau,value\n");
    CHECK(parse_plotdata(emit_plotdata(empty)) == empty);

    Table t;
    t.header = {"tau", "a, b", "say \"hi\""};
    t.rows = {{1.0, 0.1, -2.5e-300}, {2.0, 1.0 / 3.0, 1e17}};
    auto csv = emit_plotdata(t);
    CHECK(csv.find("\"a, b\"") != std::string::npos);
    CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
    CHECK(parse_plotdata(csv) == t);

    Table n;
    n.header = {"x"};
    n.rows = {{std::nan("")}};
    CHECK(emit_plotdata(n) == "x\nnan\n");
    CHECK(std::isnan(parse_plotdata("x\nnan\n").rows[0][0]));
    CHECK_THROWS_AS(parse_plotdata("a,b\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_plotdata("a\n\"1\n"), ParseError);
  }

  TEST_CASE("key-value configuration") {
    auto kv = parse_key_values("# packet\nmass = 2\n\npbar = 0.1, 0, 0   # comment\n");
    CHECK(kv.at("mass") == "2");
    CHECK(kv.at("pbar") == "0.1, 0, 0");
    CHECK_THROWS_AS(parse_key_values("mass 2\n"), ParseError);
    CHECK_THROWS_AS(parse_key_values("a = 1\na = 2\n"), ParseError);
    CHECK_THROWS_AS(parse_double("1.5x", "value"), ParseError);
    CHECK(parse_four_vector("1, 0.5, 0, 0", "u") == FourVector{1, 0.5, 0, 0});

    auto pk = packet_from_config(kv);
    CHECK(pk.mass == 2.0);
    CHECK(std::abs(pk.pbar.t - std::sqrt(4.01)) < 1e-15);
    CHECK_THROWS_AS(packet_from_config({{"colour", "red"}}), ParseError);
    CHECK_THROWS_AS(packet_from_config({{"r1", "2"}, {"r2", "1"}}), ComputeError);

    auto m = model_from_config({{"form", "pole"}, {"eps", "0.2"}, {"r1", "0.3"}, {"r2", "1.3"}});
    CHECK(m.F.form == FormKind::pole);
    CHECK(m.mu.terms.size() == 1);
    CHECK_THROWS_AS(model_from_config({{"form", "spline"}}), ParseError);
  }

  TEST_CASE("degree experiment") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::degree;
    spec.options = {{"nl", "1"}, {"nv", "2"}};
    auto res = run_experiment(spec);
    auto j = nlohmann::json::parse(res.report_json);
    CHECK(j["result"]["d"] == "-1");
    CHECK(j["options"]["nv"] == "2");
    CHECK(res.table.rows.at(0).at(2) == -1.0);

    spec.options.erase("nv");
    CHECK_THROWS_AS(resolve_options(spec), ParseError);
    spec.options = {{"nl", "1"}, {"nv", "2"}, {"bogus", "3"}};
    CHECK_THROWS_AS(resolve_options(spec), ParseError);
  }

  TEST_CASE("exit codes and output files") {
    auto dir = scratch_dir();
    ExperimentSpec spec;
    spec.name = "deg";
    spec.kind = ExperimentKind::degree;
    spec.options = {{"nl", "3"}, {"nv", "3"}};
    spec.output_dir = dir.string();
    CHECK(run(spec) == 0);
    CHECK(fs::exists(dir / "deg.report.json"));
    CHECK(fs::exists(dir / "deg.csv"));

    ExperimentSpec missing;
    missing.kind = ExperimentKind::analyze;
    missing.inputs = {{"diagram", (dir / "nope.json").string()}, {"k", (dir / "nope_k.json").string()}};
    std::string err;
    CHECK(run(missing, &err) == 2);
    CHECK(err.find("nope.json") != std::string::npos);

    ExperimentSpec bad;
    bad.kind = ExperimentKind::degree;
    bad.options = {{"nl", "-1"}, {"nv", "2"}};
    CHECK(run(bad, &err) == 1);
  }

  TEST_CASE("analyze reports trivial and singular points") {
    auto dir = scratch_dir();
    std::mt19937_64 rng(31);
    auto diagram = write(dir / "pole.json", save_diagram(fixtures::pole()));
    auto off = write(dir / "k_off.json", save_k(oracle::pole_configuration(2.8 * 2.8, rng)));
    auto on = write(dir / "k_on.json", save_k(oracle::pole_configuration(6.25, rng)));
    ExperimentSpec spec;
    spec.kind = ExperimentKind::analyze;
    spec.inputs = {{"diagram", diagram}, {"k", off}};
    auto j = nlohmann::json::parse(run_experiment(spec).report_json);
    CHECK(j["result"]["classification"] == "Trivial");
    spec.inputs["k"] = on;
    j = nlohmann::json::parse(run_experiment(spec).report_json);
    CHECK(j["result"]["classification"] == "Singular");
    CHECK(j["result"]["cone_ray"].contains("direction"));
  }

  TEST_CASE("seeded experiments are byte-identical") {
    auto dir = scratch_dir();
    auto diagram = write(dir / "tri.json", save_diagram(fixtures::triangle()));
    ExperimentSpec spec;
    spec.kind = ExperimentKind::scan_surface;
    spec.inputs = {{"diagram", diagram}};
    spec.options = {{"count", "3"}};
    spec.seed = 19;
    auto a = run_experiment(spec);
    auto b = run_experiment(spec);
    CHECK(a.report_json == b.report_json);
    CHECK(emit_plotdata(a.table) == emit_plotdata(b.table));
    spec.seed = 20;
    CHECK(emit_plotdata(run_experiment(spec).table) != emit_plotdata(a.table));
  }
}
