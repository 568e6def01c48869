#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "keen/report.hpp"
#include "keen/scenario.hpp"

using namespace keen;
namespace fs = std::filesystem;

namespace {

std::string minimal_scenario_json() {
    return R"({
  "name": "minimal",
  "system": "basic3",
  "params": {
    "econ": {"alpha": 0.025, "beta": 0.02, "delta": 0.01, "nu": 3.0, "r": 0.03},
    "phillips": {"phi0": 0.040064102564102564, "phi1": 6.4102564102564104e-05},
    "investment": {"kappa0": -0.0065, "kappa1": -5.0, "kappa2": 20.0}
  },
  "initial": [0.9, 0.9, 0.1]
})";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("minimal scenario parses with integrator defaults") {
    const ScenarioFile s = parse_scenario(minimal_scenario_json());
    CHECK(s.name == "minimal");
    CHECK(s.system == SystemId::Basic3);
    CHECK(s.integrator.rel_tol == 1e-9);
    CHECK(s.integrator.abs_tol == 1e-11);
    CHECK(s.integrator.sample_dt == 0.05);
    CHECK(s.outputs.size() == 4);  // plots excluded by default
    CHECK_FALSE(s.sweep.has_value());
}

TEST_CASE("schema violations are rejected with a pointer") {
    // employment rate out of range
    std::string bad = minimal_scenario_json();
    bad.replace(bad.find("[0.9, 0.9, 0.1]"), 15, "[0.9, 1.2, 0.1]");
    try {
        parse_scenario(bad);
        FAIL("expected a schema error");
    } catch (const ScenarioError& e) {
        CHECK(e.where == "/initial/1");
        CHECK(std::string(e.what()).find("employment rate must lie in [0,1)") !=
              std::string::npos);
    }

    // unknown key
    std::string unknown = minimal_scenario_json();
    unknown.insert(unknown.rfind('}'), ", \"extra\": 1\n");
    CHECK_THROWS_AS(parse_scenario(unknown), ScenarioError);

    // dimension mismatch
    std::string dims = minimal_scenario_json();
    dims.replace(dims.find("[0.9, 0.9, 0.1]"), 15, "[0.9, 0.9]");
    try {
        parse_scenario(dims);
        FAIL("expected a schema error");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("dimension mismatch") != std::string::npos);
    }

    // non-finite number
    std::string inf = minimal_scenario_json();
    inf.replace(inf.find("0.03}"), 4, "1e999");
    CHECK_THROWS_AS(parse_scenario(inf), ScenarioError);
}

TEST_CASE("registry scenarios round-trip through serialization") {
    for (const ScenarioFile& s : registry()) {
        const std::string once = serialize_scenario(s);
        const ScenarioFile back = parse_scenario(once);
        CHECK(serialize_scenario(back) == once);
    }
}

TEST_CASE("registry covers the reference studies and list is stable") {
    for (const char* name :
         {"basic-good-vs-bad", "inflation-equilibria", "speculation-equilibria",
          "inflation-convergent", "price-damping-grid", "markup-collapse", "markup-sweep",
          "speculation-convergent", "speculation-cycle", "speculation-cycle-sweep",
          "cycle-collapse"}) {
        CAPTURE(name);
        CHECK(find_registry(name) != nullptr);
    }
    CHECK(find_registry("no-such-scenario") == nullptr);
}

TEST_CASE("parameter paths") {
    ModelParams p = baseline_params();
    set_parameter(p, "price.xi", 1.31);
    CHECK(get_parameter(p, "price.xi") == 1.31);
    set_parameter(p, "econ.alpha", 0.03);
    CHECK(p.econ.alpha == 0.03);
    CHECK_THROWS_AS(set_parameter(p, "price.nope", 1.0), std::invalid_argument);
    ModelParams noprice = p;
    noprice.price.reset();
    noprice.spec.reset();
    CHECK_THROWS_AS(get_parameter(noprice, "price.xi"), std::invalid_argument);
}

TEST_CASE("empty sweep values are rejected") {
    std::string sweep = minimal_scenario_json();
    sweep.insert(sweep.rfind('}'),
                 ", \"sweep\": {\"parameter\": \"econ.r\", \"values\": []}\n");
    CHECK_THROWS_AS(parse_scenario(sweep), ScenarioError);
}

TEST_CASE("trajectory CSV schema and byte determinism") {
    const ScenarioFile* reg = find_registry("basic-good-vs-bad");
    REQUIRE(reg != nullptr);
    ScenarioFile s = *reg;
    s.integrator.t_end = 20.0;  // keep the unit test quick
    s.outputs = {"trajectory"};

    const fs::path dir = fs::temp_directory_path() / "keen_csv_test";
    fs::remove_all(dir);
    run_scenario(s, dir / "a");
    run_scenario(s, dir / "b");
    const std::string a = read_file(dir / "a" / "trajectory.csv");
    const std::string b = read_file(dir / "b" / "trajectory.csv");
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "t,omega,lambda,b,f,q,v,x,pi,i,g,g_nominal,c_share,p");

    // basic system: f,q,v,x empty and no price column values
    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    // t,omega,lambda,b, then 4 empties for f,q,v,x
    int commas = 0;
    for (char c : line) commas += (c == ',');
    CHECK(commas == 13);
    CHECK(line.find(",,,,") != std::string::npos);
    CHECK(line.back() == ',');  // empty price column
    fs::remove_all(dir);
}

TEST_CASE("run_scenario emits the requested artifacts") {
    const ScenarioFile* reg = find_registry("basic-good-vs-bad");
    ScenarioFile s = *reg;
    s.integrator.t_end = 60.0;
    s.outputs = {"equilibria", "stability", "trajectory", "classification", "plots"};
    const fs::path dir = fs::temp_directory_path() / "keen_run_test";
    fs::remove_all(dir);
    const RunReport rep = run_scenario(s, dir);
    CHECK(rep.rows.size() == 2);
    for (const std::string& f : rep.manifest) CHECK(fs::exists(dir / f));
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "timeseries_omega.svg"));
    CHECK(fs::exists(dir / "phase_lambda_b.svg"));
    const std::string table = render_table(rep);
    CHECK(table.find("Good1") != std::string::npos);
    CHECK(table.find("Bad2_InfDebt") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweeps run every cell and write one summary") {
    const ScenarioFile* reg = find_registry("markup-sweep");
    REQUIRE(reg != nullptr);
    ScenarioFile s = *reg;
    s.integrator.t_end = 60.0;
    s.outputs = {"classification"};
    s.sweep->axes[0].values = {1.18, 1.2};
    const fs::path dir = fs::temp_directory_path() / "keen_sweep_test";
    fs::remove_all(dir);
    const SweepReport rep = run_sweep(s, dir, 2);
    REQUIRE(rep.cells.size() == 2);
    // existence flip across the discriminant boundary
    CHECK(rep.cells[0].good_points == 0);
    CHECK(rep.cells[1].good_points == 2);
    CHECK(fs::exists(dir / "sweep_summary.csv"));
    const std::string csv = read_file(dir / "sweep_summary.csv");
    CHECK(csv.find("price.xi") != std::string::npos);
    fs::remove_all(dir);

    ScenarioFile nosweep = s;
    nosweep.sweep.reset();
    CHECK_THROWS_AS(run_sweep(nosweep, dir, 1), std::invalid_argument);
}
