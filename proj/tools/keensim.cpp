#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "keen/report.hpp"

namespace fs = std::filesystem;
using namespace keen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

struct Options {
    std::string target;   // scenario file path or @registry-name
    std::string out_dir;
    std::string format = "table";
    bool plots = false;
    double tol = 0.0;     // overrides rel_tol when > 0
    double t_end = 0.0;   // overrides t_end when > 0
};

fs::path resolve_out_dir(const Options& opt, const std::string& scenario_name) {
    fs::path base;
    if (!opt.out_dir.empty())
        base = opt.out_dir;
    else if (const char* env = std::getenv("KEENSIM_OUT"))
        base = env;
    else
        base = "keensim-out";
    return base / scenario_name;
}

int load_scenario(const Options& opt, ScenarioFile& scenario) {
    if (opt.target.empty()) {
        std::cerr << "error: missing scenario (file path or @registry-name)\n";
        return kExitUsage;
    }
    if (opt.target.front() == '@') {
        const std::string name = opt.target.substr(1);
        const ScenarioFile* reg = find_registry(name);
        if (!reg) {
            std::cerr << "error: no registry scenario named '" << name
                      << "' (see `keensim list`)\n";
            return kExitUsage;
        }
        scenario = *reg;
    } else {
        std::ifstream in(opt.target, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read " << opt.target << "\n";
            return kExitIo;
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            scenario = parse_scenario(text.str());
        } catch (const ScenarioError& e) {
            std::cerr << "schema error at " << e.where << ": " << e.what() << "\n";
            return kExitUsage;
        }
    }
    if (opt.tol > 0) scenario.integrator.rel_tol = opt.tol;
    if (opt.t_end > 0) scenario.integrator.t_end = opt.t_end;
    if (opt.plots && !scenario.wants("plots")) scenario.outputs.push_back("plots");
    return -1;
}

void print_report(const Options& opt, const RunReport& report) {
    if (opt.format == "json")
        std::cout << render_json(report);
    else
        std::cout << render_table(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keen model family simulator: equilibria, stability, trajectories"};
    app.require_subcommand(0, 1);

    Options opt;
    std::string seed_registry;
    app.add_option("--out", opt.out_dir, "Output directory (default $KEENSIM_OUT or ./keensim-out)");
    app.add_option("--format", opt.format, "Report format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    app.add_flag("--plots", opt.plots, "Also emit SVG plots");
    app.add_option("--tol", opt.tol, "Override the relative integration tolerance");
    app.add_option("--t-end", opt.t_end, "Override the integration horizon (years)");
    app.add_option("--seed-registry", seed_registry,
                   "Write the named registry scenario as a JSON file and exit");

    CLI::App* cmd_list = app.add_subcommand("list", "List the built-in registry scenarios");
    CLI::App* cmd_eq = app.add_subcommand("equilibria", "Enumerate the equilibrium points");
    CLI::App* cmd_st = app.add_subcommand("stability", "Equilibria plus stability verdicts");
    CLI::App* cmd_sim = app.add_subcommand("simulate", "Integrate and classify a scenario");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run the scenario's parameter sweep");
    for (CLI::App* c : {cmd_eq, cmd_st, cmd_sim, cmd_sweep}) {
        c->add_option("scenario", opt.target, "Scenario file or @registry-name")->required();
        c->fallthrough();
    }
    cmd_list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!seed_registry.empty()) {
            const ScenarioFile* reg = find_registry(seed_registry);
            if (!reg) {
                std::cerr << "error: no registry scenario named '" << seed_registry << "'\n";
                return kExitUsage;
            }
            const fs::path dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
            fs::create_directories(dir);
            const fs::path file = dir / (seed_registry + ".json");
            std::ofstream out(file, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << file.string() << "\n";
                return kExitIo;
            }
            out << serialize_scenario(*reg);
            std::cout << file.string() << "\n";
            return kExitOk;
        }

        if (cmd_list->parsed()) {
            for (const ScenarioFile& s : registry())
                std::cout << s.name << "  -  " << s.description << "\n";
            return kExitOk;
        }

        ScenarioFile scenario;
        if (cmd_eq->parsed() || cmd_st->parsed() || cmd_sim->parsed() || cmd_sweep->parsed()) {
            const int rc = load_scenario(opt, scenario);
            if (rc >= 0) return rc;
        } else {
            std::cerr << app.help();
            return kExitUsage;
        }

        const fs::path out_dir = resolve_out_dir(opt, scenario.name);

        if (cmd_eq->parsed() || cmd_st->parsed()) {
            RunReport report;
            report.scenario = scenario.name;
            report.rows = equilibrium_rows(scenario, cmd_st->parsed());
            print_report(opt, report);
            return kExitOk;
        }
        if (cmd_sim->parsed()) {
            const RunReport report = run_scenario(scenario, out_dir);
            print_report(opt, report);
            if (report.classification &&
                report.classification->kind == RegimeClassification::Kind::Undetermined &&
                !report.classification->detail.empty())
                std::cerr << "warning: " << report.classification->detail << "\n";
            return kExitOk;
        }
        if (cmd_sweep->parsed()) {
            if (!scenario.sweep) {
                std::cerr << "error: scenario '" << scenario.name << "' has no sweep block\n";
                return kExitUsage;
            }
            const SweepReport sweep = run_sweep(scenario, out_dir);
            std::cout << "sweep of " << sweep.cells.size() << " runs -> "
                      << (out_dir / sweep.summary_csv).string() << "\n";
            for (const SweepCell& cell : sweep.cells) {
                std::cout << "  ";
                for (const auto& [p, v] : cell.assignment) std::cout << p << "=" << v << " ";
                std::cout << "-> "
                          << (cell.failed ? ("failed: " + cell.error)
                                          : std::string(kind_name(cell.classification.kind)));
                if (cell.classification.kind == RegimeClassification::Kind::ConvergedTo)
                    std::cout << " " << label_name(cell.classification.label);
                std::cout << "\n";
            }
            return kExitOk;
        }
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const std::string what = e.what();
        return what.find("write") != std::string::npos || what.find("open") != std::string::npos
                   ? kExitIo
                   : kExitUsage;
    }
    return kExitOk;
}
