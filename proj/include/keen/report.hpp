#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "keen/scenario.hpp"
#include "keen/stability.hpp"

namespace keen {

struct RunReport {
    struct Row {
        EquilibriumPoint point;
        std::optional<StabilityReport> stability;
    };
    std::string scenario;
    std::vector<Row> rows;
    std::optional<RegimeClassification> classification;
    std::vector<std::string> manifest;  // files written, relative to the out dir
};

/// Equilibrium enumeration plus (optionally) stability classification.
std::vector<RunReport::Row> equilibrium_rows(const ScenarioFile& s, bool with_stability);

/// Trajectory CSV with the fixed header
///   t,omega,lambda,b,f,q,v,x,pi,i,g,g_nominal,c_share,p
/// Coordinates absent from a sample's active system stay empty; the price
/// column is filled only when the scenario has a price block (p(0) = 1).
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj,
                          const ModelParams& params);

/// Self-contained SVG line plot (960x640 viewBox, no dependencies).
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
void write_svg_plot(const std::filesystem::path& file, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series);

/// Human-readable table (4 decimals) of the equilibrium/stability rows.
std::string render_table(const RunReport& report);

/// Machine-readable report (17 significant digits).
std::string render_json(const RunReport& report);

/// Runs one scenario end to end, writing every requested artifact under
/// out_dir. Never throws for solver findings; I/O failures do throw.
RunReport run_scenario(const ScenarioFile& s, const std::filesystem::path& out_dir);

struct SweepCell {
    std::vector<std::pair<std::string, double>> assignment;
    RegimeClassification classification;
    int good_points = 0;
    std::string run_dir;
    bool failed = false;
    std::string error;
};

struct SweepReport {
    std::string scenario;
    std::vector<SweepCell> cells;
    std::string summary_csv;  // path of the written summary, relative to out_dir
};

/// Runs every cell of the sweep (cross product over axes) on a bounded
/// worker pool and writes one summary CSV plus per-cell artifacts.
SweepReport run_sweep(const ScenarioFile& s, const std::filesystem::path& out_dir,
                      unsigned workers = 0);

}  // namespace keen
