#include "keen/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace keen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string f4(double v) {
    if (!std::isfinite(v)) return v > 0 ? "+inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void write_file(const fs::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + file.string());
}

json coords_json(const StateVec& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) {
        const double x = v[i];
        if (std::isfinite(x))
            arr.push_back(json::parse(g17(x)));
        else
            arr.push_back(x > 0 ? "inf" : "-inf");
    }
    return arr;
}

}  // namespace

std::vector<RunReport::Row> equilibrium_rows(const ScenarioFile& s, bool with_stability) {
    std::vector<RunReport::Row> rows;
    for (EquilibriumPoint& p : enumerate_equilibria(s.params, s.system)) {
        RunReport::Row row;
        row.point = std::move(p);
        if (with_stability && row.point.exists)
            row.stability = classify(row.point, s.params);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_trajectory_csv(const fs::path& file, const Trajectory& traj,
                          const ModelParams& params) {
    std::string out = "t,omega,lambda,b,f,q,v,x,pi,i,g,g_nominal,c_share,p\n";
    std::vector<double> prices;
    if (params.price) {
        std::vector<double> omegas;
        omegas.reserve(traj.states.size());
        for (const StateVec& s : traj.states) omegas.push_back(s[0]);
        prices = price_path(traj.times, omegas, 1.0, *params.price);
    }
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const SystemId sys = traj.system_at(k);
        const StateVec& y = traj.states[k];
        const Observables& o = traj.obs[k];
        std::string b, f, q, v, x;
        switch (sys) {
            case SystemId::Basic3:
            case SystemId::Inflation3: b = g17(y[2]); break;
            case SystemId::InflationInverse3: q = g17(y[2]); break;
            case SystemId::Speculation4:
                b = g17(y[2]);
                f = g17(y[3]);
                break;
            case SystemId::SpeculationQ4:
                q = g17(y[2]);
                f = g17(y[3]);
                break;
            default:
                v = g17(y[2]);
                x = g17(y[3]);
                break;
        }
        out += g17(traj.times[k]);
        out += ',';
        out += g17(y[0]);
        out += ',';
        out += g17(y[1]);
        out += ',';
        out += b + ',' + f + ',' + q + ',' + v + ',' + x + ',';
        out += std::isfinite(o.pi) ? g17(o.pi) : "";
        out += ',';
        out += g17(o.i);
        out += ',';
        out += g17(o.g);
        out += ',';
        out += g17(o.g_nominal);
        out += ',';
        out += g17(o.c_share);
        out += ',';
        if (!prices.empty()) out += g17(prices[k]);
        out += '\n';
    }
    write_file(file, out);
}

void write_svg_plot(const fs::path& file, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<SvgSeries>& series) {
    constexpr double W = 960, H = 640, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const SvgSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-300) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double pad = 0.04 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 640\" "
           "font-family=\"sans-serif\" font-size=\"13\">\n"
        << "<rect width=\"960\" height=\"640\" fill=\"white\"/>\n"
        << "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
    char buf[256];
    for (int k = 0; k <= 5; ++k) {
        const double xv = xmin + k * (xmax - xmin) / 5;
        const double yv = ymin + k * (ymax - ymin) / 5;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"#dddddd\"/>\n",
                      px(xv), py(ymin), px(xv), py(ymax));
        svg << buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"#dddddd\"/>\n",
                      px(xmin), py(yv), px(xmax), py(yv));
        svg << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%.4g</text>\n", px(xv),
                      H - MB + 18, xv);
        svg << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", ML - 6,
                      py(yv) + 4, yv);
        svg << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  ML, MT, W - ML - MR, H - MT - MB);
    svg << buf;
    svg << "<text x=\"480\" y=\"630\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    svg << "<text x=\"16\" y=\"320\" text-anchor=\"middle\" transform=\"rotate(-90 16 320)\">"
        << ylabel << "</text>\n";

    int ci = 0;
    for (const SvgSeries& s : series) {
        const char* color = kColors[ci % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            svg << buf;
        }
        svg << "\"/>\n";
        if (!s.label.empty()) {
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">%s</text>\n", W - MR - 150.0,
                          MT + 18.0 + 16.0 * ci, color, s.label.c_str());
            svg << buf;
        }
        ++ci;
    }
    svg << "</svg>\n";
    write_file(file, svg.str());
}

std::string render_table(const RunReport& report) {
    std::ostringstream out;
    out << "scenario: " << report.scenario << "\n";
    out << "label                        branch exists  coords (display)                      "
           "log10res   verdict\n";
    for (const RunReport::Row& row : report.rows) {
        const EquilibriumPoint& p = row.point;
        char line[256];
        std::string coords = "(";
        for (int i = 0; i < p.coords.size(); ++i)
            coords += (i ? ", " : "") + f4(p.coords[i]);
        coords += ")";
        std::snprintf(line, sizeof(line), "%-28s %-6d %-7s %-37s %-10s %s\n", label_name(p.label),
                      p.branch, p.exists ? "yes" : "no", coords.c_str(),
                      p.exists && std::isfinite(p.residual) ? f4(std::log10(std::max(p.residual, 1e-300))).c_str() : "-",
                      row.stability ? verdict_name(row.stability->final_verdict)
                                    : (p.exists ? "-" : p.status.c_str()));
        out << line;
        if (row.stability) {
            for (const PrintedCondition& c : row.stability->printed_conditions) {
                out << "    condition " << c.name << " [" << c.formula_id << "]: "
                    << (c.holds ? "holds" : "fails");
                if (!c.note.empty()) out << "  (" << c.note << ")";
                out << "\n";
            }
        }
    }
    if (report.classification) {
        const RegimeClassification& c = *report.classification;
        out << "classification: " << kind_name(c.kind);
        if (c.kind == RegimeClassification::Kind::ConvergedTo)
            out << " -> " << label_name(c.label) << "#" << c.branch;
        if (c.kind == RegimeClassification::Kind::LimitCycle)
            out << " period " << f4(c.period) << " yr";
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
    }
    return out.str();
}

namespace {

json report_json(const RunReport& report) {
    json j;
    j["scenario"] = report.scenario;
    json rows = json::array();
    for (const RunReport::Row& row : report.rows) {
        json r;
        r["label"] = label_name(row.point.label);
        r["branch"] = row.point.branch;
        r["exists"] = row.point.exists;
        if (!row.point.status.empty()) r["status"] = row.point.status;
        r["coords"] = coords_json(row.point.coords);
        r["defining_system"] = system_name(row.point.defining_system);
        r["defining_coords"] = coords_json(row.point.defining_coords);
        if (std::isfinite(row.point.residual)) r["residual"] = row.point.residual;
        if (row.point.aux) {
            const Observables& o = *row.point.aux;
            r["observables"] = {{"pi", std::isfinite(o.pi) ? json(o.pi) : json("-inf")},
                                {"i", o.i},
                                {"g", o.g},
                                {"g_nominal", o.g_nominal},
                                {"c_share", o.c_share}};
        }
        if (row.stability) {
            const StabilityReport& s = *row.stability;
            json st;
            st["charpoly"] = s.charpoly_coeffs;
            st["routh_hurwitz"] = s.rh_verdict;
            st["eigen_real_parts"] = s.eigen_real_parts;
            st["verdict"] = verdict_name(s.final_verdict);
            json conds = json::array();
            for (const PrintedCondition& c : s.printed_conditions) {
                json cj = {{"name", c.name}, {"formula_id", c.formula_id}, {"holds", c.holds}};
                if (!c.note.empty()) cj["note"] = c.note;
                conds.push_back(std::move(cj));
            }
            st["conditions"] = std::move(conds);
            r["stability"] = std::move(st);
        }
        rows.push_back(std::move(r));
    }
    j["equilibria"] = std::move(rows);
    if (report.classification) {
        const RegimeClassification& c = *report.classification;
        json cj;
        cj["kind"] = kind_name(c.kind);
        if (c.kind == RegimeClassification::Kind::ConvergedTo) {
            cj["label"] = label_name(c.label);
            cj["branch"] = c.branch;
            cj["terminal_distance"] = c.terminal_distance;
        }
        if (c.kind == RegimeClassification::Kind::LimitCycle) {
            cj["period"] = c.period;
            json env = json::array();
            for (int i = 0; i < 4; ++i)
                env.push_back({c.envelopes[i].first, c.envelopes[i].second});
            cj["envelopes"] = std::move(env);
        }
        if (!c.direction.empty()) cj["direction"] = c.direction;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["classification"] = std::move(cj);
    }
    j["manifest"] = report.manifest;
    return j;
}

}  // namespace

std::string render_json(const RunReport& report) { return report_json(report).dump(2) + "\n"; }

namespace {

void write_plots(const fs::path& dir, const Trajectory& traj, const ScenarioFile& s,
                 std::vector<std::string>& manifest) {
    const int n = dim(base_primal(s.system));
    const std::array<const char*, 4> names = coord_names(base_primal(s.system));
    // samples mapped back to primal coordinates where representable; the
    // unbounded coordinates are blanked once they pass the switch threshold
    // so collapse runs keep readable axes
    std::vector<std::vector<double>> prim(n);
    std::vector<double> times, infl, growth;
    const double clip = s.integrator.b_switch_threshold;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const SystemId sys = traj.system_at(k);
        StateVec y = traj.states[k];
        if (sys == SystemId::InflationInverse3 || sys == SystemId::SpeculationQ4) {
            y[2] = (y[2] == 0.0) ? nan : 1.0 / y[2];
        } else if (sys == SystemId::SpeculationVX4) {
            const double vx = y[2] * y[3];
            const double f = (y[3] == 0.0) ? nan : 1.0 / y[3];
            y[2] = (vx == 0.0) ? nan : 1.0 / vx;
            y[3] = f;
        }
        for (int c = 2; c < n; ++c)
            if (std::abs(y[c]) > clip) y[c] = nan;
        times.push_back(traj.times[k]);
        for (int c = 0; c < n; ++c) prim[c].push_back(y[c]);
        infl.push_back(traj.obs[k].i);
        growth.push_back(traj.obs[k].g);
    }
    for (int c = 0; c < n; ++c) {
        const std::string file = std::string("timeseries_") + names[c] + ".svg";
        write_svg_plot(dir / file, s.name + ": " + names[c] + "(t)", "t (years)", names[c],
                       {{names[c], times, prim[c]}});
        manifest.push_back(file);
    }
    write_svg_plot(dir / "timeseries_observables.svg", s.name + ": inflation and growth",
                   "t (years)", "rate (1/yr)",
                   {{"i", times, infl}, {"g", times, growth}});
    manifest.push_back("timeseries_observables.svg");
    write_svg_plot(dir / "phase_lambda_b.svg", s.name + ": (lambda, b)", "lambda", "b",
                   {{"", prim[1], prim[2]}});
    manifest.push_back("phase_lambda_b.svg");
    write_svg_plot(dir / "phase_omega_b.svg", s.name + ": (omega, b)", "omega", "b",
                   {{"", prim[0], prim[2]}});
    manifest.push_back("phase_omega_b.svg");
    if (n == 4) {
        write_svg_plot(dir / "phase_b_f.svg", s.name + ": (b, f)", "b", "f",
                       {{"", prim[2], prim[3]}});
        manifest.push_back("phase_b_f.svg");
    }
}

}  // namespace

RunReport run_scenario(const ScenarioFile& s, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    RunReport report;
    report.scenario = s.name;

    const bool with_stability = s.wants("stability");
    if (s.wants("equilibria") || with_stability)
        report.rows = equilibrium_rows(s, with_stability);

    if (s.wants("trajectory") || s.wants("classification") || s.wants("plots")) {
        const Trajectory traj = simulate(s.system, s.initial, s.params, s.integrator);
        if (s.wants("trajectory")) {
            write_trajectory_csv(out_dir / "trajectory.csv", traj, s.params);
            report.manifest.push_back("trajectory.csv");
        }
        if (s.wants("classification")) {
            report.classification = classify_asymptotic(traj, s.params);
        }
        if (s.wants("plots")) write_plots(out_dir, traj, s, report.manifest);
    }

    write_file(out_dir / "summary.json", render_json(report));
    report.manifest.push_back("summary.json");
    return report;
}

SweepReport run_sweep(const ScenarioFile& s, const fs::path& out_dir, unsigned workers) {
    if (!s.sweep || s.sweep->axes.empty())
        throw std::invalid_argument("run_sweep: scenario has no sweep block");
    fs::create_directories(out_dir);

    // cross product, row-major over the axes
    std::vector<SweepCell> cells;
    std::vector<std::size_t> idx(s.sweep->axes.size(), 0);
    for (;;) {
        SweepCell cell;
        for (std::size_t a = 0; a < s.sweep->axes.size(); ++a)
            cell.assignment.emplace_back(s.sweep->axes[a].parameter,
                                         s.sweep->axes[a].values[idx[a]]);
        cells.push_back(std::move(cell));
        std::size_t a = s.sweep->axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < s.sweep->axes[a].values.size()) break;
            idx[a] = 0;
            if (a == 0) {
                a = SIZE_MAX;
                break;
            }
        }
        if (a == SIZE_MAX) break;
    }

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            SweepCell& cell = cells[k];
            std::string dirname;
            for (const auto& [path, value] : cell.assignment) {
                if (!dirname.empty()) dirname += "_";
                dirname += path.substr(path.find('.') + 1) + "=" + g17(value);
            }
            cell.run_dir = dirname;
            try {
                ScenarioFile run = s;
                run.sweep.reset();
                run.name = s.name + "/" + dirname;
                for (const auto& [path, value] : cell.assignment)
                    set_parameter(run.params, path, value);
                run.params.validate();
                if (!run.wants("classification")) run.outputs.push_back("classification");
                const RunReport rep = run_scenario(run, out_dir / dirname);
                if (rep.classification) cell.classification = *rep.classification;
                for (const EquilibriumPoint& p : enumerate_equilibria(run.params, run.system))
                    if (p.exists &&
                        (p.label == EqLabel::Good1 || p.label == EqLabel::Good1_Spec))
                        ++cell.good_points;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::string csv = "parameters,values,kind,label,period,amplitude_omega,terminal_distance,"
                      "good_points,run_dir,error\n";
    for (const SweepCell& cell : cells) {
        std::string paths, values;
        for (const auto& [path, value] : cell.assignment) {
            if (!paths.empty()) {
                paths += ";";
                values += ";";
            }
            paths += path;
            values += g17(value);
        }
        const RegimeClassification& c = cell.classification;
        csv += paths + "," + values + ",";
        csv += cell.failed ? "failed" : kind_name(c.kind);
        csv += ",";
        csv += (c.kind == RegimeClassification::Kind::ConvergedTo)
                   ? (std::string(label_name(c.label)) + "#" + std::to_string(c.branch))
                   : "";
        csv += ",";
        csv += (c.kind == RegimeClassification::Kind::LimitCycle) ? g17(c.period) : "";
        csv += ",";
        csv += (c.kind == RegimeClassification::Kind::LimitCycle)
                   ? g17(c.envelopes[0].second - c.envelopes[0].first)
                   : "";
        csv += ",";
        csv += (c.terminal_distance >= 0) ? g17(c.terminal_distance) : "";
        csv += "," + std::to_string(cell.good_points);
        csv += "," + cell.run_dir;
        csv += "," + cell.error + "\n";
    }
    write_file(out_dir / "sweep_summary.csv", csv);

    SweepReport rep;
    rep.scenario = s.name;
    rep.cells = std::move(cells);
    rep.summary_csv = "sweep_summary.csv";
    return rep;
}

}  // namespace keen
