#include "keen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "json.hpp"

namespace keen {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, std::set<std::string> allowed,
                  std::set<std::string> required) {
    if (!j.is_object()) throw ScenarioError(where, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ScenarioError(where + "/" + key, "unknown key");
    }
    for (const std::string& key : required) {
        if (!j.contains(key)) throw ScenarioError(where, "missing required key '" + key + "'");
    }
}

double get_num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ScenarioError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ScenarioError(where, "number must be finite");
    return v;
}

double get_num(const json& j, const std::string& where, const char* key) {
    return get_num(j.at(key), where + "/" + key);
}

std::string get_str(const json& j, const std::string& where, const char* key) {
    if (!j.at(key).is_string()) throw ScenarioError(where + "/" + key, "expected a string");
    return j.at(key).get<std::string>();
}

ModelParams parse_params(const json& j, const std::string& where) {
    require_keys(j, where, {"econ", "phillips", "investment", "price", "speculation"},
                 {"econ", "phillips", "investment"});
    ModelParams p;
    {
        const json& e = j.at("econ");
        const std::string w = where + "/econ";
        require_keys(e, w, {"alpha", "beta", "delta", "nu", "r"},
                     {"alpha", "beta", "delta", "nu", "r"});
        p.econ = {get_num(e, w, "alpha"), get_num(e, w, "beta"), get_num(e, w, "delta"),
                  get_num(e, w, "nu"), get_num(e, w, "r")};
    }
    {
        const json& f = j.at("phillips");
        const std::string w = where + "/phillips";
        require_keys(f, w, {"phi0", "phi1"}, {"phi0", "phi1"});
        p.phillips = {get_num(f, w, "phi0"), get_num(f, w, "phi1")};
    }
    {
        const json& k = j.at("investment");
        const std::string w = where + "/investment";
        require_keys(k, w, {"kappa0", "kappa1", "kappa2"}, {"kappa0", "kappa1", "kappa2"});
        p.invest = {get_num(k, w, "kappa0"), get_num(k, w, "kappa1"), get_num(k, w, "kappa2")};
    }
    if (j.contains("price")) {
        const json& pr = j.at("price");
        const std::string w = where + "/price";
        require_keys(pr, w, {"eta_p", "xi", "gamma"}, {"eta_p", "xi", "gamma"});
        p.price = PriceParams{get_num(pr, w, "eta_p"), get_num(pr, w, "xi"),
                              get_num(pr, w, "gamma")};
    }
    if (j.contains("speculation")) {
        const json& sp = j.at("speculation");
        const std::string w = where + "/speculation";
        require_keys(sp, w, {"psi0", "psi1", "psi2"}, {"psi0", "psi1", "psi2"});
        p.spec = SpeculationParams{get_num(sp, w, "psi0"), get_num(sp, w, "psi1"),
                                   get_num(sp, w, "psi2")};
    }
    return p;
}

SweepAxis parse_axis(const json& j, const std::string& where) {
    require_keys(j, where, {"parameter", "values"}, {"parameter", "values"});
    SweepAxis axis;
    axis.parameter = get_str(j, where, "parameter");
    const json& vals = j.at("values");
    if (!vals.is_array()) throw ScenarioError(where + "/values", "expected an array");
    if (vals.empty()) throw ScenarioError(where + "/values", "values list must be non-empty");
    for (std::size_t i = 0; i < vals.size(); ++i)
        axis.values.push_back(get_num(vals[i], where + "/values/" + std::to_string(i)));
    return axis;
}

const std::set<std::string> kOutputs = {"equilibria", "stability", "trajectory",
                                        "classification", "plots"};

}  // namespace

bool ScenarioFile::wants(const std::string& what) const {
    return std::find(outputs.begin(), outputs.end(), what) != outputs.end();
}

ScenarioFile parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError("/", std::string("not valid JSON: ") + e.what());
    }
    require_keys(j, "", {"name", "description", "system", "params", "initial", "integrator",
                         "outputs", "sweep"},
                 {"name", "system", "params", "initial"});

    ScenarioFile s;
    s.name = get_str(j, "", "name");
    if (j.contains("description")) s.description = get_str(j, "", "description");
    const std::string sysname = get_str(j, "", "system");
    if (!system_from_name(sysname, s.system))
        throw ScenarioError("/system", "unknown system '" + sysname + "'");
    s.params = parse_params(j.at("params"), "/params");
    try {
        s.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("/params", e.what());
    }

    const json& init = j.at("initial");
    if (!init.is_array()) throw ScenarioError("/initial", "expected an array");
    if (static_cast<int>(init.size()) != dim(s.system))
        throw ScenarioError("/initial",
                            "dimension mismatch: system '" + sysname + "' needs " +
                                std::to_string(dim(s.system)) + " coordinates, got " +
                                std::to_string(init.size()));
    s.initial = StateVec::zeros(dim(s.system));
    for (int i = 0; i < dim(s.system); ++i)
        s.initial[i] = get_num(init[i], "/initial/" + std::to_string(i));
    if (s.initial[0] < 0.0) throw ScenarioError("/initial/0", "wage share must be non-negative");
    if (s.initial[1] < 0.0 || s.initial[1] >= 1.0)
        throw ScenarioError("/initial/1", "employment rate must lie in [0,1)");

    if (j.contains("integrator")) {
        const json& it = j.at("integrator");
        const std::string w = "/integrator";
        require_keys(it, w,
                     {"rel_tol", "abs_tol", "t_end", "max_step", "log_space",
                      "b_switch_threshold", "sample_dt"},
                     {});
        if (it.contains("rel_tol")) s.integrator.rel_tol = get_num(it, w, "rel_tol");
        if (it.contains("abs_tol")) s.integrator.abs_tol = get_num(it, w, "abs_tol");
        if (it.contains("t_end")) s.integrator.t_end = get_num(it, w, "t_end");
        if (it.contains("max_step")) s.integrator.max_step = get_num(it, w, "max_step");
        if (it.contains("log_space")) {
            if (!it.at("log_space").is_boolean())
                throw ScenarioError(w + "/log_space", "expected a boolean");
            s.integrator.log_space = it.at("log_space").get<bool>();
        }
        if (it.contains("b_switch_threshold"))
            s.integrator.b_switch_threshold = get_num(it, w, "b_switch_threshold");
        if (it.contains("sample_dt")) s.integrator.sample_dt = get_num(it, w, "sample_dt");
        if (!(s.integrator.rel_tol > 0) || !(s.integrator.abs_tol > 0))
            throw ScenarioError(w, "tolerances must be positive");
        if (!(s.integrator.t_end > 0)) throw ScenarioError(w + "/t_end", "must be positive");
        if (!(s.integrator.sample_dt > 0))
            throw ScenarioError(w + "/sample_dt", "must be positive");
    }

    if (j.contains("outputs")) {
        const json& outs = j.at("outputs");
        if (!outs.is_array()) throw ScenarioError("/outputs", "expected an array");
        for (std::size_t i = 0; i < outs.size(); ++i) {
            const std::string w = "/outputs/" + std::to_string(i);
            if (!outs[i].is_string()) throw ScenarioError(w, "expected a string");
            const std::string o = outs[i].get<std::string>();
            if (!kOutputs.count(o)) throw ScenarioError(w, "unknown output '" + o + "'");
            s.outputs.push_back(o);
        }
    } else {
        s.outputs = {"equilibria", "stability", "trajectory", "classification"};
    }

    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        SweepSpec spec;
        if (sw.contains("axes")) {
            require_keys(sw, "/sweep", {"axes"}, {"axes"});
            const json& axes = sw.at("axes");
            if (!axes.is_array() || axes.empty())
                throw ScenarioError("/sweep/axes", "expected a non-empty array");
            for (std::size_t i = 0; i < axes.size(); ++i)
                spec.axes.push_back(parse_axis(axes[i], "/sweep/axes/" + std::to_string(i)));
        } else {
            spec.axes.push_back(parse_axis(sw, "/sweep"));
        }
        for (const SweepAxis& axis : spec.axes) {
            ModelParams probe = s.params;
            try {
                set_parameter(probe, axis.parameter, get_parameter(probe, axis.parameter));
            } catch (const std::invalid_argument& e) {
                throw ScenarioError("/sweep", e.what());
            }
        }
        s.sweep = std::move(spec);
    }
    return s;
}

std::string serialize_scenario(const ScenarioFile& s) {
    json j;
    j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    j["system"] = system_name(s.system);
    json params;
    params["econ"] = {{"alpha", s.params.econ.alpha},
                      {"beta", s.params.econ.beta},
                      {"delta", s.params.econ.delta},
                      {"nu", s.params.econ.nu},
                      {"r", s.params.econ.r}};
    params["phillips"] = {{"phi0", s.params.phillips.phi0}, {"phi1", s.params.phillips.phi1}};
    params["investment"] = {{"kappa0", s.params.invest.kappa0},
                            {"kappa1", s.params.invest.kappa1},
                            {"kappa2", s.params.invest.kappa2}};
    if (s.params.price)
        params["price"] = {{"eta_p", s.params.price->eta_p},
                           {"xi", s.params.price->xi},
                           {"gamma", s.params.price->gamma}};
    if (s.params.spec)
        params["speculation"] = {{"psi0", s.params.spec->psi0},
                                 {"psi1", s.params.spec->psi1},
                                 {"psi2", s.params.spec->psi2}};
    j["params"] = std::move(params);
    j["initial"] = std::vector<double>(s.initial.begin(), s.initial.end());
    j["integrator"] = {{"rel_tol", s.integrator.rel_tol},
                       {"abs_tol", s.integrator.abs_tol},
                       {"t_end", s.integrator.t_end},
                       {"max_step", s.integrator.max_step},
                       {"log_space", s.integrator.log_space},
                       {"b_switch_threshold", s.integrator.b_switch_threshold},
                       {"sample_dt", s.integrator.sample_dt}};
    j["outputs"] = s.outputs;
    if (s.sweep) {
        if (s.sweep->axes.size() == 1) {
            j["sweep"] = {{"parameter", s.sweep->axes[0].parameter},
                          {"values", s.sweep->axes[0].values}};
        } else {
            json axes = json::array();
            for (const SweepAxis& a : s.sweep->axes)
                axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
            j["sweep"] = {{"axes", std::move(axes)}};
        }
    }
    return j.dump(2) + "\n";
}

namespace {

double* parameter_slot(ModelParams& p, const std::string& path) {
    if (path == "econ.alpha") return &p.econ.alpha;
    if (path == "econ.beta") return &p.econ.beta;
    if (path == "econ.delta") return &p.econ.delta;
    if (path == "econ.nu") return &p.econ.nu;
    if (path == "econ.r") return &p.econ.r;
    if (path == "phillips.phi0") return &p.phillips.phi0;
    if (path == "phillips.phi1") return &p.phillips.phi1;
    if (path == "investment.kappa0") return &p.invest.kappa0;
    if (path == "investment.kappa1") return &p.invest.kappa1;
    if (path == "investment.kappa2") return &p.invest.kappa2;
    if (path.starts_with("price.")) {
        if (!p.price) throw std::invalid_argument("parameter path '" + path +
                                                  "' needs a price block");
        if (path == "price.eta_p") return &p.price->eta_p;
        if (path == "price.xi") return &p.price->xi;
        if (path == "price.gamma") return &p.price->gamma;
    }
    if (path.starts_with("speculation.")) {
        if (!p.spec) throw std::invalid_argument("parameter path '" + path +
                                                 "' needs a speculation block");
        if (path == "speculation.psi0") return &p.spec->psi0;
        if (path == "speculation.psi1") return &p.spec->psi1;
        if (path == "speculation.psi2") return &p.spec->psi2;
    }
    throw std::invalid_argument("unknown parameter path '" + path + "'");
}

}  // namespace

double get_parameter(const ModelParams& p, const std::string& path) {
    return *parameter_slot(const_cast<ModelParams&>(p), path);
}

void set_parameter(ModelParams& p, const std::string& path, double value) {
    *parameter_slot(p, path) = value;
}

namespace {

std::vector<ScenarioFile> build_registry() {
    std::vector<ScenarioFile> reg;
    const ModelParams base = baseline_params();

    ModelParams basic_only = base;
    basic_only.price.reset();
    basic_only.spec.reset();

    ModelParams price_only = base;
    price_only.spec.reset();

    {
        ScenarioFile s;
        s.name = "basic-good-vs-bad";
        s.description = "constant-price system: the finite good equilibrium and the "
                        "infinite-debt crisis point, both locally stable";
        s.system = SystemId::Basic3;
        s.params = basic_only;
        s.initial = {0.9, 0.9, 0.1};
        s.integrator.t_end = 450.0;
        s.outputs = {"equilibria", "stability", "trajectory", "classification"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "inflation-equilibria";
        s.description = "monetary system at the reference parameters: wage-share quadratic, "
                        "deflationary points, verdict table";
        s.system = SystemId::Inflation3;
        s.params = price_only;
        s.initial = {0.9, 0.9, 0.3};
        s.integrator.t_end = 100.0;
        s.outputs = {"equilibria", "stability"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "speculation-equilibria";
        s.description = "four-dimensional system at the reference parameters: one good "
                        "point and seven crisis points";
        s.system = SystemId::Speculation4;
        s.params = base;
        s.initial = {0.85, 0.85, 0.5, 0.1};
        s.integrator.t_end = 100.0;
        s.outputs = {"equilibria", "stability"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "inflation-convergent";
        s.description = "monetary system with moderate price relaxation: damped employment "
                        "oscillations into the good equilibrium";
        s.system = SystemId::Inflation3;
        s.params = price_only;
        s.params.price->eta_p = 1.0;
        s.initial = {0.9, 0.9, 0.3};
        s.integrator.t_end = 500.0;
        s.outputs = {"trajectory", "classification", "equilibria", "stability"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "price-damping-grid";
        s.description = "grid over price relaxation speed and money illusion: employment "
                        "oscillation envelopes shrink as eta_p and (1-gamma) grow";
        s.system = SystemId::Inflation3;
        s.params = price_only;
        s.initial = {0.9, 0.9, 0.3};
        s.integrator.t_end = 100.0;
        s.outputs = {"trajectory"};
        SweepSpec sweep;
        sweep.axes.push_back({"price.eta_p", {0.5, 1.0, 2.0}});
        sweep.axes.push_back({"price.gamma", {0.5, 0.8, 0.95}});
        s.sweep = std::move(sweep);
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "markup-collapse";
        s.description = "slightly lowered markup removes the good equilibrium: oscillations "
                        "first, then collapse onto the deflationary infinite-debt point";
        s.system = SystemId::Inflation3;
        s.params = price_only;
        s.params.price->xi = 1.18;
        s.initial = {0.9, 0.9, 0.3};
        s.integrator.t_end = 400.0;
        s.outputs = {"trajectory", "classification"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "markup-sweep";
        s.description = "markup sweep across the discriminant boundary: the good "
                        "equilibrium exists, vanishes, and reappears";
        s.system = SystemId::Inflation3;
        s.params = price_only;
        s.initial = {0.9, 0.9, 0.3};
        s.integrator.t_end = 150.0;
        s.outputs = {"classification"};
        SweepSpec sweep;
        sweep.axes.push_back({"price.xi", {1.15, 1.17, 1.18, 1.19, 1.2, 1.22}});
        s.sweep = std::move(sweep);
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "speculation-convergent";
        s.description = "slow price relaxation: two-timescale convergence of the "
                        "four-dimensional system onto its good equilibrium";
        s.system = SystemId::Speculation4;
        s.params = base;
        s.params.price->eta_p = 0.4;
        s.initial = {0.85, 0.85, 0.5, 0.1};
        s.integrator.t_end = 1700.0;
        s.outputs = {"trajectory", "classification"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "speculation-cycle";
        s.description = "speculation threshold in its cycle-producing range: a persistent "
                        "boom-bust orbit of multi-decade period";
        s.system = SystemId::Speculation4;
        s.params = base;
        s.params.spec->psi1 = 0.022;
        s.initial = {0.7911370853831875, 0.9404116349569999, 1.837336320411671,
                     -0.02185624020403917};
        s.integrator.t_end = 1500.0;
        s.outputs = {"trajectory", "classification", "plots"};
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "speculation-cycle-sweep";
        s.description = "sweep of the speculation threshold from the same starting state: "
                        "low values collapse into the deflationary crisis, a band sustains "
                        "the cycle, high values converge to the good point";
        s.system = SystemId::Speculation4;
        s.params = base;
        s.initial = {0.7911370853831875, 0.9404116349569999, 1.837336320411671,
                     -0.02185624020403917};
        s.integrator.t_end = 1500.0;
        s.outputs = {"classification"};
        SweepSpec sweep;
        SweepAxis axis;
        axis.parameter = "speculation.psi1";
        for (int k = 0; k <= 20; ++k) axis.values.push_back(0.002 * k);
        sweep.axes.push_back(std::move(axis));
        s.sweep = std::move(sweep);
        reg.push_back(std::move(s));
    }
    {
        ScenarioFile s;
        s.name = "cycle-collapse";
        s.description = "lowered speculation threshold, starting on the cycle: the flow "
                        "never reverses and the run collapses into the deflationary "
                        "infinite-debt, infinite-speculation point";
        s.system = SystemId::Speculation4;
        s.params = base;
        s.params.spec->psi1 = 0.012;
        s.initial = {0.7911370853831875, 0.9404116349569999, 1.837336320411671,
                     -0.02185624020403917};
        s.integrator.t_end = 1500.0;
        s.outputs = {"trajectory", "classification"};
        reg.push_back(std::move(s));
    }
    return reg;
}

}  // namespace

const std::vector<ScenarioFile>& registry() {
    static const std::vector<ScenarioFile> reg = build_registry();
    return reg;
}

const ScenarioFile* find_registry(const std::string& name) {
    for (const ScenarioFile& s : registry())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace keen
