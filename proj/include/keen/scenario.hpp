#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "keen/integrate.hpp"
#include "keen/params.hpp"
#include "keen/state.hpp"

namespace keen {

/// Schema violation; `where` is a JSON-pointer-style path into the document.
struct ScenarioError : std::runtime_error {
    std::string where;
    ScenarioError(std::string where_, const std::string& what_)
        : std::runtime_error(where_ + ": " + what_), where(std::move(where_)) {}
};

/// One axis of a parameter sweep. Scenario files written by hand carry a
/// single axis ("parameter"/"values"); built-in grid scenarios use the
/// "axes" form and sweeps run over the cross product.
struct SweepAxis {
    std::string parameter;  // dotted path, e.g. "price.xi"
    std::vector<double> values;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;
};

struct ScenarioFile {
    std::string name;
    std::string description;
    SystemId system = SystemId::Basic3;
    ModelParams params;
    StateVec initial;
    IntegratorConfig integrator;
    std::vector<std::string> outputs;  // subset of {equilibria, stability, trajectory, classification, plots}
    std::optional<SweepSpec> sweep;

    bool wants(const std::string& what) const;
};

/// Parses and fully validates a scenario document. Unknown keys are
/// rejected, every number must be finite, the initial state must match the
/// system dimension and lie in the state space.
ScenarioFile parse_scenario(const std::string& text);

/// Canonical JSON serialization; parse(serialize(s)) == s.
std::string serialize_scenario(const ScenarioFile& s);

/// Dotted-path access to model parameters, used by sweeps.
double get_parameter(const ModelParams& p, const std::string& path);
void set_parameter(ModelParams& p, const std::string& path, double value);

/// Built-in scenarios reproducing the model family's reference results.
const std::vector<ScenarioFile>& registry();
const ScenarioFile* find_registry(const std::string& name);

}  // namespace keen
