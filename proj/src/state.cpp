#include "keen/state.hpp"

namespace keen {

int dim(SystemId s) {
    switch (s) {
        case SystemId::Basic3:
        case SystemId::Inflation3:
        case SystemId::InflationInverse3: return 3;
        default: return 4;
    }
}

bool is_primal(SystemId s) {
    return s == SystemId::Basic3 || s == SystemId::Inflation3 || s == SystemId::Speculation4;
}

bool is_speculative(SystemId s) {
    return s == SystemId::Speculation4 || s == SystemId::SpeculationQ4 ||
           s == SystemId::SpeculationVX4;
}

SystemId base_primal(SystemId s) {
    switch (s) {
        case SystemId::InflationInverse3: return SystemId::Inflation3;
        case SystemId::SpeculationQ4:
        case SystemId::SpeculationVX4: return SystemId::Speculation4;
        default: return s;
    }
}

const char* system_name(SystemId s) {
    switch (s) {
        case SystemId::Basic3: return "basic3";
        case SystemId::Inflation3: return "inflation3";
        case SystemId::InflationInverse3: return "inflation_inverse3";
        case SystemId::Speculation4: return "speculation4";
        case SystemId::SpeculationQ4: return "speculation_q4";
        default: return "speculation_vx4";
    }
}

bool system_from_name(const std::string& name, SystemId& out) {
    for (SystemId s : {SystemId::Basic3, SystemId::Inflation3, SystemId::InflationInverse3,
                       SystemId::Speculation4, SystemId::SpeculationQ4, SystemId::SpeculationVX4}) {
        if (name == system_name(s)) {
            out = s;
            return true;
        }
    }
    return false;
}

std::array<const char*, 4> coord_names(SystemId s) {
    switch (s) {
        case SystemId::Basic3:
        case SystemId::Inflation3: return {"omega", "lambda", "b", ""};
        case SystemId::InflationInverse3: return {"omega", "lambda", "q", ""};
        case SystemId::Speculation4: return {"omega", "lambda", "b", "f"};
        case SystemId::SpeculationQ4: return {"omega", "lambda", "q", "f"};
        default: return {"omega", "lambda", "v", "x"};
    }
}

}  // namespace keen
