#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>

namespace keen {

/// The six ODE systems: three primal and three obtained by inverting the
/// unbounded coordinates (q = 1/b, and v = f/b with x = 1/f).
enum class SystemId {
    Basic3,             // (omega, lambda, b), constant price level
    Inflation3,         // (omega, lambda, b) with markup price dynamics
    InflationInverse3,  // (omega, lambda, q)
    Speculation4,       // (omega, lambda, b, f)
    SpeculationQ4,      // (omega, lambda, q, f)
    SpeculationVX4,     // (omega, lambda, v, x)
};

int dim(SystemId s);
bool is_primal(SystemId s);
bool is_speculative(SystemId s);

/// The primal system a transformed one belongs to (identity on primal ids).
SystemId base_primal(SystemId s);

const char* system_name(SystemId s);
bool system_from_name(const std::string& name, SystemId& out);

/// Names of the state coordinates of a system, e.g. {"omega","lambda","b"}.
std::array<const char*, 4> coord_names(SystemId s);

/// Fixed-capacity state vector; the active length is the system dimension.
struct StateVec {
    std::array<double, 4> c{0, 0, 0, 0};
    int n = 0;

    StateVec() = default;
    StateVec(std::initializer_list<double> v) {
        for (double x : v) c[n++] = x;
    }
    static StateVec zeros(int dim_) {
        StateVec s;
        s.n = dim_;
        return s;
    }
    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }
    int size() const { return n; }
    double* begin() { return c.data(); }
    double* end() { return c.data() + n; }
    const double* begin() const { return c.data(); }
    const double* end() const { return c.data() + n; }
};

/// Auxiliary observables evaluated along a state.
struct Observables {
    double pi;                // profit share 1 - omega - r*b
    double i;                 // inflation rate (0 for Basic3)
    double g;                 // real growth rate
    double g_nominal;         // g + i
    double c_share;           // consumption share 1 - kappa(pi)
    double real_wage_growth;  // alpha at fixed wage share
};

}  // namespace keen
