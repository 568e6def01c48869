#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keen/equilibria.hpp"
#include "keen/model.hpp"

namespace keen {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double t_end = 100.0;
    double max_step = 1.0;
    bool log_space = false;            // integrate ln(omega), ln(lambda)
    double b_switch_threshold = 1e6;   // |b| (or |f|) beyond which to invert coordinates
    double sample_dt = 0.05;
};

namespace rk {

/// One Dormand-Prince 5(4) embedded step. rhs(t, y, dydt) fills the
/// derivative; y5 receives the fifth-order solution and err the embedded
/// local error estimate.
template <class Rhs>
void dp45_step(Rhs&& rhs, double t, const StateVec& y, double h, StateVec& y5, StateVec& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const int n = y.size();
    StateVec k1, k2, k3, k4, k5, k6, k7, tmp;
    k1 = k2 = k3 = k4 = k5 = k6 = k7 = tmp = StateVec::zeros(n);
    y5 = err = StateVec::zeros(n);

    rhs(t, y, k1);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (int i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (int i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (int i = 0; i < n; ++i)
        y5[i] = y[i] +
                h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, y5, k7);
    for (int i = 0; i < n; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                      e7 * k7[i]);
}

}  // namespace rk

struct StepResult {
    StateVec state;
    double error_norm;  // tolerance-scaled embedded error, accept when <= 1
};

/// One adaptive-step candidate for the model systems. Throws
/// std::domain_error out of the vector field when the step leaves the
/// state space (the driver treats that as a rejection).
StepResult step(SystemId system, const StateVec& state, double t, double h,
                const ModelParams& params, const IntegratorConfig& cfg);

struct Trajectory {
    struct Segment {
        double t_start;
        SystemId system;
        std::size_t first_sample;
        bool has_switch_obs = false;
        Observables obs_before{};  // observables straddling the switch instant
        Observables obs_after{};
    };
    std::vector<double> times;
    std::vector<StateVec> states;   // coordinates of the segment's system
    std::vector<StateVec> derivs;   // vector field at each sample
    std::vector<Observables> obs;
    std::vector<Segment> segments;
    bool stalled = false;
    std::string stall_reason;

    double span_years() const { return times.empty() ? 0.0 : times.back() - times.front(); }
    SystemId system_at(std::size_t sample) const;
    const Segment& segment_at(std::size_t sample) const;
};

/// Integrates the system from `initial` to cfg.t_end with PI step control,
/// sampling every cfg.sample_dt. When |b| (or |f|) exceeds the switch
/// threshold the state is mapped exactly onto the inverse-coordinate
/// system and integration continues there; switches are recorded as
/// segments. A stalled run is returned with the reason, never thrown.
Trajectory simulate(SystemId system, const StateVec& initial, const ModelParams& params,
                    const IntegratorConfig& cfg);

struct LimitCycleInfo {
    double period;
    int lag;               // section crossings per cycle period
    int matched_returns;
    double scatter;        // max state-space distance among matched returns
    std::array<std::pair<double, double>, 4> envelopes;  // per-coordinate min/max
};

/// Poincare-section cycle detection on upward crossings of the wage share
/// through its post-transient mean. Crossing states are interpolated with
/// cubic Hermite polynomials from the stored samples and derivatives. A
/// cycle needs >= 5 consecutive returns matching within 1e-4 in full state
/// space at some lag (the orbit may cross the section several times per
/// period) and every coordinate oscillating by at least 1e-3.
std::optional<LimitCycleInfo> detect_limit_cycle(const Trajectory& traj, double transient_skip);

struct RegimeClassification {
    enum class Kind { ConvergedTo, LimitCycle, Diverged, Undetermined };
    Kind kind = Kind::Undetermined;
    EqLabel label{};
    int branch = 0;
    double period = 0.0;
    std::array<std::pair<double, double>, 4> envelopes{};
    std::string direction;
    double terminal_distance = -1.0;
    double sustained_years = 0.0;
    std::string detail;
};

const char* kind_name(RegimeClassification::Kind k);

/// Asymptotic outcome of a finished run, tested in order: sustained
/// proximity to an enumerated equilibrium (1e-6 over the final 50 years,
/// infinite-debt points measured in their inverse coordinates), then limit
/// cycles, then monotone debt divergence over the final fifth of the run.
RegimeClassification classify_asymptotic(const Trajectory& traj, const ModelParams& params);

}  // namespace keen
