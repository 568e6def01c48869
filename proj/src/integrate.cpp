#include "keen/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace keen {

namespace {

constexpr double kLambdaFloor = 1e-12;
constexpr double kStallStep = 1e-14;
constexpr double kSwitchBack = 1e3;

double scaled_error_norm(const StateVec& y0, const StateVec& y1, const StateVec& err,
                         double rel, double abs) {
    double sum = 0.0;
    for (int i = 0; i < y0.size(); ++i) {
        const double sc = abs + rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = err[i] / sc;
        sum += e * e;
    }
    return std::sqrt(sum / y0.size());
}

bool all_finite(const StateVec& v) {
    for (int i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) return false;
    return true;
}

}  // namespace

StepResult step(SystemId system, const StateVec& state, double t, double h,
                const ModelParams& params, const IntegratorConfig& cfg) {
    if (!(h > 0)) throw std::invalid_argument("step: h must be positive");
    auto rhs = [&](double, const StateVec& y, StateVec& dy) {
        dy = vector_field(system, y, params);
    };
    StepResult out;
    StateVec err;
    rk::dp45_step(rhs, t, state, h, out.state, err);
    out.error_norm = scaled_error_norm(state, out.state, err, cfg.rel_tol, cfg.abs_tol);
    return out;
}

SystemId Trajectory::system_at(std::size_t sample) const { return segment_at(sample).system; }

const Trajectory::Segment& Trajectory::segment_at(std::size_t sample) const {
    const Segment* seg = &segments.front();
    for (const Segment& s : segments) {
        if (s.first_sample <= sample) seg = &s;
        else break;
    }
    return *seg;
}

namespace {

struct SwitchTarget {
    SystemId system;
    StateVec state;
};

/// Exact coordinate maps used when a state leaves, or re-enters, the range
/// where primal coordinates stay well scaled.
std::optional<SwitchTarget> switch_target(SystemId system, const StateVec& y, double threshold) {
    switch (system) {
        case SystemId::Inflation3:
            if (std::abs(y[2]) >= threshold)
                return SwitchTarget{SystemId::InflationInverse3, {y[0], y[1], 1.0 / y[2]}};
            return std::nullopt;
        case SystemId::Speculation4:
            if (std::abs(y[2]) >= threshold && std::abs(y[3]) >= threshold)
                return SwitchTarget{SystemId::SpeculationVX4,
                                    {y[0], y[1], y[3] / y[2], 1.0 / y[3]}};
            if (std::abs(y[2]) >= threshold)
                return SwitchTarget{SystemId::SpeculationQ4, {y[0], y[1], 1.0 / y[2], y[3]}};
            return std::nullopt;
        case SystemId::InflationInverse3:
            if (std::abs(y[2]) >= kSwitchBack)
                return SwitchTarget{SystemId::Inflation3, {y[0], y[1], 1.0 / y[2]}};
            return std::nullopt;
        case SystemId::SpeculationQ4:
            if (std::abs(y[3]) >= threshold)
                return SwitchTarget{SystemId::SpeculationVX4,
                                    {y[0], y[1], y[2] * y[3], 1.0 / y[3]}};
            if (std::abs(y[2]) >= kSwitchBack)
                return SwitchTarget{SystemId::Speculation4, {y[0], y[1], 1.0 / y[2], y[3]}};
            return std::nullopt;
        case SystemId::SpeculationVX4:
            if (std::abs(y[3]) >= kSwitchBack && y[3] != 0.0)
                return SwitchTarget{SystemId::SpeculationQ4,
                                    {y[0], y[1], y[2] * y[3], 1.0 / y[3]}};
            return std::nullopt;
        default: return std::nullopt;  // Basic3 stays primal
    }
}

}  // namespace

Trajectory simulate(SystemId system, const StateVec& initial, const ModelParams& params,
                    const IntegratorConfig& cfg) {
    if (initial.size() != dim(system))
        throw std::invalid_argument("simulate: initial state dimension mismatch");
    if (cfg.log_space && !is_primal(system))
        throw std::invalid_argument("simulate: log-space integration needs a primal system");
    if (!(cfg.t_end > 0) || !(cfg.sample_dt > 0) || !(cfg.rel_tol > 0) || !(cfg.abs_tol > 0))
        throw std::invalid_argument("simulate: tolerances, t_end and sample_dt must be positive");

    Trajectory traj;
    SystemId sys = system;
    bool logged = cfg.log_space;  // the current segment integrates ln(omega), ln(lambda)
    if (logged && (initial[0] <= 0.0 || initial[1] <= 0.0))
        throw std::invalid_argument("simulate: log-space integration needs omega, lambda > 0");

    auto to_internal = [&](const StateVec& y) {
        if (!logged) return y;
        StateVec u = y;
        u[0] = std::log(y[0]);
        u[1] = std::log(y[1]);
        return u;
    };
    auto to_external = [&](const StateVec& u) {
        if (!logged) return u;
        StateVec y = u;
        y[0] = std::exp(u[0]);
        y[1] = std::exp(u[1]);
        return y;
    };

    StateVec u = to_internal(initial);
    double t = 0.0;
    double h = std::min(cfg.max_step, cfg.sample_dt);
    double facold = 1e-4;

    auto rhs = [&](double, const StateVec& ui, StateVec& du) {
        const StateVec y = to_external(ui);
        du = vector_field(sys, y, params);
        if (logged) {
            du[0] = (y[0] != 0.0) ? du[0] / y[0] : 0.0;
            du[1] = (y[1] != 0.0) ? du[1] / y[1] : 0.0;
        }
    };

    auto record_sample = [&](double tk, const StateVec& uk) {
        const StateVec y = to_external(uk);
        traj.times.push_back(tk);
        traj.states.push_back(y);
        traj.derivs.push_back(vector_field(sys, y, params));
        traj.obs.push_back(observables(sys, y, params));
    };

    traj.segments.push_back({0.0, sys, 0});
    record_sample(0.0, u);

    long next_sample = 1;
    const long n_samples = static_cast<long>(std::ceil(cfg.t_end / cfg.sample_dt - 1e-9));

    while (t < cfg.t_end - 1e-12) {
        const double t_next =
            std::min(cfg.t_end, static_cast<double>(next_sample) * cfg.sample_dt);
        h = std::min({h, cfg.max_step, t_next - t});
        if (h < kStallStep) {
            traj.stalled = true;
            traj.stall_reason = "step size underflow";
            break;
        }

        StateVec u1, err;
        bool domain_ok = true;
        try {
            rk::dp45_step(rhs, t, u, h, u1, err);
        } catch (const std::domain_error&) {
            domain_ok = false;
        }
        double err_norm = std::numeric_limits<double>::infinity();
        if (domain_ok && all_finite(u1) && all_finite(err))
            err_norm = scaled_error_norm(u, u1, err, cfg.rel_tol, cfg.abs_tol);

        if (!(err_norm <= 1.0)) {
            // rejected: halve on domain error, otherwise PI shrink
            if (!std::isfinite(err_norm))
                h *= 0.5;
            else
                h = h / std::min(10.0, std::pow(err_norm, 0.2) / 0.9);
            continue;
        }

        // accepted
        t = (t_next - t <= h * (1.0 + 1e-12)) ? t_next : t + h;
        u = u1;
        if (!logged && is_primal(sys) && u[1] > 0.0 && u[1] < kLambdaFloor)
            u[1] = 0.0;  // the lambda = 0 axis is invariant

        const double fac11 = std::pow(std::max(err_norm, 1e-30), 0.17);
        const double fac = std::clamp(fac11 / std::pow(facold, 0.04) / 0.9, 0.1, 5.0);
        h = h / fac;
        facold = std::max(err_norm, 1e-4);

        if (next_sample <= n_samples &&
            t >= std::min(cfg.t_end, static_cast<double>(next_sample) * cfg.sample_dt) -
                     1e-12) {
            record_sample(t, u);
            ++next_sample;
        }

        const StateVec y = to_external(u);
        if (auto target = switch_target(sys, y, cfg.b_switch_threshold)) {
            Trajectory::Segment seg;
            seg.t_start = t;
            seg.system = target->system;
            seg.first_sample = traj.times.size();
            seg.has_switch_obs = true;
            seg.obs_before = observables(sys, y, params);
            sys = target->system;
            logged = false;  // inverse coordinates are signed, keep them plain
            u = target->state;
            seg.obs_after = observables(sys, u, params);
            traj.segments.push_back(seg);
            h = std::min(h, cfg.sample_dt);
        }
    }
    return traj;
}

const char* kind_name(RegimeClassification::Kind k) {
    switch (k) {
        case RegimeClassification::Kind::ConvergedTo: return "converged";
        case RegimeClassification::Kind::LimitCycle: return "limit_cycle";
        case RegimeClassification::Kind::Diverged: return "diverged";
        default: return "undetermined";
    }
}

namespace {

/// Cubic Hermite value on [t0,t1] from endpoint values and derivatives.
double hermite(double t0, double y0, double d0, double t1, double y1, double d1, double t) {
    const double dt = t1 - t0;
    const double s = (t - t0) / dt;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y0 + h10 * dt * d0 + h01 * y1 + h11 * dt * d1;
}

/// Map a sample expressed in `from` coordinates into `to` coordinates.
/// Returns false when a needed denominator vanishes.
bool remap_state(SystemId from, const StateVec& y, SystemId to, StateVec& out) {
    if (from == to) {
        out = y;
        return true;
    }
    // normalize to primal (omega, lambda, b[, f]) first
    StateVec p = y;
    switch (from) {
        case SystemId::InflationInverse3:
        case SystemId::SpeculationQ4:
            if (y[2] == 0.0) return false;
            p[2] = 1.0 / y[2];
            break;
        case SystemId::SpeculationVX4:
            if (y[2] == 0.0 || y[3] == 0.0) return false;
            p[2] = 1.0 / (y[2] * y[3]);
            p[3] = 1.0 / y[3];
            break;
        default: break;
    }
    out = p;
    switch (to) {
        case SystemId::InflationInverse3:
        case SystemId::SpeculationQ4:
            if (p[2] == 0.0) return false;
            out[2] = 1.0 / p[2];
            break;
        case SystemId::SpeculationVX4:
            if (p[2] == 0.0 || p[3] == 0.0) return false;
            out[2] = p[3] / p[2];
            out[3] = 1.0 / p[3];
            break;
        default: break;
    }
    out.n = dim(to);
    return true;
}

/// Distance from a trajectory sample to an equilibrium, measured in the
/// point's defining coordinate system.
double distance_to_point(const EquilibriumPoint& pt, SystemId sample_sys, const StateVec& y) {
    StateVec mapped;
    if (!remap_state(sample_sys, y, pt.defining_system, mapped))
        return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (int i = 0; i < mapped.size(); ++i)
        d = std::max(d, std::abs(mapped[i] - pt.defining_coords[i]));
    return d;
}

}  // namespace

std::optional<LimitCycleInfo> detect_limit_cycle(const Trajectory& traj, double transient_skip) {
    if (traj.times.empty() || traj.span_years() < transient_skip + 200.0) return std::nullopt;
    constexpr double kSectionTol = 1e-4;
    constexpr double kMinAmplitude = 1e-3;
    constexpr int kMinReturns = 5;
    constexpr int kMaxLag = 8;

    // restrict to the final segment past the transient
    const Trajectory::Segment& seg = traj.segments.back();
    const double t_min = traj.times.front() + transient_skip;
    std::size_t first = seg.first_sample;
    while (first < traj.times.size() && traj.times[first] < t_min) ++first;
    if (traj.times.size() - first < 8) return std::nullopt;

    const int n = traj.states[first].size();
    double mean = 0.0;
    for (std::size_t k = first; k < traj.times.size(); ++k) mean += traj.states[k][0];
    mean /= static_cast<double>(traj.times.size() - first);

    struct Crossing {
        double t;
        StateVec state;
    };
    std::vector<Crossing> cross;
    for (std::size_t k = first + 1; k < traj.times.size(); ++k) {
        const double w0 = traj.states[k - 1][0], w1 = traj.states[k][0];
        if (!(w0 < mean && mean <= w1)) continue;
        const double t0 = traj.times[k - 1], t1 = traj.times[k];
        // Hermite root of omega(t) = mean by bisection
        double lo = t0, hi = t1;
        auto omega_at = [&](double tt) {
            return hermite(t0, w0, traj.derivs[k - 1][0], t1, w1, traj.derivs[k][0], tt) - mean;
        };
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (omega_at(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        Crossing c;
        c.t = 0.5 * (lo + hi);
        c.state = StateVec::zeros(n);
        for (int i = 0; i < n; ++i)
            c.state[i] = hermite(t0, traj.states[k - 1][i], traj.derivs[k - 1][i], t1,
                                 traj.states[k][i], traj.derivs[k][i], c.t);
        cross.push_back(std::move(c));
    }
    if (cross.size() < 2) return std::nullopt;

    for (int lag = 1; lag <= kMaxLag; ++lag) {
        const int pairs = static_cast<int>(cross.size()) - lag;
        if (pairs < kMinReturns) break;
        int run = 0;
        double scatter = 0.0;
        for (int i = pairs - 1; i >= 0; --i) {
            double d = 0.0;
            for (int c = 0; c < n; ++c)
                d = std::max(d, std::abs(cross[i + lag].state[c] - cross[i].state[c]));
            if (d > kSectionTol) break;
            ++run;
            scatter = std::max(scatter, d);
        }
        if (run < kMinReturns) continue;

        const std::size_t i0 = cross.size() - static_cast<std::size_t>(run) - lag;
        const double t_from = cross[i0].t;
        LimitCycleInfo info{};
        info.lag = lag;
        info.matched_returns = run;
        info.scatter = scatter;
        double period_sum = 0.0;
        for (std::size_t i = i0; i + lag < cross.size(); ++i)
            period_sum += cross[i + lag].t - cross[i].t;
        info.period = period_sum / static_cast<double>(run);

        for (int c = 0; c < n; ++c)
            info.envelopes[c] = {std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity()};
        for (std::size_t k = first; k < traj.times.size(); ++k) {
            if (traj.times[k] < t_from) continue;
            for (int c = 0; c < n; ++c) {
                info.envelopes[c].first = std::min(info.envelopes[c].first, traj.states[k][c]);
                info.envelopes[c].second = std::max(info.envelopes[c].second, traj.states[k][c]);
            }
        }
        bool oscillating = true;
        for (int c = 0; c < n; ++c)
            if (info.envelopes[c].second - info.envelopes[c].first < kMinAmplitude)
                oscillating = false;
        if (!oscillating) return std::nullopt;  // amplitude gate: not a cycle
        return info;
    }
    return std::nullopt;
}

RegimeClassification classify_asymptotic(const Trajectory& traj, const ModelParams& params) {
    RegimeClassification out;
    if (traj.times.size() < 4) {
        out.detail = "trajectory too short to classify";
        return out;
    }
    const double span = traj.span_years();
    const double t_end = traj.times.back();

    // (1) sustained proximity to an enumerated equilibrium
    if (span >= 50.0) {
        const SystemId primal = base_primal(traj.segments.front().system);
        const std::vector<EquilibriumPoint> points = enumerate_equilibria(params, primal);
        std::size_t w0 = traj.times.size();
        while (w0 > 0 && traj.times[w0 - 1] >= t_end - 50.0) --w0;
        for (const EquilibriumPoint& pt : points) {
            if (!pt.exists) continue;
            bool near = true;
            double last_d = 0.0;
            for (std::size_t k = w0; k < traj.times.size(); ++k) {
                const double d = distance_to_point(pt, traj.system_at(k), traj.states[k]);
                if (!(d < 1e-6)) {
                    near = false;
                    break;
                }
                last_d = d;
            }
            if (near) {
                out.kind = RegimeClassification::Kind::ConvergedTo;
                out.label = pt.label;
                out.branch = pt.branch;
                out.terminal_distance = last_d;
                out.sustained_years = 50.0;
                return out;
            }
        }
    }

    // (2) limit cycle
    const double skip = std::max(span / 2.0, span - 500.0);
    if (auto cycle = detect_limit_cycle(traj, skip)) {
        out.kind = RegimeClassification::Kind::LimitCycle;
        out.period = cycle->period;
        out.envelopes = cycle->envelopes;
        out.detail = "lag " + std::to_string(cycle->lag) + ", returns " +
                     std::to_string(cycle->matched_returns) + ", scatter " +
                     std::to_string(cycle->scatter);
        return out;
    }

    // (3) monotone debt-magnitude growth over the final fifth of the run
    std::size_t d0 = traj.times.size();
    while (d0 > 0 && traj.times[d0 - 1] >= t_end - 0.2 * span) --d0;
    auto debt_magnitude = [&](std::size_t k) {
        const SystemId s = traj.system_at(k);
        const double c2 = traj.states[k][2];
        switch (s) {
            case SystemId::InflationInverse3:
            case SystemId::SpeculationQ4:
                return c2 == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(c2);
            case SystemId::SpeculationVX4: {
                const double vx = c2 * traj.states[k][3];
                return vx == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(vx);
            }
            default: return std::abs(c2);
        }
    };
    if (d0 + 4 < traj.times.size()) {
        bool monotone = true;
        for (std::size_t k = d0 + 1; k < traj.times.size(); ++k) {
            if (debt_magnitude(k) < debt_magnitude(k - 1) * (1.0 - 1e-9)) {
                monotone = false;
                break;
            }
        }
        const double first = debt_magnitude(d0);
        const double last = debt_magnitude(traj.times.size() - 1);
        if (monotone && (last > 2.0 * first || std::isinf(last))) {
            out.kind = RegimeClassification::Kind::Diverged;
            out.direction = "debt share magnitude growing";
            out.detail = "grew from " + std::to_string(first) + " over the final fifth";
            return out;
        }
    }

    if (traj.stalled) out.detail = "integrator stalled: " + traj.stall_reason;
    return out;
}

}  // namespace keen
