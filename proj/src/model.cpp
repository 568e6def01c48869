#include "keen/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace keen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const PriceParams& require_price(const ModelParams& p, const char* who) {
    if (!p.price) throw std::invalid_argument(std::string(who) + ": price block required");
    return *p.price;
}

const SpeculationParams& require_spec(const ModelParams& p, const char* who) {
    if (!p.spec) throw std::invalid_argument(std::string(who) + ": speculation block required");
    return *p.spec;
}

void check_dim(SystemId system, const StateVec& s, const char* who) {
    if (s.size() != dim(system))
        throw std::invalid_argument(std::string(who) + ": state dimension mismatch");
}

}  // namespace

double profit_share(SystemId system, const StateVec& state, const EconParams& econ) {
    switch (system) {
        case SystemId::Basic3:
        case SystemId::Inflation3:
        case SystemId::Speculation4:
            return 1.0 - state[0] - econ.r * state[2];
        case SystemId::InflationInverse3:
        case SystemId::SpeculationQ4: {
            const double q = state[2];
            if (q == 0.0)
                throw std::domain_error("profit_share: q = 0, take the limit instead");
            return 1.0 - state[0] - econ.r / q;
        }
        default: {
            const double vx = state[2] * state[3];
            if (vx == 0.0)
                throw std::domain_error("profit_share: v*x = 0, take the limit instead");
            return 1.0 - state[0] - econ.r / vx;
        }
    }
}

StateVec vector_field(SystemId system, const StateVec& state, const ModelParams& params) {
    check_dim(system, state, "vector_field");
    const EconParams& e = params.econ;
    const double omega = state[0];
    const double lambda = state[1];
    const double wage_pressure = phillips(lambda, params.phillips);

    StateVec out = StateVec::zeros(state.size());
    switch (system) {
        case SystemId::Basic3: {
            const double b = state[2];
            const double pi = 1.0 - omega - e.r * b;
            const double gr = growth_rate(pi, params);
            out[0] = omega * (wage_pressure - e.alpha);
            out[1] = lambda * (gr - e.alpha - e.beta);
            out[2] = kappa(pi, params.invest) - pi - b * gr;
            return out;
        }
        case SystemId::Inflation3: {
            const PriceParams& pr = require_price(params, "vector_field");
            const double b = state[2];
            const double pi = 1.0 - omega - e.r * b;
            const double gr = growth_rate(pi, params);
            const double i = inflation_rate(omega, pr);
            out[0] = omega * (wage_pressure - e.alpha - (1.0 - pr.gamma) * i);
            out[1] = lambda * (gr - e.alpha - e.beta);
            out[2] = kappa(pi, params.invest) - pi - b * (i + gr);
            return out;
        }
        case SystemId::InflationInverse3: {
            const PriceParams& pr = require_price(params, "vector_field");
            const double q = state[2];
            const double i = inflation_rate(omega, pr);
            double kap, gr;
            if (std::abs(q) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                gr = growth_rate_floor(params);
            } else {
                const double pi = 1.0 - omega - e.r / q;
                kap = kappa(pi, params.invest);
                gr = kap / e.nu - e.delta;
            }
            out[0] = omega * (wage_pressure - e.alpha - (1.0 - pr.gamma) * i);
            out[1] = lambda * (gr - e.alpha - e.beta);
            // q^2*pi expanded as q^2*(1-omega) - q*r so the r/q part cancels
            out[2] = q * (gr + i - e.r) - q * q * (kap - 1.0 + omega);
            return out;
        }
        case SystemId::Speculation4: {
            const PriceParams& pr = require_price(params, "vector_field");
            const SpeculationParams& sp = require_spec(params, "vector_field");
            const double b = state[2], f = state[3];
            const double pi = 1.0 - omega - e.r * b;
            const double gr = growth_rate(pi, params);
            const double i = inflation_rate(omega, pr);
            const double gn = gr + i;
            out[0] = omega * (wage_pressure - e.alpha - (1.0 - pr.gamma) * i);
            out[1] = lambda * (gr - e.alpha - e.beta);
            out[2] = kappa(pi, params.invest) - pi - b * gn + f;
            out[3] = psi(gn, sp) - f * gn;
            return out;
        }
        case SystemId::SpeculationQ4: {
            const PriceParams& pr = require_price(params, "vector_field");
            const SpeculationParams& sp = require_spec(params, "vector_field");
            const double q = state[2], f = state[3];
            const double i = inflation_rate(omega, pr);
            double kap, gr;
            if (std::abs(q) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                gr = growth_rate_floor(params);
            } else {
                const double pi = 1.0 - omega - e.r / q;
                kap = kappa(pi, params.invest);
                gr = kap / e.nu - e.delta;
            }
            const double gn = gr + i;
            out[0] = omega * (wage_pressure - e.alpha - (1.0 - pr.gamma) * i);
            out[1] = lambda * (gr - e.alpha - e.beta);
            out[2] = q * (gn - e.r) - q * q * (kap - 1.0 + omega + f);
            out[3] = psi(gn, sp) - f * gn;
            return out;
        }
        default: {  // SpeculationVX4
            const PriceParams& pr = require_price(params, "vector_field");
            const SpeculationParams& sp = require_spec(params, "vector_field");
            const double v = state[2], x = state[3];
            const double i = inflation_rate(omega, pr);
            double kap, gr;
            const double vx = v * x;
            if (std::abs(vx) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                gr = growth_rate_floor(params);
            } else {
                const double pi = 1.0 - omega - e.r / vx;
                kap = kappa(pi, params.invest);
                gr = kap / e.nu - e.delta;
            }
            const double gn = gr + i;
            const double flow = psi(gn, sp);
            out[0] = omega * (wage_pressure - e.alpha - (1.0 - pr.gamma) * i);
            out[1] = lambda * (gr - e.alpha - e.beta);
            // v^2*x*pi expanded as v^2*x*(1-omega) - r*v
            out[2] = vx * flow - v * v * x * (kap - 1.0 + omega) - e.r * v - v * v;
            out[3] = x * gn - x * x * flow;
            return out;
        }
    }
}

Observables observables(SystemId system, const StateVec& state, const ModelParams& params) {
    check_dim(system, state, "observables");
    const EconParams& e = params.econ;
    Observables o{};
    bool limit = false;
    switch (system) {
        case SystemId::InflationInverse3:
        case SystemId::SpeculationQ4:
            limit = std::abs(state[2]) < kInverseCoordEps;
            break;
        case SystemId::SpeculationVX4:
            limit = std::abs(state[2] * state[3]) < kInverseCoordEps;
            break;
        default: break;
    }
    if (limit) {
        o.pi = -kInf;
        o.g = growth_rate_floor(params);
        o.c_share = 1.0 - params.invest.kappa0;
    } else {
        o.pi = profit_share(system, state, e);
        o.g = growth_rate(o.pi, params);
        o.c_share = 1.0 - kappa(o.pi, params.invest);
    }
    o.i = (system == SystemId::Basic3 || !params.price)
              ? 0.0
              : inflation_rate(state[0], *params.price);
    o.g_nominal = o.g + o.i;
    o.real_wage_growth = e.alpha;
    return o;
}

std::vector<double> price_path(std::span<const double> times, std::span<const double> omegas,
                               double p0, const PriceParams& price) {
    if (times.empty() || omegas.empty())
        throw std::invalid_argument("price_path: empty trajectory");
    if (times.size() != omegas.size())
        throw std::invalid_argument("price_path: times/omegas size mismatch");
    if (!(p0 > 0)) throw std::invalid_argument("price_path: p0 must be positive");

    std::vector<double> p(times.size());
    p[0] = p0;
    double integral = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        integral += 0.5 * dt * (inflation_rate(omegas[k - 1], price) +
                                inflation_rate(omegas[k], price));
        p[k] = p0 * std::exp(integral);
    }
    return p;
}

}  // namespace keen
