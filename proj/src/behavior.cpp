#include "keen/behavior.hpp"

#include <cmath>
#include <stdexcept>

namespace keen {

double phillips(double lambda, const PhillipsParams& p) {
    if (lambda >= 1.0)
        throw std::domain_error("phillips: lambda must lie below the asymptote at 1");
    const double one_minus = 1.0 - lambda;
    return p.phi1 / (one_minus * one_minus) - p.phi0;
}

double phillips_deriv(double lambda, const PhillipsParams& p) {
    if (lambda >= 1.0)
        throw std::domain_error("phillips_deriv: lambda must lie below the asymptote at 1");
    const double one_minus = 1.0 - lambda;
    return 2.0 * p.phi1 / (one_minus * one_minus * one_minus);
}

double phillips_inverse(double y, const PhillipsParams& p) {
    if (y <= -p.phi0)
        throw std::domain_error("phillips_inverse: no preimage at or below -phi0");
    return 1.0 - std::sqrt(p.phi1 / (y + p.phi0));
}

double kappa(double pi, const InvestmentParams& p) {
    return p.kappa0 + std::exp(p.kappa1 + p.kappa2 * pi);
}

double kappa_deriv(double pi, const InvestmentParams& p) {
    return p.kappa2 * std::exp(p.kappa1 + p.kappa2 * pi);
}

double kappa_inverse(double y, const InvestmentParams& p) {
    if (y <= p.kappa0)
        throw std::domain_error("kappa_inverse: no preimage at or below kappa0");
    return (std::log(y - p.kappa0) - p.kappa1) / p.kappa2;
}

double psi(double g_nominal, const SpeculationParams& p) {
    return p.psi0 * std::expm1(p.psi2 * (g_nominal - p.psi1));
}

double psi_deriv(double g_nominal, const SpeculationParams& p) {
    return p.psi0 * p.psi2 * std::exp(p.psi2 * (g_nominal - p.psi1));
}

double inflation_rate(double omega, const PriceParams& p) {
    return p.eta_p * (p.xi * omega - 1.0);
}

double growth_rate(double pi, const ModelParams& params) {
    return kappa(pi, params.invest) / params.econ.nu - params.econ.delta;
}

double growth_rate_floor(const ModelParams& params) {
    return params.invest.kappa0 / params.econ.nu - params.econ.delta;
}

}  // namespace keen
