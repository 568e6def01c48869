#pragma once

#include "keen/params.hpp"

namespace keen {

// Wage bargaining curve. Domain [0,1), vertical asymptote at lambda = 1.
double phillips(double lambda, const PhillipsParams& p);
double phillips_deriv(double lambda, const PhillipsParams& p);

/// Inverse of phillips on [0,1). Requires y > -phi0; results below 0 are
/// formula-valid but outside the economic domain, callers decide.
double phillips_inverse(double y, const PhillipsParams& p);

// Investment share as a function of the net profit share. Defined on all
// of R; kappa_inverse requires y > kappa0.
double kappa(double pi, const InvestmentParams& p);
double kappa_deriv(double pi, const InvestmentParams& p);
double kappa_inverse(double y, const InvestmentParams& p);

// Speculative flow of new credit per unit of nominal output.
double psi(double g_nominal, const SpeculationParams& p);
double psi_deriv(double g_nominal, const SpeculationParams& p);

/// Price adjustment toward the markup target: i = eta_p*(xi*omega - 1).
double inflation_rate(double omega, const PriceParams& p);

/// Real growth rate of output for a given profit share.
double growth_rate(double pi, const ModelParams& params);

/// Growth rate in the pi -> -inf limit, kappa0/nu - delta.
double growth_rate_floor(const ModelParams& params);

}  // namespace keen
