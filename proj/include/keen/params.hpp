#pragma once

#include <optional>
#include <string>

namespace keen {

/// Exogenous economy constants. All rates are per year.
struct EconParams {
    double alpha;  // productivity growth rate
    double beta;   // labor force growth rate
    double delta;  // capital depreciation rate
    double nu;     // capital-to-output ratio (years)
    double r;      // nominal interest rate paid by firms
};

/// Wage bargaining curve phi(lambda) = phi1/(1-lambda)^2 - phi0.
struct PhillipsParams {
    double phi0;
    double phi1;
};

/// Investment share kappa(pi) = kappa0 + exp(kappa1 + kappa2*pi).
struct InvestmentParams {
    double kappa0;
    double kappa1;
    double kappa2;
};

/// Markup price adjustment: i(omega) = eta_p*(xi*omega - 1).
/// gamma is the fraction of observed inflation workers bargain into wages.
struct PriceParams {
    double eta_p;
    double xi;
    double gamma;
};

/// Speculative credit flow Psi(g) = psi0*(exp(psi2*(g - psi1)) - 1),
/// driven by nominal output growth.
struct SpeculationParams {
    double psi0;
    double psi1;
    double psi2;
};

/// One validated record of every exogenous constant. The price block is
/// required by the monetary systems, the speculation block additionally by
/// the four-dimensional ones.
struct ModelParams {
    EconParams econ;
    PhillipsParams phillips;
    InvestmentParams invest;
    std::optional<PriceParams> price;
    std::optional<SpeculationParams> spec;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    bool has_price() const { return price.has_value(); }
    bool has_spec() const { return spec.has_value(); }
};

/// Baseline parameter set used by the built-in scenarios (nu = 3).
ModelParams baseline_params();

}  // namespace keen
