#include "keen/params.hpp"

#include <cmath>
#include <stdexcept>

namespace keen {

namespace {

void fail(const std::string& what) { throw std::invalid_argument("ModelParams: " + what); }

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
    for (double v : {econ.alpha, econ.beta, econ.delta, econ.nu, econ.r,
                     phillips.phi0, phillips.phi1,
                     invest.kappa0, invest.kappa1, invest.kappa2}) {
        if (!finite(v)) fail("non-finite parameter value");
    }
    if (econ.nu <= 0) fail("nu must be positive");
    if (econ.delta < 0) fail("delta must be non-negative");
    if (econ.r < 0) fail("r must be non-negative");
    if (econ.alpha + econ.beta <= 0) fail("alpha + beta must be positive");
    if (phillips.phi1 <= 0) fail("phi1 must be positive");
    if (phillips.phi1 - phillips.phi0 >= econ.alpha)
        fail("phillips curve at zero employment must lie below alpha");
    if (invest.kappa2 <= 0) fail("kappa2 must be positive");
    if (invest.kappa0 >= econ.nu * (econ.alpha + econ.beta + econ.delta))
        fail("kappa0 must lie below nu*(alpha+beta+delta)");
    if (price) {
        if (!finite(price->eta_p) || !finite(price->xi) || !finite(price->gamma))
            fail("non-finite price parameter");
        if (price->eta_p <= 0) fail("eta_p must be positive");
        if (price->xi < 1) fail("xi must be at least 1");
        if (price->gamma < 0 || price->gamma > 1) fail("gamma must lie in [0,1]");
    }
    if (spec) {
        if (!price) fail("speculation block requires the price block");
        if (!finite(spec->psi0) || !finite(spec->psi1) || !finite(spec->psi2))
            fail("non-finite speculation parameter");
        if (spec->psi0 <= 0) fail("psi0 must be positive");
        if (spec->psi2 <= 0) fail("psi2 must be positive");
    }
}

ModelParams baseline_params() {
    ModelParams p;
    p.econ = {0.025, 0.02, 0.01, 3.0, 0.03};
    const double d = 1.0 - 0.04 * 0.04;
    p.phillips = {0.04 / d, 0.04 * 0.04 * 0.04 / d};
    p.invest = {-0.0065, -5.0, 20.0};
    p.price = PriceParams{4.0, 1.2, 0.8};
    p.spec = SpeculationParams{0.25, 0.02, 1.2};
    return p;
}

}  // namespace keen
