#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "keen/behavior.hpp"

using namespace keen;

TEST_CASE("phillips curve reference values") {
    const ModelParams p = baseline_params();
    CHECK(std::abs(phillips(0.96, p.phillips)) < 1e-15);
    CHECK(phillips(0.0, p.phillips) == doctest::Approx(-0.04).epsilon(1e-12));
    // exact rational: (4*phi1 - phi0) = -0.0398076923076923077
    CHECK(phillips(0.5, p.phillips) ==
          doctest::Approx(-0.039807692307692308).epsilon(1e-14));
    CHECK_THROWS_AS(phillips(1.0, p.phillips), std::domain_error);
    CHECK_THROWS_AS(phillips(1.5, p.phillips), std::domain_error);
    CHECK(phillips_deriv(0.9, p.phillips) > 0.0);
}

TEST_CASE("phillips inverse") {
    const ModelParams p = baseline_params();
    CHECK(phillips_inverse(0.025, p.phillips) ==
          doctest::Approx(0.968611758971283).epsilon(1e-12));
    CHECK(phillips_inverse(0.025, p.phillips) == doctest::Approx(0.9686).epsilon(1e-4));
    CHECK(phillips_inverse(0.0281, p.phillips) ==
          doctest::Approx(0.969333808724).epsilon(1e-10));
    // round trip through an arbitrary interior point
    const double y = phillips(0.5, p.phillips);
    CHECK(phillips(phillips_inverse(y, p.phillips), p.phillips) ==
          doctest::Approx(y).epsilon(1e-12));
    CHECK_THROWS_AS(phillips_inverse(-p.phillips.phi0, p.phillips), std::domain_error);
    CHECK_THROWS_AS(phillips_inverse(-1.0, p.phillips), std::domain_error);
}

TEST_CASE("investment share") {
    const ModelParams p = baseline_params();
    CHECK(kappa_inverse(0.165, p.invest) ==
          doctest::Approx(0.161841399381193).epsilon(1e-12));
    CHECK(kappa_inverse(0.165, p.invest) == doctest::Approx(0.1618).epsilon(1e-3));
    CHECK(kappa(0.0, p.invest) == doctest::Approx(0.000237946999085).epsilon(1e-9));
    CHECK(kappa(kappa_inverse(0.1, p.invest), p.invest) ==
          doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(kappa_inverse(p.invest.kappa0, p.invest), std::domain_error);
    CHECK_THROWS_AS(kappa_inverse(p.invest.kappa0 - 0.1, p.invest), std::domain_error);
}

TEST_CASE("investment share asymptotic conditions") {
    const ModelParams p = baseline_params();
    CHECK(std::abs(kappa(-1e6, p.invest) - p.invest.kappa0) < 1e-12);
    const double pi = -1e3;
    CHECK(pi * pi * kappa_deriv(pi, p.invest) < 1e-300);
    CHECK(p.invest.kappa0 < p.econ.nu * (p.econ.alpha + p.econ.beta + p.econ.delta));
}

TEST_CASE("speculative flow") {
    const ModelParams p = baseline_params();
    CHECK(psi(0.02, *p.spec) == 0.0);
    CHECK(psi(0.0, *p.spec) == doctest::Approx(-0.00592857256052).epsilon(1e-10));
    CHECK(psi_deriv(0.0, *p.spec) > 0.0);
}

TEST_CASE("inflation rate") {
    const PriceParams pr{4.0, 1.2, 0.8};
    CHECK(inflation_rate(1.0 / 1.2, pr) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(inflation_rate(0.765625, pr) == doctest::Approx(-0.325).epsilon(1e-14));
    CHECK(inflation_rate(0.8372, pr) == doctest::Approx(0.018560).epsilon(1e-10));
}

TEST_CASE("growth rate") {
    const ModelParams p = baseline_params();
    const double pi1 = kappa_inverse(0.165, p.invest);
    CHECK(growth_rate(pi1, p) == doctest::Approx(0.045).epsilon(1e-12));
    CHECK(growth_rate_floor(p) == doctest::Approx(-0.0065 / 3.0 - 0.01).epsilon(1e-14));
    CHECK(growth_rate_floor(p) == doctest::Approx(-0.01217).epsilon(1e-3));
    // kappa(pi) = nu*delta gives zero growth
    const double pi_zero = kappa_inverse(p.econ.nu * p.econ.delta, p.invest);
    CHECK(growth_rate(pi_zero, p) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("behavioral functions are strictly increasing") {
    const ModelParams p = baseline_params();
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> lam(0.0, 0.999);
    std::uniform_real_distribution<double> pi(-5.0, 5.0);
    std::uniform_real_distribution<double> gn(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        CHECK(phillips_deriv(lam(rng), p.phillips) > 0.0);
        CHECK(kappa_deriv(pi(rng), p.invest) > 0.0);
        CHECK(psi_deriv(gn(rng), *p.spec) > 0.0);
    }
}

TEST_CASE("parameter validation") {
    ModelParams p = baseline_params();
    CHECK_NOTHROW(p.validate());
    p.econ.nu = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = baseline_params();
    p.price->gamma = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = baseline_params();
    p.price.reset();  // speculation without price
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = baseline_params();
    p.phillips.phi0 = p.phillips.phi1 - 0.03;  // wage curve at zero employment above alpha
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
