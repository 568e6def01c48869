#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "keen/equilibria.hpp"

using namespace keen;

namespace {

ModelParams inflation_params() {
    ModelParams p = baseline_params();
    p.spec.reset();
    return p;
}

ModelParams basic_params() {
    ModelParams p = baseline_params();
    p.price.reset();
    p.spec.reset();
    return p;
}

}  // namespace

TEST_CASE("good equilibrium of the constant-price system") {
    const EquilibriumPoint good = good_eq_basic(basic_params());
    REQUIRE(good.exists);
    // closed-form values, frozen from an extended-precision evaluation
    CHECK(good.coords[0] == doctest::Approx(0.836052866872936).epsilon(1e-12));
    CHECK(good.coords[1] == doctest::Approx(0.968611758971283).epsilon(1e-12));
    CHECK(good.coords[2] == doctest::Approx(0.0701911248623805).epsilon(1e-12));
    // reference-table roundings
    CHECK(std::abs(good.coords[0] - 0.8361) < 1e-4);
    CHECK(std::abs(good.coords[1] - 0.9686) < 1e-4);
    CHECK(std::abs(good.coords[2] - 0.0702) < 1e-4);
    CHECK(good.residual <= 1e-9);
    REQUIRE(good.aux.has_value());
    CHECK(std::abs(good.aux->pi - 0.1618) < 1e-4);
    CHECK(good.aux->g == doctest::Approx(0.045).epsilon(1e-10));
}

TEST_CASE("zero interest decouples the debt share from the wage share") {
    ModelParams p = basic_params();
    p.econ.r = 0.0;
    const EquilibriumPoint good = good_eq_basic(p);
    REQUIRE(good.exists);
    const double pi1 = kappa_inverse(0.165, p.invest);
    CHECK(good.coords[0] == 1.0 - pi1);
}

TEST_CASE("monetary good equilibria from the wage-share quadratic") {
    const InflationGoodResult res = good_eq_inflation(inflation_params());
    CHECK(res.quad.a0 == doctest::Approx(4.8).epsilon(1e-15));
    CHECK(res.quad.a1 == doctest::Approx(-7.97816128297027).epsilon(1e-12));
    CHECK(res.quad.a2 == doctest::Approx(3.31501202346595).epsilon(1e-12));
    CHECK(res.quad.discriminant == doctest::Approx(0.00282660653972).epsilon(1e-6));
    REQUIRE(res.quad.roots.size() == 2);
    CHECK(res.quad.roots[0] == doctest::Approx(0.836596575306).epsilon(1e-11));
    CHECK(res.quad.roots[1] == doctest::Approx(0.825520358646).epsilon(1e-11));
    // loose reference-table cross-checks
    CHECK(std::abs(res.quad.roots[0] - 0.8372) < 1e-3);
    CHECK(std::abs(res.quad.roots[1] - 0.8250) < 1e-3);

    REQUIRE(res.points.size() == 2);
    CHECK(res.rejected.empty());
    const EquilibriumPoint& hi = res.points[0];
    const EquilibriumPoint& lo = res.points[1];
    CHECK(hi.coords[1] == doctest::Approx(0.9693411645).epsilon(1e-9));
    CHECK(hi.coords[2] == doctest::Approx(0.05206751042).epsilon(1e-9));
    CHECK(lo.coords[1] == doctest::Approx(0.9666294357).epsilon(1e-9));
    CHECK(lo.coords[2] == doctest::Approx(0.4212747324).epsilon(1e-9));
    CHECK(hi.residual <= 1e-9);
    CHECK(lo.residual <= 1e-9);
    REQUIRE(hi.aux.has_value());
    CHECK(hi.aux->i == doctest::Approx(0.01566356147).epsilon(1e-8));
    CHECK(lo.aux->i == doctest::Approx(-0.0375022785).epsilon(1e-8));
}

TEST_CASE("quadratic roots satisfy the triple-substitution identity") {
    const ModelParams p = inflation_params();
    const InflationGoodResult res = good_eq_inflation(p);
    const double pi1 = kappa_inverse(0.165, p.invest);
    const double surplus = kappa(pi1, p.invest) - pi1;
    for (const EquilibriumPoint& pt : res.points) {
        const double w = pt.coords[0];
        const double rhs =
            1.0 - pi1 -
            p.econ.r * surplus / (p.econ.alpha + p.econ.beta + inflation_rate(w, *p.price));
        CHECK(std::abs(w - rhs) < 1e-10);
    }
}

TEST_CASE("slow price adjustment recovers the constant-price wage share") {
    // continuation oracle: roots at eta_p in {1e-3, 1e-4, 1e-5} extrapolate
    // to the constant-price good wage share
    const double target = 0.836052866872936;
    double prev_dist = 1.0;
    std::vector<double> roots;
    for (double eta : {1e-3, 1e-4, 1e-5}) {
        ModelParams p = inflation_params();
        p.price->eta_p = eta;
        const InflationGoodResult res = good_eq_inflation(p);
        REQUIRE(res.points.size() >= 1);
        const double w = res.points[0].coords[0];
        const double dist = std::abs(w - target);
        CHECK(dist < prev_dist);
        prev_dist = dist;
        roots.push_back(w);
    }
    const double extrapolated = (10.0 * roots[2] - roots[1]) / 9.0;
    CHECK(std::abs(extrapolated - target) < 1e-6);
}

TEST_CASE("deflationary wage share") {
    const ModelParams p = inflation_params();
    const DeflationWage dw = deflation_wage_share(p);
    REQUIRE(dw.exists);
    // 49/64 exactly
    CHECK(std::abs(dw.omega3 - 0.765625) < 1e-15);
    CHECK(inflation_rate(dw.omega3, *p.price) == doctest::Approx(-0.325).epsilon(1e-13));

    ModelParams full_illusion = p;
    full_illusion.price->gamma = 1.0;
    CHECK_FALSE(deflation_wage_share(full_illusion).exists);
}

TEST_CASE("deflationary inflation equals the wage-curve shortfall over 1-gamma") {
    // substituting the closed form into the price rule gives
    // (1-gamma)*i(omega3) = Phi(0) - alpha identically
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ug(0.0, 0.95), ue(0.2, 6.0), ux(1.0, 1.5);
    for (int k = 0; k < 200; ++k) {
        ModelParams p = inflation_params();
        p.price->gamma = ug(rng);
        p.price->eta_p = ue(rng);
        p.price->xi = ux(rng);
        const DeflationWage dw = deflation_wage_share(p);
        if (!dw.exists) continue;
        const double lhs = (1.0 - p.price->gamma) * inflation_rate(dw.omega3, *p.price);
        const double rhs = phillips(0.0, p.phillips) - p.econ.alpha;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("zero wage-curve shortfall puts the deflationary wage share at 1/xi") {
    ModelParams p = inflation_params();
    // push Phi(0) to alpha - 1e-12 (the validation bound is strict)
    p.phillips.phi0 = p.phillips.phi1 - (p.econ.alpha - 1e-12);
    p.validate();
    const DeflationWage dw = deflation_wage_share(p);
    REQUIRE(dw.exists);
    CHECK(std::abs(dw.omega3 - 1.0 / p.price->xi) < 1e-11);
}

TEST_CASE("deflationary debt equation has no root at the reference parameters") {
    // the locus b*(i + g - r) stays far below kappa - 1 + omega3 for every
    // real b here; the solver must report that honestly
    const ModelParams p = inflation_params();
    const DeflationWage dw = deflation_wage_share(p);
    REQUIRE(dw.exists);
    const DebtRootsResult res = solve_b3_inflation(p, dw.omega3);
    CHECK(res.roots.empty());
    CHECK_FALSE(res.diagnostic.empty());
}

TEST_CASE("deflationary debt roots on a solvable parameter set") {
    ModelParams p = inflation_params();
    p.price->eta_p = 0.5;
    p.price->gamma = 0.5;
    const DeflationWage dw = deflation_wage_share(p);
    REQUIRE(dw.exists);
    const DebtRootsResult res = solve_b3_inflation(p, dw.omega3);
    REQUIRE_FALSE(res.roots.empty());
    const double i3 = inflation_rate(dw.omega3, *p.price);
    for (std::size_t k = 0; k < res.roots.size(); ++k) {
        CHECK(res.residuals[k] <= 1e-10);
        // every reported bracket actually changes sign
        auto fn = [&](double b) {
            const double pi = 1.0 - dw.omega3 - p.econ.r * b;
            return b * (i3 + growth_rate(pi, p) - p.econ.r) -
                   (kappa(pi, p.invest) - 1.0 + dw.omega3);
        };
        CHECK(fn(res.brackets[k].first) * fn(res.brackets[k].second) < 0.0);
        // and the full vector field vanishes at the reconstructed point
        const StateVec pt{dw.omega3, 0.0, res.roots[k]};
        const StateVec dot = vector_field(SystemId::Inflation3, pt, p);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(dot[i]) < 1e-10);
    }
}

TEST_CASE("good equilibrium of the speculative system") {
    const ModelParams p = baseline_params();
    const SpeculationGoodResult res = good_eq_speculation(p);
    REQUIRE(res.x_roots.size() == 1);  // the scalar equation has one admissible root
    CHECK(res.x_roots[0] == doctest::Approx(0.0202413264700643).epsilon(1e-10));
    REQUIRE(res.points.size() == 1);
    const EquilibriumPoint& pt = res.points[0];
    CHECK(pt.coords[0] == doctest::Approx(0.8281752763).epsilon(1e-9));
    CHECK(pt.coords[1] == doctest::Approx(0.9673445417).epsilon(1e-9));
    CHECK(pt.coords[2] == doctest::Approx(0.3327774757).epsilon(1e-8));
    CHECK(pt.coords[3] == doctest::Approx(0.003577256909).epsilon(1e-6));
    CHECK(pt.residual <= 1e-9);
    REQUIRE(pt.aux.has_value());
    CHECK(pt.aux->i == doctest::Approx(-0.02475867353).epsilon(1e-8));
    CHECK(pt.aux->i < 0.0);  // speculation turns this equilibrium deflationary
}

TEST_CASE("speculative roots and points are in bijection") {
    const ModelParams p = baseline_params();
    const SpeculationGoodResult res = good_eq_speculation(p);
    REQUIRE(res.x_roots.size() == res.points.size());
    for (std::size_t k = 0; k < res.points.size(); ++k) {
        const double X = p.econ.alpha + p.econ.beta +
                         inflation_rate(res.points[k].coords[0], *p.price);
        CHECK(std::abs(X - res.x_roots[k]) < 1e-10);
    }
}

TEST_CASE("vanishing speculation recovers the monetary good equilibrium") {
    const InflationGoodResult mono = good_eq_inflation(inflation_params());
    REQUIRE(mono.points.size() == 2);
    const double target = mono.points[0].coords[0];
    double prev = 1.0;
    for (double psi0 : {1e-2, 1e-4, 1e-6}) {
        ModelParams p = baseline_params();
        p.spec->psi0 = psi0;
        const SpeculationGoodResult res = good_eq_speculation(p);
        REQUIRE_FALSE(res.points.empty());
        // the branch with the largest wage share continues the monetary root
        double w = -1.0, f = 0.0;
        for (const EquilibriumPoint& pt : res.points)
            if (pt.coords[0] > w) {
                w = pt.coords[0];
                f = pt.coords[3];
            }
        const double dist = std::abs(w - target);
        CHECK(dist < prev);
        prev = dist;
        CHECK(std::abs(f) < 10.0 * psi0);  // flow share decouples
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("equilibrium speculative-flow shares") {
    const ModelParams p = baseline_params();
    const FValue fgood = speculation_f_values(p, EqLabel::Good1_Spec);
    REQUIRE(fgood.ok);
    CHECK(fgood.value == doctest::Approx(0.003577256909).epsilon(1e-6));

    const FValue f0 = speculation_f_values(p, EqLabel::Bad_InfDebt_FiniteSpec);
    REQUIRE(f0.ok);
    CHECK(f0.value == doctest::Approx(0.0618170897886).epsilon(1e-10));

    // hand substitution: Psi(-0.33716666...) / (-0.33716666...)
    const FValue f3 = speculation_f_values(p, EqLabel::Deflat3_InfDebt_FiniteSpec);
    REQUIRE(f3.ok);
    const double arg = growth_rate_floor(p) + inflation_rate(0.765625, *p.price);
    CHECK(arg == doctest::Approx(-0.337166666666667).epsilon(1e-12));
    CHECK(f3.value == doctest::Approx(psi(arg, *p.spec) / arg).epsilon(1e-14));
    CHECK(f3.value == doctest::Approx(0.258462349047).epsilon(1e-10));

    CHECK_FALSE(speculation_f_values(p, EqLabel::Good1).ok);
}

TEST_CASE("deflationary debt/flow pair of the speculative system") {
    const ModelParams p = baseline_params();
    const DeflationWage dw = deflation_wage_share(p);
    REQUIRE(dw.exists);
    const SpecDebtRootsResult res = solve_b3_speculation(p, dw.omega3);
    REQUIRE(res.roots.size() == 1);
    const SpecDebtRoot& root = res.roots[0];
    CHECK(root.b == doctest::Approx(-0.567125084173).epsilon(1e-9));
    CHECK(root.f == doctest::Approx(-0.773425882202).epsilon(1e-7));
    CHECK(root.residual <= 1e-10);
    // self-consistency: f recomputed from b matches
    const double gn = growth_rate(1.0 - dw.omega3 - p.econ.r * root.b, p) +
                      inflation_rate(dw.omega3, *p.price);
    CHECK(psi(gn, *p.spec) / gn == doctest::Approx(root.f).epsilon(1e-12));
    // rows 3-4 of the full system vanish at (w3, 0, b3, f3)
    const StateVec dot =
        vector_field(SystemId::Speculation4, {dw.omega3, 0.0, root.b, root.f}, p);
    CHECK(std::abs(dot[2]) < 1e-10);
    CHECK(std::abs(dot[3]) < 1e-12);
}

TEST_CASE("equilibrium enumeration per system") {
    const ModelParams base = baseline_params();

    const auto basic = enumerate_equilibria(basic_params(), SystemId::Basic3);
    REQUIRE(basic.size() == 2);
    CHECK(basic[0].label == EqLabel::Good1);
    CHECK(basic[1].label == EqLabel::Bad2_InfDebt);
    CHECK(basic[0].exists);
    CHECK(basic[1].exists);
    CHECK(std::isinf(basic[1].coords[2]));

    const auto infl = enumerate_equilibria(inflation_params(), SystemId::Inflation3);
    REQUIRE(infl.size() == 5);  // two good roots, crisis point, two deflationary entries
    int good = 0, missing = 0;
    bool has_w3 = false;
    for (const EquilibriumPoint& pt : infl) {
        if (pt.label == EqLabel::Good1 && pt.exists) ++good;
        if (!pt.exists) ++missing;
        if (pt.label == EqLabel::Deflat3_InfDebt) {
            CHECK(pt.exists);
            CHECK(pt.coords[0] == doctest::Approx(0.765625).epsilon(1e-12));
        }
        if (pt.label == EqLabel::Deflat3_FiniteDebt) {
            has_w3 = true;
            CHECK_FALSE(pt.exists);  // no real debt root at these parameters
        }
    }
    CHECK(good == 2);
    CHECK(missing == 1);
    CHECK(has_w3);

    const auto spec = enumerate_equilibria(base, SystemId::Speculation4);
    REQUIRE(spec.size() == 8);  // one good point, seven crisis points
    for (const EquilibriumPoint& pt : spec) {
        CHECK(pt.exists);
        if (pt.finite()) CHECK(pt.residual <= 1e-9);
    }

    // transformed ids enumerate the same family
    CHECK(enumerate_equilibria(base, SystemId::SpeculationQ4).size() == 8);
}

TEST_CASE("every finite equilibrium satisfies the residual gate") {
    for (const ModelParams& p : {baseline_params(), inflation_params(), basic_params()}) {
        const SystemId sys = p.has_spec()   ? SystemId::Speculation4
                             : p.has_price() ? SystemId::Inflation3
                                             : SystemId::Basic3;
        for (const EquilibriumPoint& pt : enumerate_equilibria(p, sys)) {
            if (!pt.exists) continue;
            CHECK(pt.residual <= 1e-9);
        }
    }
}
