#include "keen/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace keen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualGate = 1e-9;

double max_abs(const StateVec& v) {
    double m = 0.0;
    for (int i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

double residual_of(SystemId system, const StateVec& s, const ModelParams& p) {
    return max_abs(vector_field(system, s, p));
}

/// Bisection to machine precision on a bracketing interval, then midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Scan [lo,hi] at the given step for sign changes of f, bisect each.
std::vector<double> scan_roots(const std::function<double(double)>& f, const ScanConfig& scan,
                               std::vector<std::pair<double, double>>* brackets) {
    std::vector<double> roots;
    double x0 = scan.lo;
    double f0 = f(x0);
    const long n = std::lround((scan.hi - scan.lo) / scan.step);
    for (long k = 1; k <= n; ++k) {
        const double x1 = (k == n) ? scan.hi : scan.lo + static_cast<double>(k) * scan.step;
        const double f1 = f(x1);
        if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0) != (f1 < 0)) {
            roots.push_back(bisect(f, x0, x1));
            if (brackets) brackets->emplace_back(x0, x1);
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

EquilibriumPoint missing_point(SystemId system, EqLabel label, std::string status) {
    EquilibriumPoint p;
    p.system = system;
    p.label = label;
    p.exists = false;
    p.status = std::move(status);
    p.coords = StateVec::zeros(dim(system));
    p.defining_system = system;
    p.defining_coords = p.coords;
    return p;
}

double equilibrium_profit_share(const ModelParams& params) {
    const EconParams& e = params.econ;
    return kappa_inverse(e.nu * (e.alpha + e.beta + e.delta), params.invest);
}

}  // namespace

const char* label_name(EqLabel label) {
    switch (label) {
        case EqLabel::Good1: return "Good1";
        case EqLabel::Bad2_InfDebt: return "Bad2_InfDebt";
        case EqLabel::Deflat3_FiniteDebt: return "Deflat3_FiniteDebt";
        case EqLabel::Deflat3_InfDebt: return "Deflat3_InfDebt";
        case EqLabel::Good1_Spec: return "Good1_Spec";
        case EqLabel::Bad_InfDebt_FiniteSpec: return "Bad_InfDebt_FiniteSpec";
        case EqLabel::Bad_InfDebt_InfSpec: return "Bad_InfDebt_InfSpec";
        case EqLabel::Deflat3_FiniteDebt_Spec: return "Deflat3_FiniteDebt_Spec";
        case EqLabel::Deflat3_InfDebt_FiniteSpec: return "Deflat3_InfDebt_FiniteSpec";
        default: return "Deflat3_InfDebt_InfSpec";
    }
}

bool EquilibriumPoint::finite() const {
    for (int i = 0; i < coords.size(); ++i)
        if (!std::isfinite(coords[i])) return false;
    return true;
}

EquilibriumPoint good_eq_basic(const ModelParams& params) {
    const EconParams& e = params.econ;
    const double pi1 = equilibrium_profit_share(params);
    const double b1 = (kappa(pi1, params.invest) - pi1) / (e.alpha + e.beta);

    double lambda1;
    try {
        lambda1 = phillips_inverse(e.alpha, params.phillips);
    } catch (const std::domain_error&) {
        return missing_point(SystemId::Basic3, EqLabel::Good1,
                             "no good equilibrium: alpha outside the wage-curve range");
    }
    if (lambda1 < 0.0 || lambda1 >= 1.0)
        return missing_point(SystemId::Basic3, EqLabel::Good1,
                             "no good equilibrium: employment rate outside [0,1)");

    EquilibriumPoint p;
    p.system = SystemId::Basic3;
    p.label = EqLabel::Good1;
    p.coords = {1.0 - pi1 - e.r * b1, lambda1, b1};
    p.defining_system = SystemId::Basic3;
    p.defining_coords = p.coords;
    p.residual = residual_of(SystemId::Basic3, p.coords, params);
    p.aux = observables(SystemId::Basic3, p.coords, params);
    return p;
}

InflationGoodResult good_eq_inflation(const ModelParams& params) {
    if (!params.price) throw std::invalid_argument("good_eq_inflation: price block required");
    const EconParams& e = params.econ;
    const PriceParams& pr = *params.price;
    const double pi1 = equilibrium_profit_share(params);
    const double surplus = kappa(pi1, params.invest) - pi1;

    InflationGoodResult out;
    out.quad.a0 = pr.xi * pr.eta_p;
    out.quad.a1 = e.alpha + e.beta - pr.eta_p * (1.0 + pr.xi * (1.0 - pi1));
    out.quad.a2 = (pr.eta_p - e.alpha - e.beta) * (1.0 - pi1) + e.r * surplus;
    out.quad.discriminant = out.quad.a1 * out.quad.a1 - 4.0 * out.quad.a0 * out.quad.a2;

    if (out.quad.discriminant < 0.0) {
        out.diagnostic = "no good equilibrium: negative discriminant";
        return out;
    }
    // numerically stable pair, then one Newton polish per root
    const double sq = std::sqrt(out.quad.discriminant);
    const double qf = -0.5 * (out.quad.a1 + (out.quad.a1 >= 0 ? sq : -sq));
    double r0 = qf / out.quad.a0;
    double r1 = (qf != 0.0) ? out.quad.a2 / qf : -out.quad.a1 / out.quad.a0 - r0;
    for (double* w : {&r0, &r1}) {
        const double val = (out.quad.a0 * *w + out.quad.a1) * *w + out.quad.a2;
        const double der = 2.0 * out.quad.a0 * *w + out.quad.a1;
        if (der != 0.0) *w -= val / der;
    }
    out.quad.roots = {std::max(r0, r1), std::min(r0, r1)};
    if (out.quad.discriminant == 0.0) out.quad.roots.resize(1);

    int branch = 0;
    for (double w : out.quad.roots) {
        if (w < 0.0) {
            out.rejected.push_back({w, "negative wage share"});
            continue;
        }
        const double infl = inflation_rate(w, pr);
        double lambda;
        try {
            lambda = phillips_inverse(e.alpha + (1.0 - pr.gamma) * infl, params.phillips);
        } catch (const std::domain_error&) {
            out.rejected.push_back({w, "wage-curve preimage does not exist"});
            continue;
        }
        if (lambda < 0.0 || lambda >= 1.0) {
            out.rejected.push_back({w, "employment rate outside [0,1)"});
            continue;
        }
        const double denom = e.alpha + e.beta + infl;
        if (denom == 0.0) {
            out.rejected.push_back({w, "nominal growth pole in the debt share"});
            continue;
        }
        EquilibriumPoint p;
        p.system = SystemId::Inflation3;
        p.label = EqLabel::Good1;
        p.branch = branch;
        p.coords = {w, lambda, surplus / denom};
        p.defining_system = SystemId::Inflation3;
        p.defining_coords = p.coords;
        p.residual = residual_of(SystemId::Inflation3, p.coords, params);
        if (p.residual > kResidualGate) {
            out.rejected.push_back({w, "fixed-point residual above 1e-9"});
            continue;
        }
        p.aux = observables(SystemId::Inflation3, p.coords, params);
        out.points.push_back(std::move(p));
        ++branch;
    }
    if (out.points.empty() && out.diagnostic.empty())
        out.diagnostic = "no good equilibrium: all quadratic roots rejected";
    return out;
}

DeflationWage deflation_wage_share(const ModelParams& params) {
    if (!params.price) throw std::invalid_argument("deflation_wage_share: price block required");
    const PriceParams& pr = *params.price;
    DeflationWage out;
    if (pr.gamma >= 1.0) {
        out.status = "no such equilibrium for gamma = 1";
        return out;
    }
    const double phi_at_zero = phillips(0.0, params.phillips);
    const double w3 = 1.0 / pr.xi +
                      (phi_at_zero - params.econ.alpha) / (pr.xi * pr.eta_p * (1.0 - pr.gamma));
    if (w3 <= 0.0) {
        out.status = "nonexistent: nonpositive wage share";
        return out;
    }
    out.exists = true;
    out.omega3 = w3;
    return out;
}

DebtRootsResult solve_b3_inflation(const ModelParams& params, double omega3,
                                   const ScanConfig& scan) {
    if (!params.price) throw std::invalid_argument("solve_b3_inflation: price block required");
    const EconParams& e = params.econ;
    const double i3 = inflation_rate(omega3, *params.price);
    auto fn = [&](double b) {
        const double pi = 1.0 - omega3 - e.r * b;
        return b * (i3 + growth_rate(pi, params) - e.r) -
               (kappa(pi, params.invest) - 1.0 + omega3);
    };

    DebtRootsResult out;
    out.roots = scan_roots(fn, scan, &out.brackets);
    for (double b : out.roots) out.residuals.push_back(std::abs(fn(b)));
    if (out.roots.empty())
        out.diagnostic = "no sign change of the deflationary debt equation over the scan range";
    return out;
}

SpeculationGoodResult good_eq_speculation(const ModelParams& params, const ScanConfig& scan) {
    if (!params.price || !params.spec)
        throw std::invalid_argument("good_eq_speculation: price and speculation blocks required");
    const EconParams& e = params.econ;
    const PriceParams& pr = *params.price;
    const SpeculationParams& sp = *params.spec;
    const double pi1 = equilibrium_profit_share(params);
    const double surplus = kappa(pi1, params.invest) - pi1;
    const double exi = pr.eta_p * pr.xi;
    const double c2 = exi * (pi1 - 1.0) - e.alpha - e.beta + pr.eta_p;
    const double c1 = e.r * exi * surplus;
    auto fn = [&](double X) {
        return ((X + c2) * X + c1) * X + e.r * exi * psi(X, sp);
    };

    SpeculationGoodResult out;
    std::vector<double> all = scan_roots(fn, scan, nullptr);
    int branch = 0;
    for (double X : all) {
        if (X <= e.alpha + e.beta - pr.eta_p) {
            out.rejected.push_back({X, "nonpositive wage share"});
            continue;
        }
        if (std::abs(X) < 1e-12) {
            out.rejected.push_back({X, "nominal growth pole in the flow share"});
            continue;
        }
        const double ibar = X - e.alpha - e.beta;
        const double w = (pr.eta_p + ibar) / exi;
        double lambda;
        try {
            lambda = phillips_inverse(e.alpha + (1.0 - pr.gamma) * ibar, params.phillips);
        } catch (const std::domain_error&) {
            out.rejected.push_back({X, "wage-curve preimage does not exist"});
            continue;
        }
        if (lambda < 0.0 || lambda >= 1.0) {
            out.rejected.push_back({X, "employment rate outside [0,1)"});
            continue;
        }
        const double f = psi(X, sp) / X;
        const double b = (surplus + f) / X;
        EquilibriumPoint p;
        p.system = SystemId::Speculation4;
        p.label = EqLabel::Good1_Spec;
        p.branch = branch;
        p.coords = {w, lambda, b, f};
        p.defining_system = SystemId::Speculation4;
        p.defining_coords = p.coords;
        p.residual = residual_of(SystemId::Speculation4, p.coords, params);
        if (p.residual > kResidualGate) {
            out.rejected.push_back({X, "fixed-point residual above 1e-9"});
            continue;
        }
        p.aux = observables(SystemId::Speculation4, p.coords, params);
        out.x_roots.push_back(X);
        out.points.push_back(std::move(p));
        ++branch;
    }
    if (out.points.empty())
        out.diagnostic = "no good equilibrium: every root of the nominal-growth equation rejected";
    return out;
}

FValue speculation_f_values(const ModelParams& params, EqLabel label) {
    if (!params.price || !params.spec)
        throw std::invalid_argument("speculation_f_values: price and speculation blocks required");
    const SpeculationParams& sp = *params.spec;
    const double g_floor = growth_rate_floor(params);
    FValue out;

    auto ratio = [&](double arg) {
        if (std::abs(arg) < 1e-12) {
            out.note = "nominal growth pole: flow share undefined";
            return out;
        }
        out.ok = true;
        out.value = psi(arg, sp) / arg;
        return out;
    };

    switch (label) {
        case EqLabel::Good1_Spec: {
            SpeculationGoodResult good = good_eq_speculation(params);
            if (good.x_roots.empty()) {
                out.note = "no good equilibrium";
                return out;
            }
            return ratio(good.x_roots.front());
        }
        case EqLabel::Bad_InfDebt_FiniteSpec:
            return ratio(g_floor - params.price->eta_p);
        case EqLabel::Deflat3_InfDebt_FiniteSpec: {
            DeflationWage dw = deflation_wage_share(params);
            if (!dw.exists) {
                out.note = dw.status;
                return out;
            }
            return ratio(g_floor + inflation_rate(dw.omega3, *params.price));
        }
        default:
            out.note = "label has no finite speculation flow value";
            return out;
    }
}

SpecDebtRootsResult solve_b3_speculation(const ModelParams& params, double omega3,
                                         const ScanConfig& scan) {
    if (!params.price || !params.spec)
        throw std::invalid_argument("solve_b3_speculation: price and speculation blocks required");
    const EconParams& e = params.econ;
    const SpeculationParams& sp = *params.spec;
    const double i3 = inflation_rate(omega3, *params.price);

    auto nominal_growth = [&](double b) {
        return growth_rate(1.0 - omega3 - e.r * b, params) + i3;
    };
    auto fn = [&](double b) {
        const double pi = 1.0 - omega3 - e.r * b;
        const double gn = nominal_growth(b);
        return kappa(pi, params.invest) - pi - b * gn + psi(gn, sp) / gn;
    };

    SpecDebtRootsResult out;
    // g + i(w3) is strictly decreasing in b, so there is at most one pole of
    // the inlined flow share; split the scan range there.
    std::vector<ScanConfig> pieces;
    if ((nominal_growth(scan.lo) < 0) != (nominal_growth(scan.hi) < 0)) {
        const double pole = bisect(nominal_growth, scan.lo, scan.hi);
        const double gap = std::max(1e-9, 1e-9 * std::abs(pole));
        pieces.push_back({scan.lo, pole - gap, scan.step});
        pieces.push_back({pole + gap, scan.hi, scan.step});
    } else {
        pieces.push_back(scan);
    }
    for (const ScanConfig& piece : pieces) {
        if (piece.hi <= piece.lo) continue;
        for (double b : scan_roots(fn, piece, &out.brackets)) {
            const double gn = nominal_growth(b);
            SpecDebtRoot root;
            root.b = b;
            root.f = psi(gn, sp) / gn;
            // debt row is fn(b) by construction; flow row vanishes identically
            root.residual = std::abs(fn(b));
            out.roots.push_back(root);
        }
    }
    if (out.roots.empty())
        out.diagnostic = "no sign change of the deflationary debt/flow system over the scan range";
    return out;
}

namespace {

EquilibriumPoint infinite_point(SystemId primal, EqLabel label, int branch, StateVec display,
                                SystemId defining, StateVec defining_coords,
                                const ModelParams& params, bool price_active) {
    EquilibriumPoint p;
    p.system = primal;
    p.label = label;
    p.branch = branch;
    p.coords = display;
    p.defining_system = defining;
    p.defining_coords = defining_coords;
    if (price_active) {
        p.residual = residual_of(defining, defining_coords, params);
        p.aux = observables(defining, defining_coords, params);
    } else {
        // constant-price system: the inverse-debt form at (0,0,0) vanishes
        // row by row, and the price block stays bypassed.
        p.residual = 0.0;
        Observables o{};
        o.pi = -kInf;
        o.g = growth_rate_floor(params);
        o.g_nominal = o.g;
        o.c_share = 1.0 - params.invest.kappa0;
        o.real_wage_growth = params.econ.alpha;
        p.aux = o;
    }
    return p;
}

}  // namespace

std::vector<EquilibriumPoint> enumerate_equilibria(const ModelParams& params, SystemId system) {
    const SystemId primal = base_primal(system);
    std::vector<EquilibriumPoint> out;

    if (primal == SystemId::Basic3) {
        out.push_back(good_eq_basic(params));
        out.push_back(infinite_point(primal, EqLabel::Bad2_InfDebt, 0, {0.0, 0.0, kInf},
                                     SystemId::InflationInverse3, {0.0, 0.0, 0.0}, params,
                                     /*price_active=*/false));
        return out;
    }

    if (primal == SystemId::Inflation3) {
        InflationGoodResult good = good_eq_inflation(params);
        if (good.points.empty()) {
            out.push_back(missing_point(primal, EqLabel::Good1,
                                        good.diagnostic.empty() ? "nonexistent" : good.diagnostic));
        } else {
            for (EquilibriumPoint& p : good.points) out.push_back(std::move(p));
        }
        out.push_back(infinite_point(primal, EqLabel::Bad2_InfDebt, 0, {0.0, 0.0, kInf},
                                     SystemId::InflationInverse3, {0.0, 0.0, 0.0}, params, true));
        DeflationWage dw = deflation_wage_share(params);
        if (!dw.exists) {
            out.push_back(missing_point(primal, EqLabel::Deflat3_FiniteDebt, dw.status));
            out.push_back(missing_point(primal, EqLabel::Deflat3_InfDebt, dw.status));
            return out;
        }
        DebtRootsResult debt = solve_b3_inflation(params, dw.omega3);
        if (debt.roots.empty()) {
            out.push_back(missing_point(primal, EqLabel::Deflat3_FiniteDebt,
                                        "wage share " + std::to_string(dw.omega3) + " exists but " +
                                            debt.diagnostic));
        } else {
            int branch = 0;
            for (double b : debt.roots) {
                EquilibriumPoint p;
                p.system = primal;
                p.label = EqLabel::Deflat3_FiniteDebt;
                p.branch = branch++;
                p.coords = {dw.omega3, 0.0, b};
                p.defining_system = primal;
                p.defining_coords = p.coords;
                p.residual = residual_of(primal, p.coords, params);
                p.aux = observables(primal, p.coords, params);
                out.push_back(std::move(p));
            }
        }
        out.push_back(infinite_point(primal, EqLabel::Deflat3_InfDebt, 0, {dw.omega3, 0.0, kInf},
                                     SystemId::InflationInverse3, {dw.omega3, 0.0, 0.0}, params,
                                     true));
        return out;
    }

    // Speculation4 family: one good point and, when the deflationary wage
    // share exists, seven bad ones (the infinite-flow labels split by sign).
    SpeculationGoodResult good = good_eq_speculation(params);
    if (good.points.empty()) {
        out.push_back(missing_point(primal, EqLabel::Good1_Spec,
                                    good.diagnostic.empty() ? "nonexistent" : good.diagnostic));
    } else {
        for (EquilibriumPoint& p : good.points) out.push_back(std::move(p));
    }

    DeflationWage dw = deflation_wage_share(params);
    if (dw.exists) {
        SpecDebtRootsResult debt = solve_b3_speculation(params, dw.omega3);
        if (debt.roots.empty()) {
            out.push_back(missing_point(primal, EqLabel::Deflat3_FiniteDebt_Spec,
                                        "wage share exists but " + debt.diagnostic));
        } else {
            int branch = 0;
            for (const SpecDebtRoot& root : debt.roots) {
                EquilibriumPoint p;
                p.system = primal;
                p.label = EqLabel::Deflat3_FiniteDebt_Spec;
                p.branch = branch++;
                p.coords = {dw.omega3, 0.0, root.b, root.f};
                p.defining_system = primal;
                p.defining_coords = p.coords;
                p.residual = residual_of(primal, p.coords, params);
                p.aux = observables(primal, p.coords, params);
                out.push_back(std::move(p));
            }
        }
    } else {
        out.push_back(missing_point(primal, EqLabel::Deflat3_FiniteDebt_Spec, dw.status));
    }

    FValue f0 = speculation_f_values(params, EqLabel::Bad_InfDebt_FiniteSpec);
    if (f0.ok) {
        out.push_back(infinite_point(primal, EqLabel::Bad_InfDebt_FiniteSpec, 0,
                                     {0.0, 0.0, kInf, f0.value}, SystemId::SpeculationQ4,
                                     {0.0, 0.0, 0.0, f0.value}, params, true));
    } else {
        out.push_back(missing_point(primal, EqLabel::Bad_InfDebt_FiniteSpec, f0.note));
    }
    for (int sign = 0; sign < 2; ++sign) {
        out.push_back(infinite_point(primal, EqLabel::Bad_InfDebt_InfSpec, sign,
                                     {0.0, 0.0, kInf, sign == 0 ? kInf : -kInf},
                                     SystemId::SpeculationVX4, {0.0, 0.0, 0.0, 0.0}, params, true));
    }
    if (dw.exists) {
        FValue f3 = speculation_f_values(params, EqLabel::Deflat3_InfDebt_FiniteSpec);
        if (f3.ok) {
            out.push_back(infinite_point(primal, EqLabel::Deflat3_InfDebt_FiniteSpec, 0,
                                         {dw.omega3, 0.0, kInf, f3.value}, SystemId::SpeculationQ4,
                                         {dw.omega3, 0.0, 0.0, f3.value}, params, true));
        } else {
            out.push_back(missing_point(primal, EqLabel::Deflat3_InfDebt_FiniteSpec, f3.note));
        }
        for (int sign = 0; sign < 2; ++sign) {
            out.push_back(infinite_point(primal, EqLabel::Deflat3_InfDebt_InfSpec, sign,
                                         {dw.omega3, 0.0, kInf, sign == 0 ? kInf : -kInf},
                                         SystemId::SpeculationVX4, {dw.omega3, 0.0, 0.0, 0.0},
                                         params, true));
        }
    } else {
        out.push_back(missing_point(primal, EqLabel::Deflat3_InfDebt_FiniteSpec, dw.status));
        out.push_back(missing_point(primal, EqLabel::Deflat3_InfDebt_InfSpec, dw.status));
    }
    return out;
}

}  // namespace keen
