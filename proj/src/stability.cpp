#include "keen/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace keen {

namespace {

struct PriceView {
    bool active = false;
    double eta_p = 0.0;
    double xi = 0.0;
    double gamma = 0.0;
    double at(double omega) const { return active ? eta_p * (xi * omega - 1.0) : 0.0; }
    double slope() const { return active ? eta_p * xi : 0.0; }
    double pass_through(double omega) const {  // (1-gamma) * i(omega)
        return active ? (1.0 - gamma) * at(omega) : 0.0;
    }
};

PriceView price_view(SystemId system, const ModelParams& params) {
    PriceView v;
    if (system != SystemId::Basic3 && params.price) {
        v.active = true;
        v.eta_p = params.price->eta_p;
        v.xi = params.price->xi;
        v.gamma = params.price->gamma;
    }
    return v;
}

}  // namespace

static void analytic_into(SystemId system, const StateVec& s, const ModelParams& params,
                          std::array<std::array<double, 4>, 4>& J) {
    const EconParams& e = params.econ;
    const PriceView pv = price_view(system, params);
    const double omega = s[0], lambda = s[1];
    const double phi = phillips(lambda, params.phillips);
    const double phid = phillips_deriv(lambda, params.phillips);
    const double gfloor = growth_rate_floor(params);
    const double islope = pv.active ? (1.0 - pv.gamma) * pv.slope() : 0.0;
    const double i = pv.at(omega);

    for (auto& row : J) row = {0, 0, 0, 0};
    // wage-share row is shared by every system
    J[0][0] = phi - e.alpha - pv.pass_through(omega) - omega * islope;
    J[0][1] = omega * phid;

    auto primal_rows = [&](double b, double kapd, double g, double gn) {
        J[1][0] = -lambda * kapd / e.nu;
        J[1][1] = g - e.alpha - e.beta;
        J[1][2] = -e.r * lambda * kapd / e.nu;
        J[2][0] = b * (kapd / e.nu - pv.slope()) + 1.0 - kapd;
        J[2][2] = e.r * (b * kapd / e.nu + 1.0 - kapd) - gn;
    };

    switch (system) {
        case SystemId::Basic3: {
            const double b = s[2];
            const double pi = 1.0 - omega - e.r * b;
            const double kap = kappa(pi, params.invest);
            const double kapd = kappa_deriv(pi, params.invest);
            const double g = kap / e.nu - e.delta;
            primal_rows(b, kapd, g, g);
            return;
        }
        case SystemId::Inflation3: {
            const double b = s[2];
            const double pi = 1.0 - omega - e.r * b;
            const double kap = kappa(pi, params.invest);
            const double kapd = kappa_deriv(pi, params.invest);
            const double g = kap / e.nu - e.delta;
            primal_rows(b, kapd, g, g + i);
            return;
        }
        case SystemId::InflationInverse3: {
            const double q = s[2];
            double kap, kapd, g, dpi_dq;
            if (std::abs(q) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                kapd = 0.0;
                g = gfloor;
                dpi_dq = 0.0;  // kappa' beats every 1/q power in the limit
            } else {
                const double pi = 1.0 - omega - e.r / q;
                kap = kappa(pi, params.invest);
                kapd = kappa_deriv(pi, params.invest);
                g = kap / e.nu - e.delta;
                dpi_dq = e.r / (q * q);
            }
            J[1][0] = -lambda * kapd / e.nu;
            J[1][1] = g - e.alpha - e.beta;
            J[1][2] = lambda * (kapd / e.nu) * dpi_dq;
            // q' = q*(g + i - r) - q^2*(kappa - 1 + omega)
            J[2][0] = q * (pv.slope() - kapd / e.nu) - q * q * (1.0 - kapd);
            J[2][2] = (g + i - e.r) + q * (kapd / e.nu) * dpi_dq - 2.0 * q * (kap - 1.0 + omega) -
                      q * q * kapd * dpi_dq;
            return;
        }
        case SystemId::Speculation4: {
            const SpeculationParams& sp = *params.spec;
            const double b = s[2], f = s[3];
            const double pi = 1.0 - omega - e.r * b;
            const double kap = kappa(pi, params.invest);
            const double kapd = kappa_deriv(pi, params.invest);
            const double g = kap / e.nu - e.delta;
            const double gn = g + i;
            primal_rows(b, kapd, g, gn);
            const double gap = f - psi_deriv(gn, sp);
            J[2][3] = 1.0;
            J[3][0] = (kapd / e.nu - pv.slope()) * gap;
            J[3][2] = e.r * (kapd / e.nu) * gap;
            J[3][3] = -gn;
            return;
        }
        case SystemId::SpeculationQ4: {
            const SpeculationParams& sp = *params.spec;
            const double q = s[2], f = s[3];
            double kap, kapd, g, dpi_dq;
            if (std::abs(q) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                kapd = 0.0;
                g = gfloor;
                dpi_dq = 0.0;
            } else {
                const double pi = 1.0 - omega - e.r / q;
                kap = kappa(pi, params.invest);
                kapd = kappa_deriv(pi, params.invest);
                g = kap / e.nu - e.delta;
                dpi_dq = e.r / (q * q);
            }
            const double gn = g + i;
            const double gap = f - psi_deriv(gn, sp);
            J[1][0] = -lambda * kapd / e.nu;
            J[1][1] = g - e.alpha - e.beta;
            J[1][2] = lambda * (kapd / e.nu) * dpi_dq;
            // q' = q*(g + i - r) - q^2*(kappa - 1 + omega + f)
            J[2][0] = q * (pv.slope() - kapd / e.nu) - q * q * (1.0 - kapd);
            J[2][2] = (gn - e.r) + q * (kapd / e.nu) * dpi_dq -
                      2.0 * q * (kap - 1.0 + omega + f) - q * q * kapd * dpi_dq;
            J[2][3] = -q * q;
            J[3][0] = (kapd / e.nu - pv.slope()) * gap;
            J[3][2] = -gap * (kapd / e.nu) * dpi_dq;
            J[3][3] = -gn;
            return;
        }
        default: {  // SpeculationVX4
            const SpeculationParams& sp = *params.spec;
            const double v = s[2], x = s[3];
            const double vx = v * x;
            double kap, kapd, g, dpi_dv, dpi_dx;
            if (std::abs(vx) < kInverseCoordEps) {
                kap = params.invest.kappa0;
                kapd = 0.0;
                g = gfloor;
                dpi_dv = dpi_dx = 0.0;
            } else {
                const double pi = 1.0 - omega - e.r / vx;
                kap = kappa(pi, params.invest);
                kapd = kappa_deriv(pi, params.invest);
                g = kap / e.nu - e.delta;
                dpi_dv = e.r / (v * v * x);
                dpi_dx = e.r / (v * x * x);
            }
            const double gn = g + i;
            const double flow = psi(gn, sp);
            const double flowd = psi_deriv(gn, sp);
            const double dG_dom = pv.slope() - kapd / e.nu;
            J[1][0] = -lambda * kapd / e.nu;
            J[1][1] = g - e.alpha - e.beta;
            J[1][2] = lambda * (kapd / e.nu) * dpi_dv;
            J[1][3] = lambda * (kapd / e.nu) * dpi_dx;
            // v' = v*x*Psi(G) - v^2*x*(kappa - 1 + omega) - r*v - v^2
            J[2][0] = vx * flowd * dG_dom - v * v * x * (1.0 - kapd);
            J[2][2] = x * flow + vx * flowd * (kapd / e.nu) * dpi_dv -
                      2.0 * vx * (kap - 1.0 + omega) - v * v * x * kapd * dpi_dv - e.r - 2.0 * v;
            J[2][3] = v * flow + vx * flowd * (kapd / e.nu) * dpi_dx - v * v * (kap - 1.0 + omega) -
                      v * v * x * kapd * dpi_dx;
            // x' = x*G - x^2*Psi(G)
            const double xfac = x - x * x * flowd;
            J[3][0] = xfac * dG_dom;
            J[3][2] = xfac * (kapd / e.nu) * dpi_dv;
            J[3][3] = gn - 2.0 * x * flow + xfac * (kapd / e.nu) * dpi_dx;
            return;
        }
    }
}

JacobianMatrix jacobian(SystemId system, const StateVec& state, const ModelParams& params,
                        JacobianMatrix::Source source) {
    JacobianMatrix J;
    J.system = system;
    J.n = dim(system);
    J.point = state;
    J.source = source;
    if (source == JacobianMatrix::Source::Analytic) {
        analytic_into(system, state, params, J.a);
        return J;
    }
    for (int j = 0; j < J.n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(state[j]));
        StateVec up = state, dn = state;
        up[j] += h;
        dn[j] -= h;
        const StateVec fu = vector_field(system, up, params);
        const StateVec fd = vector_field(system, dn, params);
        for (int i = 0; i < J.n; ++i) J.a[i][j] = (fu[i] - fd[i]) / (2.0 * h);
    }
    return J;
}

KCoefficients k_coefficients(const ModelParams& params, const EquilibriumPoint& p) {
    if (!p.exists || !p.finite())
        throw std::invalid_argument("k_coefficients: needs an existing finite good point");
    const EconParams& e = params.econ;
    const PriceView pv = price_view(p.system, params);
    const double omega = p.coords[0], lambda = p.coords[1], b = p.coords[2];
    const double pi1 = 1.0 - omega - e.r * b;
    const double kapd = kappa_deriv(pi1, params.invest);
    const double A = e.alpha + e.beta + pv.at(omega);

    KCoefficients k{};
    k.K0 = -(pv.active ? (1.0 - pv.gamma) : 0.0) * pv.slope() * omega;
    k.K1 = omega * phillips_deriv(lambda, params.phillips);
    k.K2 = lambda * kapd / e.nu;
    k.K3 = kapd * (b - e.nu) / e.nu + 1.0;
    k.K4 = e.r * k.K3 - A;
    k.K5 = A - e.r * pv.slope() * b;
    k.K6 = 0.0;
    if (p.system == SystemId::Speculation4 && params.spec)
        k.K6 = p.coords[3] - psi_deriv(A, *params.spec);
    return k;
}

std::array<double, 4> charpoly_3(const KCoefficients& k) {
    return {1.0, -(k.K0 + k.K4), k.K0 * k.K4 + k.K1 * k.K2, k.K1 * k.K2 * k.K5};
}

std::array<double, 5> charpoly_4(const KCoefficients& k, const ModelParams& params) {
    if (!params.price || !params.spec)
        throw std::invalid_argument("charpoly_4: price and speculation blocks required");
    const EconParams& e = params.econ;
    const double A = e.r * k.K3 - k.K4;  // alpha + beta + equilibrium inflation
    const double E = params.price->eta_p * params.price->xi;
    const double pi1 = kappa_inverse(e.nu * (e.alpha + e.beta + e.delta), params.invest);
    const double c = kappa_deriv(pi1, params.invest) / e.nu;
    const double k1k2 = k.K1 * k.K2;
    return {1.0,
            A - k.K0 - k.K4,
            k.K0 * k.K4 + k1k2 - A * (k.K0 + k.K4) - e.r * c * k.K6,
            k1k2 * k.K5 + A * (k.K0 * k.K4 + k1k2) + e.r * c * k.K6 * k.K0,
            k1k2 * (A * k.K5 - e.r * E * k.K6)};
}

std::vector<double> charpoly(const JacobianMatrix& J) {
    const int n = J.n;
    // Faddeev-LeVerrier: M_0 = I, c_k = -tr(J M_{k-1}) / k, M_k = J M_{k-1} + c_k I
    std::array<std::array<double, 4>, 4> M{};
    for (int i = 0; i < n; ++i) M[i][i] = 1.0;
    std::vector<double> coeffs{1.0};
    for (int k = 1; k <= n; ++k) {
        std::array<std::array<double, 4>, 4> JM{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += J.a[i][l] * M[l][j];
                JM[i][j] = s;
            }
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += JM[i][i];
        const double ck = -tr / k;
        coeffs.push_back(ck);
        M = JM;
        for (int i = 0; i < n; ++i) M[i][i] += ck;
    }
    return coeffs;
}

bool routh_hurwitz(std::span<const double> coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 2 || deg > 4) throw std::invalid_argument("routh_hurwitz: degree must be 2..4");
    if (coeffs[0] == 0.0) throw std::invalid_argument("routh_hurwitz: zero leading coefficient");
    std::vector<double> a(coeffs.begin(), coeffs.end());
    if (a[0] < 0)
        for (double& v : a) v = -v;
    for (int i = 1; i <= deg; ++i)
        if (!(a[i] > 0)) return false;
    if (deg == 2) return true;
    if (deg == 3) return a[1] * a[2] > a[0] * a[3];
    // monic-insensitive quartic conditions
    const double a3 = a[1] / a[0], a2 = a[2] / a[0], a1 = a[3] / a[0], a0 = a[4] / a[0];
    return a3 * a2 > a1 && a3 * a2 * a1 > a1 * a1 + a3 * a3 * a0;
}

std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs) {
    using C = std::complex<double>;
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && coeffs[0] == 0.0) {
        coeffs = coeffs.subspan(1);
        --deg;
    }
    if (deg > 4) throw std::invalid_argument("poly_roots: degree must be <= 4");
    std::vector<C> out;
    if (deg <= 0) return out;

    std::vector<double> a(deg + 1);
    for (int i = 0; i <= deg; ++i) a[i] = coeffs[i] / coeffs[0];

    if (deg == 1) {
        out = {C(-a[1], 0.0)};
    } else if (deg == 2) {
        const double disc = a[1] * a[1] - 4.0 * a[2];
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (a[1] + (a[1] >= 0 ? sq : -sq));
            const double r0 = q;
            const double r1 = (q != 0.0) ? a[2] / q : -a[1] - q;
            out = {C(r0, 0.0), C(r1, 0.0)};
        } else {
            const double im = 0.5 * std::sqrt(-disc);
            out = {C(-0.5 * a[1], -im), C(-0.5 * a[1], im)};
        }
    } else {
        // Durand-Kerner simultaneous iteration on the monic polynomial
        double radius = 0.0;
        for (int i = 1; i <= deg; ++i) radius = std::max(radius, std::abs(a[i]));
        radius = 1.0 + radius;
        std::vector<C> z(deg);
        const C seed(0.4, 0.9);
        C acc(1.0, 0.0);
        for (int i = 0; i < deg; ++i) {
            acc *= seed;
            z[i] = radius * acc;
        }
        auto eval = [&](C x) {
            C v(1.0, 0.0);
            for (int i = 1; i <= deg; ++i) v = v * x + a[i];
            return v;
        };
        for (int it = 0; it < 500; ++it) {
            double shift = 0.0;
            for (int i = 0; i < deg; ++i) {
                C denom(1.0, 0.0);
                for (int j = 0; j < deg; ++j)
                    if (j != i) denom *= (z[i] - z[j]);
                if (denom == C(0.0, 0.0)) denom = C(1e-300, 0.0);
                const C d = eval(z[i]) / denom;
                z[i] -= d;
                shift = std::max(shift, std::abs(d));
            }
            if (shift < 1e-14 * radius) break;
        }
        out = std::move(z);
    }
    return out;
}

std::vector<double> poly_roots_real_parts(std::span<const double> coeffs) {
    std::vector<double> out;
    for (const std::complex<double>& z : poly_roots(coeffs)) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        default: return "marginal";
    }
}

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void add_condition(std::vector<PrintedCondition>& dst, std::string name, std::string id,
                   bool holds, std::string note = {}) {
    dst.push_back({std::move(name), std::move(id), holds, std::move(note)});
}

/// Conditions evaluated verbatim in their classical closed form; a note is
/// attached downstream when the verdict disagrees with the eigenvalues.
void printed_conditions_for(const EquilibriumPoint& p, const ModelParams& params,
                            std::vector<PrintedCondition>& dst) {
    const EconParams& e = params.econ;
    const double gfloor = growth_rate_floor(params);
    const double phi0v = phillips(0.0, params.phillips);
    const double pi1 = kappa_inverse(e.nu * (e.alpha + e.beta + e.delta), params.invest);

    auto window_mid = [&](double b, double pieq) {
        return e.r * (1.0 + kappa_deriv(pieq, params.invest) * (b / e.nu - 1.0));
    };

    if (p.system == SystemId::Basic3) {
        if (p.label == EqLabel::Good1) {
            const double mid = window_mid(p.coords[2], pi1);
            add_condition(dst, "good-window", "basic.good.window",
                          0.0 < mid && mid < e.alpha + e.beta,
                          "middle term = " + num(mid) + ", window (0, " +
                              num(e.alpha + e.beta) + ")");
        } else {
            add_condition(dst, "bad-growth-vs-interest", "basic.bad.rate", gfloor < e.r);
        }
        return;
    }

    const PriceParams& pr = *params.price;
    const double E = pr.eta_p * pr.xi;

    switch (p.label) {
        case EqLabel::Good1: {
            const double ieq = inflation_rate(p.coords[0], pr);
            const double mid = window_mid(p.coords[2], pi1);
            add_condition(dst, "good-window-nominal", "inflation.good.window",
                          e.r * E * p.coords[2] < mid && mid < e.alpha + e.beta + ieq,
                          "sufficient condition only");
            const KCoefficients k = k_coefficients(params, p);
            const bool verbatim = k.K0 < -k.K4 && -k.K0 * k.K4 > k.K1 * k.K2 && k.K5 > 0 &&
                                  (k.K0 + k.K4) * (k.K0 * k.K4 + k.K1 * k.K2) > k.K1 * k.K2 * k.K5;
            const std::array<double, 4> cp = charpoly_3(k);
            add_condition(dst, "cubic-necessary-set", "inflation.good.cubic", verbatim,
                          std::string("verbatim closed-form set; coefficient test gives ") +
                              (routh_hurwitz(cp) ? "stable" : "unstable"));
            break;
        }
        case EqLabel::Bad2_InfDebt: {
            const bool as_written = phi0v < e.alpha - (pr.gamma - 1.0) * pr.eta_p;
            const double entry = phi0v - e.alpha + (1.0 - pr.gamma) * pr.eta_p;
            add_condition(dst, "wage-axis-repulsion", "inflation.bad.wage", as_written,
                          "as written; the wage-row Jacobian entry is " + num(entry));
            add_condition(dst, "nominal-growth-vs-interest", "inflation.bad.rate",
                          gfloor - pr.eta_p < e.r);
            break;
        }
        case EqLabel::Deflat3_FiniteDebt: {
            const double w3 = p.coords[0], b3 = p.coords[2];
            const double pi3 = 1.0 - w3 - e.r * b3;
            const double g3 = growth_rate(pi3, params);
            const double i3 = inflation_rate(w3, pr);
            add_condition(dst, "wage-anchor-negative", "deflat.finite.wage",
                          (pr.gamma - 1.0) * E * w3 < 0.0);
            add_condition(dst, "subpotential-growth", "deflat.finite.growth",
                          g3 < e.alpha + e.beta);
            add_condition(dst, "debt-window", "deflat.finite.window",
                          window_mid(b3, pi3) < g3 + i3);
            break;
        }
        case EqLabel::Deflat3_InfDebt: {
            const double i3 = inflation_rate(p.coords[0], pr);
            add_condition(dst, "wage-anchor-negative", "deflat.infinite.wage",
                          (pr.gamma - 1.0) * E * p.coords[0] < 0.0);
            add_condition(dst, "nominal-growth-vs-interest", "deflat.infinite.rate",
                          gfloor + i3 < e.r);
            break;
        }
        case EqLabel::Good1_Spec: {
            const KCoefficients k = k_coefficients(params, p);
            const std::array<double, 5> cp = charpoly_4(k, params);
            add_condition(dst, "quartic-rh", "spec.good.rh", routh_hurwitz(cp));
            // grouped coefficient list in its traditional reduced form
            const double A = e.r * k.K3 - k.K4;
            const double c = kappa_deriv(pi1, params.invest) / e.nu;
            const std::array<double, 5> reduced = {
                1.0, -k.K0 - e.r * k.K3,
                k.K0 * k.K4 + k.K1 * k.K2 - A * (k.K0 + k.K4) - e.r * c * k.K6,
                A * k.K0 * k.K4 + e.r * E * p.coords[2] * k.K1 * k.K2 - e.r * c * k.K6 * k.K0,
                -k.K1 * k.K2 * (A * k.K5 + e.r * k.K6 * E)};
            bool reduced_ok = false;
            bool valid = true;
            try {
                reduced_ok = routh_hurwitz(reduced);
            } catch (const std::invalid_argument&) {
                valid = false;
            }
            add_condition(dst, "reduced-quartic-rh", "spec.good.reduced", valid && reduced_ok,
                          "reduced coefficient list differs from det(XI - J); "
                          "determinant route is authoritative");
            break;
        }
        case EqLabel::Deflat3_FiniteDebt_Spec: {
            const double w3 = p.coords[0], b3 = p.coords[2], f3 = p.coords[3];
            const double pi3 = 1.0 - w3 - e.r * b3;
            const double g3 = growth_rate(pi3, params);
            const double gn3 = g3 + inflation_rate(w3, pr);
            add_condition(dst, "debt-window-doubled", "spec.deflat.finite.window",
                          window_mid(b3, pi3) > 2.0 * gn3,
                          "factor 2 kept verbatim; advisory only");
            add_condition(dst, "subpotential-growth", "spec.deflat.finite.growth",
                          g3 < e.alpha + e.beta);
            add_condition(dst, "flow-slope-exceeds-level", "spec.deflat.finite.flow",
                          psi_deriv(gn3, *params.spec) > f3);
            break;
        }
        case EqLabel::Bad_InfDebt_FiniteSpec:
        case EqLabel::Deflat3_InfDebt_FiniteSpec: {
            const double w = p.coords[0];
            if (p.label == EqLabel::Bad_InfDebt_FiniteSpec) {
                add_condition(dst, "wage-axis-repulsion", "spec.infdebt.wage",
                              phi0v < e.alpha - (pr.gamma - 1.0) * pr.eta_p,
                              "as written; the wage-row Jacobian entry is " +
                                  num(phi0v - e.alpha + (1.0 - pr.gamma) * pr.eta_p));
            } else {
                add_condition(dst, "wage-anchor-negative", "spec.infdebt.wage",
                              (pr.gamma - 1.0) * E * w < 0.0);
            }
            const double gn = gfloor + inflation_rate(w, pr);
            add_condition(dst, "inflow-window", "spec.infdebt.window", 0.0 < gn && gn < e.r,
                          "nominal floor growth = " + num(gn));
            break;
        }
        default: {  // infinite-speculation labels
            const double w = p.coords[0];
            if (p.label == EqLabel::Bad_InfDebt_InfSpec) {
                add_condition(dst, "wage-axis-repulsion", "spec.infspec.wage",
                              phi0v - e.alpha + (1.0 - pr.gamma) * pr.eta_p < 0.0);
            } else {
                add_condition(dst, "wage-anchor-negative", "spec.infspec.wage",
                              (pr.gamma - 1.0) * E * w < 0.0);
            }
            add_condition(dst, "outflow-negative", "spec.infspec.outflow",
                          gfloor + inflation_rate(w, pr) < 0.0);
            break;
        }
    }
}

}  // namespace

StabilityReport classify(const EquilibriumPoint& point, const ModelParams& params) {
    if (!point.exists) throw std::invalid_argument("classify: point does not exist");

    StabilityReport rep;
    rep.point = point;

    if (point.system == SystemId::Basic3 && point.label == EqLabel::Bad2_InfDebt) {
        // inverse-debt form of the constant-price system at (0,0,0): the
        // Jacobian is diagonal with the price block bypassed.
        JacobianMatrix J;
        J.system = SystemId::InflationInverse3;
        J.n = 3;
        J.point = point.defining_coords;
        J.source = JacobianMatrix::Source::Analytic;
        for (auto& row : J.a) row = {0, 0, 0, 0};
        const double gfloor = growth_rate_floor(params);
        J.a[0][0] = phillips(0.0, params.phillips) - params.econ.alpha;
        J.a[1][1] = gfloor - params.econ.alpha - params.econ.beta;
        J.a[2][2] = gfloor - params.econ.r;
        rep.charpoly_coeffs = charpoly(J);
        add_condition(rep.printed_conditions, "bad-growth-vs-interest", "basic.bad.rate",
                      gfloor < params.econ.r);
    } else {
        const JacobianMatrix J = jacobian(point.defining_system, point.defining_coords, params,
                                          JacobianMatrix::Source::Analytic);
        rep.charpoly_coeffs = charpoly(J);
        printed_conditions_for(point, params, rep.printed_conditions);
    }

    rep.rh_verdict = routh_hurwitz(rep.charpoly_coeffs);
    rep.eigen_real_parts = poly_roots_real_parts(rep.charpoly_coeffs);
    const double max_re = rep.eigen_real_parts.back();
    rep.eigen_verdict = max_re < -kMarginalBand;
    if (std::abs(max_re) <= kMarginalBand)
        rep.final_verdict = Verdict::Marginal;
    else
        rep.final_verdict = max_re < 0 ? Verdict::Stable : Verdict::Unstable;

    const bool stable = rep.final_verdict == Verdict::Stable;
    for (PrintedCondition& c : rep.printed_conditions) {
        if (c.holds != stable) {
            if (!c.note.empty()) c.note += "; ";
            c.note += "disagrees with the eigenvalue verdict (";
            c.note += verdict_name(rep.final_verdict);
            c.note += "), eigenvalues are authoritative";
        }
    }
    return rep;
}

}  // namespace keen
