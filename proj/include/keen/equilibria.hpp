#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "keen/model.hpp"

namespace keen {

enum class EqLabel {
    Good1,
    Bad2_InfDebt,
    Deflat3_FiniteDebt,
    Deflat3_InfDebt,
    Good1_Spec,
    Bad_InfDebt_FiniteSpec,
    Bad_InfDebt_InfSpec,
    Deflat3_FiniteDebt_Spec,
    Deflat3_InfDebt_FiniteSpec,
    Deflat3_InfDebt_InfSpec,
};

const char* label_name(EqLabel label);

/// A named fixed point. `coords` is the display form in the primal system
/// and may hold +-infinity; `defining_system`/`defining_coords` give the
/// finite representation the residual is evaluated in (the q or v/x form
/// for infinite-debt points).
struct EquilibriumPoint {
    SystemId system;
    EqLabel label;
    int branch = 0;
    bool exists = true;
    std::string status;
    StateVec coords;
    SystemId defining_system;
    StateVec defining_coords;
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::optional<Observables> aux;

    bool finite() const;
};

/// Quadratic a0*w^2 + a1*w + a2 = 0 satisfied by the monetary good wage
/// share; roots sorted descending.
struct QuadraticCoeffs {
    double a0, a1, a2;
    double discriminant;
    std::vector<double> roots;
};

struct RejectedRoot {
    double value;  // the root (wage share, or X for the 4D solve)
    std::string reason;
};

/// Deterministic sign-change scan followed by bisection.
struct ScanConfig {
    double lo;
    double hi;
    double step;
};

inline constexpr ScanConfig kDebtScan{-100.0, 100.0, 0.01};
inline constexpr ScanConfig kGrowthScan{-2.0, 2.0, 1e-4};

/// Good equilibrium of the constant-price system, in closed form.
EquilibriumPoint good_eq_basic(const ModelParams& params);

struct InflationGoodResult {
    QuadraticCoeffs quad;
    std::vector<EquilibriumPoint> points;
    std::vector<RejectedRoot> rejected;
    std::string diagnostic;
};

/// Good equilibria of the monetary system: solves the wage-share quadratic
/// and reconstructs (lambda, b) per root, verifying each by residual.
InflationGoodResult good_eq_inflation(const ModelParams& params);

struct DeflationWage {
    bool exists = false;
    double omega3 = std::numeric_limits<double>::quiet_NaN();
    std::string status;
};

/// Wage share of the zero-employment deflationary equilibria.
DeflationWage deflation_wage_share(const ModelParams& params);

struct DebtRootsResult {
    std::vector<double> roots;
    std::vector<double> residuals;
    std::vector<std::pair<double, double>> brackets;  // sign-change intervals used
    std::string diagnostic;
};

/// All real roots of the deflationary debt equation
///   b*(i(w3) + g(1-w3-r*b) - r) = kappa(1-w3-r*b) - 1 + w3
/// found by sign-change scan plus bisection.
DebtRootsResult solve_b3_inflation(const ModelParams& params, double omega3,
                                   const ScanConfig& scan = kDebtScan);

struct SpeculationGoodResult {
    std::vector<double> x_roots;  // accepted roots of the nominal-growth equation
    std::vector<EquilibriumPoint> points;
    std::vector<RejectedRoot> rejected;
    std::string diagnostic;
};

/// Good equilibrium of the four-dimensional system via the scalar equation
/// for the equilibrium nominal growth rate X = alpha + beta + i(omega).
SpeculationGoodResult good_eq_speculation(const ModelParams& params,
                                          const ScanConfig& scan = kGrowthScan);

struct FValue {
    bool ok = false;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

/// Equilibrium speculative-flow share for the labels that define one.
FValue speculation_f_values(const ModelParams& params, EqLabel label);

struct SpecDebtRoot {
    double b;
    double f;
    double residual;  // max norm over the debt/flow rows at lambda = 0
};

struct SpecDebtRootsResult {
    std::vector<SpecDebtRoot> roots;
    std::vector<std::pair<double, double>> brackets;
    std::string diagnostic;
};

/// Simultaneous (b, f) solve for the zero-employment finite-debt point of the
/// 4D system; f is substituted inline from its own equilibrium equation, so a
/// one-dimensional scan in b suffices. The scan splits at the nominal-growth
/// pole where the f-equation denominator changes sign.
SpecDebtRootsResult solve_b3_speculation(const ModelParams& params, double omega3,
                                         const ScanConfig& scan = kDebtScan);

/// Every point defined for the (primal base of the) given system, with
/// existence status, display/defining coordinates and residuals.
std::vector<EquilibriumPoint> enumerate_equilibria(const ModelParams& params, SystemId system);

}  // namespace keen
