#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "keen/equilibria.hpp"

namespace keen {

struct JacobianMatrix {
    enum class Source { Analytic, FiniteDifference };
    SystemId system;
    int n;
    StateVec point;
    std::array<std::array<double, 4>, 4> a{};
    Source source;

    double operator()(int i, int j) const { return a[i][j]; }
};

/// Jacobian of the system's vector field at a state. The analytic source
/// carries the same inverse-coordinate limit handling as the vector field;
/// the finite-difference source uses central differences with step
/// 1e-6 * max(1, |x_i|).
JacobianMatrix jacobian(SystemId system, const StateVec& state, const ModelParams& params,
                        JacobianMatrix::Source source);

/// Entries of the equilibrium Jacobian at a good point, in the grouped form
/// used by the closed-form characteristic polynomials. K6 is only defined
/// for the four-dimensional system (0 otherwise).
struct KCoefficients {
    double K0, K1, K2, K3, K4, K5, K6;
};

/// Builds the grouped coefficients from a Good1-type equilibrium point.
KCoefficients k_coefficients(const ModelParams& params, const EquilibriumPoint& good_point);

/// Monic cubic characteristic polynomial [1, c2, c1, c0] of the grouped
/// three-dimensional good-point Jacobian.
std::array<double, 4> charpoly_3(const KCoefficients& k);

/// Monic quartic characteristic polynomial [1, a3, a2, a1, a0] of the
/// grouped four-dimensional good-point Jacobian. Agrees with det(XI - J)
/// expansion (tested), which is the authoritative route.
std::array<double, 5> charpoly_4(const KCoefficients& k, const ModelParams& params);

/// Characteristic polynomial of an n x n Jacobian (n <= 4) by the
/// Faddeev-LeVerrier trace recursion; coefficients monic, degree n.
std::vector<double> charpoly(const JacobianMatrix& J);

/// Classical coefficient test: true iff every root of the polynomial has
/// negative real part. Degree 2 to 4; leading coefficient may be any
/// nonzero value (normalized internally). Throws on other degrees.
bool routh_hurwitz(std::span<const double> coeffs);

/// All roots of a real polynomial of degree <= 4. Closed forms for degree
/// <= 2, simultaneous-iteration refinement for degrees 3 and 4.
std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs);

/// Real parts of all roots, ascending.
std::vector<double> poly_roots_real_parts(std::span<const double> coeffs);

struct PrintedCondition {
    std::string name;
    std::string formula_id;
    bool holds;
    std::string note;
};

enum class Verdict { Stable, Unstable, Marginal };

const char* verdict_name(Verdict v);

struct StabilityReport {
    EquilibriumPoint point;
    std::vector<double> charpoly_coeffs;   // monic, from det(XI - J)
    bool rh_verdict;                       // Routh-Hurwitz on charpoly_coeffs
    std::vector<double> eigen_real_parts;  // ascending
    bool eigen_verdict;                    // all real parts < -1e-8
    std::vector<PrintedCondition> printed_conditions;
    Verdict final_verdict;
};

inline constexpr double kMarginalBand = 1e-8;

/// Full local-stability classification of an equilibrium point. The final
/// verdict comes from the eigenvalue real parts of the defining-system
/// Jacobian; the closed-form conditions are attached as advisory
/// predicates with a note wherever they disagree.
StabilityReport classify(const EquilibriumPoint& point, const ModelParams& params);

}  // namespace keen
