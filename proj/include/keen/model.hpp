#pragma once

#include <span>
#include <vector>

#include "keen/behavior.hpp"
#include "keen/params.hpp"
#include "keen/state.hpp"

namespace keen {

/// Net profit share in the coordinates of the given system.
/// Throws std::domain_error on division by an exactly-zero inverse
/// coordinate; near-zero values are the caller's limit to take.
double profit_share(SystemId system, const StateVec& state, const EconParams& econ);

/// Right-hand side of the selected system. Basic3 has no price block at
/// all (i = 0 by construction, gamma never read). In the transformed
/// systems the isolated zeros at q = 0 (resp. |v|+|x| = 0) are evaluated
/// through the analytic limit: kappa -> kappa0 and kappa' -> 0, with the
/// 1/q (resp. 1/(vx)) parts of pi expanded algebraically so no division
/// by zero occurs. The limit substitution applies below |q| < 1e-12.
StateVec vector_field(SystemId system, const StateVec& state, const ModelParams& params);

/// Consistent observable bundle; g_nominal = g + i and c_share = 1 - kappa(pi).
Observables observables(SystemId system, const StateVec& state, const ModelParams& params);

/// Price level recovered from a sampled wage-share path by trapezoidal
/// quadrature of i(omega(s)). p(0) = p0 > 0, hence p(t) > 0 throughout.
std::vector<double> price_path(std::span<const double> times,
                               std::span<const double> omegas, double p0,
                               const PriceParams& price);

/// Threshold below which transformed coordinates are treated as exactly
/// at their equilibrium zero.
inline constexpr double kInverseCoordEps = 1e-12;

}  // namespace keen
