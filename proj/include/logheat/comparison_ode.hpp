#pragma once

#include "logheat/analysis.hpp"

namespace logheat {

// Independent comparison route for the Gronwall certifiers: RK4 integration of
// the saturated equality cases, with the tabulated functions read as piecewise
// linear (so the right-hand side is smooth inside each tabulation cell).

// y' = f(t) y + g(t) y^alpha, y(t0) = C; returns y at the final grid time.
double gronwall_equality_solution(const GronwallInputs& in, int substeps = 8);

// y' = h'(t) + f(t) y + g(t) y log y, y(0) = h(0); h' is the per-cell slope of
// the tabulated h. Returns y at the final grid time.
double log_gronwall_equality_solution(const LogGronwallInputs& in, int substeps = 8);

}  // namespace logheat
