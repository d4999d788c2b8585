#pragma once

#include "bdg/discretization.hpp"

namespace bdg
{

enum class RKMethod { SSPRK1, SSPRK2, SSPRK3 };

/// Stage function producing du/dt (mass already applied).
using RhsFn = std::function<Mat(const StateField &, Real)>;

/// Wraps a discretization scheme into an RhsFn, dividing the per-node
/// residual by the lumped nodal masses.
RhsFn make_rhs(const Discretization &disc, Scheme scheme);

/// One strong-stability-preserving Runge-Kutta step (Shu-Osher form):
/// a convex combination of forward Euler stages evaluated at the stage
/// times t, t + dt, t + dt/2. Throws InvariantViolation naming the stage
/// if a stage result is not finite.
StateField ssprk_step(const RhsFn &rhs, const StateField &f, Real t, Real dt,
                      RKMethod method);

struct SteadyResult
{
   StateField field;
   std::vector<Real> history; ///< max-norm residuals |U^k - U^{k+1}|
   bool converged = false;
};

/// Forward Euler pseudo-time marching until the update residual stays
/// below tol for `consecutive` steps. Throws InvariantViolation if the
/// residual grows a factor 1e6 beyond its initial value.
SteadyResult march_to_steady(const RhsFn &rhs, const StateField &f, Real dt,
                             Real tol, int max_steps, int consecutive = 10);

} // namespace bdg
