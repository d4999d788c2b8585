#pragma once

#include <string>
#include <vector>

namespace bdg
{

/// Outcome of one property suite: number of checks performed, number of
/// failed checks, and a short description of the first failure.
struct SuiteResult
{
   std::string name;
   long checks = 0;
   long failures = 0;
   std::string detail;

   bool passed() const { return failures == 0 && checks > 0; }
};

/// Discrete operator identities: partition of unity, zero row sums of the
/// preconditioned gradient, Cartesian cross sparsity on box elements, and
/// fast-path-vs-dense assembly oracles on boxes and simplices up to p=3.
SuiteResult operator_suite();

/// The antidiffusive decomposition reconstructs the target scheme: low
/// order rhs plus unlimited fluxes equals the lumped consistent-mass
/// residual, on random fields of every law.
SuiteResult equivalence_suite();

/// Scalar forward Euler steps at the declared time step bound preserve
/// global coefficient bounds over repeated steps and trials.
SuiteResult idp_suite();

/// Total mass per component is conserved over many SSP-RK3 steps of the
/// limited scheme on periodic meshes.
SuiteResult conservation_suite();

/// Closed-form flux clips agree with brute-force feasibility oracles on
/// random instances.
SuiteResult limiter_oracle_suite();

std::vector<SuiteResult> run_property_suites();

bool all_passed(const std::vector<SuiteResult> &results);

} // namespace bdg
