#pragma once

#include "bdg/discretization.hpp"
#include "bdg/time_integration.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bdg
{

/// Boundary tags shared by all preset meshes.
enum BoundaryTag { TagInflow = 1, TagOutflow = 2, TagWall = 3 };

/// A registered benchmark problem: law, mesh recipe, initial and boundary
/// data, time step and final time (or steady-state mode), and the mesh
/// resolutions of its convergence table, if it has one. `resolution` is
/// the number of elements per unit length in each direction.
struct BenchmarkPreset
{
   std::string name;
   ConservationLaw law;
   bool steady = false;
   bool smooth = false; ///< initial data is smooth (selects L2 projection)
   Real dt = 0;
   Real t_final = 0;     ///< unused in steady mode
   Real steady_tol = 1e-12;
   int default_p = 1;
   int default_resolution = 0;
   std::vector<int> table_resolutions; ///< empty without a convergence table

   std::function<State(const Vec2 &)> initial;
   std::function<State(const Vec2 &, Real)> exact; ///< null if unavailable
   std::map<int, BoundaryRule> bcs;
   std::function<Mesh(int)> make_mesh;
};

const BenchmarkPreset &get_preset(const std::string &name);
std::vector<std::string> preset_names();

/// Projection of the preset's initial data. Smooth presets use the
/// consistent-mass L2 projection, which keeps the optimal approximation
/// order of the space. Presets with discontinuous data use nodal
/// sampling instead: coefficients are pointwise values at the Bernstein
/// nodes, so initial bounds carry over to the coefficients.
StateField project_initial(const BenchmarkPreset &preset,
                           const Discretization &disc);

/// Per-component mean L1 error at time t against an exact solution:
/// the L1(Omega) norm of the error divided by the domain measure,
/// integrated element-wise with a degree 2p+2 quadrature rule.
Vec l1_error(const Discretization &disc, const StateField &f,
             const std::function<State(const Vec2 &, Real)> &exact, Real t);

/// Estimated orders of convergence: rates[k] compares errors[k] with
/// errors[k+1] on meshes of size 1/inv_h[k] and 1/inv_h[k+1]. A zero
/// error yields a quiet-NaN sentinel.
std::vector<Real> eoc(const std::vector<Real> &errors,
                      const std::vector<int> &inv_h);

/// A benchmark simulation with its owned mesh and discretization.
struct BenchmarkRun
{
   std::unique_ptr<Mesh> mesh;
   std::unique_ptr<Discretization> disc;
   StateField field;
   Real t = 0;
   std::vector<Real> history; ///< steady-marching residuals
   bool converged = false;    ///< steady mode only
};

using StepObserver = std::function<void(const BenchmarkRun &, int step)>;

/// Builds the mesh and discretization of a preset and projects the
/// initial data. Throws ConfigError if the requested time step exceeds
/// the IDP bound of the low order scheme at the initial state.
BenchmarkRun setup_run(const BenchmarkPreset &preset, int p, int resolution,
                       Real dt);

/// Evolves with SSP-RK3 to t_final (time-dependent presets) or marches
/// to steady state with forward Euler (steady presets).
void advance(BenchmarkRun &run, const BenchmarkPreset &preset, Scheme scheme,
             Real dt, Real t_final, const StepObserver &observer = {});

/// setup_run + advance with the preset's defaults; dt/t_final overrides
/// are used when positive.
BenchmarkRun run_benchmark(const BenchmarkPreset &preset, Scheme scheme,
                           int p, int resolution, Real dt_override = 0,
                           Real t_final_override = 0,
                           const StepObserver &observer = {});

} // namespace bdg
