#pragma once

#include "bdg/types.hpp"

namespace bdg
{

/// Conserved state with a small fixed capacity (up to 4 components) so hot
/// loops stay allocation free.
using State = Eigen::Matrix<Real, Eigen::Dynamic, 1, 0, 4, 1>;
/// Flux f(u): ncomp x 2 (the y column is zero for one-dimensional laws).
using Flux = Eigen::Matrix<Real, Eigen::Dynamic, 2, 0, 4, 2>;

enum class LawKind { Advection, Burgers, Euler, ShallowWater };

/// Hyperbolic conservation law. `dim` is the spatial dimension of the
/// problem (1 or 2); 1D problems run on line meshes embedded in the plane.
struct ConservationLaw
{
   LawKind kind = LawKind::Advection;
   int dim = 1;
   int ncomp = 1;

   Vec2 velocity = Vec2::Zero(); ///< advection only
   Real gamma = 1.4;             ///< Euler only
   Real gravity = 9.81;          ///< shallow water only

   Flux flux(const State &u) const;

   /// Upper bound for the fastest wave speed of the Riemann problem
   /// with states u, v in direction of unit-ish normal n.
   Real wave_speed(const State &u, const State &v, const Vec2 &n) const;

   /// Membership in the invariant set this law's limiter preserves:
   /// positive density / internal energy (Euler), positive depth (shallow
   /// water); trivially true for scalar laws whose bounds come from the
   /// limiter itself.
   bool in_invariant_set(const State &u) const;

   /// Mirror state of a reflecting (slip) wall with outward unit normal n.
   State reflect(const State &u, const Vec2 &n) const;

   /// Largest factor a in [0, 1] such that the state P + a * f stays in
   /// the invariant set (tested on the un-normalized products, which is
   /// sufficient because the set is a cone). Returns 1 for laws whose
   /// limiter bounds already imply admissibility.
   Real positivity_scale(const State &P, const State &f) const;

   bool scalar() const { return ncomp == 1; }
   int num_velocity() const { return kind == LawKind::Advection ||
                                    kind == LawKind::Burgers
                                 ? 0
                                 : dim; }

   Real pressure(const State &u) const; ///< Euler
   Real sound_speed(const State &u) const;
};

ConservationLaw make_advection(const Vec2 &velocity, int dim);
ConservationLaw make_burgers(int dim);
ConservationLaw make_euler(int dim, Real gamma = 1.4);
ConservationLaw make_shallow_water(Real gravity);

/// Conservative Euler state from primitive density, velocity, pressure.
State euler_state(Real rho, const Vec2 &v, Real p, int dim = 2,
                  Real gamma = 1.4);

} // namespace bdg
