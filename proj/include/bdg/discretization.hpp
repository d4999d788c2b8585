#pragma once

#include "bdg/element_operators.hpp"
#include "bdg/law.hpp"
#include "bdg/mesh.hpp"

#include <functional>
#include <map>
#include <vector>

namespace bdg
{

enum class Scheme { DG, LO, MCL };

/// Weak boundary treatment: the exterior ("ghost") state fed into the
/// Riemann flux. Inflow evaluates a data function, Outflow copies the
/// interior state, Wall mirrors the normal velocity.
struct BoundaryRule
{
   enum class Type { Inflow, Outflow, Wall };
   Type type = Type::Outflow;
   std::function<State(const Vec2 &, Real)> data; ///< Inflow only
};

/// Per-element Bernstein coefficients of all conserved components,
/// stored as one N x (E*m) block matrix.
struct StateField
{
   int N = 0, m = 0, E = 0;
   Mat data;

   auto elem(int e) { return data.middleCols(e * m, m); }
   auto elem(int e) const { return data.middleCols(e * m, m); }
   bool finite() const { return data.allFinite(); }
};

/// Everything both sides of a mesh face agree on, indexed by the slot s
/// of the e0 side (the e1 side sees slot nfn-1-s, flipped signs on the
/// flux integrals, and identical d, P). P is the denominator-free product
/// 2 d ubar of the interfacial bar state.
struct FaceData
{
   Mat faceH;  ///< m x nfn, int_F phi_i H(U_h, U_hat; n) ds (e0 view)
   Mat nodalH; ///< m x nfn, w H(u_i, u_hat_i; n) (e0 view)
   Mat P;      ///< m x nfn, 2 d_{i,k} ubar_{i,k}
   Vec lambda; ///< nodal wave speeds
   Vec d;      ///< d_{i,k} = lambda w / 2
   Mat uhat0;  ///< m x nfn, exterior nodal state seen from e0
   Mat uhat1;  ///< m x nfn, exterior nodal state seen from e1 (slot order
               ///  of e1); boundary faces leave this empty
};

class Discretization
{
public:
   Discretization(const Mesh &mesh, const ConservationLaw &law, int p,
                  std::map<int, BoundaryRule> bcs = {});

   StateField make_field() const;
   void sample_nodal(StateField &f,
                     const std::function<State(const Vec2 &)> &u0) const;

   /// Shared per-face quantities of the current stage snapshot.
   std::vector<FaceData> face_stage(const StateField &f, Real t) const;

   /// Weak residual of the target scheme: int F(U_h) grad phi_i dx minus
   /// the Lax-Friedrichs face integrals (mass matrix not yet inverted).
   Mat target_weak_residual(const StateField &f, Real t) const;
   Mat target_weak_residual(const StateField &f,
                            const std::vector<FaceData> &faces) const;

   /// udot per element: consistent-mass solve of the weak residual.
   Mat nodal_time_derivatives(const StateField &f, Real t) const;
   Mat nodal_time_derivatives(const StateField &f,
                              const std::vector<FaceData> &faces) const;

   /// m_i du_i/dt of the low order scheme.
   Mat low_order_rhs(const StateField &f, Real t) const;

   /// Largest forward Euler step for which every nodal update is a convex
   /// combination of the old value and bar states; +inf if no dissipation.
   Real max_idp_timestep(const StateField &f, Real t) const;

   /// Unified interface: m_i du_i/dt for the chosen scheme.
   Mat rhs(const StateField &f, Real t, Scheme scheme) const;

   /// Per-pair dissipation coefficients within one element:
   /// 2 d_ij for each entry of ref.pairs.
   Vec pair_dissipation(const StateField &f, int e) const;

   /// Accumulates the volumetric low-order terms and, when requested,
   /// the pairwise products 2d, P_ij = 2d ubar_ij, P_ji for every stencil
   /// pair of element e (used by the limiter).
   void low_volume_terms(const StateField &f, int e, Mat &lowvol, Vec *twod,
                         Mat *Pij, Mat *Pji) const;

   const Mesh *mesh = nullptr;
   ConservationLaw law;
   ElementOps ops;
   std::map<int, BoundaryRule> bcs;

   /// Global ids gluing co-located (and periodic) nodes.
   Eigen::MatrixXi gid; ///< N x E
   int num_global = 0;

private:
   State ghost_state(const BoundaryRule &bc, const State &u, const Vec2 &n,
                     const Vec2 &x, Real t) const;
   void face_low_terms(const StateField &f,
                       const std::vector<FaceData> &faces, Mat &acc) const;
};

} // namespace bdg
