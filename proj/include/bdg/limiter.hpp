#pragma once

#include "bdg/discretization.hpp"

namespace bdg
{

/// Monolithic clip of a volumetric antidiffusive flux against nodal box
/// bounds, written in terms of the stored products Pij = 2 d ubar_ij and
/// Pji = 2 d ubar_ji. Negative headroom is clamped to zero, which is
/// exactly the bound extension used for the main variable of a system.
Real clip_pair(Real f, Real twod, Real Pij, Real Pji, Real ui_min,
               Real ui_max, Real uj_min, Real uj_max);

/// Same for an interfacial flux with its single shared product P = 2 d ubar.
/// The symmetric form makes the clip odd in f, so glued bounds keep the
/// limited fluxes of the two sides exact negatives of each other.
Real clip_face(Real f, Real twod, Real P, Real u_min, Real u_max);

/// Clip of the product-rule remainder g for a volumetric pair. a_ij and
/// a_ji are the limited main-variable products 2 d rhobar*_ij, 2 d
/// rhobar*_ji (nonnegative); dhi/dlo are the clamped distances of the
/// derived bar state phibar to the upper/lower specific bounds.
Real clip_seq_pair(Real g, Real a_ij, Real a_ji, Real dhi_i, Real dlo_i,
                   Real dhi_j, Real dlo_j);

/// Face counterpart: a0 and a1 are the limited main-variable products of
/// the two sides of the face (a1 = a0 on boundary faces), dhi/dlo the
/// distances to the per-face specific bounds shared by both sides.
Real clip_seq_face(Real g, Real a0, Real a1, Real dhi, Real dlo);

/// Raw antidiffusive fluxes of one element against the low-order scheme.
struct RawFluxes
{
   Mat fi;                 ///< N x m volumetric fluxes, sum_i fi = 0
   std::vector<Mat> fface; ///< per local face, m x nfn in own slot order
};

RawFluxes raw_fluxes(const Discretization &disc, const StateField &f,
                     const std::vector<FaceData> &faces, const Mat &udot,
                     const Mat &lowvol, int e);

/// Splits the volumetric fluxes f_i of one element into antisymmetric
/// pair fluxes f_ij = m_ij (v_i - v_j) + d_ij (u_i - u_j), one column per
/// entry of ref.pairs, via the stored subcell Poisson inverse.
/// Throws if sum_i f_i is not (numerically) zero.
Mat decompose_fluxes(const Discretization &disc, const StateField &f, int e,
                     const Mat &fi, const Vec &twod);

/// Glued nodal bounds used by the limiter. Columns of lo/hi follow the
/// conserved components for scalar laws and hold only the main variable
/// for systems; phi_lo/phi_hi hold the specific ratios (empty for
/// scalars), and face_phi_* the per-face bounds of the interfacial
/// derived bar states.
struct MclBounds
{
   Vec lo, hi;         ///< num_global
   Mat phi_lo, phi_hi; ///< num_global x (m-1)
   Mat face_phi_lo, face_phi_hi; ///< (m-1) x num_faces
};

/// m_i du_i/dt of the monolithically limited scheme.
Mat mcl_rhs(const Discretization &disc, const StateField &f, Real t);

} // namespace bdg
