#pragma once

#include "bdg/quadrature.hpp"
#include "bdg/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace bdg
{

enum class ElemKind { Line, Tri, Quad };

inline int elem_dim(ElemKind k) { return k == ElemKind::Line ? 1 : 2; }
inline int elem_num_faces(ElemKind k)
{
   switch (k)
   {
      case ElemKind::Line: return 2;
      case ElemKind::Tri:  return 3;
      default:             return 4;
   }
}

/// 1D Bernstein polynomial b_i^p on [0,1].
Real bernstein_1d(int p, int i, Real x);

/// Derivative of b_i^p.
Real bernstein_1d_deriv(int p, int i, Real x);

/// Lexicographic numbering of the triangle multi-indices |alpha| = p
/// (alpha has d+1 = 3 components). Row i holds the multi-index of local
/// node i.
Eigen::MatrixXi simplex_multiindices(int p);

/// Inverse map; throws if alpha is not a valid multi-index of degree p.
int simplex_index(int p, const Eigen::Vector3i &alpha);

/// Closed-form tridiagonal (p+1)x(p+1) matrix (M_C^1D)^{-1} C^1D of the
/// 1D Bernstein basis. Evaluating this formula avoids inverting the
/// ill-conditioned Bernstein mass matrix.
Mat bernstein_grad_1d(int p);

struct FaceQuad
{
   Mat pts;   ///< 2 x nq reference coordinates
   Vec wts;   ///< sums to the reference face length
   Vec xi;    ///< 1D face parameter of each point, from the canonical start
   Mat trace; ///< nfn x nq, 1D Bernstein values of the face nodes at pts
};

/// Degree-p Bernstein element on the reference line/triangle/square:
/// node layout, subcell stencils, face node lists, quadrature and basis
/// tables, element matrices that are geometry-independent.
struct RefElem
{
   ElemKind kind;
   int dim = 0, p = 0, N = 0;
   int nf = 0;  ///< number of faces
   int nfn = 0; ///< nodes per face (1 in 1D, p+1 in 2D)
   Real ref_vol = 0;

   Mat nodes; ///< 2 x N reference coordinates (y = 0 in 1D)

   std::vector<std::vector<int>> stencil;    ///< nearest neighbors incl. i
   std::vector<std::pair<int, int>> pairs;   ///< stencil pairs with i < j
   std::vector<std::vector<int>> face_nodes; ///< canonical (CCW) order
   Eigen::MatrixXi i2alpha;                  ///< triangle only

   // volume quadrature (weights include the reference measure) and basis
   // tables at the quadrature points
   Mat qp;
   Vec qw;
   Mat phi;                 ///< N x nq
   std::array<Mat, 2> dphi; ///< reference gradients, N x nq each

   std::vector<FaceQuad> fq; ///< empty in 1D (faces are points)
   std::array<Real, 4> ref_face_len{};
   std::array<Vec2, 4> ref_face_normal{};

   // consistent mass on the reference element and its factorization;
   // boxes additionally carry the 1D factor for Kronecker solves
   Mat mass, mass1d;
   Eigen::LLT<Mat> mass_llt, mass1d_llt;

   // preconditioned gradient building blocks:
   // box:  ctilde_k = sum_l adj(J)_{lk} / (p+1)^d * axis_grad[l]
   // tri:  ctilde_k = (|K|/N) * sum_l gradbary_phys(l, k) * bary_grad[l]
   std::array<Mat, 2> axis_grad;
   std::array<Mat, 3> bary_grad;

   // continuous piecewise-(multi)linear matrices on the Bezier subcells
   // (reference scale); subcell_mc is partially lumped on box elements
   Mat subcell_mc;
   Vec subcell_ml;
   Mat subcell_poisson_inv; ///< inverse of (ML - MC) with last row of ones

   // subcell connectivity for output (each row lists the node ids of one
   // subcell; triangles use 3 ids, boxes 4 in CCW order, lines 2)
   Eigen::MatrixXi subcells;
};

RefElem make_ref_elem(ElemKind kind, int p);

/// Value of local basis function i at a reference point.
Real bernstein_eval(const RefElem &re, int i, const Vec2 &pt);

/// Reference gradient of local basis function i.
Vec2 bernstein_eval_grad(const RefElem &re, int i, const Vec2 &pt);

} // namespace bdg
