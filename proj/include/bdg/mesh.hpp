#pragma once

#include "bdg/reference_element.hpp"
#include "bdg/types.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace bdg
{

/// Mesh face. Interior faces connect two elements; e1 < 0 marks a boundary
/// face carrying a boundary tag. On the e0 side the face runs in the
/// canonical (counter-clockwise) direction of local face f0; on the e1 side
/// the same nodes appear in reversed slot order. Periodic faces behave like
/// interior faces whose two sides are separated by the translation `offset`
/// (position on the e1 side minus position on the e0 side).
struct Face
{
   int e0 = -1, e1 = -1;
   int f0 = -1, f1 = -1;
   int tag = -1;            ///< boundary tag, unused on interior faces
   bool periodic = false;
   Vec2 offset = Vec2::Zero();
};

struct Mesh
{
   ElemKind kind = ElemKind::Line;
   int dim = 1;
   int nve = 2; ///< vertices per element

   Mat vertices;         ///< 2 x nv (y = 0 in 1D)
   Eigen::MatrixXi elems; ///< nve x ne, counter-clockwise vertex order

   std::vector<Face> faces;
   Eigen::MatrixXi face_of; ///< ne x nf, global face id of each local face

   // affine element geometry
   std::vector<Mat2> J, adjJ; ///< Jacobian and its adjugate
   Vec detJ;
   bool uniform = false; ///< all elements share the same Jacobian

   int num_elements() const { return int(elems.cols()); }

   Vec2 elem_vertex(int e, int v) const
   {
      return vertices.col(elems(v, e));
   }

   /// Physical position of a reference point inside element e.
   Vec2 map_point(int e, const Vec2 &ref) const
   {
      return elem_vertex(e, 0) + J[e] * ref;
   }
};

/// Equidistant line mesh of (x0, x1) with n elements. The 1D mesh lives in
/// the x >= 0 half of the plane with unit extent in y.
Mesh build_line_mesh(Real x0, Real x1, int n, bool periodic, int tag_left = 0,
                     int tag_right = 0);

/// Boundary description of a structured quadrilateral mesh. `retag`
/// (optional) overrides the per-side tag based on the face midpoint.
struct QuadBoundary
{
   int bottom = 0, right = 0, top = 0, left = 0;
   bool periodic_x = false, periodic_y = false;
   std::function<int(const Vec2 &)> retag;
};

Mesh build_quad_mesh(const Vec2 &lo, const Vec2 &hi, int nx, int ny,
                     const QuadBoundary &bc = {});

/// Triangle mesh from explicit arrays. `boundary` lists (v0, v1, tag)
/// segments; every unmatched edge must be covered by exactly one segment.
Mesh build_tri_mesh(const Mat &vertices, const Eigen::MatrixXi &tris,
                    const std::vector<std::array<int, 3>> &boundary);

/// Structured triangle mesh of a box: nx x ny cells, each split into two
/// triangles with the diagonal mirrored across the horizontal centerline
/// (ny must be even). Sides are tagged like QuadBoundary. An optional
/// vertex map deforms the box; triangles stay affine.
Mesh build_structured_tri_mesh(const Vec2 &lo, const Vec2 &hi, int nx, int ny,
                               const QuadBoundary &bc = {},
                               const std::function<Vec2(const Vec2 &)> &map = {});

/// Plain-text triangle mesh: header "NV NE NB", then NV lines "x y",
/// NE lines "v0 v1 v2", NB lines "v0 v1 tag". '#' starts a comment.
Mesh read_tri_mesh(std::istream &in);

} // namespace bdg
