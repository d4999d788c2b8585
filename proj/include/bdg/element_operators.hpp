#pragma once

#include "bdg/mesh.hpp"
#include "bdg/reference_element.hpp"

namespace bdg
{

/// Geometry-dependent element operators. On uniform meshes a single copy
/// is shared by all elements.
struct GeomOps
{
   std::array<Mat, 2> ctilde; ///< x/y components of the lumped-mass
                              ///  preconditioned gradient, N x N each
   Real mi = 0;               ///< lumped nodal mass |K| / N (equal at all nodes)
   Real vol = 0;              ///< element volume
   std::array<Real, 4> face_len{};
   std::array<Vec2, 4> normal{};  ///< outward unit normals
   std::array<Real, 4> w{};       ///< int_F phi_i ds per face node
};

struct ElementOps
{
   const Mesh *mesh = nullptr;
   RefElem ref;

   const GeomOps &at(int e) const { return geom[mesh->uniform ? 0 : e]; }

   Vec2 node_pos(int e, int i) const
   {
      return mesh->map_point(e, ref.nodes.col(i));
   }

   /// In-place consistent-mass solve B := M_e^{-1} B for an N x m block of
   /// nodal data on element e. Boxes use the Kronecker factorization of the
   /// reference mass; high orders add one step of iterative refinement.
   void mass_solve(int e, Mat &B) const;

   std::vector<GeomOps> geom;
};

ElementOps make_element_ops(const Mesh &mesh, int p);

} // namespace bdg
