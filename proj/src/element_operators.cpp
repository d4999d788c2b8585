#include "bdg/element_operators.hpp"

namespace bdg
{

namespace
{

GeomOps build_geom(const Mesh &m, const RefElem &re, int e)
{
   GeomOps g;
   const Mat2 &J = m.J[e];
   const Mat2 &adj = m.adjJ[e];
   g.vol = m.detJ[e] * re.ref_vol;
   g.mi = g.vol / re.N;

   if (re.kind == ElemKind::Tri)
   {
      // gradients of the physical barycentric coordinates: J^{-T} times
      // the reference ones
      const Mat2 JinvT = adj.transpose() / m.detJ[e];
      const Vec2 gref[3] = { Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1) };
      for (int k = 0; k < 2; ++k)
      {
         g.ctilde[k] = Mat::Zero(re.N, re.N);
         for (int l = 0; l < 3; ++l)
         {
            const Vec2 gphys = JinvT * gref[l];
            g.ctilde[k] += g.vol / re.N * gphys[k] * re.bary_grad[l];
         }
      }
   }
   else
   {
      const Real scale = std::pow(Real(re.p + 1), re.dim);
      for (int k = 0; k < 2; ++k)
      {
         g.ctilde[k] = adj(0, k) / scale * re.axis_grad[0];
         if (re.dim == 2) { g.ctilde[k] += adj(1, k) / scale * re.axis_grad[1]; }
      }
   }

   for (int f = 0; f < re.nf; ++f)
   {
      if (re.dim == 1)
      {
         g.normal[f] = re.ref_face_normal[f];
         g.face_len[f] = 1.0;
         g.w[f] = 1.0;
      }
      else
      {
         const Vec2 an = adj.transpose() * re.ref_face_normal[f];
         g.normal[f] = an.normalized();
         g.face_len[f] = an.norm() * re.ref_face_len[f];
         g.w[f] = g.face_len[f] / (re.p + 1);
      }
   }
   return g;
}

} // namespace

ElementOps make_element_ops(const Mesh &mesh, int p)
{
   ElementOps ops;
   ops.mesh = &mesh;
   ops.ref = make_ref_elem(mesh.kind, p);
   const int n = mesh.uniform ? 1 : mesh.num_elements();
   ops.geom.reserve(n);
   for (int e = 0; e < n; ++e)
   {
      ops.geom.push_back(build_geom(mesh, ops.ref, e));
   }
   return ops;
}

void ElementOps::mass_solve(int e, Mat &B) const
{
   const Real det = mesh->detJ[e];
   auto ref_solve = [&](Mat &X)
   {
      if (ref.kind == ElemKind::Quad)
      {
         const int n1 = ref.p + 1;
         for (int c = 0; c < X.cols(); ++c)
         {
            Eigen::Map<Mat> U(X.col(c).data(), n1, n1);
            const Mat t = ref.mass1d_llt.solve(U);
            U = ref.mass1d_llt.solve(t.transpose()).transpose();
         }
      }
      else { X = ref.mass_llt.solve(X); }
   };
   Mat X = B / det;
   ref_solve(X);
   if (ref.p > 8)
   {
      // iterative refinement for the badly conditioned high-order
      // Bernstein mass matrix
      for (int it = 0; it < 3; ++it)
      {
         Mat R = B / det - ref.mass * X;
         ref_solve(R);
         X += R;
      }
   }
   B = X;
}

} // namespace bdg
