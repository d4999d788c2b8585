#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdg/reference_element.hpp"

#include <cmath>
#include <random>

using namespace bdg;

namespace
{

// dense, quadrature-based construction of ML * MC^{-1} * C_k, independent
// of the closed forms used by make_ref_elem
Mat dense_ctilde(const RefElem &re, int k)
{
   const int nq = int(re.qw.size());
   Mat mc = Mat::Zero(re.N, re.N), c = Mat::Zero(re.N, re.N);
   for (int q = 0; q < nq; ++q)
   {
      mc += re.qw[q] * re.phi.col(q) * re.phi.col(q).transpose();
      c += re.qw[q] * re.phi.col(q) * re.dphi[k].col(q).transpose();
   }
   const Vec ml = mc.rowwise().sum();
   return ml.asDiagonal() * mc.fullPivLu().solve(c);
}

} // namespace

TEST_CASE("1D Bernstein basis values")
{
   CHECK(bernstein_1d(3, 0, 0.25) == doctest::Approx(0.421875));
   CHECK(bernstein_1d(3, 1, 0.25) == doctest::Approx(0.421875));
   CHECK(bernstein_1d(3, 2, 0.25) == doctest::Approx(0.140625));
   CHECK(bernstein_1d(3, 3, 0.25) == doctest::Approx(0.015625));
   for (int p = 1; p <= 8; ++p)
   {
      for (Real x : { 0.0, 0.13, 0.5, 0.97, 1.0 })
      {
         Real s = 0, ds = 0, xs = 0;
         for (int i = 0; i <= p; ++i)
         {
            s += bernstein_1d(p, i, x);
            ds += bernstein_1d_deriv(p, i, x);
            xs += Real(i) / p * bernstein_1d(p, i, x);
         }
         CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
         CHECK(ds == doctest::Approx(0.0).epsilon(1e-12));
         CHECK(xs == doctest::Approx(x).epsilon(1e-13)); // linear precision
      }
   }
}

TEST_CASE("preconditioned 1D gradient closed form")
{
   const Mat t1 = bernstein_grad_1d(1);
   CHECK(t1(0, 0) == -1);
   CHECK(t1(0, 1) == 1);
   CHECK(t1(1, 0) == -1);
   CHECK(t1(1, 1) == 1);

   const Mat t2 = bernstein_grad_1d(2);
   Mat ref(3, 3);
   ref << -2, 2, 0, -1, 0, 1, 0, -2, 2;
   CHECK((t2 - ref).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

   // against the dense quadrature oracle, scaled by the lumped mass 1/(p+1)
   for (int p = 1; p <= 6; ++p)
   {
      const RefElem re = make_ref_elem(ElemKind::Line, p);
      const Mat oracle = dense_ctilde(re, 0);
      const Mat closed = bernstein_grad_1d(p) / (p + 1);
      CHECK((oracle - closed).cwiseAbs().maxCoeff() ==
            doctest::Approx(0.0).epsilon(0.0 + 1e-11));
   }
}

TEST_CASE("triangle multi-index numbering")
{
   const Eigen::MatrixXi t2 = simplex_multiindices(2);
   REQUIRE(t2.rows() == 6);
   CHECK(t2.row(0) == Eigen::RowVector3i(2, 0, 0));
   CHECK(t2.row(1) == Eigen::RowVector3i(1, 1, 0));
   CHECK(t2.row(2) == Eigen::RowVector3i(0, 2, 0));
   CHECK(t2.row(3) == Eigen::RowVector3i(1, 0, 1));
   CHECK(t2.row(4) == Eigen::RowVector3i(0, 1, 1));
   CHECK(t2.row(5) == Eigen::RowVector3i(0, 0, 2));
   for (int p = 1; p <= 7; ++p)
   {
      const Eigen::MatrixXi t = simplex_multiindices(p);
      REQUIRE(t.rows() == (p + 1) * (p + 2) / 2);
      for (int i = 0; i < t.rows(); ++i)
      {
         CHECK(t.row(i).sum() == p);
         CHECK(t.row(i).minCoeff() >= 0);
         CHECK(simplex_index(p, t.row(i)) == i);
      }
   }
   CHECK_THROWS_AS(simplex_index(2, Eigen::Vector3i(2, 1, 0)),
                   std::invalid_argument);
}

TEST_CASE("preconditioned gradient matches the dense oracle")
{
   for (ElemKind kind : { ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 4; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         for (int k = 0; k < 2; ++k)
         {
            Mat closed;
            if (kind == ElemKind::Quad)
            {
               // identity Jacobian on the reference square
               closed = re.axis_grad[k] / ((p + 1) * (p + 1));
            }
            else
            {
               // grad of the barycentric coordinates of the unit triangle
               const Vec2 gb[3] = { Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1) };
               closed = Mat::Zero(re.N, re.N);
               for (int l = 0; l < 3; ++l)
               {
                  closed += re.ref_vol / re.N * gb[l][k] * re.bary_grad[l];
               }
            }
            const Mat oracle = dense_ctilde(re, k);
            CHECK((oracle - closed).cwiseAbs().maxCoeff() ==
                  doctest::Approx(0.0).epsilon(1e-10));
         }
      }
   }
}

TEST_CASE("gradient sparsity matches the stencil")
{
   for (ElemKind kind : { ElemKind::Quad, ElemKind::Tri })
   {
      const RefElem re = make_ref_elem(kind, 3);
      for (int k = 0; k < 2; ++k)
      {
         const Mat c = kind == ElemKind::Quad
                          ? Mat(re.axis_grad[k])
                          : Mat(re.bary_grad[0] + re.bary_grad[1] +
                                re.bary_grad[2]);
         for (int i = 0; i < re.N; ++i)
            for (int j = 0; j < re.N; ++j)
            {
               const auto &st = re.stencil[i];
               const bool in =
                  std::find(st.begin(), st.end(), j) != st.end();
               if (!in) { CHECK(c(i, j) == 0.0); }
            }
      }
   }
}

TEST_CASE("zero row and column sums of the gradient")
{
   // rows: partition of unity against the derivative; cols: constants are
   // differentiated exactly to zero
   for (ElemKind kind : { ElemKind::Line, ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 4; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         for (int k = 0; k < re.dim; ++k)
         {
            // physical x/y gradients on the reference element
            const Mat c = kind == ElemKind::Tri
                             ? Mat(re.bary_grad[k + 1] - re.bary_grad[0])
                             : re.axis_grad[k];
            CHECK(c.rowwise().sum().cwiseAbs().maxCoeff() ==
                  doctest::Approx(0.0).epsilon(1e-12));
         }
      }
   }
}

TEST_CASE("mass matrices")
{
   for (ElemKind kind : { ElemKind::Line, ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 4; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         CHECK((re.mass - re.mass.transpose()).cwiseAbs().maxCoeff() ==
               doctest::Approx(0.0).epsilon(1e-15));
         CHECK(re.mass.sum() == doctest::Approx(re.ref_vol).epsilon(1e-14));
         // equal lumped masses ref_vol / N at every node
         const Vec ml = re.mass.rowwise().sum();
         for (int i = 0; i < re.N; ++i)
         {
            CHECK(ml[i] == doctest::Approx(re.ref_vol / re.N).epsilon(1e-13));
         }
         CHECK(re.mass_llt.info() == Eigen::Success);
      }
   }
}

TEST_CASE("face node lists and traces")
{
   const RefElem q2 = make_ref_elem(ElemKind::Quad, 2);
   CHECK(q2.face_nodes[0] == std::vector<int>{ 0, 1, 2 });
   CHECK(q2.face_nodes[1] == std::vector<int>{ 2, 5, 8 });
   CHECK(q2.face_nodes[2] == std::vector<int>{ 8, 7, 6 });
   CHECK(q2.face_nodes[3] == std::vector<int>{ 6, 3, 0 });

   const RefElem t2 = make_ref_elem(ElemKind::Tri, 2);
   CHECK(t2.face_nodes[0] == std::vector<int>{ 0, 1, 2 });
   CHECK(t2.face_nodes[1] == std::vector<int>{ 2, 4, 5 });
   CHECK(t2.face_nodes[2] == std::vector<int>{ 5, 3, 0 });

   for (ElemKind kind : { ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 4; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         for (int k = 0; k < re.nf; ++k)
         {
            const FaceQuad &f = re.fq[k];
            CHECK(f.wts.sum() ==
                  doctest::Approx(re.ref_face_len[k]).epsilon(1e-14));
            // the restriction of the volume basis to a face equals the 1D
            // Bernstein basis in the face nodes, and other functions vanish
            for (int q = 0; q < f.wts.size(); ++q)
            {
               Real onface = 0;
               for (int s = 0; s < re.nfn; ++s)
               {
                  const int i = re.face_nodes[k][s];
                  const Real vol = bernstein_eval(re, i, f.pts.col(q));
                  CHECK(vol == doctest::Approx(f.trace(s, q)).epsilon(1e-13));
                  onface += vol;
               }
               CHECK(onface == doctest::Approx(1.0).epsilon(1e-13));
            }
            // int_F phi_i ds = |F| / (p+1) for every face node
            for (int s = 0; s < re.nfn; ++s)
            {
               const Real w = f.wts.dot(f.trace.row(s).transpose());
               CHECK(w == doctest::Approx(re.ref_face_len[k] / (p + 1))
                             .epsilon(1e-13));
            }
         }
      }
   }
}

TEST_CASE("face normals are outward and unit")
{
   for (ElemKind kind : { ElemKind::Line, ElemKind::Quad, ElemKind::Tri })
   {
      const RefElem re = make_ref_elem(kind, 2);
      const Vec2 centroid = kind == ElemKind::Tri
                               ? Vec2(1.0 / 3, 1.0 / 3)
                               : Vec2(0.5, kind == ElemKind::Line ? 0.0 : 0.5);
      for (int k = 0; k < re.nf; ++k)
      {
         const Vec2 n = re.ref_face_normal[k];
         CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
         const Vec2 fc = re.dim == 1
                            ? Vec2(re.nodes(0, re.face_nodes[k][0]), 0.0)
                            : Vec2(re.fq[k].pts.rowwise().mean());
         CHECK(n.dot(fc - centroid) > 0.0);
      }
   }
}

TEST_CASE("subcell matrices")
{
   for (ElemKind kind : { ElemKind::Line, ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 4; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         CHECK((re.subcell_mc - re.subcell_mc.transpose())
                  .cwiseAbs()
                  .maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
         CHECK(re.subcell_ml.sum() == doctest::Approx(re.ref_vol).epsilon(1e-14));
         CHECK(re.subcell_ml.minCoeff() > 0.0);
         // off-diagonal entries only within the stencil
         for (int i = 0; i < re.N; ++i)
            for (int j = 0; j < re.N; ++j)
            {
               const auto &st = re.stencil[i];
               if (std::find(st.begin(), st.end(), j) == st.end())
               {
                  CHECK(re.subcell_mc(i, j) == 0.0);
               }
            }
         // the stored inverse actually inverts (ML - MC) with the last row
         // replaced by ones
         Mat a = Mat(re.subcell_ml.asDiagonal()) - re.subcell_mc;
         a.row(re.N - 1).setOnes();
         CHECK((a * re.subcell_poisson_inv - Mat::Identity(re.N, re.N))
                  .cwiseAbs()
                  .maxCoeff() == doctest::Approx(0.0).epsilon(1e-10));
         // connectivity covers all nodes
         std::vector<bool> seen(re.N, false);
         for (int s = 0; s < re.subcells.rows(); ++s)
            for (int c = 0; c < re.subcells.cols(); ++c)
            {
               REQUIRE(re.subcells(s, c) >= 0);
               REQUIRE(re.subcells(s, c) < re.N);
               seen[re.subcells(s, c)] = true;
            }
         for (int i = 0; i < re.N; ++i) { CHECK(seen[i]); }
      }
   }
}

TEST_CASE("basis evaluation and partition of unity in 2D")
{
   std::mt19937 rng(7);
   std::uniform_real_distribution<Real> unif(0.0, 1.0);
   for (ElemKind kind : { ElemKind::Quad, ElemKind::Tri })
   {
      for (int p = 1; p <= 5; ++p)
      {
         const RefElem re = make_ref_elem(kind, p);
         for (int trial = 0; trial < 20; ++trial)
         {
            Vec2 x(unif(rng), unif(rng));
            if (kind == ElemKind::Tri && x[0] + x[1] > 1.0)
            {
               x = Vec2(1.0 - x[0], 1.0 - x[1]);
            }
            Real s = 0;
            Vec2 g = Vec2::Zero(), xi = Vec2::Zero();
            for (int i = 0; i < re.N; ++i)
            {
               const Real v = bernstein_eval(re, i, x);
               CHECK(v >= -1e-15);
               s += v;
               g += bernstein_eval_grad(re, i, x);
               xi += v * re.nodes.col(i);
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(g.norm() == doctest::Approx(0.0).epsilon(1e-11));
            CHECK((xi - x).norm() == doctest::Approx(0.0).epsilon(1e-12));
         }
      }
   }
}
