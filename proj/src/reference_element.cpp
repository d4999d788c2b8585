#include "bdg/reference_element.hpp"

#include <cmath>

namespace bdg
{

namespace
{

Real binomial(int n, int k)
{
   Real r = 1.0;
   for (int j = 1; j <= k; ++j) { r *= Real(n - k + j) / Real(j); }
   return r;
}

} // namespace

Real bernstein_1d(int p, int i, Real x)
{
   if (i < 0 || i > p) { throw std::out_of_range("bernstein_1d: index"); }
   return binomial(p, i) * std::pow(1.0 - x, p - i) * std::pow(x, i);
}

Real bernstein_1d_deriv(int p, int i, Real x)
{
   Real d = 0.0;
   if (i > 0) { d += p * bernstein_1d(p - 1, i - 1, x); }
   if (i < p) { d -= p * bernstein_1d(p - 1, i, x); }
   return d;
}

Eigen::MatrixXi simplex_multiindices(int p)
{
   const int N = (p + 1) * (p + 2) / 2;
   Eigen::MatrixXi table(N, 3);
   Eigen::Vector3i a(p, 0, 0);
   int ctr = 0;
   for (int j = 0; j <= p; ++j)
   {
      for (int i = 0; i <= p - j; ++i)
      {
         table.row(ctr++) = a;
         a[0] -= 1;
         a[1] += 1;
      }
      a[0] = p - 1 - j;
      a[1] = 0;
      a[2] += 1;
   }
   return table;
}

int simplex_index(int p, const Eigen::Vector3i &alpha)
{
   if (alpha.minCoeff() < 0 || alpha.sum() != p)
   {
      throw std::invalid_argument("simplex_index: invalid multi-index");
   }
   const int a2 = alpha[1], a3 = alpha[2];
   return (p + 1) * a3 - a3 * (a3 - 1) / 2 + a2;
}

Mat bernstein_grad_1d(int p)
{
   Mat T = Mat::Zero(p + 1, p + 1);
   for (int J = 0; J <= p; ++J)
   {
      T(J, J) = 2 * J - p;
      if (J >= 1) { T(J - 1, J) = p + 1 - J; }
      if (J + 1 <= p) { T(J + 1, J) = -(J + 1); }
   }
   return T;
}

namespace
{

Real tri_basis(int p, const Eigen::Vector3i &a, const Vec2 &x)
{
   const Real b1 = 1.0 - x[0] - x[1], b2 = x[0], b3 = x[1];
   Real mult = 1.0; // multinomial p! / (a1! a2! a3!)
   {
      Real num = 1.0;
      int c = 0;
      for (int comp = 1; comp < 3; ++comp)
      {
         for (int j = 1; j <= a[comp]; ++j) { num *= Real(++c + a[0]) / Real(j); }
      }
      mult = num;
   }
   return mult * std::pow(b1, a[0]) * std::pow(b2, a[1]) * std::pow(b3, a[2]);
}

Vec2 tri_basis_grad(int p, const Eigen::Vector3i &a, const Vec2 &x)
{
   // d/dx = -d/da1 + d/da2, d/dy = -d/da1 + d/da3 on b = C * a1^.. a2^.. a3^..
   auto lowered = [&](int comp) -> Real
   {
      if (a[comp] == 0) { return 0.0; }
      Eigen::Vector3i b = a;
      b[comp] -= 1;
      return p * tri_basis(p - 1, b, x);
   };
   const Real d1 = lowered(0), d2 = lowered(1), d3 = lowered(2);
   return Vec2(d2 - d1, d3 - d1);
}

void build_box_subcell(RefElem &re)
{
   const int p = re.p, d = re.dim;
   const int n1 = p + 1;
   const int nsub = d == 1 ? p : p * p;
   re.subcell_mc = Mat::Zero(re.N, re.N);
   re.subcells.resize(nsub, d == 1 ? 2 : 4);
   const Real h = 1.0 / p;
   if (d == 1)
   {
      for (int s = 0; s < p; ++s)
      {
         const int v[2] = { s, s + 1 };
         re.subcells(s, 0) = v[0];
         re.subcells(s, 1) = v[1];
         const Real loc[2][2] = { { 2, 1 }, { 1, 2 } };
         for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
            {
               re.subcell_mc(v[a], v[b]) += h / 6.0 * loc[a][b];
            }
      }
   }
   else
   {
      // bilinear mass on one subcell, corner order (00,10,01,11)
      const Real loc[4][4] = { { 4, 2, 2, 1 },
                               { 2, 4, 1, 2 },
                               { 2, 1, 4, 2 },
                               { 1, 2, 2, 4 } };
      int s = 0;
      for (int j = 0; j < p; ++j)
      {
         for (int i = 0; i < p; ++i, ++s)
         {
            const int v[4] = { j * n1 + i, j * n1 + i + 1,
                               (j + 1) * n1 + i, (j + 1) * n1 + i + 1 };
            re.subcells(s, 0) = v[0];
            re.subcells(s, 1) = v[1];
            re.subcells(s, 2) = v[3];
            re.subcells(s, 3) = v[2];
            for (int a = 0; a < 4; ++a)
               for (int b = 0; b < 4; ++b)
               {
                  re.subcell_mc(v[a], v[b]) += h * h / 36.0 * loc[a][b];
               }
         }
      }
      // partial lumping: diagonal-neighbor entries move to the diagonal so
      // that subcell fluxes vanish wherever d_ij = 0
      for (int i = 0; i < re.N; ++i)
      {
         const int ix = i % n1, iy = i / n1;
         for (int j = 0; j < re.N; ++j)
         {
            const int jx = j % n1, jy = j / n1;
            if (std::abs(ix - jx) == 1 && std::abs(iy - jy) == 1)
            {
               re.subcell_mc(i, i) += re.subcell_mc(i, j);
               re.subcell_mc(i, j) = 0.0;
            }
         }
      }
   }
}

void build_tri_subcell(RefElem &re)
{
   const int p = re.p;
   re.subcell_mc = Mat::Zero(re.N, re.N);
   const int nsub = p * p;
   re.subcells.resize(nsub, 3);
   auto id = [&](int a, int b) // a = alpha_2 (x), b = alpha_3 (y)
   {
      return simplex_index(p, Eigen::Vector3i(p - a - b, a, b));
   };
   const Real area = 0.5 / Real(p * p);
   int s = 0;
   auto add = [&](int v0, int v1, int v2)
   {
      re.subcells(s, 0) = v0;
      re.subcells(s, 1) = v1;
      re.subcells(s, 2) = v2;
      ++s;
      const int v[3] = { v0, v1, v2 };
      for (int a = 0; a < 3; ++a)
         for (int b = 0; b < 3; ++b)
         {
            re.subcell_mc(v[a], v[b]) += area / 12.0 * (a == b ? 2.0 : 1.0);
         }
   };
   for (int b = 0; b < p; ++b)
   {
      for (int a = 0; a + b < p; ++a)
      {
         add(id(a, b), id(a + 1, b), id(a, b + 1));
         if (a + b < p - 1)
         {
            add(id(a + 1, b), id(a + 1, b + 1), id(a, b + 1));
         }
      }
   }
}

Mat kron(const Mat &A, const Mat &B)
{
   Mat K(A.rows() * B.rows(), A.cols() * B.cols());
   for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
      {
         K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
      }
   return K;
}

} // namespace

RefElem make_ref_elem(ElemKind kind, int p)
{
   if (p < 1) { throw std::invalid_argument("make_ref_elem: p >= 1 required"); }
   RefElem re;
   re.kind = kind;
   re.dim = elem_dim(kind);
   re.p = p;
   re.nf = elem_num_faces(kind);
   re.nfn = re.dim == 1 ? 1 : p + 1;
   const int n1 = p + 1;

   // nodes, stencils, face node lists
   if (kind == ElemKind::Line)
   {
      re.N = n1;
      re.ref_vol = 1.0;
      re.nodes = Mat::Zero(2, re.N);
      for (int i = 0; i <= p; ++i) { re.nodes(0, i) = Real(i) / p; }
      re.stencil.resize(re.N);
      for (int i = 0; i <= p; ++i)
      {
         if (i > 0) { re.stencil[i].push_back(i - 1); }
         re.stencil[i].push_back(i);
         if (i < p) { re.stencil[i].push_back(i + 1); }
      }
      re.face_nodes = { { 0 }, { p } };
      re.ref_face_normal[0] = Vec2(-1, 0);
      re.ref_face_normal[1] = Vec2(1, 0);
      re.ref_face_len[0] = re.ref_face_len[1] = 1.0;
   }
   else if (kind == ElemKind::Quad)
   {
      re.N = n1 * n1;
      re.ref_vol = 1.0;
      re.nodes = Mat::Zero(2, re.N);
      re.stencil.resize(re.N);
      for (int j = 0; j <= p; ++j)
         for (int i = 0; i <= p; ++i)
         {
            const int k = j * n1 + i;
            re.nodes(0, k) = Real(i) / p;
            re.nodes(1, k) = Real(j) / p;
            // Cartesian cross
            if (j > 0) { re.stencil[k].push_back(k - n1); }
            if (i > 0) { re.stencil[k].push_back(k - 1); }
            re.stencil[k].push_back(k);
            if (i < p) { re.stencil[k].push_back(k + 1); }
            if (j < p) { re.stencil[k].push_back(k + n1); }
         }
      re.face_nodes.resize(4);
      for (int i = 0; i <= p; ++i)
      {
         re.face_nodes[0].push_back(i);                  // bottom, +x
         re.face_nodes[1].push_back(i * n1 + p);         // right, +y
         re.face_nodes[2].push_back(p * n1 + (p - i));   // top, -x
         re.face_nodes[3].push_back((p - i) * n1);       // left, -y
      }
      re.ref_face_normal = { Vec2(0, -1), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0) };
      re.ref_face_len = { 1, 1, 1, 1 };
   }
   else // Tri
   {
      re.N = n1 * (p + 2) / 2;
      re.ref_vol = 0.5;
      re.i2alpha = simplex_multiindices(p);
      re.nodes = Mat::Zero(2, re.N);
      re.stencil.resize(re.N);
      for (int i = 0; i < re.N; ++i)
      {
         re.nodes(0, i) = Real(re.i2alpha(i, 1)) / p;
         re.nodes(1, i) = Real(re.i2alpha(i, 2)) / p;
      }
      for (int i = 0; i < re.N; ++i)
      {
         std::vector<int> nb;
         for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
            {
               if (k == l) { continue; }
               Eigen::Vector3i b = re.i2alpha.row(i);
               b[k] -= 1;
               b[l] += 1;
               if (b[k] < 0 || b[l] > p) { continue; }
               nb.push_back(simplex_index(p, b));
            }
         nb.push_back(i);
         std::sort(nb.begin(), nb.end());
         nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
         re.stencil[i] = nb;
      }
      re.face_nodes.resize(3);
      for (int s = 0; s <= p; ++s)
      {
         re.face_nodes[0].push_back(
            simplex_index(p, { p - s, s, 0 }));     // v0 -> v1
         re.face_nodes[1].push_back(
            simplex_index(p, { 0, p - s, s }));     // v1 -> v2
         re.face_nodes[2].push_back(
            simplex_index(p, { s, 0, p - s }));     // v2 -> v0
      }
      const Real s2 = std::sqrt(2.0);
      re.ref_face_normal = { Vec2(0, -1), Vec2(1 / s2, 1 / s2), Vec2(-1, 0),
                             Vec2(0, 0) };
      re.ref_face_len = { 1, s2, 1, 0 };
   }

   for (int i = 0; i < re.N; ++i)
      for (int j : re.stencil[i])
      {
         if (j > i) { re.pairs.emplace_back(i, j); }
      }

   // volume quadrature and basis tables
   if (kind == ElemKind::Tri) { triangle_rule(2 * p + 2, re.qp, re.qw); }
   else if (kind == ElemKind::Quad) { tensor_rule(p + 2, re.qp, re.qw); }
   else
   {
      const Quadrature1D q = gauss_legendre(p + 2);
      re.qp = Mat::Zero(2, q.x.size());
      re.qp.row(0) = q.x.transpose();
      re.qw = q.w;
   }
   const int nq = int(re.qw.size());
   re.phi.resize(re.N, nq);
   re.dphi[0].resize(re.N, nq);
   re.dphi[1].resize(re.N, nq);
   for (int i = 0; i < re.N; ++i)
      for (int q = 0; q < nq; ++q)
      {
         const Vec2 x = re.qp.col(q);
         re.phi(i, q) = bernstein_eval(re, i, x);
         const Vec2 g = bernstein_eval_grad(re, i, x);
         re.dphi[0](i, q) = g[0];
         re.dphi[1](i, q) = g[1];
      }

   // face quadrature (2D only; 1D face terms are point evaluations)
   if (re.dim == 2)
   {
      const Quadrature1D q = gauss_legendre(p + 1);
      const int nqf = int(q.x.size());
      re.fq.resize(re.nf);
      Vec2 v0, v1;
      for (int k = 0; k < re.nf; ++k)
      {
         if (kind == ElemKind::Quad)
         {
            const Vec2 corners[4] = { { 0, 0 }, { 1, 0 }, { 1, 1 }, { 0, 1 } };
            v0 = corners[k];
            v1 = corners[(k + 1) % 4];
         }
         else
         {
            const Vec2 corners[3] = { { 0, 0 }, { 1, 0 }, { 0, 1 } };
            v0 = corners[k];
            v1 = corners[(k + 1) % 3];
         }
         FaceQuad &f = re.fq[k];
         f.pts.resize(2, nqf);
         f.wts.resize(nqf);
         f.xi = q.x;
         f.trace.resize(re.nfn, nqf);
         for (int qq = 0; qq < nqf; ++qq)
         {
            const Real xi = q.x[qq];
            f.pts.col(qq) = (1.0 - xi) * v0 + xi * v1;
            f.wts[qq] = q.w[qq] * re.ref_face_len[k];
            for (int s = 0; s < re.nfn; ++s)
            {
               f.trace(s, qq) = bernstein_1d(p, s, xi);
            }
         }
      }
   }

   // consistent mass
   if (kind == ElemKind::Quad)
   {
      const Quadrature1D q = gauss_legendre(p + 2);
      re.mass1d = Mat::Zero(n1, n1);
      for (int i = 0; i <= p; ++i)
         for (int j = 0; j <= p; ++j)
            for (int k = 0; k < q.x.size(); ++k)
            {
               re.mass1d(i, j) +=
                  q.w[k] * bernstein_1d(p, i, q.x[k]) * bernstein_1d(p, j, q.x[k]);
            }
      re.mass = kron(re.mass1d, re.mass1d);
      re.mass1d_llt.compute(re.mass1d);
   }
   else
   {
      re.mass = Mat::Zero(re.N, re.N);
      for (int q = 0; q < nq; ++q)
      {
         re.mass += re.qw[q] * re.phi.col(q) * re.phi.col(q).transpose();
      }
      if (kind == ElemKind::Line)
      {
         re.mass1d = re.mass;
         re.mass1d_llt.compute(re.mass1d);
      }
   }
   re.mass_llt.compute(re.mass);

   // preconditioned gradient building blocks
   const Mat T = bernstein_grad_1d(p);
   const Mat I = Mat::Identity(n1, n1);
   if (kind == ElemKind::Line) { re.axis_grad[0] = T; }
   else if (kind == ElemKind::Quad)
   {
      re.axis_grad[0] = kron(I, T);
      re.axis_grad[1] = kron(T, I);
   }
   else
   {
      for (int k = 0; k < 3; ++k) { re.bary_grad[k] = Mat::Zero(re.N, re.N); }
      for (int j = 0; j < re.N; ++j)
      {
         const Eigen::Vector3i alpha = re.i2alpha.row(j);
         for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
            {
               Eigen::Vector3i beta = alpha;
               beta[k] -= 1;
               beta[l] += 1;
               if (beta[l] > p || beta[k] < 0) { continue; }
               const int i = simplex_index(p, beta);
               re.bary_grad[k](i, j) += alpha[l] - (l == k ? 1 : 0) + 1;
            }
      }
   }

   // subcell matrices and the stored Poisson-type inverse
   if (kind == ElemKind::Tri) { build_tri_subcell(re); }
   else { build_box_subcell(re); }
   re.subcell_ml = re.subcell_mc.rowwise().sum();
   Mat A = Mat(re.subcell_ml.asDiagonal()) - re.subcell_mc;
   A.row(re.N - 1).setOnes(); // fixes the arbitrary additive constant
   re.subcell_poisson_inv = Eigen::PartialPivLU<Mat>(A).inverse();
   if ((A * re.subcell_poisson_inv - Mat::Identity(re.N, re.N))
          .cwiseAbs()
          .maxCoeff() > 1e-8)
   {
      throw std::runtime_error("subcell Poisson matrix is singular");
   }

   return re;
}

Real bernstein_eval(const RefElem &re, int i, const Vec2 &pt)
{
   if (i < 0 || i >= re.N) { throw std::out_of_range("bernstein_eval: index"); }
   switch (re.kind)
   {
      case ElemKind::Line:
         return bernstein_1d(re.p, i, pt[0]);
      case ElemKind::Quad:
         return bernstein_1d(re.p, i % (re.p + 1), pt[0]) *
                bernstein_1d(re.p, i / (re.p + 1), pt[1]);
      default:
         return tri_basis(re.p, re.i2alpha.row(i), pt);
   }
}

Vec2 bernstein_eval_grad(const RefElem &re, int i, const Vec2 &pt)
{
   switch (re.kind)
   {
      case ElemKind::Line:
         return Vec2(bernstein_1d_deriv(re.p, i, pt[0]), 0.0);
      case ElemKind::Quad:
      {
         const int ix = i % (re.p + 1), iy = i / (re.p + 1);
         return Vec2(bernstein_1d_deriv(re.p, ix, pt[0]) *
                        bernstein_1d(re.p, iy, pt[1]),
                     bernstein_1d(re.p, ix, pt[0]) *
                        bernstein_1d_deriv(re.p, iy, pt[1]));
      }
      default:
         return tri_basis_grad(re.p, re.i2alpha.row(i), pt);
   }
}

} // namespace bdg
