#include "bdg/quadrature.hpp"

namespace bdg
{

Quadrature1D gauss_legendre(int n)
{
   if (n < 1) { throw std::invalid_argument("gauss_legendre: n >= 1 required"); }
   Mat J = Mat::Zero(n, n);
   for (int k = 1; k < n; ++k)
   {
      const Real b = k / std::sqrt(4.0 * k * k - 1.0);
      J(k, k - 1) = b;
      J(k - 1, k) = b;
   }
   Eigen::SelfAdjointEigenSolver<Mat> es(J);
   Quadrature1D q;
   q.x.resize(n);
   q.w.resize(n);
   for (int k = 0; k < n; ++k)
   {
      // map from [-1,1] to [0,1]
      q.x[k] = 0.5 * (es.eigenvalues()[k] + 1.0);
      const Real v0 = es.eigenvectors()(0, k);
      q.w[k] = v0 * v0; // 2*v0^2 on [-1,1], halved by the affine map
   }
   return q;
}

void tensor_rule(int n, Mat &pts, Vec &wts)
{
   const Quadrature1D q = gauss_legendre(n);
   pts.resize(2, n * n);
   wts.resize(n * n);
   for (int j = 0; j < n; ++j)
   {
      for (int i = 0; i < n; ++i)
      {
         const int k = j * n + i;
         pts(0, k) = q.x[i];
         pts(1, k) = q.x[j];
         wts[k] = q.w[i] * q.w[j];
      }
   }
}

void triangle_rule(int degree, Mat &pts, Vec &wts)
{
   // Duffy map (u,v) in [0,1]^2 -> (x,y) = (u(1-v), v) with Jacobian (1-v).
   // A polynomial of total degree q pulls back to degree <= q in u and
   // q+1 in v (including the Jacobian), so n points are exact whenever
   // 2n-1 >= degree+1.
   const int n = (degree + 2) / 2 + 1;
   const Quadrature1D q = gauss_legendre(n);
   pts.resize(2, n * n);
   wts.resize(n * n);
   for (int j = 0; j < n; ++j)
   {
      for (int i = 0; i < n; ++i)
      {
         const int k = j * n + i;
         const Real u = q.x[i], v = q.x[j];
         pts(0, k) = u * (1.0 - v);
         pts(1, k) = v;
         wts[k] = q.w[i] * q.w[j] * (1.0 - v);
      }
   }
}

} // namespace bdg
