#pragma once

#include "bdg/types.hpp"

namespace bdg
{

/// Quadrature rule on the interval [0,1].
struct Quadrature1D
{
   Vec x, w;
};

/// n-point Gauss-Legendre rule on [0,1], exact for polynomials of degree
/// 2n-1. Nodes come from the symmetric eigenproblem of the Jacobi matrix.
Quadrature1D gauss_legendre(int n);

/// Volume rule on the reference square [0,1]^2 (tensor product).
void tensor_rule(int n, Mat &pts, Vec &wts);

/// Volume rule on the reference triangle {x,y >= 0, x+y <= 1}, exact for
/// total degree at least `degree`. Built from a Duffy-type collapsed
/// tensor rule; the collapse Jacobian is polynomial, so exactness is
/// retained by raising the 1D order accordingly.
void triangle_rule(int degree, Mat &pts, Vec &wts);

} // namespace bdg
