#include "bdg/law.hpp"

#include <cmath>

namespace bdg
{

Flux ConservationLaw::flux(const State &u) const
{
   Flux f = Flux::Zero(ncomp, 2);
   switch (kind)
   {
      case LawKind::Advection:
         f(0, 0) = velocity[0] * u[0];
         f(0, 1) = velocity[1] * u[0];
         break;
      case LawKind::Burgers:
      {
         const Real h = 0.5 * u[0] * u[0];
         f(0, 0) = h;
         if (dim == 2) { f(0, 1) = h; }
         break;
      }
      case LawKind::Euler:
      {
         const Real rho = u[0], p = pressure(u), E = u[ncomp - 1];
         const Real vx = u[1] / rho, vy = dim == 2 ? u[2] / rho : 0.0;
         f(0, 0) = u[1];
         f(1, 0) = u[1] * vx + p;
         f(ncomp - 1, 0) = (E + p) * vx;
         if (dim == 2)
         {
            f(2, 0) = u[2] * vx;
            f(0, 1) = u[2];
            f(1, 1) = u[1] * vy;
            f(2, 1) = u[2] * vy + p;
            f(3, 1) = (E + p) * vy;
         }
         break;
      }
      case LawKind::ShallowWater:
      {
         const Real H = u[0], vx = u[1] / H, vy = u[2] / H;
         const Real pg = 0.5 * gravity * H * H;
         f(0, 0) = u[1];
         f(1, 0) = u[1] * vx + pg;
         f(2, 0) = u[2] * vx;
         f(0, 1) = u[2];
         f(1, 1) = u[1] * vy;
         f(2, 1) = u[2] * vy + pg;
         break;
      }
   }
   return f;
}

Real ConservationLaw::wave_speed(const State &u, const State &v,
                                 const Vec2 &n) const
{
   switch (kind)
   {
      case LawKind::Advection:
         return std::abs(velocity.dot(n));
      case LawKind::Burgers:
      {
         const Real nd = dim == 2 ? n[0] + n[1] : n[0];
         return std::max(std::abs(u[0]), std::abs(v[0])) * std::abs(nd);
      }
      case LawKind::Euler:
      {
         // Guaranteed bound on the Riemann fan: the two-rarefaction
         // pressure overestimates the exact p* for gamma <= 5/3, so the
         // resulting shock speeds bracket all waves (Guermond & Popov,
         // SIAM J. Sci. Comput. 2016). The plain two-point estimate
         // |v.n| + c fails at strong shocks.
         auto normal_vel = [&](const State &w)
         { return (dim == 2 ? Vec2(w[1], w[2]).dot(n) : w[1] * n[0]) / w[0]; };
         const Real vl = normal_vel(u), vr = normal_vel(v);
         const Real cl = sound_speed(u), cr = sound_speed(v);
         const Real pl = pressure(u), pr = pressure(v);
         const Real expo = (gamma - 1.0) / (2.0 * gamma);
         const Real num = cl + cr - 0.5 * (gamma - 1.0) * (vr - vl);
         Real pstar = 0.0;
         if (num > 0.0)
         {
            const Real den =
               cl / std::pow(pl, expo) + cr / std::pow(pr, expo);
            pstar = std::pow(num / den, 1.0 / expo);
         }
         auto head = [&](Real p0, Real c0)
         {
            return c0 * std::sqrt(1.0 + (gamma + 1.0) / (2.0 * gamma) *
                                           std::max(0.0, pstar / p0 - 1.0));
         };
         return std::max(std::abs(vl - head(pl, cl)),
                         std::abs(vr + head(pr, cr)));
      }
      default:
      {
         auto one_side = [&](const State &w)
         {
            const Vec2 vel = dim == 2 ? Vec2(w[1] / w[0], w[2] / w[0])
                                      : Vec2(w[1] / w[0], 0.0);
            return std::abs(vel.dot(n)) + sound_speed(w);
         };
         return std::max(one_side(u), one_side(v));
      }
   }
}

bool ConservationLaw::in_invariant_set(const State &u) const
{
   switch (kind)
   {
      case LawKind::Euler:
      {
         if (!(u[0] > 0.0)) { return false; }
         // rho * e = E - |rho v|^2 / (2 rho)
         const Real mom2 = dim == 2 ? u[1] * u[1] + u[2] * u[2] : u[1] * u[1];
         return u[ncomp - 1] - 0.5 * mom2 / u[0] > 0.0;
      }
      case LawKind::ShallowWater:
         return u[0] > 0.0;
      default:
         return u.allFinite();
   }
}

State ConservationLaw::reflect(const State &u, const Vec2 &n) const
{
   State w = u;
   if (kind == LawKind::Euler || kind == LawKind::ShallowWater)
   {
      if (dim == 2)
      {
         const Vec2 mom(u[1], u[2]);
         const Vec2 r = mom - 2.0 * mom.dot(n) * n;
         w[1] = r[0];
         w[2] = r[1];
      }
      else { w[1] = u[1] - 2.0 * u[1] * n[0] * n[0]; }
   }
   return w;
}

Real ConservationLaw::positivity_scale(const State &P, const State &f) const
{
   // Sequential limiting keeps the main variable within positive bounds,
   // which settles admissibility for every law except Euler, where the
   // internal energy product q(u) = rho E - |m|^2 / 2 of a limited bar
   // state can still turn negative. q(P + a f) is quadratic in a, so the
   // admissible range has a closed form.
   if (kind != LawKind::Euler) { return 1.0; }
   const int last = ncomp - 1;
   auto mdot = [&](const State &a, const State &b)
   { return dim == 2 ? a[1] * b[1] + a[2] * b[2] : a[1] * b[1]; };
   const Real C = P[0] * P[last] - 0.5 * mdot(P, P);
   if (!(C > 0.0) || !(P[0] > 0.0)) { return 0.0; }

   const Real margin = 1e-8; // retain a sliver of the low-order room
   Real alpha = 1.0;
   if (f[0] < 0.0) { alpha = std::min(alpha, -(1.0 - margin) * P[0] / f[0]); }

   const Real A = f[0] * f[last] - 0.5 * mdot(f, f);
   const Real B = P[0] * f[last] + f[0] * P[last] - mdot(P, f);
   const Real Cs = (1.0 - margin) * C; // roots of q(a) = margin * C
   Real root = std::numeric_limits<Real>::infinity();
   if (A == 0.0)
   {
      if (B < 0.0) { root = -Cs / B; }
   }
   else
   {
      const Real disc = B * B - 4.0 * A * Cs;
      if (disc >= 0.0)
      {
         const Real qq =
            -0.5 * (B + (B >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
         for (const Real r : {qq / A, qq != 0.0 ? Cs / qq : -1.0})
         {
            if (r > 0.0) { root = std::min(root, r); }
         }
      }
   }
   return std::max(std::min(alpha, root), 0.0);
}

Real ConservationLaw::pressure(const State &u) const
{
   const Real mom2 = dim == 2 ? u[1] * u[1] + u[2] * u[2] : u[1] * u[1];
   return (gamma - 1.0) * (u[ncomp - 1] - 0.5 * mom2 / u[0]);
}

Real ConservationLaw::sound_speed(const State &u) const
{
   if (kind == LawKind::Euler)
   {
      return std::sqrt(gamma * pressure(u) / u[0]);
   }
   if (kind == LawKind::ShallowWater) { return std::sqrt(gravity * u[0]); }
   return 0.0;
}

ConservationLaw make_advection(const Vec2 &velocity, int dim)
{
   ConservationLaw law;
   law.kind = LawKind::Advection;
   law.dim = dim;
   law.ncomp = 1;
   law.velocity = velocity;
   return law;
}

ConservationLaw make_burgers(int dim)
{
   ConservationLaw law;
   law.kind = LawKind::Burgers;
   law.dim = dim;
   law.ncomp = 1;
   return law;
}

ConservationLaw make_euler(int dim, Real gamma)
{
   ConservationLaw law;
   law.kind = LawKind::Euler;
   law.dim = dim;
   law.ncomp = dim == 2 ? 4 : 3;
   law.gamma = gamma;
   return law;
}

ConservationLaw make_shallow_water(Real gravity)
{
   ConservationLaw law;
   law.kind = LawKind::ShallowWater;
   law.dim = 2;
   law.ncomp = 3;
   law.gravity = gravity;
   return law;
}

State euler_state(Real rho, const Vec2 &v, Real p, int dim, Real gamma)
{
   State u(dim == 2 ? 4 : 3);
   u[0] = rho;
   u[1] = rho * v[0];
   if (dim == 2) { u[2] = rho * v[1]; }
   const Real v2 = dim == 2 ? v.squaredNorm() : v[0] * v[0];
   u[u.size() - 1] = p / (gamma - 1.0) + 0.5 * rho * v2;
   return u;
}

} // namespace bdg
