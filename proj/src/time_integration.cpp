#include "bdg/time_integration.hpp"

namespace bdg
{

RhsFn make_rhs(const Discretization &disc, Scheme scheme)
{
   return [&disc, scheme](const StateField &f, Real t)
   {
      Mat r = disc.rhs(f, t, scheme);
      if (disc.mesh->uniform) { r /= disc.ops.at(0).mi; }
      else
      {
         for (int e = 0; e < f.E; ++e)
         {
            r.middleCols(e * f.m, f.m) /= disc.ops.at(e).mi;
         }
      }
      return r;
   };
}

namespace
{

StateField euler(const RhsFn &rhs, const StateField &f, Real t, Real dt,
                 int stage)
{
   StateField g = f;
   g.data += dt * rhs(f, t);
   if (!g.finite())
   {
      throw InvariantViolation("time step produced non-finite values in stage " +
                               std::to_string(stage));
   }
   return g;
}

} // namespace

StateField ssprk_step(const RhsFn &rhs, const StateField &f, Real t, Real dt,
                      RKMethod method)
{
   StateField u1 = euler(rhs, f, t, dt, 1);
   if (method == RKMethod::SSPRK1) { return u1; }
   StateField u2 = euler(rhs, u1, t + dt, dt, 2);
   if (method == RKMethod::SSPRK2)
   {
      u2.data = 0.5 * f.data + 0.5 * u2.data;
      return u2;
   }
   u2.data = 0.75 * f.data + 0.25 * u2.data;
   StateField u3 = euler(rhs, u2, t + 0.5 * dt, dt, 3);
   u3.data = (f.data + 2.0 * u3.data) / 3.0;
   return u3;
}

SteadyResult march_to_steady(const RhsFn &rhs, const StateField &f, Real dt,
                             Real tol, int max_steps, int consecutive)
{
   SteadyResult res;
   res.field = f;
   int streak = 0;
   Real initial = -1.0;
   for (int k = 0; k < max_steps; ++k)
   {
      const Mat delta = dt * rhs(res.field, 0.0);
      res.field.data += delta;
      if (!res.field.finite())
      {
         throw InvariantViolation("steady marching produced non-finite values");
      }
      const Real r = delta.cwiseAbs().maxCoeff();
      res.history.push_back(r);
      if (initial < 0.0) { initial = r; }
      if (r > 1e6 * std::max(initial, tol))
      {
         throw InvariantViolation("steady marching diverged");
      }
      streak = r < tol ? streak + 1 : 0;
      if (r == 0.0) { streak = consecutive; } // exactly steady already
      if (streak >= consecutive)
      {
         res.converged = true;
         break;
      }
   }
   return res;
}

} // namespace bdg
