#include "bdg/benchmarks.hpp"

#include <cmath>

namespace bdg
{

namespace
{

State scalar_state(Real v)
{
   State u(1);
   u << v;
   return u;
}

// --- 1D advection ---------------------------------------------------------

Real advect_mixed_profile(Real x)
{
   if (x >= 0.2 && x <= 0.4) { return 1.0; }
   if (x > 0.5 && x < 0.9)
   {
      return std::exp(10.0) * std::exp(1.0 / (0.5 - x)) *
             std::exp(1.0 / (x - 0.9));
   }
   return 0.0;
}

Real wrap(Real x, Real lo, Real hi)
{
   const Real len = hi - lo;
   return x - len * std::floor((x - lo) / len);
}

// --- 1D Burgers -----------------------------------------------------------

// Pre-shock classical solution of u_t + (u^2/2)_x = 0 with u0 = sin(2 pi x):
// the implicit equation u = sin(2 pi (x - u t)) has a unique root for
// t < 1/(2 pi) because d/du [u - sin(2 pi (x - u t))] = 1 + 2 pi t cos >=
// 1 - 2 pi t > 0.
Real burgers1d_solution(Real x, Real t)
{
   constexpr Real two_pi = 2.0 * M_PI;
   if (t * two_pi >= 1.0)
   {
      throw ConfigError("burgers1d exact solution requested after the shock "
                        "formation time 1/(2 pi)");
   }
   Real u = std::sin(two_pi * x);
   for (int it = 0; it < 100; ++it)
   {
      const Real arg = two_pi * (x - u * t);
      const Real du = (u - std::sin(arg)) / (1.0 + two_pi * t * std::cos(arg));
      u -= du;
      if (std::abs(du) < 1e-15) { break; }
   }
   return u;
}

// --- 2D Burgers -----------------------------------------------------------

// Exact solution of the four-quadrant Riemann problem (burgers2D initial
// data) for t <= 0.5: two straight shocks bounding the -1 wedge, a planar
// rarefaction fan on the right, and a parabolic shock segment where the fan
// meets the -1 state. All region interfaces are continuous at the sector
// boundaries and reduce to the initial data as t -> 0.
Real burgers2d_solution(Real x, Real y, Real t)
{
   if (t < 1e-14)
   {
      if (x < 0.5) { return y > 0.5 ? -0.2 : 0.5; }
      return y > 0.5 ? -1.0 : 0.8;
   }
   if (x < 0.5 - 0.6 * t) { return y > 0.5 + 0.15 * t ? -0.2 : 0.5; }
   if (x < 0.5 - 0.25 * t)
   {
      return y > -8.0 * x / 7.0 + 15.0 / 14.0 - 15.0 * t / 28.0 ? -1.0 : 0.5;
   }
   if (x < 0.5 + 0.5 * t)
   {
      return y > x / 6.0 + 5.0 / 12.0 - 5.0 * t / 24.0 ? -1.0 : 0.5;
   }
   if (x < 0.5 + 0.8 * t)
   {
      const Real s = x + t - 0.5;
      if (y > x - 5.0 / (18.0 * t) * s * s) { return -1.0; }
      return (2.0 * x - 1.0) / (2.0 * t);
   }
   return y > 0.5 - 0.1 * t ? -1.0 : 0.8;
}

// --- Euler / shallow water states -----------------------------------------

State sod_state(Real x)
{
   State u(3);
   if (x < 0.5) { u << 1.0, 0.0, 2.5; }
   else { u << 0.125, 0.0, 0.25; }
   return u;
}

State double_mach_state(const Vec2 &x, Real t)
{
   State u(4);
   if (x.x() < 1.0 / 6.0 + (x.y() + 20.0 * t) / std::sqrt(3.0))
   {
      u << 8.0, 66.0 * std::cos(M_PI / 6.0), -66.0 * std::sin(M_PI / 6.0),
         563.5;
   }
   else { u << 1.4, 0.0, 0.0, 2.5; }
   return u;
}

State dam_break_state(const Vec2 &x)
{
   State u(3);
   u << (x.norm() <= 0.5 ? 1.0 : 0.1), 0.0, 0.0;
   return u;
}

State channel_state()
{
   State u(3);
   u << 1.0, 1.0, 0.0;
   return u;
}

// --- preset registry ------------------------------------------------------

std::vector<BenchmarkPreset> build_presets()
{
   std::vector<BenchmarkPreset> v;

   {
      BenchmarkPreset b;
      b.name = "advect1d_mixed";
      b.law = make_advection(Vec2(1, 0), 1);
      b.dt = 1e-3;
      b.t_final = 1.0;
      b.default_p = 2;
      b.default_resolution = 64; // #DOF = 192 at the default p
      b.initial = [](const Vec2 &x)
      { return scalar_state(advect_mixed_profile(x.x())); };
      b.exact = [](const Vec2 &x, Real t)
      { return scalar_state(advect_mixed_profile(wrap(x.x() - t, 0, 1))); };
      b.make_mesh = [](int res) { return build_line_mesh(0, 1, res, true); };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "advect1d_smooth";
      b.smooth = true;
      b.law = make_advection(Vec2(1, 0), 1);
      b.dt = 1e-4;
      b.t_final = 2.0;
      b.default_resolution = 24;
      b.table_resolutions = {24, 32, 48, 64, 96, 128, 192};
      b.initial = [](const Vec2 &x)
      { return scalar_state(std::exp(-25.0 * x.x() * x.x())); };
      b.exact = [](const Vec2 &x, Real t)
      {
         const Real xs = wrap(x.x() - t, -1, 1);
         return scalar_state(std::exp(-25.0 * xs * xs));
      };
      b.make_mesh = [](int res)
      { return build_line_mesh(-1, 1, 2 * res, true); };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "burgers1d";
      b.smooth = true;
      b.law = make_burgers(1);
      b.dt = 4e-4;
      b.t_final = 0.1;
      b.default_resolution = 48;
      b.table_resolutions = {48, 64, 96, 128, 192, 256, 384};
      b.initial = [](const Vec2 &x)
      { return scalar_state(std::sin(2.0 * M_PI * x.x())); };
      b.exact = [](const Vec2 &x, Real t)
      { return scalar_state(burgers1d_solution(x.x(), t)); };
      b.make_mesh = [](int res) { return build_line_mesh(0, 1, res, true); };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "burgers2d";
      b.law = make_burgers(2);
      b.dt = 1e-3;
      b.t_final = 0.5;
      b.default_resolution = 64; // #DOF = 128^2 at p = 1
      b.initial = [](const Vec2 &x)
      { return scalar_state(burgers2d_solution(x.x(), x.y(), 0)); };
      b.exact = [](const Vec2 &x, Real t)
      { return scalar_state(burgers2d_solution(x.x(), x.y(), t)); };
      b.bcs[TagInflow] = {BoundaryRule::Type::Inflow,
                          [](const Vec2 &x, Real t)
                          {
                             return scalar_state(
                                burgers2d_solution(x.x(), x.y(), t));
                          }};
      b.make_mesh = [](int res)
      {
         QuadBoundary bc;
         bc.bottom = bc.right = bc.top = bc.left = TagInflow;
         return build_quad_mesh(Vec2(0, 0), Vec2(1, 1), res, res, bc);
      };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "sod";
      b.law = make_euler(1);
      b.dt = 4e-4;
      b.t_final = 0.231;
      b.default_resolution = 128; // #DOF = 256 at p = 1
      b.initial = [](const Vec2 &x) { return sod_state(x.x()); };
      b.bcs[TagWall] = {BoundaryRule::Type::Wall, nullptr};
      b.make_mesh = [](int res)
      { return build_line_mesh(0, 1, res, false, TagWall, TagWall); };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "double_mach";
      b.law = make_euler(2);
      b.dt = 5e-5;
      b.t_final = 0.2;
      b.default_resolution = 48; // 4 * 48^2 elements
      b.initial = [](const Vec2 &x) { return double_mach_state(x, 0); };
      b.bcs[TagInflow] = {BoundaryRule::Type::Inflow, double_mach_state};
      b.bcs[TagOutflow] = {BoundaryRule::Type::Outflow, nullptr};
      b.bcs[TagWall] = {BoundaryRule::Type::Wall, nullptr};
      b.make_mesh = [](int res)
      {
         QuadBoundary bc;
         bc.retag = [](const Vec2 &x)
         {
            if (x.y() < 1e-12)
            {
               return x.x() < 1.0 / 6.0 ? TagInflow : TagWall;
            }
            return x.x() > 4.0 - 1e-12 ? TagOutflow : TagInflow;
         };
         return build_quad_mesh(Vec2(0, 0), Vec2(4, 1), 4 * res, res, bc);
      };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "dam_break";
      b.law = make_shallow_water(9.81);
      b.dt = 1e-4;
      b.t_final = 0.06;
      b.default_resolution = 64; // #DOF = 256^2 at p = 1
      b.initial = dam_break_state;
      b.bcs[TagOutflow] = {BoundaryRule::Type::Outflow, nullptr};
      b.make_mesh = [](int res)
      {
         QuadBoundary bc;
         bc.bottom = bc.right = bc.top = bc.left = TagOutflow;
         return build_quad_mesh(Vec2(-1, -1), Vec2(1, 1), 2 * res, 2 * res,
                                bc);
      };
      v.push_back(std::move(b));
   }
   {
      BenchmarkPreset b;
      b.name = "channel";
      b.law = make_shallow_water(0.16);
      b.steady = true;
      b.dt = 0.025;
      b.steady_tol = 1e-12;
      b.default_resolution = 30; // 2 * 90 * 30 = 5400 triangles
      b.initial = [](const Vec2 &) { return channel_state(); };
      b.bcs[TagInflow] = {BoundaryRule::Type::Inflow,
                          [](const Vec2 &, Real) { return channel_state(); }};
      b.bcs[TagOutflow] = {BoundaryRule::Type::Outflow, nullptr};
      b.bcs[TagWall] = {BoundaryRule::Type::Wall, nullptr};
      b.make_mesh = [](int res)
      {
         // 90 m long channel: straight for x < 0, then walls constricted
         // symmetrically at 5 degrees; meshed by deforming a structured
         // triangulation of the bounding box
         const Real slope = std::tan(M_PI / 36.0);
         QuadBoundary bc;
         bc.left = TagInflow;
         bc.right = TagOutflow;
         bc.bottom = bc.top = TagWall;
         auto map = [slope](const Vec2 &x)
         {
            const Real lo = slope * std::max(x.x(), 0.0);
            return Vec2(x.x(),
                        lo + x.y() / 40.0 * (40.0 - 2.0 * lo));
         };
         return build_structured_tri_mesh(Vec2(-10, 0), Vec2(80, 40),
                                          3 * res, res, bc, map);
      };
      v.push_back(std::move(b));
   }
   return v;
}

const std::vector<BenchmarkPreset> &presets()
{
   static const std::vector<BenchmarkPreset> v = build_presets();
   return v;
}

} // namespace

const BenchmarkPreset &get_preset(const std::string &name)
{
   for (const BenchmarkPreset &b : presets())
   {
      if (b.name == name) { return b; }
   }
   throw ConfigError("unknown benchmark preset: " + name);
}

std::vector<std::string> preset_names()
{
   std::vector<std::string> names;
   for (const BenchmarkPreset &b : presets()) { names.push_back(b.name); }
   return names;
}

namespace
{

// Volume rule on the reference element, exact at least for degree
// 2p + extra polynomials.
void volume_rule(const RefElem &re, int extra, Mat &pts, Vec &wts)
{
   switch (re.kind)
   {
      case ElemKind::Line:
      {
         const Quadrature1D q = gauss_legendre(re.p + 1 + (extra + 1) / 2);
         pts = Mat::Zero(2, q.x.size());
         pts.row(0) = q.x.transpose();
         wts = q.w;
         break;
      }
      case ElemKind::Quad:
         tensor_rule(re.p + 1 + (extra + 1) / 2, pts, wts);
         break;
      case ElemKind::Tri:
         triangle_rule(2 * re.p + extra, pts, wts);
         break;
   }
}

} // namespace

StateField project_initial(const BenchmarkPreset &preset,
                           const Discretization &disc)
{
   StateField f = disc.make_field();
   if (!preset.smooth)
   {
      disc.sample_nodal(f, preset.initial);
      return f;
   }

   // consistent-mass L2 projection
   const RefElem &re = disc.ops.ref;
   Mat pts;
   Vec wts;
   volume_rule(re, 8, pts, wts);
   const int nq = int(wts.size());
   Mat phi(re.N, nq);
   for (int i = 0; i < re.N; ++i)
   {
      for (int q = 0; q < nq; ++q)
      {
         phi(i, q) = bernstein_eval(re, i, pts.col(q));
      }
   }
   #pragma omp parallel for
   for (int e = 0; e < f.E; ++e)
   {
      Mat rhs = Mat::Zero(re.N, f.m);
      for (int q = 0; q < nq; ++q)
      {
         const State u0 = preset.initial(disc.mesh->map_point(e, pts.col(q)));
         rhs += wts(q) * disc.mesh->detJ(e) * phi.col(q) * u0.transpose();
      }
      disc.ops.mass_solve(e, rhs);
      f.elem(e) = rhs;
   }
   return f;
}

Vec l1_error(const Discretization &disc, const StateField &f,
             const std::function<State(const Vec2 &, Real)> &exact, Real t)
{
   if (!exact) { throw ConfigError("no exact solution available"); }
   const Mesh &mesh = *disc.mesh;
   const RefElem &re = disc.ops.ref;

   Mat pts;
   Vec wts;
   volume_rule(re, 2, pts, wts);
   const int nq = int(wts.size());
   Mat phi(re.N, nq);
   for (int i = 0; i < re.N; ++i)
   {
      for (int q = 0; q < nq; ++q)
      {
         phi(i, q) = bernstein_eval(re, i, pts.col(q));
      }
   }

   Vec err = Vec::Zero(f.m);
   Real volume = 0.0;
   #pragma omp parallel
   {
      Vec local = Vec::Zero(f.m);
      Real vloc = 0.0;
      #pragma omp for nowait
      for (int e = 0; e < f.E; ++e)
      {
         const Mat uq = f.elem(e).transpose() * phi; // m x nq
         for (int q = 0; q < nq; ++q)
         {
            const State ue = exact(mesh.map_point(e, pts.col(q)), t);
            local += wts(q) * mesh.detJ(e) *
                     (uq.col(q) - ue).cwiseAbs();
            vloc += wts(q) * mesh.detJ(e);
         }
      }
      #pragma omp critical
      {
         err += local;
         volume += vloc;
      }
   }
   return err / volume;
}

std::vector<Real> eoc(const std::vector<Real> &errors,
                      const std::vector<int> &inv_h)
{
   if (errors.size() != inv_h.size() || errors.size() < 2)
   {
      throw ConfigError("eoc needs matching error/resolution sequences of "
                        "length >= 2");
   }
   std::vector<Real> rates;
   for (size_t k = 0; k + 1 < errors.size(); ++k)
   {
      if (errors[k] <= 0 || errors[k + 1] <= 0)
      {
         rates.push_back(std::numeric_limits<Real>::quiet_NaN());
         continue;
      }
      rates.push_back(std::log(errors[k] / errors[k + 1]) /
                      std::log(Real(inv_h[k + 1]) / Real(inv_h[k])));
   }
   return rates;
}

BenchmarkRun setup_run(const BenchmarkPreset &preset, int p, int resolution,
                       Real dt)
{
   BenchmarkRun run;
   run.mesh = std::make_unique<Mesh>(preset.make_mesh(resolution));
   run.disc = std::make_unique<Discretization>(*run.mesh, preset.law, p,
                                               preset.bcs);
   run.field = project_initial(preset, *run.disc);
   const Real bound = run.disc->max_idp_timestep(run.field, 0.0);
   if (dt > bound)
   {
      throw ConfigError("time step " + std::to_string(dt) +
                        " exceeds the IDP bound " + std::to_string(bound) +
                        " of preset " + preset.name);
   }
   return run;
}

void advance(BenchmarkRun &run, const BenchmarkPreset &preset, Scheme scheme,
             Real dt, Real t_final, const StepObserver &observer)
{
   const RhsFn rhs = make_rhs(*run.disc, scheme);
   if (preset.steady)
   {
      SteadyResult res =
         march_to_steady(rhs, run.field, dt, preset.steady_tol, 200000);
      run.field = std::move(res.field);
      run.history = std::move(res.history);
      run.converged = res.converged;
      if (observer) { observer(run, int(run.history.size())); }
      return;
   }
   int step = 0;
   while (run.t < t_final - 1e-12)
   {
      const Real h = std::min(dt, t_final - run.t);
      run.field = ssprk_step(rhs, run.field, run.t, h, RKMethod::SSPRK3);
      run.t += h;
      ++step;
      if (observer) { observer(run, step); }
   }
}

BenchmarkRun run_benchmark(const BenchmarkPreset &preset, Scheme scheme,
                           int p, int resolution, Real dt_override,
                           Real t_final_override, const StepObserver &observer)
{
   const Real dt = dt_override > 0 ? dt_override : preset.dt;
   const Real tf = t_final_override > 0 ? t_final_override : preset.t_final;
   BenchmarkRun run = setup_run(preset, p, resolution, dt);
   advance(run, preset, scheme, dt, tf, observer);
   return run;
}

} // namespace bdg
