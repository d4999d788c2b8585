#include "bdg/verify.hpp"

#include "bdg/benchmarks.hpp"
#include "bdg/limiter.hpp"

#include <random>
#include <sstream>

namespace bdg
{

namespace
{

/// Check accumulator: counts checks, records the first failure site.
struct Checker
{
   SuiteResult r;

   explicit Checker(const std::string &name) { r.name = name; }

   void check(bool ok, const std::string &what)
   {
      ++r.checks;
      if (!ok)
      {
         if (r.failures == 0) { r.detail = what; }
         ++r.failures;
      }
   }

   void check_close(Real a, Real b, Real tol, const std::string &what)
   {
      std::ostringstream os;
      os << what << " (" << a << " vs " << b << ")";
      check(std::abs(a - b) <= tol, os.str());
   }
};

State scalar_state(Real v)
{
   State u(1);
   u << v;
   return u;
}

Mesh make_kind_mesh(ElemKind kind)
{
   switch (kind)
   {
      case ElemKind::Line:
         return build_line_mesh(0.2, 1.7, 3, false);
      case ElemKind::Quad:
         return build_quad_mesh(Vec2(0, 0), Vec2(1.5, 0.9), 2, 2, {});
      default:
         // map the structured triangulation so elements are genuinely
         // non-axis-aligned
         return build_structured_tri_mesh(
            Vec2(0, 0), Vec2(1, 1), 2, 2, {},
            [](const Vec2 &x)
            { return Vec2(x.x() + 0.15 * x.y(), x.y() + 0.1 * x.x()); });
   }
}

/// Dense assembly of the preconditioned gradient on element e:
/// ctilde_k = M_L (M_C)^{-1} C_k with physical-gradient convective
/// matrices (C_k)_{ij} = int_K phi_i d_k phi_j dx.
std::array<Mat, 2> dense_ctilde(const Discretization &disc, int e)
{
   const RefElem &re = disc.ops.ref;
   const Mesh &mesh = *disc.mesh;
   const int nq = int(re.qw.size());
   const Mat2 gradmap = mesh.adjJ[e].transpose() / mesh.detJ(e);

   Mat mc = Mat::Zero(re.N, re.N);
   std::array<Mat, 2> c{Mat::Zero(re.N, re.N), Mat::Zero(re.N, re.N)};
   for (int q = 0; q < nq; ++q)
   {
      const Real w = re.qw(q) * mesh.detJ(e);
      mc += w * re.phi.col(q) * re.phi.col(q).transpose();
      for (int j = 0; j < re.N; ++j)
      {
         const Vec2 g =
            gradmap * Vec2(re.dphi[0](j, q), re.dphi[1](j, q));
         for (int k = 0; k < elem_dim(re.kind); ++k)
         {
            c[size_t(k)].col(j) += w * g(k) * re.phi.col(q);
         }
      }
   }
   const Real ml = disc.ops.at(e).vol / re.N;
   std::array<Mat, 2> ct;
   const Eigen::PartialPivLU<Mat> lu(mc);
   for (int k = 0; k < 2; ++k)
   {
      ct[size_t(k)] = k < elem_dim(re.kind)
                         ? Mat(ml * lu.solve(c[size_t(k)]))
                         : Mat::Zero(re.N, re.N);
   }
   return ct;
}

struct LawSetup
{
   ConservationLaw law;
   Mesh mesh;
   std::map<int, BoundaryRule> bcs;
   std::function<State(std::mt19937 &)> random_state;
};

std::vector<LawSetup> law_setups()
{
   auto uniform = [](std::mt19937 &rng, Real a, Real b)
   {
      return std::uniform_real_distribution<Real>(a, b)(rng);
   };
   std::vector<LawSetup> v;
   v.push_back({make_advection(Vec2(1.0, 0.0), 1),
                build_line_mesh(0, 1, 6, true),
                {},
                [uniform](std::mt19937 &rng)
                { return scalar_state(uniform(rng, -1, 1)); }});
   v.push_back({make_burgers(2),
                build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 3, 3,
                                {0, 0, 0, 0, true, true}),
                {},
                [uniform](std::mt19937 &rng)
                { return scalar_state(uniform(rng, -1, 1)); }});
   v.push_back({make_euler(2),
                build_structured_tri_mesh(Vec2(0, 0), Vec2(1, 1), 2, 2,
                                          {TagOutflow, TagOutflow,
                                           TagOutflow, TagOutflow}),
                {{TagOutflow, {BoundaryRule::Type::Outflow, nullptr}}},
                [uniform](std::mt19937 &rng)
                {
                   return euler_state(
                      uniform(rng, 0.5, 2.0),
                      Vec2(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                      uniform(rng, 0.5, 2.0));
                }});
   v.push_back({make_shallow_water(9.81),
                build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 3, 3,
                                {TagWall, TagWall, TagWall, TagWall}),
                {{TagWall, {BoundaryRule::Type::Wall, nullptr}}},
                [uniform](std::mt19937 &rng)
                {
                   State u(3);
                   u << uniform(rng, 0.5, 2.0), uniform(rng, -1, 1),
                      uniform(rng, -1, 1);
                   return u;
                }});
   return v;
}

void fill_random(const LawSetup &s, const Discretization &disc,
                 StateField &f, std::mt19937 &rng)
{
   for (int e = 0; e < f.E; ++e)
   {
      for (int i = 0; i < f.N; ++i)
      {
         f.elem(e).row(i) = s.random_state(rng).transpose();
      }
   }
   // co-located nodes must agree where the scheme assumes glued data
   for (int e = 0; e < f.E; ++e)
   {
      for (int i = 0; i < f.N; ++i)
      {
         const int g = disc.gid(i, e);
         for (int e2 = 0; e2 < f.E; ++e2)
         {
            for (int i2 = 0; i2 < f.N; ++i2)
            {
               if (disc.gid(i2, e2) == g)
               {
                  f.elem(e2).row(i2) = f.elem(e).row(i);
               }
            }
         }
      }
   }
}

Vec total_mass(const Discretization &disc, const StateField &f)
{
   Vec mass = Vec::Zero(f.m);
   for (int e = 0; e < f.E; ++e)
   {
      mass += disc.ops.at(e).mi * f.elem(e).colwise().sum().transpose();
   }
   return mass;
}

} // namespace

SuiteResult operator_suite()
{
   Checker c("operator identities");
   std::mt19937 rng(12345);
   std::uniform_real_distribution<Real> unit(0.0, 1.0);

   for (ElemKind kind : {ElemKind::Line, ElemKind::Quad, ElemKind::Tri})
   {
      const int pmax = kind == ElemKind::Line ? 4 : 3;
      const Mesh mesh = make_kind_mesh(kind);
      for (int p = 1; p <= pmax; ++p)
      {
         Discretization disc(mesh, make_burgers(elem_dim(kind)), p,
                             {{0, {BoundaryRule::Type::Outflow, nullptr}}});
         const RefElem &re = disc.ops.ref;

         // partition of unity at random reference points
         for (int trial = 0; trial < 20; ++trial)
         {
            Vec2 x(unit(rng), kind == ElemKind::Line ? 0.0 : unit(rng));
            if (kind == ElemKind::Tri && x.sum() > 1.0) { x = Vec2::Ones() - x; }
            Real sum = 0;
            for (int i = 0; i < re.N; ++i) { sum += bernstein_eval(re, i, x); }
            c.check_close(sum, 1.0, 1e-12, "partition of unity");
         }

         for (int e = 0; e < mesh.num_elements(); ++e)
         {
            const GeomOps &g = disc.ops.at(e);
            const std::array<Mat, 2> dense = dense_ctilde(disc, e);
            const Real scale =
               std::max(dense[0].cwiseAbs().maxCoeff(), Real(1));
            for (int k = 0; k < elem_dim(kind); ++k)
            {
               // zero row sums: the gradient of a constant vanishes
               c.check(g.ctilde[size_t(k)].rowwise().sum()
                             .cwiseAbs().maxCoeff() <= 1e-11 * scale,
                       "ctilde row sums");
               // fast path (Kronecker on boxes, barycentric form on
               // simplices) against dense assembly
               c.check((g.ctilde[size_t(k)] - dense[size_t(k)])
                             .cwiseAbs().maxCoeff() <= 1e-9 * scale,
                       "ctilde vs dense assembly");
            }
            if (kind == ElemKind::Quad)
            {
               // Cartesian cross sparsity: nodes couple only along rows
               // and columns of the tensor lattice
               const int n1 = p + 1;
               for (int i = 0; i < re.N; ++i)
               {
                  for (int j = 0; j < re.N; ++j)
                  {
                     const bool same_row = i / n1 == j / n1;
                     const bool same_col = i % n1 == j % n1;
                     if (!same_row && !same_col)
                     {
                        c.check(g.ctilde[0](i, j) == 0.0 &&
                                   g.ctilde[1](i, j) == 0.0,
                                "cartesian cross sparsity");
                     }
                  }
               }
            }
            if (mesh.uniform) { break; }
         }
      }
   }
   return c.r;
}

SuiteResult equivalence_suite()
{
   Checker c("target scheme equivalence");
   std::mt19937 rng(777);
   for (const LawSetup &s : law_setups())
   {
      for (int p : {1, 2})
      {
         Discretization disc(s.mesh, s.law, p, s.bcs);
         const RefElem &re = disc.ops.ref;
         const int m = s.law.ncomp;
         for (int trial = 0; trial < 50; ++trial)
         {
            StateField f = disc.make_field();
            fill_random(s, disc, f, rng);
            const auto faces = disc.face_stage(f, 0.0);
            const Mat udot = disc.nodal_time_derivatives(f, faces);
            const Mat low = disc.low_order_rhs(f, 0.0);
            const Real scale = std::max(udot.cwiseAbs().maxCoeff(), Real(1));
            for (int e = 0; e < f.E; ++e)
            {
               Mat lowvol;
               disc.low_volume_terms(f, e, lowvol, nullptr, nullptr,
                                     nullptr);
               const RawFluxes raw =
                  raw_fluxes(disc, f, faces, udot, lowvol, e);
               Mat rec = low.middleCols(e * m, m) + raw.fi;
               for (int k = 0; k < re.nf; ++k)
               {
                  for (int so = 0; so < re.nfn; ++so)
                  {
                     rec.row(re.face_nodes[k][so]) +=
                        raw.fface[k].col(so).transpose();
                  }
               }
               const Mat target =
                  disc.ops.at(e).mi * udot.middleCols(e * m, m);
               c.check((rec - target).cwiseAbs().maxCoeff() <=
                          1e-10 * scale,
                       "unlimited reconstruction equals the target rhs");
            }
         }
      }
   }
   return c.r;
}

SuiteResult idp_suite()
{
   Checker c("forward euler invariant domain preservation");
   std::mt19937 rng(4242);
   std::uniform_real_distribution<Real> unit(-1.0, 1.0);

   struct ScalarSetup
   {
      ConservationLaw law;
      Mesh mesh;
   };
   const ScalarSetup setups[] = {
      {make_advection(Vec2(1.0, 0.0), 1), build_line_mesh(0, 1, 8, true)},
      {make_burgers(2),
       build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 3, 3,
                       {0, 0, 0, 0, true, true})},
   };
   for (const ScalarSetup &s : setups)
   {
      Discretization disc(s.mesh, s.law, 2);
      for (int trial = 0; trial < 50; ++trial)
      {
         StateField f = disc.make_field();
         // periodic glue: assign by global id so co-located nodes agree
         Vec glob(disc.num_global);
         for (int g = 0; g < disc.num_global; ++g) { glob(g) = unit(rng); }
         for (int e = 0; e < f.E; ++e)
         {
            for (int i = 0; i < f.N; ++i)
            {
               f.elem(e)(i, 0) = glob(disc.gid(i, e));
            }
         }
         const Real lo = f.data.minCoeff(), hi = f.data.maxCoeff();
         bool ok = true;
         for (int step = 0; step < 100 && ok; ++step)
         {
            const Real dt = disc.max_idp_timestep(f, 0.0);
            const Mat r = disc.rhs(f, 0.0, Scheme::LO);
            for (int e = 0; e < f.E; ++e)
            {
               f.elem(e) += dt / disc.ops.at(e).mi *
                            r.middleCols(e, 1);
            }
            ok = f.data.minCoeff() >= lo - 1e-11 &&
                 f.data.maxCoeff() <= hi + 1e-11;
         }
         c.check(ok, "low order forward euler keeps global bounds");
      }
   }
   return c.r;
}

SuiteResult conservation_suite()
{
   Checker c("mass conservation");
   std::mt19937 rng(99);
   for (const LawSetup &s : law_setups())
   {
      // conservation statements need a closed (periodic) domain
      const bool periodic =
         s.law.kind == LawKind::Advection || s.law.kind == LawKind::Burgers;
      if (!periodic) { continue; }

      Discretization disc(s.mesh, s.law, 2, s.bcs);
      StateField f = disc.make_field();
      fill_random(s, disc, f, rng);
      const Vec mass0 = total_mass(disc, f);
      const Real dt = 0.25 * disc.max_idp_timestep(f, 0.0);
      const RhsFn rhs = make_rhs(disc, Scheme::MCL);
      for (int step = 0; step < 1000; ++step)
      {
         f = ssprk_step(rhs, f, step * dt, dt, RKMethod::SSPRK3);
      }
      const Vec drift = (total_mass(disc, f) - mass0).cwiseAbs();
      c.check(drift.maxCoeff() <= 1e-10,
              "total mass drift below 1e-10 over 1000 SSP-RK3 steps");
   }

   // systems: periodic translation of the Euler and SWE laws
   {
      const Mesh line = build_line_mesh(0, 1, 8, true);
      const Mesh quad = build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 3, 3,
                                        {0, 0, 0, 0, true, true});
      for (ConservationLaw law :
           {make_euler(1), make_shallow_water(9.81)})
      {
         const Mesh &mesh = law.kind == LawKind::Euler ? line : quad;
         Discretization disc(mesh, law, 2);
         StateField f = disc.make_field();
         disc.sample_nodal(f, [&](const Vec2 &x)
         {
            const Real bump = 0.2 * std::sin(2 * M_PI * x.x());
            if (law.kind == LawKind::Euler)
            {
               return euler_state(1.0 + bump, Vec2(0.3, 0), 1.0 + bump, 1);
            }
            State u(3);
            u << 1.0 + bump, 0.3 * (1.0 + bump), 0.0;
            return u;
         });
         const Vec mass0 = total_mass(disc, f);
         const Real dt = 0.25 * disc.max_idp_timestep(f, 0.0);
         const RhsFn rhs = make_rhs(disc, Scheme::MCL);
         for (int step = 0; step < 1000; ++step)
         {
            f = ssprk_step(rhs, f, step * dt, dt, RKMethod::SSPRK3);
         }
         const Vec drift = (total_mass(disc, f) - mass0).cwiseAbs();
         c.check(drift.maxCoeff() <= 1e-10,
                 "system total mass drift below 1e-10");
      }
   }
   return c.r;
}

SuiteResult limiter_oracle_suite()
{
   Checker c("limiter clip oracles");
   std::mt19937 rng(31415);
   auto urand = [&](Real a, Real b)
   {
      return std::uniform_real_distribution<Real>(a, b)(rng);
   };

   const auto feasible = [](Real x, Real f, Real twod, Real Pij, Real Pji,
                            Real li, Real hi, Real lj, Real hj)
   {
      const Real tol = 1e-9;
      if (x * f < 0 || std::abs(x) > std::abs(f) + tol) { return false; }
      const Real hi_e = std::max(hi * twod, Pij);
      const Real li_e = std::min(li * twod, Pij);
      const Real hj_e = std::max(hj * twod, Pji);
      const Real lj_e = std::min(lj * twod, Pji);
      return Pij + x <= hi_e + tol && Pij + x >= li_e - tol &&
             Pji - x <= hj_e + tol && Pji - x >= lj_e - tol;
   };

   for (int trial = 0; trial < 10000; ++trial)
   {
      // volumetric pair clip: feasibility and maximality
      {
         const Real twod = urand(0, 2), f = urand(-2, 2);
         const Real ui = urand(-1, 1), uj = urand(-1, 1);
         const Real li = ui - urand(0, 1), hi = ui + urand(0, 1);
         const Real lj = uj - urand(0, 1), hj = uj + urand(0, 1);
         const Real Pij = twod * urand(-1.5, 1.5);
         const Real Pji = twod * urand(-1.5, 1.5);
         const Real fs = clip_pair(f, twod, Pij, Pji, li, hi, lj, hj);
         c.check(feasible(fs, f, twod, Pij, Pji, li, hi, lj, hj),
                 "pair clip feasibility");
         if (std::abs(fs) < std::abs(f) - 1e-9)
         {
            const Real probe = fs + (f >= 0 ? 1e-6 : -1e-6);
            c.check(!feasible(probe, f, twod, Pij, Pji, li, hi, lj, hj),
                    "pair clip maximality");
         }
      }
      // interfacial clip: symmetric interval around the bar state product
      {
         const Real twod = urand(0, 2), f = urand(-2, 2);
         const Real u = urand(-1, 1);
         const Real lo = u - urand(0, 1), hi = u + urand(0, 1);
         const Real P = twod * urand(-1.5, 1.5);
         const Real fs = clip_face(f, twod, P, lo, hi);
         const Real hi_e = std::max(hi * twod, P);
         const Real lo_e = std::min(lo * twod, P);
         c.check(fs * f >= 0 && std::abs(fs) <= std::abs(f) + 1e-12,
                 "face clip sign and magnitude");
         c.check(P + fs <= hi_e + 1e-12 && P + fs >= lo_e - 1e-12 &&
                    P - fs <= hi_e + 1e-12 && P - fs >= lo_e - 1e-12,
                 "face clip keeps both sides in the box");
         if (std::abs(fs) < std::abs(f) - 1e-9)
         {
            const Real probe = std::abs(fs) + 1e-6;
            c.check(std::max(P + probe, P - probe) > hi_e - 1e-9 ||
                       std::min(P + probe, P - probe) < lo_e + 1e-9,
                    "face clip maximality");
         }
      }
      // sequential clips: exact agreement with the tightest constraint
      {
         const Real a_ij = urand(0, 2), a_ji = urand(0, 2);
         const Real g = urand(-2, 2);
         const Real dhi_i = urand(0, 1), dlo_i = urand(0, 1);
         const Real dhi_j = urand(0, 1), dlo_j = urand(0, 1);
         const Real gs =
            clip_seq_pair(g, a_ij, a_ji, dhi_i, dlo_i, dhi_j, dlo_j);
         c.check(gs * g >= 0 && std::abs(gs) <= std::abs(g) + 1e-12,
                 "sequential pair clip sign and magnitude");
         c.check(gs <= a_ij * dhi_i + 1e-12 && -gs <= a_ij * dlo_i + 1e-12 &&
                    -gs <= a_ji * dhi_j + 1e-12 && gs <= a_ji * dlo_j + 1e-12,
                 "sequential pair clip keeps derived bar states boxed");
         if (std::abs(gs) < std::abs(g) - 1e-9)
         {
            const Real cap = g >= 0 ? std::min(a_ij * dhi_i, a_ji * dlo_j)
                                    : std::min(a_ij * dlo_i, a_ji * dhi_j);
            c.check_close(std::abs(gs), cap, 1e-12 * std::max(cap, Real(1)),
                          "sequential pair clip maximality");
         }
         const Real gf = clip_seq_face(g, a_ij, a_ji, dhi_i, dlo_i);
         c.check(gf * g >= 0 && std::abs(gf) <= std::abs(g) + 1e-12 &&
                    gf <= a_ij * dhi_i + 1e-12 &&
                    -gf <= a_ij * dlo_i + 1e-12 &&
                    -gf <= a_ji * dhi_i + 1e-12 &&
                    gf <= a_ji * dlo_i + 1e-12,
                 "sequential face clip");
      }
   }
   return c.r;
}

std::vector<SuiteResult> run_property_suites()
{
   return {operator_suite(), equivalence_suite(), idp_suite(),
           conservation_suite(), limiter_oracle_suite()};
}

bool all_passed(const std::vector<SuiteResult> &results)
{
   for (const SuiteResult &r : results)
   {
      if (!r.passed()) { return false; }
   }
   return true;
}

} // namespace bdg
