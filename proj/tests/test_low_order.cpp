#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdg/discretization.hpp"

#include <random>

using namespace bdg;

namespace
{

std::mt19937 rng(19);

Real urand(Real a, Real b)
{
   return std::uniform_real_distribution<Real>(a, b)(rng);
}

void randomize(StateField &f, Real a, Real b)
{
   for (int c = 0; c < f.data.size(); ++c)
   {
      f.data.data()[c] = urand(a, b);
   }
}

// bar-state form oracle: sum 2d_ij (ubar_ij - u_i) + sum 2d_ik (ubar_ik - u_i)
// with every bar state computed by its defining quotient
Mat low_rhs_barstate_oracle(const Discretization &disc, const StateField &f,
                            Real t)
{
   const RefElem &re = disc.ops.ref;
   const Mesh &mesh = *disc.mesh;
   const ConservationLaw &law = disc.law;
   const int m = law.ncomp;
   Mat r = Mat::Zero(f.N, f.E * m);
   const auto faces = disc.face_stage(f, t);
   for (int e = 0; e < f.E; ++e)
   {
      const GeomOps &geo = disc.ops.at(e);
      auto conf = f.elem(e);
      auto block = r.middleCols(e * m, m);
      for (const auto &[i, j] : re.pairs)
      {
         const State ui = conf.row(i).transpose();
         const State uj = conf.row(j).transpose();
         const Vec2 cij(geo.ctilde[0](i, j), geo.ctilde[1](i, j));
         const Vec2 cji(geo.ctilde[0](j, i), geo.ctilde[1](j, i));
         Real d = 0;
         if (cij.norm() > 0)
         {
            d = std::max(d, cij.norm() *
                                law.wave_speed(ui, uj, cij.normalized()));
         }
         if (cji.norm() > 0)
         {
            d = std::max(d, cji.norm() *
                                law.wave_speed(uj, ui, cji.normalized()));
         }
         if (d > 0)
         {
            const Flux dF = law.flux(uj) - law.flux(ui);
            const State bij =
               0.5 * (ui + uj) - (dF * cij) / (2 * d);
            const State bji =
               0.5 * (ui + uj) + (dF * cji) / (2 * d);
            block.row(i) += 2 * d * (bij - ui).transpose();
            block.row(j) += 2 * d * (bji - uj).transpose();
         }
         else
         {
            // no dissipation: only the central flux difference remains
            const Flux dF = law.flux(uj) - law.flux(ui);
            block.row(i) -= (dF * cij).transpose();
            block.row(j) += (dF * cji).transpose();
         }
      }
      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh.face_of(e, k);
         const Face &fc = mesh.faces[g];
         const FaceData &fd = faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         const Real w = geo.w[k];
         const Vec2 n = geo.normal[k];
         for (int so = 0; so < re.nfn; ++so)
         {
            const int s = owner || mesh.dim == 1 ? so : re.nfn - 1 - so;
            const int i = re.face_nodes[k][so];
            const State ui = conf.row(i).transpose();
            const State uh = owner ? State(fd.uhat0.col(s))
                                   : State(fd.uhat1.col(so));
            const Real lam = law.wave_speed(ui, uh, n);
            if (lam <= 0) { continue; }
            const State bar = 0.5 * (ui + uh) -
                              ((law.flux(uh) - law.flux(ui)) * n) /
                                 (2 * lam);
            block.row(i) += lam * w * (bar - ui).transpose();
         }
      }
   }
   return r;
}

} // namespace

TEST_CASE("low order rhs equals the bar state form on random fields")
{
   const Mesh line = build_line_mesh(0, 1, 4, true);
   const Mesh quad =
      build_quad_mesh({0, 0}, {1, 1}, 3, 2, {0, 0, 0, 0, true, true});
   const Mesh tri = build_structured_tri_mesh({0, 0}, {1, 1}, 2, 2);
   std::map<int, BoundaryRule> out{{0, {BoundaryRule::Type::Outflow, {}}}};

   for (int p : {1, 2, 3})
   {
      Discretization d1(line, make_burgers(1), p);
      Discretization d2(quad, make_burgers(2), p);
      Discretization d3(tri, make_euler(2), p, out);
      for (int trial = 0; trial < 5; ++trial)
      {
         StateField f1 = d1.make_field();
         randomize(f1, -1, 1);
         CHECK((d1.low_order_rhs(f1, 0) - low_rhs_barstate_oracle(d1, f1, 0))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);

         StateField f2 = d2.make_field();
         randomize(f2, -1, 1);
         CHECK((d2.low_order_rhs(f2, 0) - low_rhs_barstate_oracle(d2, f2, 0))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);

         StateField f3 = d3.make_field();
         d3.sample_nodal(f3, [&](const Vec2 &) {
            return euler_state(urand(0.5, 2), {urand(-1, 1), urand(-1, 1)},
                               urand(0.5, 2));
         });
         CHECK((d3.low_order_rhs(f3, 0) - low_rhs_barstate_oracle(d3, f3, 0))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-11);
      }
   }
}

TEST_CASE("constant fields are steady and conservation holds periodically")
{
   const Mesh quad =
      build_quad_mesh({0, 0}, {1, 1}, 3, 3, {0, 0, 0, 0, true, true});
   for (int p : {1, 2, 3})
   {
      Discretization disc(quad, make_euler(2), p);
      StateField f = disc.make_field();
      const State c = euler_state(1.1, {0.4, 0.3}, 0.8);
      disc.sample_nodal(f, [&](const Vec2 &) { return c; });
      CHECK(disc.low_order_rhs(f, 0).cwiseAbs().maxCoeff() <= 1e-12);

      disc.sample_nodal(f, [&](const Vec2 &) {
         return euler_state(urand(0.5, 2), {urand(-1, 1), urand(-1, 1)},
                            urand(0.5, 2));
      });
      const Mat r = disc.low_order_rhs(f, 0);
      const Real scale = std::max(1.0, r.cwiseAbs().maxCoeff());
      for (int c2 = 0; c2 < 4; ++c2)
      {
         Real total = 0;
         for (int e = 0; e < f.E; ++e) { total += r.col(e * 4 + c2).sum(); }
         CHECK(std::abs(total) <= 1e-11 * scale * f.E * f.N);
      }
   }
}

TEST_CASE("1d advection bar states pick the upwind value")
{
   const Mesh mesh = build_line_mesh(0, 1, 4, true);
   Discretization disc(mesh, make_advection({1, 0}, 1), 2);
   StateField f = disc.make_field();
   randomize(f, 0, 1);
   const auto faces = disc.face_stage(f, 0);
   for (size_t g = 0; g < mesh.faces.size(); ++g)
   {
      const Face &fc = mesh.faces[g];
      const FaceData &fd = faces[g];
      REQUIRE(fd.d[0] > 0);
      const Real bar = fd.P(0, 0) / (2 * fd.d[0]);
      // e0 is the left element; its trace is the upwind state
      CHECK(bar == doctest::Approx(f.data(2, fc.e0)).epsilon(1e-13));
   }
}

TEST_CASE("interfacial bar states agree between the two sides of a face")
{
   const Mesh tri = build_structured_tri_mesh({0, 0}, {1, 1}, 3, 2);
   std::map<int, BoundaryRule> out{{0, {BoundaryRule::Type::Outflow, {}}}};
   Discretization disc(tri, make_euler(2), 2, out);
   StateField f = disc.make_field();
   disc.sample_nodal(f, [&](const Vec2 &) {
      return euler_state(urand(0.5, 2), {urand(-1, 1), urand(-1, 1)},
                         urand(0.5, 2));
   });
   const auto faces = disc.face_stage(f, 0);
   const RefElem &re = disc.ops.ref;
   int checked = 0;
   for (size_t g = 0; g < tri.faces.size(); ++g)
   {
      const Face &fc = tri.faces[g];
      if (fc.e1 < 0) { continue; }
      const FaceData &fd = faces[g];
      for (int s = 0; s < re.nfn; ++s)
      {
         if (fd.d[s] <= 0) { continue; }
         // recompute the bar state from the e1 perspective
         const int i1 = re.face_nodes[fc.f1][re.nfn - 1 - s];
         const State u1 = f.elem(fc.e1).row(i1).transpose();
         const State uh1 = fd.uhat1.col(re.nfn - 1 - s);
         const Vec2 n1 = disc.ops.at(fc.e1).normal[fc.f1];
         const Real lam = disc.law.wave_speed(u1, uh1, n1);
         const State bar1 =
            0.5 * (u1 + uh1) -
            ((disc.law.flux(uh1) - disc.law.flux(u1)) * n1) / (2 * lam);
         const State bar0 = fd.P.col(s) / (2 * fd.d[s]);
         CHECK((bar0 - bar1).cwiseAbs().maxCoeff() <= 1e-13);
         ++checked;
      }
   }
   CHECK(checked > 10);
}

TEST_CASE("idp time step scales linearly and hits the +inf sentinel")
{
   const auto u0 = [](const Vec2 &x)
   {
      State s(1);
      s << std::sin(6.28318530717958648 * x[0]);
      return s;
   };
   const Mesh m1 = build_line_mesh(0, 1, 8, true);
   const Mesh m2 = build_line_mesh(0, 1, 16, true);
   Discretization c1(m1, make_advection({1, 0}, 1), 1);
   Discretization c2(m2, make_advection({1, 0}, 1), 1);
   StateField f1 = c1.make_field(), f2 = c2.make_field();
   c1.sample_nodal(f1, u0);
   c2.sample_nodal(f2, u0);
   const Real dt1 = c1.max_idp_timestep(f1, 0);
   const Real dt2 = c2.max_idp_timestep(f2, 0);
   CHECK(dt1 > 0);
   CHECK(dt1 / dt2 == doctest::Approx(2.0).epsilon(1e-12));

   Discretization z(m1, make_advection({0, 0}, 1), 1);
   StateField fz = z.make_field();
   z.sample_nodal(fz, u0);
   CHECK(std::isinf(z.max_idp_timestep(fz, 0)));
}

TEST_CASE("forward euler at the idp bound preserves scalar bounds")
{
   const Mesh quad =
      build_quad_mesh({0, 0}, {1, 1}, 3, 3, {0, 0, 0, 0, true, true});
   for (int p : {1, 2})
   {
      for (const char *which : {"advection", "burgers"})
      {
         const ConservationLaw law = which[0] == 'a'
                                        ? make_advection({1.0, 0.5}, 2)
                                        : make_burgers(2);
         Discretization disc(quad, law, p);
         for (int trial = 0; trial < 10; ++trial)
         {
            StateField f = disc.make_field();
            randomize(f, 0.25, 0.75);
            for (int step = 0; step < 10; ++step)
            {
               const Real dt = disc.max_idp_timestep(f, 0);
               REQUIRE(std::isfinite(dt));
               const Mat r = disc.low_order_rhs(f, 0);
               f.data += (dt / disc.ops.at(0).mi) * r;
            }
            CHECK(f.data.minCoeff() >= 0.25 - 1e-12);
            CHECK(f.data.maxCoeff() <= 0.75 + 1e-12);
         }
      }
   }
}
