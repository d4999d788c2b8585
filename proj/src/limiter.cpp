#include "bdg/limiter.hpp"

#include <stdexcept>

namespace bdg
{

Real clip_pair(Real f, Real twod, Real Pij, Real Pji, Real ui_min,
               Real ui_max, Real uj_min, Real uj_max)
{
   if (f >= 0.0)
   {
      const Real room = std::min(std::max(twod * ui_max - Pij, 0.0),
                                 std::max(Pji - twod * uj_min, 0.0));
      return std::min(f, room);
   }
   const Real room = std::min(std::max(Pij - twod * ui_min, 0.0),
                              std::max(twod * uj_max - Pji, 0.0));
   return std::max(f, -room);
}

Real clip_face(Real f, Real twod, Real P, Real u_min, Real u_max)
{
   const Real room = std::min(std::max(twod * u_max - P, 0.0),
                              std::max(P - twod * u_min, 0.0));
   return f >= 0.0 ? std::min(f, room) : std::max(f, -room);
}

Real clip_seq_pair(Real g, Real a_ij, Real a_ji, Real dhi_i, Real dlo_i,
                   Real dhi_j, Real dlo_j)
{
   if (g >= 0.0)
   {
      return std::min(g, std::min(a_ij * dhi_i, a_ji * dlo_j));
   }
   return std::max(g, std::max(-a_ij * dlo_i, -a_ji * dhi_j));
}

Real clip_seq_face(Real g, Real a0, Real a1, Real dhi, Real dlo)
{
   if (g >= 0.0) { return std::min(g, std::min(a0 * dhi, a1 * dlo)); }
   return std::max(g, std::max(-a0 * dlo, -a1 * dhi));
}

RawFluxes raw_fluxes(const Discretization &disc, const StateField &f,
                     const std::vector<FaceData> &faces, const Mat &udot,
                     const Mat &lowvol, int e)
{
   const RefElem &re = disc.ops.ref;
   const GeomOps &geo = disc.ops.at(e);
   const Mesh &mesh = *disc.mesh;
   const int m = disc.law.ncomp;
   auto conf = f.elem(e);

   RawFluxes out;
   out.fi = geo.mi * udot.middleCols(e * m, m) - lowvol;
   out.fface.resize(re.nf);
   for (int k = 0; k < re.nf; ++k)
   {
      const int g = mesh.face_of(e, k);
      const Face &fc = mesh.faces[g];
      const FaceData &fd = faces[g];
      const bool owner = fc.e0 == e && fc.f0 == k;
      Mat &fk = out.fface[k];
      fk.resize(m, re.nfn);
      for (int so = 0; so < re.nfn; ++so)
      {
         const int s = owner || mesh.dim == 1 ? so : re.nfn - 1 - so;
         State df = fd.nodalH.col(s) - fd.faceH.col(s);
         State fh = fd.faceH.col(s);
         if (!owner)
         {
            df = -df;
            fh = -fh;
         }
         fk.col(so) = df;
         const int i = re.face_nodes[k][so];
         const State ui = conf.row(i).transpose();
         out.fi.row(i) +=
            (fh - geo.w[k] * (disc.law.flux(ui) * geo.normal[k]))
               .transpose();
      }
   }
   return out;
}

Mat decompose_fluxes(const Discretization &disc, const StateField &f, int e,
                     const Mat &fi, const Vec &twod)
{
   const RefElem &re = disc.ops.ref;
   const int m = disc.law.ncomp, N = re.N, np = int(re.pairs.size());
   auto conf = f.elem(e);

   Mat q = fi;
   for (int p = 0; p < np; ++p)
   {
      const auto [i, j] = re.pairs[p];
      const Mat du =
         0.5 * twod[p] * (conf.row(j) - conf.row(i));
      q.row(i) += du;
      q.row(j) -= du;
   }
   const Real scale = std::max(1.0, fi.cwiseAbs().maxCoeff());
   if (q.colwise().sum().cwiseAbs().maxCoeff() > 1e-7 * N * scale)
   {
      throw std::runtime_error(
         "flux decomposition: element fluxes do not sum to zero");
   }

   Mat fij(m, np);
   Vec rhs(N), v(N);
   for (int c = 0; c < m; ++c)
   {
      rhs = q.col(c);
      rhs[N - 1] = 0.0; // last equation pins the free constant
      v.noalias() = re.subcell_poisson_inv * rhs;
      for (int p = 0; p < np; ++p)
      {
         const auto [i, j] = re.pairs[p];
         fij(c, p) = re.subcell_mc(i, j) * (v[i] - v[j]) +
                     0.5 * twod[p] * (conf(i, c) - conf(j, c));
      }
   }
   return fij;
}

namespace
{

MclBounds compute_bounds(const Discretization &disc, const StateField &f,
                         const std::vector<FaceData> &faces,
                         const std::vector<Mat> &Pij,
                         const std::vector<Mat> &Pji)
{
   const RefElem &re = disc.ops.ref;
   const Mesh &mesh = *disc.mesh;
   const int m = disc.law.ncomp, N = re.N, ns = m - 1;
   const Real inf = std::numeric_limits<Real>::infinity();

   MclBounds b;
   b.lo = Vec::Constant(disc.num_global, inf);
   b.hi = Vec::Constant(disc.num_global, -inf);
   if (ns > 0)
   {
      b.phi_lo = Mat::Constant(disc.num_global, ns, inf);
      b.phi_hi = Mat::Constant(disc.num_global, ns, -inf);
      b.face_phi_lo = Mat::Constant(ns, int(mesh.faces.size()), inf);
      b.face_phi_hi = Mat::Constant(ns, int(mesh.faces.size()), -inf);
   }

   Vec clo(N), chi(N);
   Mat plo(N, std::max(ns, 1)), phi(N, std::max(ns, 1));
   for (int e = 0; e < f.E; ++e)
   {
      auto conf = f.elem(e);
      // stencil-union bounds of the first (scalar or main) component
      clo = conf.col(0);
      chi = conf.col(0);
      for (int p = 0; p < int(re.pairs.size()); ++p)
      {
         const auto [i, j] = re.pairs[p];
         clo[i] = std::min(clo[i], conf(j, 0));
         chi[i] = std::max(chi[i], conf(j, 0));
         clo[j] = std::min(clo[j], conf(i, 0));
         chi[j] = std::max(chi[j], conf(i, 0));
      }
      // per-node specific candidates: own ratio plus adjacent bar ratios
      if (ns > 0)
      {
         for (int i = 0; i < N; ++i)
         {
            for (int c = 0; c < ns; ++c)
            {
               plo(i, c) = phi(i, c) = conf(i, c + 1) / conf(i, 0);
            }
         }
         for (int p = 0; p < int(re.pairs.size()); ++p)
         {
            const auto [i, j] = re.pairs[p];
            const Real denom = Pij[e](0, p) + Pji[e](0, p);
            if (denom <= 0.0) { continue; }
            for (int c = 0; c < ns; ++c)
            {
               const Real pb =
                  (Pij[e](c + 1, p) + Pji[e](c + 1, p)) / denom;
               plo(i, c) = std::min(plo(i, c), pb);
               phi(i, c) = std::max(phi(i, c), pb);
               plo(j, c) = std::min(plo(j, c), pb);
               phi(j, c) = std::max(phi(j, c), pb);
            }
         }
      }
      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh.face_of(e, k);
         const Face &fc = mesh.faces[g];
         const FaceData &fd = faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         for (int so = 0; so < re.nfn; ++so)
         {
            const int s = owner || mesh.dim == 1 ? so : re.nfn - 1 - so;
            const int i = re.face_nodes[k][so];
            if (fc.e1 < 0)
            {
               // ghost nodal values widen the bounds of boundary nodes
               clo[i] = std::min(clo[i], fd.uhat0(0, s));
               chi[i] = std::max(chi[i], fd.uhat0(0, s));
            }
            if (ns > 0 && fd.P(0, s) > 0.0)
            {
               for (int c = 0; c < ns; ++c)
               {
                  const Real pb = fd.P(c + 1, s) / fd.P(0, s);
                  plo(i, c) = std::min(plo(i, c), pb);
                  phi(i, c) = std::max(phi(i, c), pb);
               }
            }
         }
      }
      for (int i = 0; i < N; ++i)
      {
         const int g = disc.gid(i, e);
         b.lo[g] = std::min(b.lo[g], clo[i]);
         b.hi[g] = std::max(b.hi[g], chi[i]);
         for (int c = 0; c < ns; ++c)
         {
            b.phi_lo(g, c) = std::min(b.phi_lo(g, c), plo(i, c));
            b.phi_hi(g, c) = std::max(b.phi_hi(g, c), phi(i, c));
         }
      }
   }

   // per-face bounds of the interfacial derived bar states
   if (ns > 0)
   {
      for (int g = 0; g < int(mesh.faces.size()); ++g)
      {
         const FaceData &fd = faces[g];
         for (int s = 0; s < re.nfn; ++s)
         {
            if (fd.P(0, s) <= 0.0) { continue; }
            for (int c = 0; c < ns; ++c)
            {
               const Real pb = fd.P(c + 1, s) / fd.P(0, s);
               b.face_phi_lo(c, g) = std::min(b.face_phi_lo(c, g), pb);
               b.face_phi_hi(c, g) = std::max(b.face_phi_hi(c, g), pb);
            }
         }
      }
   }
   return b;
}

} // namespace

Mat mcl_rhs(const Discretization &disc, const StateField &f, Real t)
{
   const RefElem &re = disc.ops.ref;
   const Mesh &mesh = *disc.mesh;
   const int m = disc.law.ncomp, N = re.N, ns = m - 1;
   const int np = int(re.pairs.size());

   const std::vector<FaceData> faces = disc.face_stage(f, t);
   const Mat udot = disc.nodal_time_derivatives(f, faces);

   std::vector<Mat> lowvol(f.E), Pij(f.E), Pji(f.E), fij(f.E);
   std::vector<RawFluxes> raw(f.E);
   std::vector<Vec> twod(f.E);
#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      disc.low_volume_terms(f, e, lowvol[e], &twod[e], &Pij[e], &Pji[e]);
      raw[e] = raw_fluxes(disc, f, faces, udot, lowvol[e], e);
      fij[e] = decompose_fluxes(disc, f, e, raw[e].fi, twod[e]);
   }

   const MclBounds b = compute_bounds(disc, f, faces, Pij, Pji);
   Real main_scale = 0.0;
   for (int e = 0; e < f.E; ++e)
   {
      main_scale = std::max(main_scale, f.elem(e).col(0).cwiseAbs().maxCoeff());
   }
   const Real athresh = 1e-12 * main_scale;
   // 2 d rhobar* below a positivity-scale threshold is treated as zero
   const auto clamp_a = [athresh](Real a, Real td)
   { return a < athresh * td ? 0.0 : a; };

   Mat r = Mat::Zero(N, f.E * m);
#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      auto conf = f.elem(e);
      auto block = r.middleCols(e * m, m);
      block = lowvol[e];

      for (int p = 0; p < np; ++p)
      {
         const auto [i, j] = re.pairs[p];
         const int gi = disc.gid(i, e), gj = disc.gid(j, e);
         const Real td = twod[e][p];
         const Real fm =
            clip_pair(fij[e](0, p), td, Pij[e](0, p), Pji[e](0, p),
                      b.lo[gi], b.hi[gi], b.lo[gj], b.hi[gj]);
         if (ns == 0)
         {
            block(i, 0) += fm;
            block(j, 0) -= fm;
            continue;
         }
         State fv = State::Zero(m);
         fv(0) = fm;
         const Real denom = Pij[e](0, p) + Pji[e](0, p);
         if (denom > 0.0)
         {
            const Real a_ij = clamp_a(Pij[e](0, p) + fm, td);
            const Real a_ji = clamp_a(Pji[e](0, p) - fm, td);
            for (int c = 1; c < m; ++c)
            {
               const Real pb = (Pij[e](c, p) + Pji[e](c, p)) / denom;
               const Real base = a_ij * pb - Pij[e](c, p);
               const Real g = fij[e](c, p) - base;
               const Real gs = clip_seq_pair(
                  g, a_ij, a_ji,
                  std::max(b.phi_hi(gi, c - 1) - pb, 0.0),
                  std::max(pb - b.phi_lo(gi, c - 1), 0.0),
                  std::max(b.phi_hi(gj, c - 1) - pb, 0.0),
                  std::max(pb - b.phi_lo(gj, c - 1), 0.0));
               fv(c) = base + gs;
            }
         }
         // scale back so both limited bar states remain admissible
         const Real alpha =
            std::min(disc.law.positivity_scale(Pij[e].col(p), fv),
                     disc.law.positivity_scale(Pji[e].col(p), State(-fv)));
         block.row(i) += alpha * fv.transpose();
         block.row(j) -= alpha * fv.transpose();
      }

      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh.face_of(e, k);
         const Face &fc = mesh.faces[g];
         const FaceData &fd = faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         for (int so = 0; so < re.nfn; ++so)
         {
            const int s = owner || mesh.dim == 1 ? so : re.nfn - 1 - so;
            const int i = re.face_nodes[k][so];
            const int gi = disc.gid(i, e);
            const Real td = 2.0 * fd.d[s];
            block.row(i) +=
               (fd.P.col(s) - td * conf.row(i).transpose()).transpose();
            const Real fm = clip_face(raw[e].fface[k](0, so), td,
                                      fd.P(0, s), b.lo[gi], b.hi[gi]);
            if (ns == 0 || fd.P(0, s) <= 0.0)
            {
               block(i, 0) += fm;
               continue;
            }
            State fv = State::Zero(m);
            fv(0) = fm;
            const Real a0 = clamp_a(fd.P(0, s) + fm, td);
            const Real a1 =
               fc.e1 < 0 ? a0 : clamp_a(fd.P(0, s) - fm, td);
            for (int c = 1; c < m; ++c)
            {
               const Real pb = fd.P(c, s) / fd.P(0, s);
               const Real base = a0 * pb - fd.P(c, s);
               const Real gg = raw[e].fface[k](c, so) - base;
               const Real gs = clip_seq_face(
                  gg, a0, a1,
                  std::max(b.face_phi_hi(c - 1, g) - pb, 0.0),
                  std::max(pb - b.face_phi_lo(c - 1, g), 0.0));
               fv(c) = base + gs;
            }
            // both sides of an interior face evaluate the same symmetric
            // admissibility clip, so the scaled fluxes still cancel
            Real alpha = disc.law.positivity_scale(fd.P.col(s), fv);
            if (fc.e1 >= 0)
            {
               alpha = std::min(
                  alpha, disc.law.positivity_scale(fd.P.col(s), State(-fv)));
            }
            block.row(i) += alpha * fv.transpose();
         }
      }
   }
   return r;
}

} // namespace bdg
