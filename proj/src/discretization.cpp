#include "bdg/discretization.hpp"

#include "bdg/limiter.hpp"

#include <numeric>

namespace bdg
{

namespace
{

int find_root(std::vector<int> &parent, int a)
{
   while (parent[a] != a)
   {
      parent[a] = parent[parent[a]];
      a = parent[a];
   }
   return a;
}

void unite(std::vector<int> &parent, int a, int b)
{
   a = find_root(parent, a);
   b = find_root(parent, b);
   if (a != b) { parent[std::max(a, b)] = std::min(a, b); }
}

// local Lax-Friedrichs flux in direction n
State lax_friedrichs(const ConservationLaw &law, const State &u,
                     const State &v, const Vec2 &n, Real lambda)
{
   const Flux fu = law.flux(u), fv = law.flux(v);
   return 0.5 * ((fu + fv) * n + lambda * (u - v));
}

} // namespace

Discretization::Discretization(const Mesh &m, const ConservationLaw &l, int p,
                               std::map<int, BoundaryRule> rules)
   : mesh(&m), law(l), ops(make_element_ops(m, p)), bcs(std::move(rules))
{
   if (law.dim != m.dim)
   {
      throw ConfigError("discretization: law/mesh dimension mismatch");
   }
   for (const Face &fc : m.faces)
   {
      if (fc.e1 < 0 && !bcs.count(fc.tag))
      {
         throw ConfigError("discretization: no boundary rule for tag " +
                           std::to_string(fc.tag));
      }
   }
   const RefElem &re = ops.ref;
   const int total = re.N * m.num_elements();
   std::vector<int> parent(total);
   std::iota(parent.begin(), parent.end(), 0);
   for (const Face &fc : m.faces)
   {
      if (fc.e1 < 0) { continue; }
      for (int s = 0; s < re.nfn; ++s)
      {
         const int i0 = re.face_nodes[fc.f0][s];
         const int i1 =
            re.face_nodes[fc.f1][m.dim == 1 ? s : re.nfn - 1 - s];
         unite(parent, fc.e0 * re.N + i0, fc.e1 * re.N + i1);
      }
   }
   gid.resize(re.N, m.num_elements());
   std::vector<int> compact(total, -1);
   num_global = 0;
   for (int a = 0; a < total; ++a)
   {
      const int r = find_root(parent, a);
      if (compact[r] < 0) { compact[r] = num_global++; }
      gid(a % re.N, a / re.N) = compact[r];
   }
}

StateField Discretization::make_field() const
{
   StateField f;
   f.N = ops.ref.N;
   f.m = law.ncomp;
   f.E = mesh->num_elements();
   f.data = Mat::Zero(f.N, f.E * f.m);
   return f;
}

void Discretization::sample_nodal(
   StateField &f, const std::function<State(const Vec2 &)> &u0) const
{
   for (int e = 0; e < f.E; ++e)
   {
      auto block = f.elem(e);
      for (int i = 0; i < f.N; ++i)
      {
         block.row(i) = u0(ops.node_pos(e, i)).transpose();
      }
   }
}

State Discretization::ghost_state(const BoundaryRule &bc, const State &u,
                                  const Vec2 &n, const Vec2 &x, Real t) const
{
   switch (bc.type)
   {
      case BoundaryRule::Type::Inflow: return bc.data(x, t);
      case BoundaryRule::Type::Wall: return law.reflect(u, n);
      default: return u;
   }
}

std::vector<FaceData> Discretization::face_stage(const StateField &f,
                                                 Real t) const
{
   const RefElem &re = ops.ref;
   const int nfn = re.nfn, m = law.ncomp;
   std::vector<FaceData> out(mesh->faces.size());

#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int g = 0; g < int(mesh->faces.size()); ++g)
   {
      const Face &fc = mesh->faces[g];
      FaceData &fd = out[g];
      const GeomOps &geo = ops.at(fc.e0);
      const Vec2 n = geo.normal[fc.f0];
      const Real w = geo.w[fc.f0];
      const BoundaryRule *bc = fc.e1 < 0 ? &bcs.at(fc.tag) : nullptr;

      fd.faceH.resize(m, nfn);
      fd.nodalH.resize(m, nfn);
      fd.P.resize(m, nfn);
      fd.lambda.resize(nfn);
      fd.d.resize(nfn);
      fd.uhat0.resize(m, nfn);
      if (!bc) { fd.uhat1.resize(m, nfn); }

      auto conf0 = f.elem(fc.e0);
      for (int s = 0; s < nfn; ++s)
      {
         const int i0 = re.face_nodes[fc.f0][s];
         const State u = conf0.row(i0).transpose();
         State uh;
         if (bc)
         {
            uh = ghost_state(*bc, u, n, ops.node_pos(fc.e0, i0), t);
         }
         else
         {
            const int i1 = re.face_nodes[fc.f1][mesh->dim == 1
                                                   ? s
                                                   : nfn - 1 - s];
            uh = f.elem(fc.e1).row(i1).transpose();
            fd.uhat1.col(mesh->dim == 1 ? s : nfn - 1 - s) = u;
         }
         fd.uhat0.col(s) = uh;
         const Real lam = law.wave_speed(u, uh, n);
         fd.lambda[s] = lam;
         fd.nodalH.col(s) = w * lax_friedrichs(law, u, uh, n, lam);
         if (lam > 0.0)
         {
            fd.d[s] = 0.5 * lam * w;
            fd.P.col(s) = 0.5 * w *
                          (lam * (u + uh) -
                           (law.flux(uh) - law.flux(u)) * n);
         }
         else
         {
            // zero wave speed: consistent laws then have equal normal
            // fluxes and the face term drops out entirely
            fd.d[s] = 0.0;
            fd.P.col(s).setZero();
         }
      }

      if (mesh->dim == 1)
      {
         // point evaluation; the trace value is the nodal value
         fd.faceH = fd.nodalH;
         continue;
      }

      // quadrature of the polynomial traces
      const FaceQuad &fq = re.fq[fc.f0];
      const Real scale = geo.face_len[fc.f0] / re.ref_face_len[fc.f0];
      fd.faceH.setZero();
      Mat uin(m, nfn), uex(m, nfn);
      for (int s = 0; s < nfn; ++s)
      {
         uin.col(s) = conf0.row(re.face_nodes[fc.f0][s]).transpose();
      }
      if (!bc)
      {
         for (int s = 0; s < nfn; ++s)
         {
            uex.col(s) = f.elem(fc.e1)
                            .row(re.face_nodes[fc.f1][nfn - 1 - s])
                            .transpose();
         }
      }
      for (int q = 0; q < fq.wts.size(); ++q)
      {
         const State U = uin * fq.trace.col(q);
         State Uh;
         if (bc)
         {
            const Vec2 x = mesh->map_point(fc.e0, fq.pts.col(q));
            Uh = ghost_state(*bc, U, n, x, t);
         }
         else { Uh = uex * fq.trace.col(q); }
         const Real lam = law.wave_speed(U, Uh, n);
         const State H = lax_friedrichs(law, U, Uh, n, lam);
         const Real wq = fq.wts[q] * scale;
         for (int s = 0; s < nfn; ++s)
         {
            fd.faceH.col(s) += wq * fq.trace(s, q) * H;
         }
      }
   }
   return out;
}

Mat Discretization::target_weak_residual(const StateField &f, Real t) const
{
   return target_weak_residual(f, face_stage(f, t));
}

Mat Discretization::target_weak_residual(
   const StateField &f, const std::vector<FaceData> &faces) const
{
   const RefElem &re = ops.ref;
   const int m = law.ncomp, nq = int(re.qw.size());
   Mat r = Mat::Zero(f.N, f.E * m);

#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      auto conf = f.elem(e);
      auto re_block = r.middleCols(e * m, m);
      const Mat2 &adj = mesh->adjJ[e];
      // volume term: sum_q w_q (grad_ref phi * adj) F_q^T
      for (int q = 0; q < nq; ++q)
      {
         const State uq = conf.transpose() * re.phi.col(q);
         const Flux fq = law.flux(uq);
         Eigen::Matrix<Real, Eigen::Dynamic, 2> A(f.N, 2);
         A.col(0) = re.dphi[0].col(q) * adj(0, 0) +
                    re.dphi[1].col(q) * adj(1, 0);
         A.col(1) = re.dphi[0].col(q) * adj(0, 1) +
                    re.dphi[1].col(q) * adj(1, 1);
         re_block += re.qw[q] * A * fq.transpose();
      }
      // face terms gathered with the side-dependent sign
      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh->face_of(e, k);
         const Face &fc = mesh->faces[g];
         const FaceData &fd = faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         for (int s = 0; s < re.nfn; ++s)
         {
            if (owner)
            {
               re_block.row(re.face_nodes[k][s]) -=
                  fd.faceH.col(s).transpose();
            }
            else
            {
               const int s1 = mesh->dim == 1 ? s : re.nfn - 1 - s;
               re_block.row(re.face_nodes[k][s1]) +=
                  fd.faceH.col(s).transpose();
            }
         }
      }
   }
   return r;
}

Mat Discretization::nodal_time_derivatives(const StateField &f, Real t) const
{
   return nodal_time_derivatives(f, face_stage(f, t));
}

Mat Discretization::nodal_time_derivatives(
   const StateField &f, const std::vector<FaceData> &faces) const
{
   Mat r = target_weak_residual(f, faces);
#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      Mat block = r.middleCols(e * law.ncomp, law.ncomp);
      ops.mass_solve(e, block);
      r.middleCols(e * law.ncomp, law.ncomp) = block;
   }
   return r;
}

void Discretization::low_volume_terms(const StateField &f, int e, Mat &lowvol,
                                      Vec *twod, Mat *Pij, Mat *Pji) const
{
   const RefElem &re = ops.ref;
   const GeomOps &geo = ops.at(e);
   const int m = law.ncomp;
   auto conf = f.elem(e);
   lowvol.setZero(f.N, m);
   const int np = int(re.pairs.size());
   if (twod) { twod->resize(np); }
   if (Pij) { Pij->resize(m, np); }
   if (Pji) { Pji->resize(m, np); }
   for (int p = 0; p < np; ++p)
   {
      const auto [i, j] = re.pairs[p];
      const State ui = conf.row(i).transpose();
      const State uj = conf.row(j).transpose();
      const Vec2 cij(geo.ctilde[0](i, j), geo.ctilde[1](i, j));
      const Vec2 cji(geo.ctilde[0](j, i), geo.ctilde[1](j, i));
      const Real aij = cij.norm(), aji = cji.norm();
      Real d = 0.0;
      if (aij > 0.0)
      {
         d = std::max(d, aij * law.wave_speed(ui, uj, cij / aij));
      }
      if (aji > 0.0)
      {
         d = std::max(d, aji * law.wave_speed(uj, ui, cji / aji));
      }
      const Flux dF = law.flux(uj) - law.flux(ui);
      const State flow_i = d * (uj - ui) - dF * cij;
      const State flow_j = -d * (uj - ui) + dF * cji;
      lowvol.row(i) += flow_i.transpose();
      lowvol.row(j) += flow_j.transpose();
      if (twod) { (*twod)[p] = 2.0 * d; }
      // P_ij = 2 d ubar_ij = d (u_i + u_j) - (F_j - F_i) c_ij
      if (Pij) { Pij->col(p) = d * (ui + uj) - dF * cij; }
      if (Pji) { Pji->col(p) = d * (ui + uj) + dF * cji; }
   }
}

Vec Discretization::pair_dissipation(const StateField &f, int e) const
{
   Mat lowvol;
   Vec twod;
   low_volume_terms(f, e, lowvol, &twod, nullptr, nullptr);
   return twod;
}

void Discretization::face_low_terms(const StateField &f,
                                    const std::vector<FaceData> &faces,
                                    Mat &acc) const
{
   const RefElem &re = ops.ref;
   const int m = law.ncomp;
#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      auto conf = f.elem(e);
      auto block = acc.middleCols(e * m, m);
      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh->face_of(e, k);
         const Face &fc = mesh->faces[g];
         const FaceData &fd = faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         for (int s = 0; s < re.nfn; ++s)
         {
            const int slocal =
               owner || mesh->dim == 1 ? s : re.nfn - 1 - s;
            const int i = re.face_nodes[k][slocal];
            // low face term: P - 2 d u_i (identical formula on both sides)
            block.row(i) += (fd.P.col(s) -
                             2.0 * fd.d[s] * conf.row(i).transpose())
                               .transpose();
         }
      }
   }
}

Mat Discretization::low_order_rhs(const StateField &f, Real t) const
{
   const std::vector<FaceData> faces = face_stage(f, t);
   const int m = law.ncomp;
   Mat r = Mat::Zero(f.N, f.E * m);
#ifdef _OPENMP
   #pragma omp parallel for schedule(static)
#endif
   for (int e = 0; e < f.E; ++e)
   {
      Mat lowvol;
      low_volume_terms(f, e, lowvol, nullptr, nullptr, nullptr);
      r.middleCols(e * m, m) = lowvol;
   }
   face_low_terms(f, faces, r);
   return r;
}

Real Discretization::max_idp_timestep(const StateField &f, Real t) const
{
   const std::vector<FaceData> faces = face_stage(f, t);
   const RefElem &re = ops.ref;
   Real bound = std::numeric_limits<Real>::infinity();
   for (int e = 0; e < f.E; ++e)
   {
      Vec denom = Vec::Zero(f.N);
      Mat lowvol;
      Vec twod;
      low_volume_terms(f, e, lowvol, &twod, nullptr, nullptr);
      for (int p = 0; p < int(re.pairs.size()); ++p)
      {
         denom[re.pairs[p].first] += 0.5 * twod[p];
         denom[re.pairs[p].second] += 0.5 * twod[p];
      }
      for (int k = 0; k < re.nf; ++k)
      {
         const int g = mesh->face_of(e, k);
         const Face &fc = mesh->faces[g];
         const bool owner = fc.e0 == e && fc.f0 == k;
         for (int s = 0; s < re.nfn; ++s)
         {
            const int slocal =
               owner || mesh->dim == 1 ? s : re.nfn - 1 - s;
            denom[re.face_nodes[k][slocal]] += faces[g].d[s];
         }
      }
      const Real mi = ops.at(e).mi;
      for (int i = 0; i < f.N; ++i)
      {
         if (denom[i] > 0.0) { bound = std::min(bound, mi / (2 * denom[i])); }
      }
   }
   return bound;
}

Mat Discretization::rhs(const StateField &f, Real t, Scheme scheme) const
{
   switch (scheme)
   {
      case Scheme::DG:
      {
         Mat udot = nodal_time_derivatives(f, t);
         for (int e = 0; e < f.E; ++e)
         {
            udot.middleCols(e * law.ncomp, law.ncomp) *= ops.at(e).mi;
         }
         return udot;
      }
      case Scheme::LO: return low_order_rhs(f, t);
      default: return mcl_rhs(*this, f, t);
   }
}

} // namespace bdg
