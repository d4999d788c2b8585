#include "bdg/mesh.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

namespace bdg
{

namespace
{

// local face -> corner vertices, canonical CCW direction
void face_corners(ElemKind kind, int f, int &a, int &b)
{
   if (kind == ElemKind::Tri)
   {
      const int ca[3] = { 0, 1, 2 }, cb[3] = { 1, 2, 0 };
      a = ca[f];
      b = cb[f];
   }
   else
   {
      const int ca[4] = { 0, 1, 2, 3 }, cb[4] = { 1, 2, 3, 0 };
      a = ca[f];
      b = cb[f];
   }
}

void compute_geometry(Mesh &m)
{
   const int ne = m.num_elements();
   m.J.resize(ne);
   m.adjJ.resize(ne);
   m.detJ.resize(ne);
   for (int e = 0; e < ne; ++e)
   {
      Mat2 J;
      if (m.kind == ElemKind::Line)
      {
         const Real h = m.elem_vertex(e, 1)[0] - m.elem_vertex(e, 0)[0];
         J << h, 0, 0, 1;
      }
      else
      {
         const Vec2 v0 = m.elem_vertex(e, 0);
         J.col(0) = m.elem_vertex(e, 1) - v0;
         J.col(1) = m.elem_vertex(e, m.kind == ElemKind::Tri ? 2 : 3) - v0;
         if (m.kind == ElemKind::Quad)
         {
            const Vec2 gap =
               m.elem_vertex(e, 2) - (v0 + J.col(0) + J.col(1));
            if (gap.norm() > 1e-12 * (J.col(0).norm() + J.col(1).norm()))
            {
               throw ConfigError("mesh: non-affine quadrilateral element");
            }
         }
      }
      const Real det = J.determinant();
      if (det <= 0.0)
      {
         throw ConfigError("mesh: element with non-positive area");
      }
      m.J[e] = J;
      m.detJ[e] = det;
      m.adjJ[e] << J(1, 1), -J(0, 1), -J(1, 0), J(0, 0);
   }
   m.uniform = true;
   for (int e = 1; e < ne && m.uniform; ++e)
   {
      m.uniform = (m.J[e] - m.J[0]).cwiseAbs().maxCoeff() <=
                  1e-13 * m.J[0].cwiseAbs().maxCoeff();
   }
}

Vec2 face_midpoint(const Mesh &m, int e, int f)
{
   int a, b;
   face_corners(m.kind, f, a, b);
   return 0.5 * (m.elem_vertex(e, a) + m.elem_vertex(e, b));
}

/// Matches element edges into interior faces; unmatched edges are passed to
/// `on_boundary(e, f)`. Returns via m.faces / m.face_of.
void connect_faces(Mesh &m, const std::function<void(int, int)> &on_boundary)
{
   const int nf = elem_num_faces(m.kind);
   m.face_of = Eigen::MatrixXi::Constant(m.num_elements(), nf, -1);
   std::map<std::pair<int, int>, std::pair<int, int>> open;
   for (int e = 0; e < m.num_elements(); ++e)
   {
      for (int f = 0; f < nf; ++f)
      {
         int a, b;
         face_corners(m.kind, f, a, b);
         const int va = m.elems(a, e), vb = m.elems(b, e);
         const auto key = std::minmax(va, vb);
         const auto it = open.find(key);
         if (it == open.end())
         {
            open[key] = { e, f };
            continue;
         }
         const auto [e0, f0] = it->second;
         open.erase(it);
         int a0, b0;
         face_corners(m.kind, f0, a0, b0);
         if (m.elems(a0, e0) != vb || m.elems(b0, e0) != va)
         {
            throw ConfigError("mesh: inconsistent element orientation");
         }
         Face fc;
         fc.e0 = e0;
         fc.f0 = f0;
         fc.e1 = e;
         fc.f1 = f;
         m.face_of(e0, f0) = int(m.faces.size());
         m.face_of(e, f) = int(m.faces.size());
         m.faces.push_back(fc);
      }
   }
   std::vector<std::pair<int, int>> leftovers(open.size());
   std::transform(open.begin(), open.end(), leftovers.begin(),
                  [](const auto &kv) { return kv.second; });
   // deterministic order regardless of map internals
   std::sort(leftovers.begin(), leftovers.end());
   for (const auto &[e, f] : leftovers) { on_boundary(e, f); }
}

void add_boundary_face(Mesh &m, int e, int f, int tag)
{
   Face fc;
   fc.e0 = e;
   fc.f0 = f;
   fc.tag = tag;
   m.face_of(e, f) = int(m.faces.size());
   m.faces.push_back(fc);
}

void add_periodic_face(Mesh &m, int e0, int f0, int e1, int f1,
                       const Vec2 &offset)
{
   Face fc;
   fc.e0 = e0;
   fc.f0 = f0;
   fc.e1 = e1;
   fc.f1 = f1;
   fc.periodic = true;
   fc.offset = offset;
   m.face_of(e0, f0) = int(m.faces.size());
   m.face_of(e1, f1) = int(m.faces.size());
   m.faces.push_back(fc);
}

int side_tag(const QuadBoundary &bc, const Mesh &m, int e, int f,
             const Vec2 &lo, const Vec2 &hi)
{
   const Vec2 mid = face_midpoint(m, e, f);
   if (bc.retag)
   {
      const int t = bc.retag(mid);
      if (t >= 0) { return t; }
   }
   const Real tol = 1e-10 * (hi - lo).norm();
   if (std::abs(mid[1] - lo[1]) < tol) { return bc.bottom; }
   if (std::abs(mid[0] - hi[0]) < tol) { return bc.right; }
   if (std::abs(mid[1] - hi[1]) < tol) { return bc.top; }
   if (std::abs(mid[0] - lo[0]) < tol) { return bc.left; }
   throw ConfigError("mesh: boundary face not on any box side");
}

} // namespace

Mesh build_line_mesh(Real x0, Real x1, int n, bool periodic, int tag_left,
                     int tag_right)
{
   if (n < 1 || x1 <= x0) { throw ConfigError("build_line_mesh: bad input"); }
   Mesh m;
   m.kind = ElemKind::Line;
   m.dim = 1;
   m.nve = 2;
   m.vertices = Mat::Zero(2, n + 1);
   for (int i = 0; i <= n; ++i)
   {
      m.vertices(0, i) = x0 + (x1 - x0) * Real(i) / n;
   }
   m.elems.resize(2, n);
   for (int e = 0; e < n; ++e)
   {
      m.elems(0, e) = e;
      m.elems(1, e) = e + 1;
   }
   m.face_of = Eigen::MatrixXi::Constant(n, 2, -1);
   for (int e = 0; e + 1 < n; ++e)
   {
      Face fc;
      fc.e0 = e;
      fc.f0 = 1;
      fc.e1 = e + 1;
      fc.f1 = 0;
      m.face_of(e, 1) = int(m.faces.size());
      m.face_of(e + 1, 0) = int(m.faces.size());
      m.faces.push_back(fc);
   }
   if (periodic)
   {
      Face fc;
      fc.e0 = n - 1;
      fc.f0 = 1;
      fc.e1 = 0;
      fc.f1 = 0;
      fc.periodic = true;
      fc.offset = Vec2(x0 - x1, 0);
      m.face_of(n - 1, 1) = int(m.faces.size());
      m.face_of(0, 0) = int(m.faces.size());
      m.faces.push_back(fc);
   }
   else
   {
      Face fl;
      fl.e0 = 0;
      fl.f0 = 0;
      fl.tag = tag_left;
      m.face_of(0, 0) = int(m.faces.size());
      m.faces.push_back(fl);
      Face fr;
      fr.e0 = n - 1;
      fr.f0 = 1;
      fr.tag = tag_right;
      m.face_of(n - 1, 1) = int(m.faces.size());
      m.faces.push_back(fr);
   }
   compute_geometry(m);
   return m;
}

Mesh build_quad_mesh(const Vec2 &lo, const Vec2 &hi, int nx, int ny,
                     const QuadBoundary &bc)
{
   if (nx < 1 || ny < 1 || hi[0] <= lo[0] || hi[1] <= lo[1])
   {
      throw ConfigError("build_quad_mesh: bad input");
   }
   Mesh m;
   m.kind = ElemKind::Quad;
   m.dim = 2;
   m.nve = 4;
   m.vertices.resize(2, (nx + 1) * (ny + 1));
   for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
      {
         m.vertices.col(j * (nx + 1) + i) =
            Vec2(lo[0] + (hi[0] - lo[0]) * Real(i) / nx,
                 lo[1] + (hi[1] - lo[1]) * Real(j) / ny);
      }
   m.elems.resize(4, nx * ny);
   for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
      {
         const int e = j * nx + i, v = j * (nx + 1) + i;
         m.elems(0, e) = v;
         m.elems(1, e) = v + 1;
         m.elems(2, e) = v + nx + 2;
         m.elems(3, e) = v + nx + 1;
      }
   connect_faces(m, [&](int e, int f)
   {
      const int i = e % nx, j = e / nx;
      if (bc.periodic_x && f == 1 && i == nx - 1)
      {
         add_periodic_face(m, e, 1, j * nx, 3, Vec2(lo[0] - hi[0], 0));
         return;
      }
      if (bc.periodic_x && f == 3 && i == 0) { return; } // partner adds it
      if (bc.periodic_y && f == 2 && j == ny - 1)
      {
         add_periodic_face(m, e, 2, i, 0, Vec2(0, lo[1] - hi[1]));
         return;
      }
      if (bc.periodic_y && f == 0 && j == 0) { return; }
      add_boundary_face(m, e, f, side_tag(bc, m, e, f, lo, hi));
   });
   compute_geometry(m);
   return m;
}

Mesh build_tri_mesh(const Mat &vertices, const Eigen::MatrixXi &tris,
                    const std::vector<std::array<int, 3>> &boundary)
{
   Mesh m;
   m.kind = ElemKind::Tri;
   m.dim = 2;
   m.nve = 3;
   m.vertices = vertices;
   m.elems = tris;
   std::map<std::pair<int, int>, int> seg_tag;
   for (const auto &s : boundary)
   {
      if (!seg_tag.emplace(std::minmax(s[0], s[1]), s[2]).second)
      {
         throw ConfigError("mesh: duplicate boundary segment");
      }
   }
   std::size_t used = 0;
   connect_faces(m, [&](int e, int f)
   {
      int a, b;
      face_corners(m.kind, f, a, b);
      const auto it = seg_tag.find(std::minmax(m.elems(a, e), m.elems(b, e)));
      if (it == seg_tag.end())
      {
         throw ConfigError("mesh: boundary edge without a tagged segment");
      }
      ++used;
      add_boundary_face(m, e, f, it->second);
   });
   if (used != seg_tag.size())
   {
      throw ConfigError("mesh: boundary segment does not match any edge");
   }
   compute_geometry(m);
   return m;
}

Mesh build_structured_tri_mesh(const Vec2 &lo, const Vec2 &hi, int nx, int ny,
                               const QuadBoundary &bc,
                               const std::function<Vec2(const Vec2 &)> &map)
{
   if (nx < 1 || ny < 1 || ny % 2 != 0)
   {
      throw ConfigError("build_structured_tri_mesh: need nx >= 1 and even ny");
   }
   if (bc.periodic_x || bc.periodic_y)
   {
      throw ConfigError("build_structured_tri_mesh: periodic not supported");
   }
   Mat vertices(2, (nx + 1) * (ny + 1));
   for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
      {
         Vec2 v(lo[0] + (hi[0] - lo[0]) * Real(i) / nx,
                lo[1] + (hi[1] - lo[1]) * Real(j) / ny);
         if (map) { v = map(v); }
         vertices.col(j * (nx + 1) + i) = v;
      }
   Eigen::MatrixXi tris(3, 2 * nx * ny);
   int e = 0;
   for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
      {
         const int a = j * (nx + 1) + i, b = a + 1;
         const int d = a + nx + 1, c = d + 1;
         if (j < ny / 2) // '/' diagonal below the centerline, mirrored above
         {
            tris.col(e++) = Eigen::Vector3i(a, b, d);
            tris.col(e++) = Eigen::Vector3i(b, c, d);
         }
         else
         {
            tris.col(e++) = Eigen::Vector3i(a, b, c);
            tris.col(e++) = Eigen::Vector3i(a, c, d);
         }
      }
   // boundary segments of the structured grid
   std::vector<std::array<int, 3>> boundary;
   auto push = [&](int va, int vb, int side_tag_val)
   {
      int tag = side_tag_val;
      if (bc.retag)
      {
         const Vec2 mid = 0.5 * (vertices.col(va) + vertices.col(vb));
         const int t = bc.retag(mid);
         if (t >= 0) { tag = t; }
      }
      boundary.push_back({ va, vb, tag });
   };
   for (int i = 0; i < nx; ++i)
   {
      push(i, i + 1, bc.bottom);
      push(ny * (nx + 1) + i, ny * (nx + 1) + i + 1, bc.top);
   }
   for (int j = 0; j < ny; ++j)
   {
      push(j * (nx + 1), (j + 1) * (nx + 1), bc.left);
      push(j * (nx + 1) + nx, (j + 1) * (nx + 1) + nx, bc.right);
   }
   return build_tri_mesh(vertices, tris, boundary);
}

Mesh read_tri_mesh(std::istream &in)
{
   // strip comments, then read whitespace-separated tokens
   std::stringstream clean;
   std::string line;
   while (std::getline(in, line))
   {
      const auto pos = line.find('#');
      clean << line.substr(0, pos) << '\n';
   }
   int nv = 0, ne = 0, nb = 0;
   if (!(clean >> nv >> ne >> nb) || nv < 3 || ne < 1 || nb < 3)
   {
      throw ConfigError("read_tri_mesh: invalid header");
   }
   Mat vertices(2, nv);
   for (int i = 0; i < nv; ++i)
   {
      if (!(clean >> vertices(0, i) >> vertices(1, i)))
      {
         throw ConfigError("read_tri_mesh: truncated vertex list");
      }
   }
   Eigen::MatrixXi tris(3, ne);
   for (int e = 0; e < ne; ++e)
   {
      for (int k = 0; k < 3; ++k)
      {
         if (!(clean >> tris(k, e)) || tris(k, e) < 0 || tris(k, e) >= nv)
         {
            throw ConfigError("read_tri_mesh: invalid element list");
         }
      }
   }
   std::vector<std::array<int, 3>> boundary(nb);
   for (auto &s : boundary)
   {
      if (!(clean >> s[0] >> s[1] >> s[2]) || s[0] < 0 || s[0] >= nv ||
          s[1] < 0 || s[1] >= nv)
      {
         throw ConfigError("read_tri_mesh: invalid boundary list");
      }
   }
   return build_tri_mesh(vertices, tris, boundary);
}

} // namespace bdg
