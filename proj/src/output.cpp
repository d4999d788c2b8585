#include "bdg/output.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace bdg
{

Scheme parse_scheme(const std::string &name)
{
   if (name == "dg") { return Scheme::DG; }
   if (name == "lo") { return Scheme::LO; }
   if (name == "mcl") { return Scheme::MCL; }
   throw ConfigError("unknown scheme: " + name);
}

std::string scheme_name(Scheme s)
{
   switch (s)
   {
      case Scheme::DG: return "dg";
      case Scheme::LO: return "lo";
      default: return "mcl";
   }
}

RunConfig parse_config(int argc, const char *const *argv)
{
   RunConfig cfg;
   if (const char *env = std::getenv("BDG_OUTPUT_DIR")) { cfg.output_dir = env; }
   if (cfg.output_dir.empty()) { cfg.output_dir = "."; }

   CLI::App app{"Bernstein DG conservation-law solver"};
   app.set_help_flag("--help", "print usage");
   app.require_subcommand(1);

   std::string scheme = "mcl", config_file;
   auto add_common = [&](CLI::App *cmd)
   {
      cmd->set_help_flag("--help", "print usage");
      cmd->add_option("--preset", cfg.preset, "benchmark preset name");
      cmd->add_option("--scheme", scheme, "spatial scheme: dg, lo or mcl");
      cmd->add_option("--p", cfg.p, "polynomial degree")
         ->check(CLI::NonNegativeNumber);
      cmd->add_option("--h", cfg.resolution,
                      "mesh resolution (elements per unit length)")
         ->check(CLI::PositiveNumber);
      cmd->add_option("--mesh", cfg.mesh_file, "triangle mesh file");
      cmd->add_option("--dt", cfg.dt, "time step override")
         ->check(CLI::PositiveNumber);
      cmd->add_option("--t-final", cfg.t_final, "final time override")
         ->check(CLI::PositiveNumber);
      cmd->add_option("--output-dir", cfg.output_dir, "output directory");
      cmd->add_option("--dump-every", cfg.dump_every,
                      "VTK dump cadence in steps (0 disables)")
         ->check(CLI::NonNegativeNumber);
      cmd->add_option("--threads", cfg.threads, "simulation thread count")
         ->check(CLI::NonNegativeNumber);
      cmd->add_option("--config", config_file, "JSON config file");
   };

   CLI::App *run = app.add_subcommand("run", "run one benchmark");
   CLI::App *conv = app.add_subcommand(
      "convergence", "sweep the preset's table resolutions, emit CSV");
   CLI::App *verify = app.add_subcommand("verify", "run the property suites");
   add_common(run);
   add_common(conv);
   add_common(verify);

   try
   {
      app.parse(argc, argv);
   }
   catch (const CLI::CallForHelp &e)
   {
      throw HelpRequested{app.help()};
   }
   catch (const CLI::ParseError &e)
   {
      throw ConfigError(e.what());
   }

   CLI::App *cmd = app.get_subcommands().front();
   cfg.command = cmd->get_name();

   if (!config_file.empty())
   {
      std::ifstream in(config_file);
      if (!in) { throw ConfigError("cannot open config file " + config_file); }
      nlohmann::json j;
      try
      {
         in >> j;
      }
      catch (const nlohmann::json::exception &e)
      {
         throw ConfigError(std::string("malformed JSON config: ") + e.what());
      }
      // command-line flags win over file keys
      auto unset = [&](const std::string &flag)
      { return cmd->count("--" + flag) == 0; };
      for (auto it = j.begin(); it != j.end(); ++it)
      {
         const std::string &key = it.key();
         try
         {
            if (key == "preset")
            {
               if (unset(key)) { cfg.preset = it->get<std::string>(); }
            }
            else if (key == "scheme")
            {
               if (unset(key)) { scheme = it->get<std::string>(); }
            }
            else if (key == "p")
            {
               if (unset(key)) { cfg.p = it->get<int>(); }
            }
            else if (key == "h")
            {
               if (unset(key)) { cfg.resolution = it->get<int>(); }
            }
            else if (key == "mesh")
            {
               if (unset(key)) { cfg.mesh_file = it->get<std::string>(); }
            }
            else if (key == "dt")
            {
               if (unset(key)) { cfg.dt = it->get<Real>(); }
            }
            else if (key == "t-final")
            {
               if (unset("t-final")) { cfg.t_final = it->get<Real>(); }
            }
            else if (key == "output-dir")
            {
               if (unset("output-dir")) { cfg.output_dir = it->get<std::string>(); }
            }
            else if (key == "dump-every")
            {
               if (unset("dump-every")) { cfg.dump_every = it->get<int>(); }
            }
            else if (key == "threads")
            {
               if (unset(key)) { cfg.threads = it->get<int>(); }
            }
            else
            {
               throw ConfigError("unknown config key: " + key);
            }
         }
         catch (const nlohmann::json::exception &e)
         {
            throw ConfigError("bad value for config key " + key + ": " +
                              e.what());
         }
      }
   }

   cfg.scheme = parse_scheme(scheme);
   if (cfg.dt < 0 || cfg.t_final < 0)
   {
      throw ConfigError("overrides must be positive");
   }
   if (cfg.dump_every < 0 || cfg.threads < 0 || cfg.p < -1)
   {
      throw ConfigError("malformed negative option");
   }
   return cfg;
}

void write_error_csv(const std::vector<ErrorRow> &rows,
                     const std::string &path)
{
   std::FILE *f = std::fopen(path.c_str(), "w");
   if (!f) { throw ConfigError("cannot open " + path + " for writing"); }
   std::fputs("preset,scheme,p,inv_h,dof,l1_error,eoc\n", f);
   for (const ErrorRow &r : rows)
   {
      std::fprintf(f, "%s,%s,%d,%d,%ld,%.5e,", r.preset.c_str(),
                   scheme_name(r.scheme).c_str(), r.p, r.inv_h, r.dof,
                   r.l1_error);
      if (std::isnan(r.eoc)) { std::fputs("\n", f); }
      else { std::fprintf(f, "%.5e\n", r.eoc); }
   }
   if (std::fclose(f) != 0)
   {
      throw ConfigError("failed to write " + path);
   }
}

void write_vtk(const StateField &f, const Discretization &disc,
               const std::string &path)
{
   const Mesh &mesh = *disc.mesh;
   const RefElem &re = disc.ops.ref;
   const ConservationLaw &law = disc.law;

   std::FILE *out = std::fopen(path.c_str(), "w");
   if (!out) { throw ConfigError("cannot open " + path + " for writing"); }

   std::fputs("# vtk DataFile Version 3.0\n", out);
   std::fputs("bdg field dump\nASCII\nDATASET UNSTRUCTURED_GRID\n", out);

   const int E = f.E, N = re.N;
   std::fprintf(out, "POINTS %d double\n", E * N);
   for (int e = 0; e < E; ++e)
   {
      for (int i = 0; i < N; ++i)
      {
         const Vec2 x = mesh.map_point(e, re.nodes.col(i));
         std::fprintf(out, "%.12g %.12g 0\n", x.x(), x.y());
      }
   }

   const int nsub = int(re.subcells.rows());
   const int nv = int(re.subcells.cols());
   std::fprintf(out, "CELLS %d %d\n", E * nsub, E * nsub * (nv + 1));
   for (int e = 0; e < E; ++e)
   {
      for (int s = 0; s < nsub; ++s)
      {
         std::fprintf(out, "%d", nv);
         for (int v = 0; v < nv; ++v)
         {
            std::fprintf(out, " %d", e * N + re.subcells(s, v));
         }
         std::fputs("\n", out);
      }
   }
   const int cell_type = nv == 2 ? 3 : nv == 3 ? 5 : 9;
   std::fprintf(out, "CELL_TYPES %d\n", E * nsub);
   for (int c = 0; c < E * nsub; ++c)
   {
      std::fprintf(out, "%d\n", cell_type);
   }

   std::vector<std::string> names;
   if (law.scalar()) { names = {"u"}; }
   else if (law.kind == LawKind::Euler)
   {
      names = law.dim == 1 ? std::vector<std::string>{"rho", "mom_x", "energy"}
                           : std::vector<std::string>{"rho", "mom_x", "mom_y",
                                                      "energy"};
   }
   else { names = {"depth", "discharge_x", "discharge_y"}; }

   std::fprintf(out, "POINT_DATA %d\n", E * N);
   auto scalars = [&](const std::string &name)
   {
      std::fprintf(out, "SCALARS %s double 1\nLOOKUP_TABLE default\n",
                   name.c_str());
   };
   for (int c = 0; c < f.m; ++c)
   {
      scalars(names[size_t(c)]);
      for (int e = 0; e < E; ++e)
      {
         const Mat u = f.elem(e);
         for (int i = 0; i < N; ++i)
         {
            std::fprintf(out, "%.12g\n", u(i, c));
         }
      }
   }
   if (law.kind == LawKind::Euler)
   {
      scalars("pressure");
      for (int e = 0; e < E; ++e)
      {
         const Mat u = f.elem(e);
         for (int i = 0; i < N; ++i)
         {
            std::fprintf(out, "%.12g\n", law.pressure(u.row(i).transpose()));
         }
      }
   }
   else if (law.kind == LawKind::ShallowWater)
   {
      scalars("velocity_magnitude");
      for (int e = 0; e < E; ++e)
      {
         const Mat u = f.elem(e);
         for (int i = 0; i < N; ++i)
         {
            const Real H = u(i, 0);
            const Real q = u.row(i).tail(2).norm();
            std::fprintf(out, "%.12g\n", H > 0 ? q / H : 0.0);
         }
      }
   }

   if (std::fclose(out) != 0)
   {
      throw ConfigError("failed to write " + path);
   }
}

} // namespace bdg
