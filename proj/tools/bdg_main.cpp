#include "bdg/output.hpp"
#include "bdg/verify.hpp"

#include <omp.h>

#include <cstdio>
#include <filesystem>

using namespace bdg;

namespace
{

int run_command(const RunConfig &cfg)
{
   if (cfg.preset.empty())
   {
      throw ConfigError("run requires --preset");
   }
   const BenchmarkPreset &preset = get_preset(cfg.preset);
   const int p = cfg.p >= 0 ? cfg.p : preset.default_p;
   const int res =
      cfg.resolution > 0 ? cfg.resolution : preset.default_resolution;

   std::filesystem::create_directories(cfg.output_dir);
   const std::string stem = cfg.output_dir + "/" + cfg.preset + "_" +
                            scheme_name(cfg.scheme) + "_p" +
                            std::to_string(p);

   StepObserver observer;
   if (cfg.dump_every > 0)
   {
      observer = [&](const BenchmarkRun &run, int step)
      {
         if (step % cfg.dump_every == 0)
         {
            write_vtk(run.field, *run.disc,
                      stem + "_step" + std::to_string(step) + ".vtk");
         }
      };
   }

   BenchmarkRun run = run_benchmark(preset, cfg.scheme, p, res, cfg.dt,
                                    cfg.t_final, observer);

   std::printf("preset %s, scheme %s, p %d, 1/h %d, %d elements\n",
               cfg.preset.c_str(), scheme_name(cfg.scheme).c_str(), p, res,
               run.field.E);
   if (preset.steady)
   {
      std::printf("steady marching: %s after %zu steps, final residual "
                  "%.6e\n",
                  run.converged ? "converged" : "not converged",
                  run.history.size(),
                  run.history.empty() ? 0.0 : run.history.back());
   }
   else
   {
      std::printf("advanced to t = %.6f\n", run.t);
   }
   if (preset.exact)
   {
      const Vec err = l1_error(*run.disc, run.field, preset.exact, run.t);
      for (int c = 0; c < err.size(); ++c)
      {
         std::printf("mean L1 error, component %d: %.6e\n", c, err(c));
      }
   }
   Real mn = 1e300, mx = -1e300;
   for (int e = 0; e < run.field.E; ++e)
   {
      mn = std::min(mn, Real(run.field.elem(e).col(0).minCoeff()));
      mx = std::max(mx, Real(run.field.elem(e).col(0).maxCoeff()));
   }
   std::printf("component 0 coefficient range: [%.6e, %.6e]\n", mn, mx);

   if (cfg.dump_every > 0)
   {
      write_vtk(run.field, *run.disc, stem + "_final.vtk");
      std::printf("wrote %s\n", (stem + "_final.vtk").c_str());
   }
   return 0;
}

int convergence_command(const RunConfig &cfg)
{
   if (cfg.preset.empty())
   {
      throw ConfigError("convergence requires --preset");
   }
   const BenchmarkPreset &preset = get_preset(cfg.preset);
   if (preset.table_resolutions.empty())
   {
      throw ConfigError("preset " + cfg.preset +
                        " has no convergence table");
   }
   const int p = cfg.p >= 0 ? cfg.p : preset.default_p;

   std::vector<Real> errors;
   std::vector<ErrorRow> rows;
   for (int res : preset.table_resolutions)
   {
      BenchmarkRun run =
         run_benchmark(preset, cfg.scheme, p, res, cfg.dt, cfg.t_final);
      const Real err =
         l1_error(*run.disc, run.field, preset.exact, run.t)(0);
      errors.push_back(err);
      ErrorRow row;
      row.preset = cfg.preset;
      row.scheme = cfg.scheme;
      row.p = p;
      row.inv_h = res;
      row.dof = long(run.field.E) * run.field.N;
      row.l1_error = err;
      row.eoc = std::numeric_limits<Real>::quiet_NaN();
      rows.push_back(row);
   }
   const std::vector<Real> rates = eoc(errors, preset.table_resolutions);
   for (size_t k = 0; k < rates.size(); ++k)
   {
      rows[k + 1].eoc = rates[k];
   }

   std::printf("%6s %12s %8s\n", "1/h", "L1 error", "EOC");
   for (const ErrorRow &r : rows)
   {
      if (std::isnan(r.eoc))
      {
         std::printf("%6d %12.5e %8s\n", r.inv_h, r.l1_error, "");
      }
      else
      {
         std::printf("%6d %12.5e %8.2f\n", r.inv_h, r.l1_error, r.eoc);
      }
   }

   std::filesystem::create_directories(cfg.output_dir);
   const std::string path = cfg.output_dir + "/" + cfg.preset + "_" +
                            scheme_name(cfg.scheme) + "_p" +
                            std::to_string(p) + ".csv";
   write_error_csv(rows, path);
   std::printf("wrote %s\n", path.c_str());
   return 0;
}

int verify_command()
{
   bool ok = true;
   for (const SuiteResult &r : run_property_suites())
   {
      std::printf("%-45s %7ld checks  %s\n", r.name.c_str(), r.checks,
                  r.passed() ? "PASS" : "FAIL");
      if (!r.passed())
      {
         std::printf("   first failure: %s\n", r.detail.c_str());
         ok = false;
      }
   }
   return ok ? 0 : 2;
}

} // namespace

int main(int argc, char **argv)
{
   try
   {
      RunConfig cfg;
      try
      {
         cfg = parse_config(argc, argv);
      }
      catch (const HelpRequested &h)
      {
         std::printf("%s", h.message.c_str());
         return 0;
      }
      if (cfg.threads > 0) { omp_set_num_threads(cfg.threads); }

      if (cfg.command == "run") { return run_command(cfg); }
      if (cfg.command == "convergence") { return convergence_command(cfg); }
      return verify_command();
   }
   catch (const ConfigError &e)
   {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
   }
   catch (const InvariantViolation &e)
   {
      std::fprintf(stderr, "numeric failure: %s\n", e.what());
      return 2;
   }
   catch (const std::exception &e)
   {
      std::fprintf(stderr, "numeric failure: %s\n", e.what());
      return 2;
   }
}
