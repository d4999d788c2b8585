// Long-running acceptance companion: double Mach reflection on the
// coarse mesh with MCL-Q1, checked for invariant-set violations (positive
// density and internal energy) at every step.
#include "bdg/benchmarks.hpp"

#include <cstdio>

using namespace bdg;

int main()
{
   const BenchmarkPreset &preset = get_preset("double_mach");
   bool ok = true;
   int steps = 0;
   Real min_rho = 1e300, min_e = 1e300;

   const StepObserver observer = [&](const BenchmarkRun &run, int)
   {
      ++steps;
      const ConservationLaw &law = run.disc->law;
      for (int e = 0; e < run.field.E && ok; ++e)
      {
         for (int i = 0; i < run.field.N; ++i)
         {
            const State u = run.field.elem(e).row(i).transpose();
            const Real rho = u(0);
            const Real ie = u(3) - 0.5 * u.segment(1, 2).squaredNorm() / rho;
            min_rho = std::min(min_rho, rho);
            min_e = std::min(min_e, ie);
            if (!law.in_invariant_set(u))
            {
               ok = false;
               break;
            }
         }
      }
   };

   try
   {
      run_benchmark(preset, Scheme::MCL, 1, preset.default_resolution, 0, 0,
                    observer);
   }
   catch (const std::exception &e)
   {
      std::printf("criterion 10 (double mach reflection): FAIL -- %s\n",
                  e.what());
      return 1;
   }

   std::printf("criterion 10 (double mach reflection): %s -- %d steps, "
               "min density %.3e, min internal energy %.3e\n",
               ok ? "PASS" : "FAIL", steps, min_rho, min_e);
   return ok ? 0 : 1;
}
