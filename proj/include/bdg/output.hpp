#pragma once

#include "bdg/benchmarks.hpp"

#include <string>
#include <vector>

namespace bdg
{

/// Parsed command-line (and optional JSON file) configuration of one
/// driver invocation.
struct RunConfig
{
   std::string command;         ///< run | convergence | verify
   std::string preset;
   Scheme scheme = Scheme::MCL;
   int p = -1;                  ///< -1: preset default
   int resolution = -1;         ///< elements per unit length; -1: default
   std::string mesh_file;       ///< triangle mesh file (overrides resolution)
   Real dt = 0;                 ///< 0: preset default
   Real t_final = 0;            ///< 0: preset default
   std::string output_dir;      ///< default $BDG_OUTPUT_DIR or "."
   int dump_every = 0;          ///< write a VTK dump every N steps (0: off)
   int threads = 0;             ///< OpenMP threads (0: runtime default)
};

/// Parses `argv` into a RunConfig. A JSON file passed via --config
/// provides defaults that explicit command-line flags override; unknown
/// JSON keys are rejected. Throws ConfigError on malformed input and
/// HelpRequested when --help is asked for.
struct HelpRequested
{
   std::string message;
};

RunConfig parse_config(int argc, const char *const *argv);

Scheme parse_scheme(const std::string &name);
std::string scheme_name(Scheme s);

/// One row of a convergence table.
struct ErrorRow
{
   std::string preset;
   Scheme scheme = Scheme::DG;
   int p = 1;
   int inv_h = 0;     ///< reciprocal mesh size
   long dof = 0;      ///< scalar degrees of freedom
   Real l1_error = 0;
   Real eoc = 0;      ///< NaN on the coarsest mesh
};

/// Writes rows as CSV with the fixed header
/// `preset,scheme,p,inv_h,dof,l1_error,eoc`; floating-point values in
/// scientific notation with 6 significant digits. Output isordered as
/// written in the order given and is byte-deterministic.
void write_error_csv(const std::vector<ErrorRow> &rows,
                     const std::string &path);

/// Writes a legacy-text VTK unstructured grid: one point per DG node
/// (duplicated at element interfaces), one cell per Bezier subcell, and
/// point data holding the nodal coefficients of each conserved component
/// plus a derived quantity (pressure for Euler, velocity magnitude for
/// shallow water).
void write_vtk(const StateField &f, const Discretization &disc,
               const std::string &path);

} // namespace bdg
