#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdg/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bdg;

namespace
{

RunConfig parse(std::vector<std::string> args)
{
   args.insert(args.begin(), "bdg");
   std::vector<const char *> argv;
   for (const std::string &a : args) { argv.push_back(a.c_str()); }
   return parse_config(int(argv.size()), argv.data());
}

std::string slurp(const std::string &path)
{
   std::ifstream in(path, std::ios::binary);
   std::ostringstream os;
   os << in.rdbuf();
   return os.str();
}

std::string temp_path(const std::string &name)
{
   return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("command line parsing fills the run configuration")
{
   const RunConfig cfg =
      parse({"run", "--preset", "sod", "--scheme", "mcl", "--p", "3"});
   CHECK(cfg.command == "run");
   CHECK(cfg.preset == "sod");
   CHECK(cfg.scheme == Scheme::MCL);
   CHECK(cfg.p == 3);
   CHECK(cfg.resolution == -1); // preset default
   CHECK(cfg.dt == 0.0);
   CHECK(cfg.output_dir != "");

   const RunConfig conv = parse({"convergence", "--preset",
                                 "advect1d_smooth", "--scheme", "dg", "--p",
                                 "2", "--h", "48"});
   CHECK(conv.command == "convergence");
   CHECK(conv.scheme == Scheme::DG);
   CHECK(conv.resolution == 48);

   CHECK(parse({"verify"}).command == "verify");
}

TEST_CASE("malformed command lines are rejected")
{
   CHECK_THROWS_AS(parse({}), ConfigError);                    // no command
   CHECK_THROWS_AS(parse({"frobnicate"}), ConfigError);        // unknown
   CHECK_THROWS_AS(parse({"run", "--p", "-1"}), ConfigError);  // negative
   CHECK_THROWS_AS(parse({"run", "--h", "0"}), ConfigError);
   CHECK_THROWS_AS(parse({"run", "--dt", "-0.1"}), ConfigError);
   CHECK_THROWS_AS(parse({"run", "--p", "two"}), ConfigError);
   CHECK_THROWS_AS(parse({"run", "--bogus-flag", "1"}), ConfigError);
   CHECK_THROWS_AS(parse_scheme("upwind"), ConfigError);
}

TEST_CASE("json config files provide defaults that flags override")
{
   const std::string path = temp_path("bdg_cli_cfg.json");
   {
      std::ofstream out(path);
      out << R"({"preset": "burgers1d", "scheme": "lo", "p": 2,
                 "h": 96, "dt": 1e-3})";
   }
   const RunConfig cfg = parse({"run", "--config", path});
   CHECK(cfg.preset == "burgers1d");
   CHECK(cfg.scheme == Scheme::LO);
   CHECK(cfg.p == 2);
   CHECK(cfg.resolution == 96);
   CHECK(cfg.dt == doctest::Approx(1e-3));

   // explicit flags win over file keys
   const RunConfig mixed =
      parse({"run", "--config", path, "--scheme", "mcl", "--p", "1"});
   CHECK(mixed.scheme == Scheme::MCL);
   CHECK(mixed.p == 1);
   CHECK(mixed.preset == "burgers1d"); // still from the file

   // unknown keys are rejected
   {
      std::ofstream out(path);
      out << R"({"preset": "sod", "cfl": 0.5})";
   }
   CHECK_THROWS_AS(parse({"run", "--config", path}), ConfigError);

   // malformed json is rejected
   {
      std::ofstream out(path);
      out << "{preset: sod";
   }
   CHECK_THROWS_AS(parse({"run", "--config", path}), ConfigError);

   CHECK_THROWS_AS(parse({"run", "--config", temp_path("nonexistent.json")}),
                   ConfigError);
   std::remove(path.c_str());
}

TEST_CASE("error csv has the fixed layout and is byte deterministic")
{
   std::vector<ErrorRow> rows(2);
   rows[0] = {"advect1d_smooth", Scheme::DG, 1, 24, 96, 1.27e-2,
              std::numeric_limits<Real>::quiet_NaN()};
   rows[1] = {"advect1d_smooth", Scheme::DG, 1, 32, 128, 6.43e-3, 2.36};

   const std::string p1 = temp_path("bdg_csv_1.csv");
   const std::string p2 = temp_path("bdg_csv_2.csv");
   write_error_csv(rows, p1);
   write_error_csv(rows, p2);

   const std::string text = slurp(p1);
   CHECK(text == slurp(p2));
   CHECK(text == "preset,scheme,p,inv_h,dof,l1_error,eoc\n"
                 "advect1d_smooth,dg,1,24,96,1.27000e-02,\n"
                 "advect1d_smooth,dg,1,32,128,6.43000e-03,2.36000e+00\n");

   CHECK_THROWS_AS(write_error_csv(rows, "/nonexistent-dir/x.csv"),
                   ConfigError);
   std::remove(p1.c_str());
   std::remove(p2.c_str());
}

TEST_CASE("vtk writer emits one point per node and one cell per subcell")
{
   const std::string path = temp_path("bdg_vtk_test.vtk");

   // p = 1 quad: 4 points, 1 cell
   {
      const Mesh m = build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 1, 1, {});
      Discretization disc(m, make_burgers(2), 1,
                          {{0, {BoundaryRule::Type::Outflow, nullptr}}});
      StateField f = disc.make_field();
      f.data.setConstant(0.25);
      write_vtk(f, disc, path);
      const std::string text = slurp(path);
      CHECK(text.find("POINTS 4 double") != std::string::npos);
      CHECK(text.find("CELLS 1 5") != std::string::npos);
      CHECK(text.find("CELL_TYPES 1") != std::string::npos);
      CHECK(text.find("SCALARS u double 1") != std::string::npos);
      // constant field: every point datum equals the constant
      size_t pos = text.find("LOOKUP_TABLE default");
      std::istringstream is(text.substr(text.find('\n', pos) + 1));
      for (int i = 0; i < 4; ++i)
      {
         Real v = -1;
         is >> v;
         CHECK(v == 0.25);
      }
   }

   // p = 2 quad: 9 points, 4 subcells
   {
      const Mesh m = build_quad_mesh(Vec2(0, 0), Vec2(2, 2), 1, 1, {});
      Discretization disc(m, make_burgers(2), 2,
                          {{0, {BoundaryRule::Type::Outflow, nullptr}}});
      StateField f = disc.make_field();
      f.data.setZero();
      write_vtk(f, disc, path);
      const std::string text = slurp(path);
      CHECK(text.find("POINTS 9 double") != std::string::npos);
      CHECK(text.find("CELLS 4 20") != std::string::npos);
      CHECK(text.find("CELL_TYPES 4") != std::string::npos);
   }

   // euler fields add a derived pressure array
   {
      const Mesh m = build_quad_mesh(Vec2(0, 0), Vec2(1, 1), 2, 2, {});
      Discretization disc(m, make_euler(2), 1,
                          {{0, {BoundaryRule::Type::Outflow, nullptr}}});
      StateField f = disc.make_field();
      disc.sample_nodal(f, [](const Vec2 &)
      { return euler_state(1.0, Vec2(0, 0), 1.0); });
      write_vtk(f, disc, path);
      const std::string text = slurp(path);
      CHECK(text.find("SCALARS rho double 1") != std::string::npos);
      CHECK(text.find("SCALARS pressure double 1") != std::string::npos);
   }
   std::remove(path.c_str());
}
