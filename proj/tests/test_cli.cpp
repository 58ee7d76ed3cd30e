#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fibertor/sweep.hpp"
#include "fibertor/verify.hpp"

using namespace fibertor;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidInput;
}

struct CliRun {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(FIBERTOR_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(FIBERTOR_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("fibertor_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

// Column `name` of every data row of a CSV document.
std::vector<std::string> csv_column(const std::string& csv, const std::string& name) {
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) header.push_back(c);
  }
  const auto idx = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  std::vector<std::string> out;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (line.back() == ',') cells.push_back("");
    out.push_back(idx < cells.size() ? cells[idx] : "");
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- parsing

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1.5"), cplx(1.5, 0));
  EXPECT_EQ(parse_complex("-2i"), cplx(0, -2));
  EXPECT_EQ(parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(parse_complex("1.5+0.25i"), cplx(1.5, 0.25));
  EXPECT_EQ(parse_complex("3-i"), cplx(3, -1));
  EXPECT_EQ(parse_complex("-1e-3+2e+1i"), cplx(-1e-3, 20));
  EXPECT_EQ(parse_complex(" 2 + 3i "), cplx(2, 3));
  for (const char* bad : {"", "abc", "1+", "1.5x", "nan", "1+2j"})
    EXPECT_EQ(code_of([&] { parse_complex(bad); }), ErrorCode::ParseError) << bad;
}

TEST(ParseGrid, RangesAndErrors) {
  const Grid g = parse_grid("x1=-1:2:4;x1_im=0:1:2");
  ASSERT_EQ(g.size(), 8u);
  const auto pts = grid_points(g);
  EXPECT_EQ(pts.front(), cplx(-1, 0));
  EXPECT_EQ(pts[1], cplx(-1, 1));
  EXPECT_EQ(pts.back(), cplx(2, 1));
  EXPECT_EQ(grid_points(parse_grid("x1=0.5:9:1")), std::vector<cplx>{0.5});
  EXPECT_EQ(code_of([] { parse_grid("x1=0:1:0"); }), ErrorCode::EmptyGrid);
  EXPECT_EQ(code_of([] { parse_grid(""); }), ErrorCode::EmptyGrid);
  EXPECT_EQ(code_of([] { parse_grid("x2=0:1:3"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_grid("x1=0:1"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_grid("x1=0:inf:3"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_grid("x1=0:1:3;x1=0:1:3"); }), ErrorCode::ParseError);
}

// ---------------------------------------------------------------- JSON

TEST(Json, ComplexAndMatrixRoundTrip) {
  Matrix m(2, 3);
  m << cplx(1, 0), cplx(0, -2), cplx(0.5, 0.25), 3.0, cplx(-1, 1), 0.0;
  const json j = matrix_to_json(m);
  EXPECT_TRUE(j[0][0].is_number());
  EXPECT_TRUE(j[0][1].is_array());
  EXPECT_EQ(matrix_from_json(j, 2, 3), m);
  EXPECT_EQ(code_of([&] { matrix_from_json(j, 3, 2); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { scalar_from_json(json("x")); }), ErrorCode::ParseError);
}

TEST(Json, ComplexFixture) {
  // C_1 --2--> C_0: the degree-0 factor [2] is divided out. A bare C_0 with
  // homology basis (3) likewise gives 1/3.
  const json j = json::parse(R"({"dims": [1, 1], "boundaries": [[[2]]]})");
  const auto c = chain_complex_from_json(j);
  EXPECT_LT(std::abs(torsion(c) - 0.5), 1e-15);
  const auto back = chain_complex_from_json(chain_complex_to_json(c));
  EXPECT_EQ(back.dims(), c.dims());
  EXPECT_EQ(back.boundary(1), c.boundary(1));
  const json with_h = json::parse(R"({"dims": [1], "boundaries": [], "homology_bases": [[[3]]]})");
  EXPECT_LT(std::abs(torsion(chain_complex_from_json(with_h)) - 1.0 / 3.0), 1e-15);
  EXPECT_EQ(code_of([] { chain_complex_from_json(json::parse(R"({"dims": [1, 1], "boundaries": []})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { chain_complex_from_json(json::parse(R"({"dims": [1, 1, 1], "boundaries": [[[1]], [[1]]]})")); }),
            ErrorCode::NotAComplex);
}

TEST(Json, PresentationRoundTrip) {
  const json j = json::parse(R"({"generators": ["a", "b", "t"], "relators": ["T a t B A", "T b t B A B"]})");
  const auto p = presentation_from_json(j);
  EXPECT_EQ(p.relators.size(), 2u);
  EXPECT_EQ(presentation_to_json(p), j);
  EXPECT_EQ(code_of([] { presentation_from_json(json::parse(R"({"generators": ["a"], "relators": ["a c"]})")); }),
            ErrorCode::ParseError);
}

TEST(Json, KnotFilesMatchCatalog) {
  for (const auto& name : {"trefoil", "figure_eight"}) {
    const FiberedKnot file = knot_from_json(read_json_file(data(std::string(name) + ".json")));
    const FiberedKnot cat = find_knot(name);
    EXPECT_EQ(knot_to_json(file), knot_to_json(cat)) << name;
    EXPECT_EQ(epsilon0(file), epsilon0(cat));
  }
  const FiberedKnot bare = knot_from_json(read_json_file(data("figure_eight_no_trace_map.json")));
  EXPECT_FALSE(bare.trace_map.has_value());
  EXPECT_EQ(code_of([&] { jacobian_torsion(bare, {0.0, 0.0, 0.0}); }), ErrorCode::NoTraceMap);
  EXPECT_EQ(code_of([] { read_json_file("/nonexistent/knot.json"); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([] {
              knot_from_json(json::parse(R"({"name": "k", "fiber_generators": ["a", "b"], "monodromy": {"a": "a"}})"));
            }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              knot_from_json(json::parse(
                  R"({"name": "k", "genus": 2, "fiber_generators": ["a", "b"], "monodromy": {"a": "a b", "b": "b"}})"));
            }),
            ErrorCode::ParseError);
}

TEST(Json, RepresentationRoundTrip) {
  const auto rep = trefoil_su2_rep(0.4);
  const json j = representation_to_json(trefoil(), rep);
  EXPECT_EQ(j["flavor"], "SU2");
  const auto back = representation_from_json(trefoil(), j);
  for (int g = 0; g < 3; ++g) EXPECT_EQ(back.image(g).matrix(), rep.image(g).matrix());
  json missing = j;
  missing["images"].erase("t");
  EXPECT_EQ(code_of([&] { representation_from_json(trefoil(), missing); }), ErrorCode::ParseError);
}

TEST(Json, ReportFields) {
  const json j = report_to_json(main_theorem_torsion(trefoil(), trefoil_su2_rep(0.4)));
  for (const char* key : {"torsion_re", "torsion_im", "epsilon0", "eigenvalues", "method"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_NEAR(j["torsion_re"].get<double>(), -1.0 / 3.0, 1e-9);
  EXPECT_EQ(j["method"], "cohomology");
  EXPECT_EQ(j["eigenvalues"].size(), 2u);
}

// ---------------------------------------------------------------- sweep

TEST(Sweep, TrefoilConstancyAndStableBytes) {
  const Grid g = parse_grid("x1=-0.9:1.9:20");
  const auto a = run_sweep(trefoil(), g);
  ASSERT_EQ(a.rows.size(), 20u);
  for (const auto& row : a.rows) {
    ASSERT_TRUE(row.report) << row.message;
    EXPECT_NEAR(row.report->torsion.real(), -1.0 / 3.0, 1e-9);
  }
  EXPECT_EQ(sweep_csv(a), sweep_csv(run_sweep(trefoil(), g)));
  EXPECT_EQ(sweep_json(a), sweep_json(run_sweep(trefoil(), g)));
}

TEST(Sweep, FigureEightFormulaAndErrorRows) {
  const auto r = run_sweep(figure_eight(), parse_grid("x1=-3:4:15"));
  int ok = 0, failed = 0;
  for (const auto& row : r.rows) {
    if (!row.report) {
      ++failed;
      EXPECT_FALSE(row.error.empty());
      continue;
    }
    ++ok;
    const cplx s = (*row.point)[0] + (*row.point)[1];
    EXPECT_LT(std::abs(row.report->torsion - 1.0 / (3.0 - 2.0 * s)), 1e-8);
  }
  EXPECT_GE(ok, 12);
  EXPECT_EQ(static_cast<std::size_t>(failed), r.failures());
  // x1 = 1 has no finite locus point; x1 = 2 gives s = 4, a reducible character.
  const auto bad = run_sweep(figure_eight(), parse_grid("x1=1:2:2"));
  EXPECT_EQ(bad.rows[0].error, "NOT_FIXED_POINT");
  EXPECT_EQ(bad.rows[1].error, "REDUCIBLE_CHARACTER");
  const std::string csv = sweep_csv(bad);
  EXPECT_EQ(csv_column(csv, "error"), (std::vector<std::string>{"NOT_FIXED_POINT", "REDUCIBLE_CHARACTER"}));
  EXPECT_EQ(csv_column(csv, "torsion_re"), (std::vector<std::string>{"", ""}));
  EXPECT_EQ(csv.find("nan"), std::string::npos);
}

TEST(Sweep, NumberFormat) {
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(-1.0 / 3.0), "-0.333333333333333");
  EXPECT_EQ(format_complex_compact(cplx(0.5, -2)), "0.5-2i");
  EXPECT_EQ(format_complex_compact(cplx(1, 0)), "1+0i");
}

// --------------------------------------------------------------- verify

TEST(Verify, FilterAndIds) {
  const auto ids = check_ids();
  for (const char* id : {"trefoil_third", "fig8_holonomy_fifth", "torus_crosscheck_23"})
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
  VerifyOptions opt;
  opt.filter = "torsion_core";
  const auto results = run_checks(opt);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) {
    EXPECT_EQ(r.id.rfind("torsion_core", 0), 0u);
    EXPECT_TRUE(r.pass) << r.id << ": " << r.detail;
  }
}

TEST(Verify, InjectedPerturbationFails) {
  VerifyOptions opt;
  opt.filter = "trefoil_third";
  ASSERT_TRUE(run_checks(opt).at(0).pass);
  opt.perturbation = 1e-3;
  EXPECT_FALSE(run_checks(opt).at(0).pass);
}

// ------------------------------------------------------------------ CLI

TEST(Cli, ListAndUsage) {
  const CliRun list = run_cli("list");
  EXPECT_EQ(list.status, 0);
  EXPECT_NE(list.out.find("trefoil genus=1 methods=cohomology,jacobian"), std::string::npos);
  EXPECT_NE(list.out.find("figure_eight genus=1"), std::string::npos);
  const CliRun js = run_cli("list --json");
  EXPECT_EQ(js.status, 0);
  EXPECT_EQ(json::parse(js.out).size(), 3u);
  const CliRun bogus = run_cli("frobnicate");
  EXPECT_EQ(bogus.status, 2);
  EXPECT_NE(bogus.out.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("compute trefoil").status, 2);
  EXPECT_EQ(run_cli("compute trefoil --x 1,1,1 --holonomy plus").status, 2);
  EXPECT_EQ(run_cli("compute trefoil --x 1,one,1").status, 2);
  EXPECT_EQ(run_cli("compute figure_eight --holonomy sideways").status, 2);
  EXPECT_EQ(run_cli("compute unknot --x 1,1,1").status, 2);
}

TEST(Cli, Compute) {
  const CliRun t = run_cli("compute trefoil --x 1,1,1 --format json");
  ASSERT_EQ(t.status, 0) << t.out;
  const json j = json::parse(t.out);
  EXPECT_NEAR(j["torsion_re"].get<double>(), -1.0 / 3.0, 1e-9);
  EXPECT_EQ(j["epsilon0"], 1);

  const CliRun su = run_cli("compute --knot trefoil --x 0.5,0.5,0.5 --su2 --format json");
  ASSERT_EQ(su.status, 0) << su.out;
  EXPECT_NEAR(json::parse(su.out)["torsion_re"].get<double>(), -1.0 / 3.0, 1e-9);

  const CliRun red = run_cli("compute figure_eight --x 2,2,2");
  EXPECT_EQ(red.status, 1);
  EXPECT_NE(red.out.find("REDUCIBLE_CHARACTER"), std::string::npos);
  const CliRun red_j = run_cli("compute figure_eight --x 2,2,2 --method jacobian");
  EXPECT_EQ(red_j.status, 1);
  EXPECT_NE(red_j.out.find("REDUCIBLE_CHARACTER"), std::string::npos);

  const CliRun torus = run_cli("compute torus --torus 2,3,1,1 --format json");
  ASSERT_EQ(torus.status, 0) << torus.out;
  EXPECT_EQ(json::parse(torus.out)["torsion_re"].get<double>(), -1.0 / 3.0);
  const CliRun parity = run_cli("compute torus --torus 3,4,1,2");
  EXPECT_EQ(parity.status, 1);
  EXPECT_NE(parity.out.find("PARITY_MISMATCH"), std::string::npos);

  // figure-eight from a knot file at a complex locus point
  const Point3 x = figure_eight_locus_point(cplx(2.0, -1.0));
  char arg[256];
  std::snprintf(arg, sizeof arg, "%.17g%+.17gi,%.17g%+.17gi,%.17g%+.17gi", x[0].real(), x[0].imag(), x[1].real(),
                x[1].imag(), x[2].real(), x[2].imag());
  const CliRun f = run_cli("compute --knot-file " + data("figure_eight.json") + " --x '" + arg + "' --format json");
  ASSERT_EQ(f.status, 0) << f.out;
  const json fj = json::parse(f.out);
  const cplx expected = 1.0 / (3.0 - 2.0 * (x[0] + x[1]));
  EXPECT_LT(std::abs(cplx(fj["torsion_re"].get<double>(), fj["torsion_im"].get<double>()) - expected), 1e-8);

  const CliRun rep = run_cli("compute trefoil --rep-file " + data("trefoil_su2_rep.json") + " --format json");
  ASSERT_EQ(rep.status, 0) << rep.out;
  EXPECT_NEAR(json::parse(rep.out)["torsion_re"].get<double>(), -1.0 / 3.0, 1e-9);
}

TEST(Cli, HolonomyLiftRuns) {
  // The computed value is recorded, not asserted here; the 1/5 target is
  // acceptance criterion 5.
  for (const char* sign : {"plus", "minus"}) {
    const CliRun r = run_cli(std::string("compute figure_eight --holonomy ") + sign + " --format json");
    ASSERT_EQ(r.status, 0) << r.out;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["epsilon0"], -1);
    EXPECT_EQ(j["eigenvalues"].size(), 2u);
  }
}

TEST(Cli, SweepFilesAreByteStable) {
  const fs::path dir = scratch_dir();
  const std::string grid = "--grid 'x1=-0.9:1.9:20'";
  ASSERT_EQ(run_cli("sweep trefoil " + grid + " --out " + (dir / "a.csv").string()).status, 0);
  ASSERT_EQ(run_cli("sweep trefoil " + grid + " --out " + (dir / "b.csv").string()).status, 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  const auto tor = csv_column(a, "torsion_re");
  ASSERT_EQ(tor.size(), 20u);
  for (const auto& v : tor) EXPECT_NEAR(std::stod(v), -1.0 / 3.0, 1e-9);

  ASSERT_EQ(run_cli("sweep figure_eight --grid 'x1=-3:0.5:8' --format json --out " + (dir / "f.json").string()).status, 0);
  const json fj = json::parse(slurp(dir / "f.json"));
  ASSERT_EQ(fj["rows"].size(), 8u);
  for (const auto& row : fj["rows"]) {
    if (!row["error"].is_null()) continue;
    const cplx s(row["x1_re"].get<double>() + row["x2_re"].get<double>(), row["x1_im"].get<double>() + row["x2_im"].get<double>());
    EXPECT_LT(std::abs(cplx(row["torsion_re"].get<double>(), row["torsion_im"].get<double>()) - 1.0 / (3.0 - 2.0 * s)), 1e-8);
  }

  const CliRun empty = run_cli("sweep trefoil --grid 'x1=0:1:0' --out " + (dir / "empty.csv").string());
  EXPECT_EQ(empty.status, 2);
  EXPECT_NE(empty.out.find("EMPTY_GRID"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "empty.csv"));

  const CliRun unwritable = run_cli("sweep trefoil --grid 'x1=0:1:2' --out /nonexistent/dir/x.csv");
  EXPECT_EQ(unwritable.status, 1);
  EXPECT_NE(unwritable.out.find("IO_ERROR"), std::string::npos);

  const CliRun no_map = run_cli("sweep --knot-file " + data("figure_eight_no_trace_map.json") + " --grid 'x1=0:1:2'");
  EXPECT_EQ(no_map.status, 1);
  EXPECT_NE(no_map.out.find("NO_TRACE_MAP"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, VerifyFilterAndFaultInjection) {
  const CliRun core = run_cli("verify --filter torsion_core");
  EXPECT_EQ(core.status, 0) << core.out;
  EXPECT_NE(core.out.find("PASS torsion_core_basis_change"), std::string::npos);
  EXPECT_EQ(core.out.find("trefoil_third"), std::string::npos);
  const CliRun fault = run_cli("verify --filter trefoil_third --inject-fault");
  EXPECT_EQ(fault.status, 1);
  EXPECT_NE(fault.out.find("FAIL trefoil_third"), std::string::npos);
  EXPECT_EQ(run_cli("verify --filter no_such_check").status, 2);
}
