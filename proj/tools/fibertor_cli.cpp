// fibertor: list | compute | sweep | verify.
// Exit codes: 0 ok, 1 computation error, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fibertor/sweep.hpp"
#include "fibertor/verify.hpp"

using namespace fibertor;

namespace {

constexpr int kOk = 0;
constexpr int kComputationError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KnotArgs {
  std::string knot;
  std::string knot_file;
};

FiberedKnot resolve_knot(const KnotArgs& a) {
  if (!a.knot.empty() && !a.knot_file.empty()) throw UsageError("give either --knot or --knot-file, not both");
  if (!a.knot_file.empty()) return knot_from_json(read_json_file(a.knot_file));
  if (a.knot.empty()) throw UsageError("a knot is required (--knot NAME or --knot-file PATH)");
  return find_knot(a.knot);
}

Tolerance tolerance_from(std::optional<double> rank_tol, std::optional<double> unit_tol) {
  Tolerance t;
  if (rank_tol) t.rank = *rank_tol;
  if (unit_tol) t.unit_eigenvalue = *unit_tol;
  return t;
}

std::string format_eigenvalues(const std::vector<cplx>& v) {
  std::string s;
  for (const auto& l : v) s += (s.empty() ? "" : "; ") + format_complex_compact(l);
  return s;
}

int cmd_list(bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const auto& e : catalog()) {
      json j{{"name", e.name}, {"methods", e.methods}};
      j["genus"] = e.genus ? json(e.genus) : json("p,q dependent");
      if (e.knot) j["definition"] = knot_to_json(*e.knot);
      arr.push_back(std::move(j));
    }
    std::cout << arr.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : catalog()) {
    std::string methods;
    for (const auto& m : e.methods) methods += (methods.empty() ? "" : ",") + m;
    std::cout << e.name << " genus=" << (e.genus ? std::to_string(e.genus) : std::string("(p-1)(q-1)/2"))
              << " methods=" << methods << "\n";
  }
  return kOk;
}

struct ComputeArgs {
  KnotArgs knot;
  std::string x;
  std::string holonomy;
  std::string rep_file;
  std::string method = "cohomology";
  std::string branch = "principal";
  std::string torus;
  std::string format = "text";
  std::optional<double> tol, unit_tol;
  bool unitary = false;
};

void print_report(const std::string& knot, const std::optional<Point3>& x, const TorsionReport& r,
                  const std::string& format) {
  if (format == "json") {
    json j = report_to_json(r);
    j["knot"] = knot;
    if (x) j["character"] = {to_json((*x)[0]), to_json((*x)[1]), to_json((*x)[2])};
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "knot: " << knot << "\n";
  if (x)
    std::cout << "character: " << format_complex_compact((*x)[0]) << ", " << format_complex_compact((*x)[1]) << ", "
              << format_complex_compact((*x)[2]) << "\n";
  std::cout << "method: " << to_string(r.method) << "\n"
            << "torsion: " << format_complex_compact(r.torsion) << "\n"
            << "epsilon0: " << r.epsilon0 << "\n";
  if (r.method != Method::ClosedForm) {
    std::cout << "eigenvalues: " << format_eigenvalues(r.eigenvalues) << "\n"
              << "unit_eigenvalue_gap: " << format_number(r.unit_eigenvalue_gap) << "\n";
  }
  if (r.jacobian_eigenvalues) std::cout << "jacobian_eigenvalues: " << format_eigenvalues(*r.jacobian_eigenvalues) << "\n";
}

int cmd_compute(const ComputeArgs& a) {
  if (a.format != "text" && a.format != "json") throw UsageError("--format must be text or json for compute");
  const Tolerance tol = tolerance_from(a.tol, a.unit_tol);

  if (a.knot.knot == "torus") {
    if (a.torus.empty()) throw UsageError("the torus entry needs --torus p,q,a,b");
    int p = 0, q = 0, ca = 0, cb = 0;
    char tail = 0;
    if (std::sscanf(a.torus.c_str(), "%d,%d,%d,%d%c", &p, &q, &ca, &cb, &tail) != 4)
      throw UsageError("--torus expects four integers p,q,a,b");
    TorsionReport r;
    r.method = Method::ClosedForm;
    r.torsion = torus_closed_form(p, q, ca, cb);
    print_report("torus(" + std::to_string(p) + "," + std::to_string(q) + ")", std::nullopt, r, a.format);
    return kOk;
  }
  if (!a.torus.empty()) throw UsageError("--torus only applies to the torus entry");

  const FiberedKnot k = resolve_knot(a.knot);
  const int sources = !a.x.empty() + !a.holonomy.empty() + !a.rep_file.empty();
  if (sources != 1) throw UsageError("give exactly one of --x, --holonomy, --rep-file");
  if (a.method != "cohomology" && a.method != "jacobian") throw UsageError("--method must be cohomology or jacobian");
  if (a.branch != "principal" && a.branch != "negated") throw UsageError("--branch must be principal or negated");

  LiftOptions lo;
  lo.tol = tol;
  Representation rep;
  std::optional<Point3> x;
  if (!a.holonomy.empty()) {
    if (a.holonomy != "plus" && a.holonomy != "minus") throw UsageError("--holonomy must be plus or minus");
    if (k.name != "figure_eight") throw UsageError("--holonomy is defined for figure_eight only");
    rep = holonomy_representation(a.holonomy == "plus" ? 1 : -1, lo);
    x = character_of(rep);
  } else if (!a.rep_file.empty()) {
    rep = representation_from_json(k, read_json_file(a.rep_file));
    if (k.genus == 1) x = character_of(rep);
  } else {
    x = parse_point(a.x);
    if (a.method == "jacobian") {
      print_report(k.name, x, jacobian_torsion(k, *x, tol), a.format);
      return kOk;
    }
    rep = lift_character_to_rep(k, *x, a.branch == "negated" ? LiftBranch::Negated : LiftBranch::Principal, lo);
  }
  if (a.unitary) rep = conjugate_into_su2(rep);
  const TorsionReport r = a.method == "jacobian" ? jacobian_torsion(k, *x, tol) : main_theorem_torsion(k, rep, tol);
  print_report(k.name, x, r, a.format);
  return kOk;
}

struct SweepArgs {
  KnotArgs knot;
  std::string grid;
  std::string out;
  std::string format = "csv";
  std::string branch = "principal";
  std::optional<double> tol, unit_tol;
  bool unitary = false;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json for sweep");
  if (a.grid.empty()) throw UsageError("sweep needs --grid, e.g. x1=-0.9:1.9:20");
  const FiberedKnot k = resolve_knot(a.knot);
  SweepOptions opt;
  opt.tol = tolerance_from(a.tol, a.unit_tol);
  opt.unitary = a.unitary;
  opt.branch = a.branch == "negated" ? LiftBranch::Negated : LiftBranch::Principal;
  // everything is computed before the output file is touched
  const RunReport report = run_sweep(k, parse_grid(a.grid), opt);
  const std::string text = a.format == "csv" ? sweep_csv(report) : sweep_json(report);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot write '" + a.out + "'");
    f << text;
    if (!f) fail(ErrorCode::IoError, "write to '" + a.out + "' failed");
  }
  std::cerr << report.rows.size() << " points, " << report.failures() << " failed\n";
  return kOk;
}

struct VerifyArgs {
  std::string filter;
  std::uint64_t seed = 20240601;
  bool inject_fault = false;
  std::string format = "text";
};

int cmd_verify(const VerifyArgs& a) {
  if (a.format != "text" && a.format != "json") throw UsageError("--format must be text or json for verify");
  VerifyOptions opt;
  opt.seed = a.seed;
  opt.filter = a.filter;
  if (a.inject_fault) opt.perturbation = 1e-3;
  const auto results = run_checks(opt);
  if (results.empty()) throw UsageError("--filter '" + a.filter + "' matches no check");
  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    if (a.format == "json") {
      arr.push_back({{"id", r.id}, {"criterion", r.criterion}, {"pass", r.pass}, {"detail", r.detail},
                     {"seconds", r.seconds}});
    } else {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " [criterion " << r.criterion << "] " << r.detail << " ("
                << secs << " s)\n";
    }
  }
  if (a.format == "json")
    std::cout << arr.dump(2) << "\n";
  else
    std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? kOk : kComputationError;
}

void add_knot_options(CLI::App* cmd, KnotArgs& k) {
  cmd->add_option("--knot,knot", k.knot, "catalog knot name (may also be given positionally)");
  cmd->add_option("--knot-file", k.knot_file, "knot definition JSON file");
}

void add_tolerance_options(CLI::App* cmd, std::optional<double>& tol, std::optional<double>& unit_tol) {
  cmd->add_option("--tol", tol, "relative singular-value threshold for numerical rank (default 1e-9)");
  cmd->add_option("--unit-tol", unit_tol, "|lambda - 1| threshold for the unit eigenvalue (default 1e-6)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-determined twisted torsion of fibered knots from their monodromy"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list catalog knots");
  list->add_flag("--json", list_json, "machine-readable output");

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "torsion at one representation");
  add_knot_options(compute, ca.knot);
  compute->add_option("--x", ca.x, "character x1,x2,x3 (complex allowed, e.g. 1.5+0.5i)");
  compute->add_option("--holonomy", ca.holonomy, "figure-eight holonomy lift: plus or minus");
  compute->add_option("--rep-file", ca.rep_file, "representation JSON file");
  compute->add_option("--method", ca.method, "cohomology (default) or jacobian");
  compute->add_option("--branch", ca.branch, "lift branch: principal (default) or negated");
  compute->add_option("--torus", ca.torus, "p,q,a,b for the torus closed form");
  compute->add_option("--format", ca.format, "text (default) or json");
  compute->add_flag("--su2", ca.unitary, "conjugate the lift into SU(2) before computing");
  add_tolerance_options(compute, ca.tol, ca.unit_tol);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "torsion along the fixed locus over a grid in x1");
  add_knot_options(sweep, sa.knot);
  sweep->add_option("--grid", sa.grid, "x1=start:stop:count[;x1_im=start:stop:count]");
  sweep->add_option("--out", sa.out, "output file (default stdout)");
  sweep->add_option("--format", sa.format, "csv (default) or json");
  sweep->add_option("--branch", sa.branch, "lift branch: principal (default) or negated");
  sweep->add_flag("--su2", sa.unitary, "conjugate each lift into SU(2)");
  add_tolerance_options(sweep, sa.tol, sa.unit_tol);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--filter", va.filter, "run only checks whose id contains this text");
  verify->add_option("--seed", va.seed, "seed for sampled checks (default 20240601)");
  verify->add_option("--format", va.format, "text (default) or json");
  verify->add_flag("--inject-fault", va.inject_fault, "test mode: perturb every checked torsion value by 1e-3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() == 0) return kOk;
    std::cerr << app.help();
    return kUsageError;
  }

  try {
    if (*list) return cmd_list(list_json);
    if (*compute) return cmd_compute(ca);
    if (*sweep) return cmd_sweep(sa);
    if (*verify) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool usage = e.code() == ErrorCode::ParseError || e.code() == ErrorCode::EmptyGrid ||
                       e.code() == ErrorCode::UnknownKnot;
    return usage ? kUsageError : kComputationError;
  }
  return kUsageError;
}
