#pragma once

// The acceptance suite as named, seeded checks. Each check compares a
// pipeline output with a closed formula or an independently computed
// quantity and reports the worst deviation seen.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fibertor/random_complex.hpp"
#include "fibertor/samples.hpp"

namespace fibertor {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  std::string filter;          // substring of the check id; empty runs all
  double perturbation = 0.0;   // fault injection: added to every torsion value checked
};

struct CheckResult {
  std::string id;
  int criterion = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckSpec {
  std::string id;
  int criterion;
  std::function<CheckResult(const VerifyOptions&)> run;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string fmt_cplx(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

inline double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// Greedy nearest matching; returns the worst pair distance (infinity on size mismatch).
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const cplx& p, const cplx& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

// Seed per check so filtering does not change what a check samples.
inline std::mt19937_64 check_rng(const VerifyOptions& o, const std::string& id) {
  return std::mt19937_64(o.seed ^ std::hash<std::string>{}(id));
}

inline Sl2Matrix diagonal_sl2(cplx l) {
  Mat2 m;
  m << l, 0, 0, 1.0 / l;
  return Sl2Matrix::checked(m);
}

inline std::vector<Representation> figure_eight_sample_reps(std::uint64_t seed, int real_count, int complex_count) {
  const FiberedKnot f = figure_eight();
  std::vector<Representation> reps;
  for (const auto& x : figure_eight_samples(real_count, complex_count, seed))
    for (auto branch : {LiftBranch::Principal, LiftBranch::Negated}) reps.push_back(lift_character_to_rep(f, x, branch));
  return reps;
}

struct Sample {
  FiberedKnot knot;
  Representation rep;
};

// Every genus-1 catalog sample: the trefoil SU(2) sweep, SL2(C) figure-eight
// locus points on both lift branches and the two holonomy lifts.
inline std::vector<Sample> genus_one_samples(std::uint64_t seed) {
  std::vector<Sample> out;
  for (double x : trefoil_su2_grid(20)) out.push_back({trefoil(), trefoil_su2_rep(x)});
  for (auto& rep : figure_eight_sample_reps(seed, 10, 10)) out.push_back({figure_eight(), std::move(rep)});
  for (int sign : {1, -1}) out.push_back({figure_eight(), holonomy_representation(sign)});
  return out;
}

inline CheckResult start_check(std::string id, int criterion) {
  CheckResult r;
  r.id = std::move(id);
  r.criterion = criterion;
  return r;
}

inline CheckResult finish(CheckResult r, bool pass, std::string detail) {
  r.pass = pass;
  r.detail = std::move(detail);
  return r;
}

}  // namespace detail

inline std::vector<CheckSpec> acceptance_checks() {
  using namespace detail;
  std::vector<CheckSpec> checks;

  checks.push_back({"trefoil_third", 1, [](const VerifyOptions& o) {
    CheckResult r = start_check("trefoil_third", 1);
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    int count = 0;
    bool unitary = true;
    for (double x : trefoil_su2_grid(24)) {
      const Representation rep = trefoil_su2_rep(x);
      for (const auto& g : rep.images()) unitary = unitary && g.is_special_unitary();
      worst = std::max(worst, std::abs(main_theorem_torsion(trefoil(), rep).torsion + o.perturbation + 1.0 / 3.0));
      ++count;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return finish(r, count >= 20 && unitary && worst <= 1e-9 && secs < 5.0,
                  std::to_string(count) + " SU(2) reps, max |T + 1/3| = " + fmt("%.3g", worst) + ", " +
                      fmt("%.3f", secs) + " s" + (unitary ? "" : ", non-unitary sample"));
  }});

  checks.push_back({"trefoil_eigenvalues", 2, [](const VerifyOptions&) {
    CheckResult r = start_check("trefoil_eigenvalues", 2);
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    double worst = 0.0;
    for (double x : trefoil_su2_grid(24))
      worst = std::max(worst, multiset_distance(eigenvalues(twisted_monodromy_on_H1(trefoil(), trefoil_su2_rep(x))),
                                                {1.0, w, std::conj(w)}));
    return finish(r, worst <= 1e-8, "24 reps, max eigenvalue distance to {1, w, w^2} = " + fmt("%.3g", worst));
  }});

  checks.push_back({"torus_crosscheck_23", 3, [](const VerifyOptions& o) {
    CheckResult r = start_check("torus_crosscheck_23", 3);
    const double closed = torus_closed_form(2, 3, 1, 1);
    double worst = 0.0;
    for (double x : trefoil_su2_grid(5))
      worst = std::max(worst, std::abs(main_theorem_torsion(trefoil(), trefoil_su2_rep(x)).torsion + o.perturbation - closed));
    const bool exact = closed == -1.0 / 3.0;
    return finish(r, exact && worst <= 1e-10,
                  "closed form " + fmt("%.17g", closed) + (exact ? " (= -1/3)" : " (!= -1/3)") +
                      ", max |pipeline - closed form| = " + fmt("%.3g", worst));
  }});

  checks.push_back({"fig8_formula", 4, [](const VerifyOptions& o) {
    CheckResult r = start_check("fig8_formula", 4);
    const FiberedKnot f = figure_eight();
    double worst_t = 0.0, worst_sq = 0.0;
    int real = 0, complex = 0;
    for (const auto& x : figure_eight_samples(12, 12, o.seed)) {
      (std::abs(x[0].imag()) > 0 ? complex : real)++;
      const cplx s = x[0] + x[1];
      const cplx i_gamma = x[0] * x[0] + x[1] * x[1] - x[0] - x[1] - 2.0;
      for (auto branch : {LiftBranch::Principal, LiftBranch::Negated}) {
        const cplx t = main_theorem_torsion(f, lift_character_to_rep(f, x, branch)).torsion + o.perturbation;
        worst_t = std::max(worst_t, rel(t, 1.0 / (3.0 - 2.0 * s)));
        worst_sq = std::max(worst_sq, rel(t * t, 1.0 / (17.0 + 4.0 * i_gamma)));
      }
    }
    return finish(r, real + complex >= 20 && real > 0 && complex > 0 && worst_t <= 1e-8 && worst_sq <= 1e-8,
                  std::to_string(real) + " real + " + std::to_string(complex) +
                      " complex points, both lifts; max rel |T - 1/(3-2s)| = " + fmt("%.3g", worst_t) +
                      ", max rel |T^2 - 1/(17+4I)| = " + fmt("%.3g", worst_sq));
  }});

  checks.push_back({"fig8_holonomy_fifth", 5, [](const VerifyOptions& o) {
    CheckResult r = start_check("fig8_holonomy_fifth", 5);
    const FiberedKnot f = figure_eight();
    double worst = 0.0;
    std::string observed;
    for (int sign : {1, -1}) {
      const cplx t = main_theorem_torsion(f, holonomy_representation(sign)).torsion + o.perturbation;
      worst = std::max(worst, std::abs(t - 0.2));
      observed += std::string(observed.empty() ? "" : ", ") + (sign > 0 ? "rho+ " : "rho- ") + fmt_cplx(t);
    }
    return finish(r, worst <= 1e-9, "target 1/5; observed " + observed + "; max deviation " + fmt("%.3g", worst));
  }});

  checks.push_back({"epsilon0_values", 6, [](const VerifyOptions&) {
    CheckResult r = start_check("epsilon0_values", 6);
    const int t = epsilon0(trefoil()), f = epsilon0(figure_eight());
    return finish(r, t == 1 && f == -1, "trefoil " + std::to_string(t) + ", figure_eight " + std::to_string(f));
  }});

  checks.push_back({"cohomology_dims", 7, [](const VerifyOptions& o) {
    CheckResult r = start_check("cohomology_dims", 7);
    auto rng = check_rng(o, "cohomology_dims");
    std::normal_distribution<double> nd(0.0, 1.0);
    const GroupPresentation torus = GroupPresentation::parse({"m", "l"}, {"m l M L"});
    const GroupPresentation free2{{"a", "b"}, {}};
    int bad = 0, total = 0;
    const auto expect = [&](const std::vector<Eigen::Index>& got, const std::vector<Eigen::Index>& want) {
      ++total;
      if (got != want) ++bad;
    };
    for (int k = 0; k < 10; ++k) {
      const Representation hyp(Flavor::SL2C, {diagonal_sl2(cplx(nd(rng), nd(rng)) + 2.0),
                                              diagonal_sl2(cplx(nd(rng), nd(rng)) + 2.0)});
      expect(twisted_cohomology_dims(torus, hyp.conjugated(random_sl2(rng))), {1, 2, 1});
      const Representation fr(Flavor::SL2C, {random_sl2(rng), random_sl2(rng)});
      const auto d = twisted_cohomology_dims(free2, fr);
      expect({d[0], d[1]}, {0, 3});
    }
    for (double x : trefoil_su2_grid(5)) expect(twisted_cohomology_dims(trefoil().presentation(), trefoil_su2_rep(x)), {0, 1, 1});
    const FiberedKnot f = figure_eight();
    for (const auto& rep : figure_eight_sample_reps(o.seed, 3, 3)) expect(twisted_cohomology_dims(f.presentation(), rep), {0, 1, 1});
    return finish(r, bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " dimension vectors as expected");
  }});

  checks.push_back({"torsion_core_basis_change", 8, [](const VerifyOptions& o) {
    CheckResult r = start_check("torsion_core_basis_change", 8);
    auto rng = check_rng(o, "torsion_core_basis_change");
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      auto c = random_complex(rng);
      randomize_homology_bases(c, rng);
      const HomologyData hd = homology(c);
      auto changed = c;
      cplx expected = 1.0;
      for (int i = 0; i <= c.top(); ++i) {
        const Matrix c_new = random_invertible(c.dim(i), rng, true);
        changed.set_reference_basis(i, c_new);
        cplx ratio = (c.reference_basis(i).inverse() * c_new).determinant();
        const Matrix& h_old = *c.homology_basis(i);
        if (h_old.cols() > 0) {
          // h_new = h_old R + boundaries, so [h_new / h_old] = det R.
          const Matrix mix = random_invertible(h_old.cols(), rng, true);
          Matrix h_new = h_old * mix;
          const Matrix& b = hd.degrees[i].boundaries;
          if (b.cols() > 0) h_new += b * detail::random_matrix(b.cols(), h_old.cols(), rng, true);
          changed.set_homology_basis(i, h_new);
          ratio /= mix.determinant();
        }
        expected *= (i % 2 == 0) ? ratio : 1.0 / ratio;
      }
      worst = std::max(worst, rel(torsion(changed) / torsion(c), expected));
    }
    return finish(r, worst <= 1e-8, "100 random complexes, max rel residual " + fmt("%.3g", worst));
  }});

  checks.push_back({"torsion_core_choice_independence", 8, [](const VerifyOptions& o) {
    CheckResult r = start_check("torsion_core_choice_independence", 8);
    auto rng = check_rng(o, "torsion_core_choice_independence");
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      auto c = random_complex(rng);
      randomize_homology_bases(c, rng);
      const cplx base = torsion(c);
      TorsionOptions opt;
      opt.randomize = &rng;
      for (int k = 0; k < 3; ++k) worst = std::max(worst, rel(torsion(c, opt), base));
    }
    return finish(r, worst <= 1e-8, "100 complexes x 3 random preimage/lift choices, max rel spread " + fmt("%.3g", worst));
  }});

  checks.push_back({"torsion_core_multiplicativity", 8, [](const VerifyOptions& o) {
    CheckResult r = start_check("torsion_core_multiplicativity", 8);
    auto rng = check_rng(o, "torsion_core_multiplicativity");
    double worst = 0.0;
    int sign_mismatch = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto ses = random_block_sequence(rng);
      const auto res = multiplicativity_check(ses);
      worst = std::max(worst, res.residual / std::max(1.0, std::abs(res.tor_mid)));
      const auto hs = [](const BasedChainComplex& c) { return homology(c).dims(); };
      const auto expected = multiplicativity_signs(ses.sub.dims(), ses.mid.dims(), ses.quot.dims(), hs(ses.sub),
                                                   hs(ses.mid), hs(ses.quot));
      if (expected.alpha != res.signs.alpha || expected.epsilon != res.signs.epsilon) ++sign_mismatch;
    }
    return finish(r, worst <= 1e-7 && sign_mismatch == 0,
                  "50 block-sum sequences, max rel residual " + fmt("%.3g", worst) + ", sign mismatches " +
                      std::to_string(sign_mismatch));
  }});

  checks.push_back({"wang_identities", 9, [](const VerifyOptions& o) {
    CheckResult r = start_check("wang_identities", 9);
    double worst_prod = 0.0, worst_eps = 0.0;
    int count = 0;
    for (const auto& s : genus_one_samples(o.seed)) {
      const TorsionReport t = main_theorem_torsion(s.knot, s.rep);
      const cplx w = wang_sequence_torsion(s.knot, s.rep);
      cplx prod = 1.0;
      for (const auto& l : eigenvalues_excluding_one(twisted_monodromy_on_H1(s.knot, s.rep))) prod *= 1.0 - l;
      worst_prod = std::max(worst_prod, rel(w, prod));
      worst_eps = std::max(worst_eps, std::abs(w * (t.torsion + o.perturbation) + static_cast<double>(t.epsilon0)));
      ++count;
    }
    return finish(r, worst_prod <= 1e-8 && worst_eps <= 1e-8,
                  std::to_string(count) + " reps; max rel |W - prod(1-l)| = " + fmt("%.3g", worst_prod) +
                      ", max |W T + eps0| = " + fmt("%.3g", worst_eps));
  }});

  checks.push_back({"dual_oracle", 10, [](const VerifyOptions& o) {
    CheckResult r = start_check("dual_oracle", 10);
    double worst = 0.0;
    int count = 0;
    for (const auto& s : genus_one_samples(o.seed)) {
      const auto coh = eigenvalues(twisted_monodromy_on_H1(s.knot, s.rep));
      const auto jac = eigenvalues(trace_jacobian(*s.knot.trace_map, character_of(s.rep)));
      worst = std::max(worst, multiset_distance(coh, jac));
      ++count;
    }
    return finish(r, worst <= 1e-8, std::to_string(count) + " reps, max eigenvalue distance " + fmt("%.3g", worst));
  }});

  checks.push_back({"conjugation_invariance", 11, [](const VerifyOptions& o) {
    CheckResult r = start_check("conjugation_invariance", 11);
    auto rng = check_rng(o, "conjugation_invariance");
    double worst = 0.0;
    int count = 0;
    for (const auto& s : genus_one_samples(o.seed)) {
      const cplx base = main_theorem_torsion(s.knot, s.rep).torsion;
      for (int k = 0; k < 10; ++k) {
        const cplx moved = main_theorem_torsion(s.knot, s.rep.conjugated(random_conjugator(s.rep, rng))).torsion;
        worst = std::max(worst, rel(moved + o.perturbation, base));
        ++count;
      }
    }
    return finish(r, worst <= 1e-8, std::to_string(count) + " conjugations, max rel change " + fmt("%.3g", worst));
  }});

  return checks;
}

inline std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : acceptance_checks()) ids.push_back(c.id);
  return ids;
}

// Runs one check, converting library errors into failures.
inline CheckResult run_check(const CheckSpec& spec, const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = spec.run(opt);
  } catch (const Error& e) {
    r = detail::finish(detail::start_check(spec.id, spec.criterion), false, std::string("error ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<CheckResult> run_checks(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (const auto& spec : acceptance_checks())
    if (opt.filter.empty() || spec.id.find(opt.filter) != std::string::npos) out.push_back(run_check(spec, opt));
  return out;
}

}  // namespace fibertor
