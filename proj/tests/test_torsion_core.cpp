#include <gtest/gtest.h>

#include <random>

#include "fibertor/random_complex.hpp"
#include "fibertor/torsion_core.hpp"

using namespace fibertor;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidInput;
}

// Independent route to [h'/h]: compare projections onto the orthogonal
// complement of B_i inside Z_i.
cplx homology_change_oracle(const BasedChainComplex& c, int i, const Matrix& h_new, const Matrix& h_old) {
  const auto hd = homology(c);
  const Matrix& harm = hd.degrees[i].harmonic;
  const Matrix p_old = harm.adjoint() * h_old;
  const Matrix p_new = harm.adjoint() * h_new;
  return (p_old.inverse() * p_new).determinant();
}

}  // namespace

TEST(ChangeOfBasis, Identity) {
  Basis b(mat({{1, 2, 0}, {0, 1, 3}, {1, 0, 1}}));
  EXPECT_NEAR(std::abs(change_of_basis_det(b, b) - 1.0), 0.0, 1e-12);
}

TEST(ChangeOfBasis, SwapAndScale) {
  Matrix m = mat({{1, 2, 0}, {0, 1, 3}, {1, 0, 1}});
  Matrix swapped = m;
  swapped.col(0).swap(swapped.col(1));
  Matrix doubled = m;
  doubled.col(0) *= 2.0;
  EXPECT_NEAR(std::abs(change_of_basis_det(Basis(swapped), Basis(m)) + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(change_of_basis_det(Basis(doubled), Basis(m)) - 2.0), 0.0, 1e-12);
}

TEST(ChangeOfBasis, Errors) {
  Basis good(Matrix::Identity(2, 2));
  Basis singular(mat({{1, 2}, {2, 4}}));
  Basis wrong(Matrix::Identity(3, 3));
  EXPECT_EQ(code_of([&] { change_of_basis_det(good, singular); }), ErrorCode::SingularBasis);
  EXPECT_EQ(code_of([&] { change_of_basis_det(good, wrong); }), ErrorCode::DimensionMismatch);
}

TEST(Homology, ZeroDifferential) {
  BasedChainComplex c({2, 3}, {Matrix::Zero(2, 3)});
  EXPECT_EQ(homology(c).dims(), (std::vector<Eigen::Index>{2, 3}));
}

TEST(Homology, MultiplicationByTwoIsAcyclic) {
  BasedChainComplex c({1, 1}, {mat({{2}})});
  EXPECT_EQ(homology(c).dims(), (std::vector<Eigen::Index>{0, 0}));
}

TEST(Homology, RejectsNonComplex) {
  EXPECT_EQ(code_of([] { BasedChainComplex({1, 1, 1}, {mat({{1}}), mat({{1}})}); }), ErrorCode::NotAComplex);
}

TEST(Torsion, IdentityBoundary) {
  BasedChainComplex c({1, 1}, {mat({{1}})});
  EXPECT_NEAR(std::abs(torsion(c) - 1.0), 0.0, 1e-14);
}

TEST(Torsion, MultiplicationByTwo) {
  // i = 0: [d_1(b^1)/c^0] = 2 with exponent -1; i = 1: [b^1/c^1] = 1.
  BasedChainComplex c({1, 1}, {mat({{2}})});
  EXPECT_NEAR(std::abs(torsion(c) - 0.5), 0.0, 1e-14);
}

TEST(Torsion, CochainNormalization) {
  // 0 -> C^0 --(3)--> C^1 -> 0 is the chain complex C_1 = C^0 -> C_0 = C^1.
  auto c = BasedChainComplex::from_cochain({1, 1}, {mat({{3}})});
  EXPECT_EQ(c.source_direction(), Direction::Cochain);
  EXPECT_NEAR(std::abs(torsion(c) - 1.0 / 3.0), 0.0, 1e-14);
}

TEST(Torsion, MissingHomologyBasis) {
  BasedChainComplex c({2}, {});
  EXPECT_EQ(code_of([&] { torsion(c); }), ErrorCode::MissingHomologyBasis);
}

TEST(Torsion, NonCycleHomologyBasis) {
  BasedChainComplex c({1, 2}, {mat({{1, 0}})});
  c.set_homology_basis(1, mat({{1}, {1}}));
  EXPECT_EQ(code_of([&] { torsion(c); }), ErrorCode::NotAHomologyBasis);
}

TEST(Torsion, BoundaryAsHomologyBasisIsRejected) {
  // C_1 = F^2 -> C_0 = F^2 with rank 1; H_0 is spanned by e2, and e1 is a boundary.
  BasedChainComplex c({2, 2}, {mat({{1, 0}, {0, 0}})});
  c.set_homology_basis(1, mat({{0}, {1}}));
  c.set_homology_basis(0, mat({{1}, {0}}));
  EXPECT_EQ(code_of([&] { torsion(c); }), ErrorCode::NotAHomologyBasis);
}

TEST(SignDetermined, SingleDegree) {
  BasedChainComplex c({1}, {});
  c.set_homology_basis(0, Matrix::Identity(1, 1));
  EXPECT_NEAR(std::abs(torsion(c) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sign_determined_torsion(c) + 1.0), 0.0, 1e-14);
}

TEST(SignDetermined, EmptyComplex) {
  BasedChainComplex c;
  EXPECT_EQ(sign_determined_torsion(c), cplx(1.0));
}

TEST(SignDetermined, AcyclicEqualsTorsionExactly) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = random_complex(rng);
    if (homology(c).dims() != std::vector<Eigen::Index>(c.length(), 0)) continue;
    EXPECT_EQ(sign_determined_torsion(c), torsion(c));
  }
}

TEST(MultiplicativitySigns, FiberedWangSetups) {
  // C' = fiber complex shifted up one degree, C = presentation complex of
  // the knot exterior, C'' = fiber complex; cohomological degrees 0..2.
  auto twisted = multiplicativity_signs({0, 3, 6}, {3, 9, 6}, {3, 6, 0}, {0, 0, 3}, {0, 1, 1}, {0, 3, 0});
  EXPECT_EQ(twisted.alpha, 1);
  EXPECT_EQ(twisted.epsilon, 0);
  auto real = multiplicativity_signs({0, 1, 2}, {1, 3, 2}, {1, 2, 0}, {0, 1, 2}, {1, 1, 0}, {1, 2, 0});
  EXPECT_EQ(real.alpha, 1);
  EXPECT_EQ(real.epsilon, 1);
}

TEST(MultiplicativitySigns, AllZero) {
  auto s = multiplicativity_signs({0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0});
  EXPECT_EQ(s.alpha, 0);
  EXPECT_EQ(s.epsilon, 0);
}

TEST(Multiplicativity, TrivialSubcomplex) {
  std::mt19937_64 rng(5);
  auto quot = random_complex(rng);
  randomize_homology_bases(quot, rng);
  std::vector<Eigen::Index> zero(quot.length(), 0);
  std::vector<Matrix> zbd;
  for (int i = 1; i <= quot.top(); ++i) zbd.push_back(Matrix(0, 0));
  ShortExactSequence ses{BasedChainComplex(zero, zbd), quot, quot, {}, {}};
  for (int i = 0; i <= quot.top(); ++i) {
    ses.inclusion.push_back(Matrix(quot.dim(i), 0));
    ses.projection.push_back(Matrix::Identity(quot.dim(i), quot.dim(i)));
  }
  auto r = multiplicativity_check(ses);
  EXPECT_LT(r.residual, 1e-12);
}

TEST(Multiplicativity, RejectsNonExact) {
  BasedChainComplex a({1}, {});
  a.set_homology_basis(0, Matrix::Identity(1, 1));
  BasedChainComplex mid({2}, {});
  mid.set_homology_basis(0, Matrix::Identity(2, 2));
  // projection kills the wrong summand
  ShortExactSequence ses{a, mid, a, {mat({{1}, {0}})}, {mat({{1, 0}})}};
  EXPECT_EQ(code_of([&] { multiplicativity_check(ses); }), ErrorCode::NotExact);
}

TEST(Multiplicativity, RejectsIncompatibleBases) {
  BasedChainComplex a({1}, {});
  a.set_homology_basis(0, Matrix::Identity(1, 1));
  BasedChainComplex mid({2}, {});
  mid.set_homology_basis(0, Matrix::Identity(2, 2));
  mid.set_reference_basis(0, mat({{2, 0}, {0, 1}}));
  ShortExactSequence ses{a, mid, a, {mat({{1}, {0}})}, {mat({{0, 1}})}};
  EXPECT_EQ(code_of([&] { multiplicativity_check(ses); }), ErrorCode::BasesIncompatible);
}

// ---- properties ---------------------------------------------------------

TEST(TorsionProperty, IndependentOfInternalChoices) {
  std::mt19937_64 rng(20240101);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_complex(rng);
    randomize_homology_bases(c, rng);
    const cplx base = torsion(c);
    for (int rep = 0; rep < 3; ++rep) {
      TorsionOptions opt;
      opt.randomize = &rng;
      const cplx other = torsion(c, opt);
      EXPECT_LE(std::abs(other - base), 1e-8 * std::max(1.0, std::abs(base))) << "trial " << trial;
    }
  }
}

TEST(TorsionProperty, BasisChangeFormula) {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_complex(rng);
    randomize_homology_bases(c, rng);
    const cplx before = torsion(c);
    auto changed = c;
    cplx expected = 1.0;
    for (int i = 0; i <= c.top(); ++i) {
      const Matrix c_new = random_invertible(c.dim(i), rng, true);
      changed.set_reference_basis(i, c_new);
      cplx ratio = change_of_basis_det(Basis(c_new), Basis(c.reference_basis(i)));
      const auto& h_old = *c.homology_basis(i);
      if (h_old.cols() > 0) {
        const auto hd = homology(c);
        Matrix h_new = hd.degrees[i].harmonic * random_invertible(h_old.cols(), rng, true);
        changed.set_homology_basis(i, h_new);
        ratio /= homology_change_oracle(c, i, h_new, h_old);
      }
      expected *= (i % 2 == 0) ? ratio : 1.0 / ratio;
    }
    const cplx after = torsion(changed);
    EXPECT_LE(std::abs(after / before - expected), 1e-8 * std::max(1.0, std::abs(expected))) << "trial " << trial;
  }
}

TEST(TorsionProperty, HomologyChangeDetAgreesWithOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = random_complex(rng);
    randomize_homology_bases(c, rng);
    auto other = c;
    randomize_homology_bases(other, rng);
    for (int i = 0; i <= c.top(); ++i) {
      const Matrix& a = *other.homology_basis(i);
      const Matrix& b = *c.homology_basis(i);
      if (a.cols() == 0) continue;
      EXPECT_LE(std::abs(homology_change_det(c, i, a, b) - homology_change_oracle(c, i, a, b)), 1e-8);
    }
  }
}

TEST(TorsionProperty, EulerCharacteristic) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_complex(rng);
    const auto h = homology(c).dims();
    long long chi_c = 0, chi_h = 0;
    for (int i = 0; i <= c.top(); ++i) {
      chi_c += (i % 2 ? -1 : 1) * c.dim(i);
      chi_h += (i % 2 ? -1 : 1) * h[i];
    }
    EXPECT_EQ(chi_c, chi_h);
  }
}

TEST(TorsionProperty, MultiplicativityBlockSums) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    auto ses = random_block_sequence(rng);
    auto r = multiplicativity_check(ses);
    EXPECT_LE(r.residual, 1e-7 * std::max(1.0, std::abs(r.tor_mid))) << "trial " << trial;
  }
}

TEST(TorsionProperty, MultiplicativityCones) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto ses = random_cone_sequence(rng);
    auto r = multiplicativity_check(ses);
    EXPECT_LE(r.residual, 1e-7 * std::max(1.0, std::abs(r.tor_mid))) << "trial " << trial;
  }
}
