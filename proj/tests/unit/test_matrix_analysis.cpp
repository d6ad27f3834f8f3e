#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "error_code.hpp"
#include "zeroone/compact_groups.hpp"
#include "zeroone/errors.hpp"
#include "zeroone/jordan.hpp"

using namespace zeroone;
using zeroone::testing::code_of;
using zeroone::testing::jordan_corpus;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix scrambler4() {
  Matrix u(4, 4);
  u << 1, 2, 0, 1,
       0, 1, 1, 0,
       0, 0, 1, 2,
       0, 0, 0, 1;
  Matrix l(4, 4);
  l << 1, 0, 0, 0,
       1, 1, 0, 0,
       0, 1, 1, 0,
       1, 0, 1, 1;
  return u * l;
}

}  // namespace

TEST(EigenSpectrum, Identity) {
  const auto c = eigen_spectrum(Matrix::Identity(2, 2));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(std::abs(c[0].value - Complex(1.0)), 0.0, 1e-12);
  EXPECT_EQ(c[0].algebraic_mult, 2);
  EXPECT_EQ(c[0].geometric_mult, 2);
}

TEST(EigenSpectrum, Shear) {
  const auto c = eigen_spectrum(shear2());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].algebraic_mult, 2);
  EXPECT_EQ(c[0].geometric_mult, 1);
}

TEST(EigenSpectrum, QuarterTurnGivesConjugatePair) {
  const auto c = eigen_spectrum(m2(0, -1, 1, 0));
  ASSERT_EQ(c.size(), 2u);
  // Roots of t^2 + 1.
  for (const auto& cl : c) {
    EXPECT_NEAR(cl.value.real(), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(cl.value.imag()), 1.0, 1e-12);
    EXPECT_EQ(cl.algebraic_mult, 1);
    EXPECT_EQ(cl.geometric_mult, 1);
  }
  EXPECT_NEAR(std::abs(c[0].value - std::conj(c[1].value)), 0.0, 1e-12);
}

TEST(EigenSpectrum, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_EQ(code_of([&] { eigen_spectrum(a); }), ErrorCode::NonFiniteInput);
}

TEST(EigenSpectrum, NearCoincidentEigenvaluesAreIllConditioned) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0 + 3e-6;
  EXPECT_EQ(code_of([&] { real_jordan_form(a); }), ErrorCode::IllConditioned);
}

TEST(ComplexJordan, Diagonal) {
  const auto f = complex_jordan_form(m2(2, 0, 0, 3));
  ASSERT_EQ(f.blocks.size(), 2u);
  std::vector<double> eig{f.blocks[0].eigenvalue.real(), f.blocks[1].eigenvalue.real()};
  std::sort(eig.begin(), eig.end());
  EXPECT_NEAR(eig[0], 2.0, 1e-12);
  EXPECT_NEAR(eig[1], 3.0, 1e-12);
  EXPECT_EQ(f.blocks[0].size, 1);
  EXPECT_LE(f.residual, 1e-12);
}

TEST(ComplexJordan, Shear) {
  const auto f = complex_jordan_form(shear2());
  ASSERT_EQ(f.blocks.size(), 1u);
  EXPECT_EQ(f.blocks[0].size, 2);
  EXPECT_NEAR(std::abs(f.blocks[0].eigenvalue - Complex(1.0)), 0.0, 1e-9);
}

TEST(ComplexJordan, ScrambledDoubleBlockAtI) {
  const RealJordanBlock c2{BlockKind::ComplexPairBlock, 2, Complex(0.0, 1.0)};
  const Matrix p = scrambler4();
  ASSERT_NEAR(p.determinant(), 1.0, 1e-12);
  const Matrix a = p * c2.matrix() * p.inverse();
  const auto f = complex_jordan_form(a);
  ASSERT_EQ(f.blocks.size(), 2u);
  for (const auto& b : f.blocks) {
    EXPECT_EQ(b.size, 2);
    EXPECT_NEAR(std::abs(b.eigenvalue.imag()), 1.0, 1e-6);
  }
  EXPECT_LE((a.cast<Complex>() - f.conjugator * f.form() * f.conjugator.inverse()).norm(), 1e-6 * a.norm());
}

TEST(RealJordan, RotationIsOnePair) {
  const auto d = real_jordan_form(rotation2(1.0));
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].kind, BlockKind::ComplexPairBlock);
  EXPECT_EQ(d.blocks[0].size, 1);
  EXPECT_NEAR(std::abs(d.blocks[0].eigen - std::polar(1.0, 1.0)), 0.0, 1e-12);
}

TEST(RealJordan, DiagonalOrderedByModulus) {
  const auto d = real_jordan_form(m2(0.5, 0, 0, 2));
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_NEAR(d.blocks[0].eigen.real(), 2.0, 1e-12);
  EXPECT_NEAR(d.blocks[1].eigen.real(), 0.5, 1e-12);
  EXPECT_EQ(d.blocks[0].size, 1);
  EXPECT_EQ(d.blocks[1].size, 1);
}

TEST(RealJordan, AlreadyJordan3x3) {
  Matrix a(3, 3);
  a << 1, 1, 0, 0, 1, 0, 0, 0, 1;
  const auto d = real_jordan_form(a);
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_EQ(d.blocks[0].size, 2);
  EXPECT_EQ(d.blocks[1].size, 1);
  EXPECT_NEAR(d.blocks[0].eigen.real(), 1.0, 1e-9);
  EXPECT_LE(d.residual, 1e-10);
}

TEST(RealJordan, BlockMatrixPatterns) {
  const RealJordanBlock j{BlockKind::RealBlock, 3, Complex(-2.0)};
  Matrix expect(3, 3);
  expect << -2, 1, 0, 0, -2, 1, 0, 0, -2;
  EXPECT_EQ(j.matrix(), expect);
  const RealJordanBlock c{BlockKind::ComplexPairBlock, 2, Complex(0.6, 0.8)};
  const Matrix m = c.matrix();
  ASSERT_EQ(m.rows(), 4);
  EXPECT_TRUE(m.block(0, 2, 2, 2).isIdentity());
  EXPECT_TRUE(m.block(2, 0, 2, 2).isZero());
  EXPECT_TRUE(m.block(0, 0, 2, 2).isApprox(m.block(2, 2, 2, 2)));
  // The diagonal cell has eigenvalues 0.6 +- 0.8i.
  EXPECT_NEAR(m.block(0, 0, 2, 2).trace(), 1.2, 1e-15);
  EXPECT_NEAR(m.block(0, 0, 2, 2).determinant(), 1.0, 1e-15);
}

TEST(PowerApply, ShearCubed) {
  const RealJordanBlock j{BlockKind::RealBlock, 2, Complex(1.0)};
  Vector x(2);
  x << 0, 1;
  const Vector y = jordan_block_power_apply(j, 3, x);
  EXPECT_NEAR(y(0), 3.0, 1e-15);
  EXPECT_NEAR(y(1), 1.0, 1e-15);
}

TEST(PowerApply, ZeroPowerAndScalar) {
  const RealJordanBlock j{BlockKind::RealBlock, 4, Complex(-0.5)};
  const Vector x = Vector::LinSpaced(4, 1.0, 4.0);
  EXPECT_EQ(jordan_block_power_apply(j, 0, x), x);
  const RealJordanBlock s{BlockKind::RealBlock, 1, Complex(1.7)};
  EXPECT_NEAR(jordan_block_power_apply(s, 5, Vector::Ones(1))(0), std::pow(1.7, 5), 1e-12);
  EXPECT_EQ(code_of([&] { jordan_block_power_apply(j, 2, Vector::Ones(3)); }), ErrorCode::DimensionMismatch);
}

TEST(PowerApply, MatchesIteratedMultiplication) {
  for (double eta : {1.0, -1.0, 0.5, -0.5, 2.0}) {
    for (int size = 1; size <= 6; ++size) {
      const RealJordanBlock j{BlockKind::RealBlock, size, Complex(eta)};
      const Matrix m = j.matrix();
      const Vector x = Vector::LinSpaced(size, 1.0, -0.5 * size);
      Vector it = x;
      for (long h = 0; h <= 64; ++h) {
        const Vector closed = jordan_block_power_apply(j, h, x);
        EXPECT_LE((closed - it).norm(), 1e-9 * it.norm()) << "eta " << eta << " size " << size << " h " << h;
        it = m * it;
      }
    }
  }
}

TEST(Classify, Shear) {
  const auto c = classify_noncompact_blocks(real_jordan_form(shear2()));
  ASSERT_EQ(c.case_tags.size(), 1u);
  EXPECT_EQ(c.case_tags[0].which, NoncompactCase::A);
  EXPECT_FALSE(c.compact);
}

TEST(Classify, DiagonalTagsContractingBlock) {
  const auto dec = real_jordan_form(m2(2, 0, 0, 0.5));
  const auto c = classify_noncompact_blocks(dec);
  ASSERT_EQ(c.case_tags.size(), 1u);
  EXPECT_EQ(c.case_tags[0].which, NoncompactCase::C);
  EXPECT_NEAR(dec.blocks[c.case_tags[0].block].eigen.real(), 0.5, 1e-12);
  EXPECT_FALSE(c.compact);
}

TEST(Classify, RotationIsCompact) {
  const auto c = classify_noncompact_blocks(real_jordan_form(rotation2(1.0)));
  EXPECT_TRUE(c.case_tags.empty());
  EXPECT_TRUE(c.compact);
}

TEST(Classify, CasesBAndD) {
  const RealJordanBlock b{BlockKind::ComplexPairBlock, 2, std::polar(1.0, 1.0)};
  const auto cb = classify_noncompact_blocks(real_jordan_form(b.matrix()));
  ASSERT_FALSE(cb.case_tags.empty());
  EXPECT_EQ(cb.case_tags[0].which, NoncompactCase::B);
  const auto cd = classify_noncompact_blocks(real_jordan_form(0.5 * rotation2(2.0)));
  ASSERT_FALSE(cd.case_tags.empty());
  EXPECT_EQ(cd.case_tags[0].which, NoncompactCase::D);
}

TEST(CyclicClosure, Examples) {
  EXPECT_TRUE(cyclic_closure_compact(m2(0, -1, 1, 0)));
  EXPECT_FALSE(cyclic_closure_compact(m2(2, 0, 0, 0.5)));
  EXPECT_FALSE(cyclic_closure_compact(shear2()));
  EXPECT_TRUE(cyclic_closure_compact(rotation2(1.0)));
}

TEST(Witness, Examples) {
  const Matrix diag = m2(2, 0, 0, 0.5);
  const auto w = find_noncompact_witness({diag}, 4);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->element.isApprox(diag) || w->element.isApprox(diag.inverse()));
  EXPECT_FALSE(find_noncompact_witness({rotation2(1.0)}, 6).has_value());
  const auto s = find_noncompact_witness({rotation2(std::numbers::pi / 2), shear2()}, 3);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->word.size(), 1u);
  EXPECT_EQ(s->word[0] / 2, 1);
}

TEST(Witness, ProductOfCompactGeneratorsCanBeUnbounded) {
  // Two finite-order elements whose product is a hyperbolic matrix.
  const Matrix a = m2(0, -1, 1, 0);
  const Matrix b = m2(0, -1, 1, 1);  // order 6
  ASSERT_TRUE(cyclic_closure_compact(a));
  ASSERT_TRUE(cyclic_closure_compact(b));
  const auto w = find_noncompact_witness({a, b}, 4);
  ASSERT_TRUE(w.has_value());
  EXPECT_GE(w->word.size(), 2u);
  EXPECT_FALSE(cyclic_closure_compact(w->element));
}

TEST(Witness, RejectsNonUnimodular) {
  EXPECT_EQ(code_of([] { find_noncompact_witness({m2(2, 0, 0, 1)}, 2); }), ErrorCode::InvalidGenerator);
}

TEST(Haar, SignGroupAndQuarterTurn) {
  const auto s = haar_average_form({Matrix(-Matrix::Identity(2, 2))});
  EXPECT_TRUE(s.form.isApprox(Matrix::Identity(2, 2), 1e-14));
  EXPECT_EQ(s.terms, 2);
  const auto q = haar_average_form({m2(0, -1, 1, 0)});
  EXPECT_TRUE(q.form.isApprox(Matrix::Identity(2, 2), 1e-14));
  EXPECT_EQ(q.terms, 4);
}

TEST(Haar, CesaroConjugatedRotation) {
  const Matrix h = m2(2, 0, 0, 1);
  const Matrix a = h * rotation2(1.0) * h.inverse();
  HaarOptions o;
  o.mode = HaarMode::CesaroCyclic;
  const Matrix w = weyl_conjugator({a}, o);
  EXPECT_LE(orthogonality_defect({a}, w), 1e-8);
  // Plain Cesaro run to 1e5 terms as an independent oracle: the resulting
  // form conjugates A to an orthogonal matrix up to its O(1/M) bias.
  const Matrix plain = spd_sqrt_inverse(cyclic_average(a, 100000, CesaroWeights::Uniform));
  EXPECT_LE(orthogonality_defect({a}, plain), 1e-3);
}

TEST(Haar, GroupTooLargeAndNotCompact) {
  EXPECT_EQ(code_of([] { haar_average_form({rotation2(1.0)}); }), ErrorCode::GroupTooLarge);
  HaarOptions o;
  o.mode = HaarMode::CesaroCyclic;
  EXPECT_EQ(code_of([&] { haar_average_form({m2(2, 0, 0, 0.5)}, o); }), ErrorCode::NotCompact);
}

TEST(SpdSqrtInverse, Examples) {
  EXPECT_TRUE(spd_sqrt_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  EXPECT_TRUE(spd_sqrt_inverse(m2(4, 0, 0, 1)).isApprox(m2(0.5, 0, 0, 1)));
  CounterRng rng(3, {0});
  for (int k = 0; k < 20; ++k) {
    Matrix m(4, 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.normal();
    const Matrix s = m.transpose() * m + 0.1 * Matrix::Identity(4, 4);
    const Matrix h = spd_sqrt_inverse(s);
    EXPECT_LE((h * s * h - Matrix::Identity(4, 4)).norm(), 1e-10);
    EXPECT_LE((h - h.transpose()).norm(), 1e-12);
  }
  EXPECT_EQ(code_of([] { spd_sqrt_inverse(m2(1, 0, 0, -1)); }), ErrorCode::NotSPD);
  EXPECT_EQ(code_of([] { spd_sqrt_inverse(m2(1, 0.5, 0, 1)); }), ErrorCode::NotSPD);
}

TEST(Weyl, OrthogonalGeneratorsGiveIdentity) {
  const Matrix h = weyl_conjugator({m2(0, -1, 1, 0), m2(1, 0, 0, -1)});
  EXPECT_TRUE(h.isApprox(Matrix::Identity(2, 2), 1e-12));
}

TEST(Weyl, RecoversConjugatorUpToOrthogonalFactor) {
  const Matrix d = m2(2, 0, 0, 1);
  const Matrix g = d * rotation2(1.0) * d.inverse();
  HaarOptions o;
  o.mode = HaarMode::CesaroCyclic;
  const Matrix h = weyl_conjugator({g}, o);
  // h = c D O  <=>  (D^-1 h)^T (D^-1 h) = c^2 I.
  const Matrix q = d.inverse() * h;
  const Matrix qq = q.transpose() * q;
  EXPECT_LE((qq / qq(0, 0) - Matrix::Identity(2, 2)).norm(), 1e-8);
  const Matrix c = h.inverse() * g * h;
  EXPECT_NEAR(c.determinant(), g.determinant(), 1e-10);
}

TEST(Weyl, ConjugatedDihedral) {
  Matrix p(2, 2);
  p << 1, 2, 1, 3;
  const Matrix r = p * rotation2(2 * std::numbers::pi / 5) * p.inverse();
  const Matrix f = p * m2(1, 0, 0, -1) * p.inverse();
  const Matrix h = weyl_conjugator({r, f});
  EXPECT_LE(orthogonality_defect({r, f}, h), 1e-8);
}

TEST(Corpus, ReconstructionAndBlocks) {
  for (const auto& c : jordan_corpus()) {
    const auto dec = real_jordan_form(c.a);
    const Matrix back = dec.conjugator * dec.form() * dec.conjugator.inverse();
    EXPECT_LE((c.a - back).norm(), 1e-6 * c.a.norm());
    EXPECT_LE(dec.residual, 1e-6);
    EXPECT_EQ(dec.order(), c.a.rows());
    EXPECT_TRUE(zeroone::testing::same_blocks(dec.blocks, c.blocks))
        << "expected " << zeroone::testing::describe(c.blocks) << " got " << zeroone::testing::describe(dec.blocks);
  }
}

TEST(Corpus, MultiplicityAccounting) {
  for (const auto& c : jordan_corpus()) {
    const auto clusters = eigen_spectrum(c.a);
    const auto dec = real_jordan_form(c.a);
    int alg_total = 0;
    for (const auto& cl : clusters) {
      alg_total += cl.algebraic_mult;
      EXPECT_LE(1, cl.geometric_mult);
      EXPECT_LE(cl.geometric_mult, cl.algebraic_mult);
      int blocks = 0;
      int rows = 0;
      for (const auto& b : dec.blocks) {
        const bool hit = std::abs(b.eigen - cl.value) < 1e-5 || std::abs(std::conj(b.eigen) - cl.value) < 1e-5;
        if (hit) {
          ++blocks;
          rows += b.size;
        }
      }
      EXPECT_EQ(blocks, cl.geometric_mult);
      EXPECT_EQ(rows, cl.algebraic_mult);
    }
    EXPECT_EQ(alg_total, c.a.rows());
  }
}

TEST(Corpus, DeterminantConsistency) {
  for (const auto& c : jordan_corpus()) {
    double prod = 1.0;
    for (const auto& cl : eigen_spectrum(c.a)) prod *= std::pow(std::abs(cl.value), cl.algebraic_mult);
    EXPECT_NEAR(std::abs(c.a.determinant()), prod, 1e-8 * prod);
  }
}

TEST(Corpus, ClassifierAgreesWithPowerGrowth) {
  for (const auto& c : jordan_corpus()) {
    const bool compact = cyclic_closure_compact(c.a);
    EXPECT_EQ(compact, c.compact);
    double worst = 0.0;
    Matrix fwd = Matrix::Identity(c.a.rows(), c.a.cols());
    Matrix back = fwd;
    const Matrix inv = c.a.inverse();
    for (int h = 1; h <= 200 && worst < 1e7; ++h) {
      fwd = fwd * c.a;
      back = back * inv;
      worst = std::max({worst, op_norm(fwd), op_norm(back)});
    }
    if (compact) {
      HaarOptions o;
      o.mode = HaarMode::CesaroCyclic;
      const Matrix s = haar_average_form({c.a}, o).form;
      EXPECT_LE(worst, 10.0 * op_norm(s) * op_norm(Matrix(s.inverse())));
    } else {
      EXPECT_GT(worst, 1e6);
    }
  }
}

TEST(Corpus, WeylOnCompactGroups) {
  const auto groups = zeroone::testing::compact_group_corpus();
  ASSERT_EQ(groups.size(), 50u);
  for (const auto& g : groups) {
    HaarOptions o;
    o.mode = g.mode;
    const Matrix h = weyl_conjugator(g.generators, o);
    EXPECT_LE(orthogonality_defect(g.generators, h), 1e-8) << g.name;
    for (const auto& gen : g.generators) {
      EXPECT_NEAR((h.inverse() * gen * h).determinant(), gen.determinant(), 1e-9) << g.name;
    }
  }
}
