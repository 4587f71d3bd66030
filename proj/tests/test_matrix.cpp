#include <gtest/gtest.h>

#include "lsd/bases.hpp"
#include "lsd/density.hpp"
#include "support.hpp"

using namespace lsd;
using lsd::testing::Rng;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v(k++) = x;
  return v.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_LT(max_abs_entry(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
                          ComplexMatrix::Identity(4, 4)),
            1e-15);
}

TEST(Kron, SigmaYSquaredIsAntiDiagonal) {
  const ComplexMatrix m = kron(pauli_y(), pauli_y());
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 3) = -1;
  expected(1, 2) = 1;
  expected(2, 1) = 1;
  expected(3, 0) = -1;
  EXPECT_LT(max_abs_entry(m - expected), 1e-15);
}

TEST(Kron, ProjectorCase) {
  EXPECT_LT(max_abs_entry(kron(diag({1, 0}), diag({1, 0})) - diag({1, 0, 0, 0})), 1e-15);
}

TEST(Kron, MixedProduct) {
  Rng rng(11);
  const ComplexMatrix a = lsd::testing::ginibre(rng, 2, 3), b = lsd::testing::ginibre(rng, 3, 2);
  const ComplexMatrix c = lsd::testing::ginibre(rng, 3, 2), d = lsd::testing::ginibre(rng, 2, 4);
  EXPECT_LT(max_abs_entry(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-10);
}

TEST(HermitianEigen, DiagonalSortedDescending) {
  const HermitianEigen e = hermitian_eigen(diag({1, 2, 3}));
  EXPECT_DOUBLE_EQ(e.values(0), 3);
  EXPECT_DOUBLE_EQ(e.values(1), 2);
  EXPECT_DOUBLE_EQ(e.values(2), 1);
}

TEST(HermitianEigen, SigmaY) {
  const HermitianEigen e = hermitian_eigen(pauli_y());
  EXPECT_NEAR(e.values(0), 1, 1e-15);
  EXPECT_NEAR(e.values(1), -1, 1e-15);
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), I_unit / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(plus.dot(e.vectors.col(0))), 1.0, 1e-12);
  // first component is made real-positive
  EXPECT_GT(e.vectors(0, 0).real(), 0);
  EXPECT_NEAR(e.vectors(0, 0).imag(), 0, 1e-15);
}

TEST(HermitianEigen, BellDiagonalSpectrum) {
  const auto b = bell_states();
  const ComplexMatrix rho = diagonal_in({b.begin(), b.end()}, {0.7, 0.1, 0.1, 0.1});
  const HermitianEigen e = hermitian_eigen(rho);
  EXPECT_NEAR(e.values(0), 0.7, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(e.values(k), 0.1, 1e-14);
}

TEST(HermitianEigen, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 1e-6;
  try {
    hermitian_eigen(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(HermitianEigen, RandomReconstruction) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix m = lsd::testing::random_hermitian(rng, 6);
    const HermitianEigen e = hermitian_eigen(m);
    EXPECT_LT(max_abs_entry(e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - m), 1e-8);
    EXPECT_LT(max_abs_entry(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(6, 6)), 1e-9);
  }
}

TEST(PsdSqrt, Examples) {
  EXPECT_LT(max_abs_entry(psd_sqrt(diag({4, 9})) - diag({2, 3})), 1e-14);
  EXPECT_LT(max_abs_entry(psd_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)), 1e-14);
  const ComplexMatrix p = projector(bell_states()[2]);
  EXPECT_LT(max_abs_entry(psd_sqrt(p) - p), 1e-12);
}

TEST(PsdSqrt, ClampsRoundOffAndRejectsNegative) {
  EXPECT_LT(max_abs_entry(psd_sqrt(diag({1, -5e-10})) - diag({1, 0})), 1e-15);
  try {
    psd_sqrt(diag({1, -1e-3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(PsdSqrt, SquaresBackForRandomPsd) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix g = lsd::testing::ginibre(rng, 5, 3);
    const ComplexMatrix m = g * g.adjoint();
    const ComplexMatrix r = psd_sqrt(m);
    EXPECT_LT(max_abs_entry(r * r - m), 1e-8);
    EXPECT_LT(hermiticity_defect(r), 1e-12);
  }
}

TEST(PartialTranspose, BellProjectorHasNegativeHalf) {
  const DensityMatrix rho(PureState({2, 2}, bell_states()[0]));
  EXPECT_NEAR(min_eigenvalue(partial_transpose(rho, 1)), -0.5, 1e-14);
}

TEST(PartialTranspose, ProductStatesStayPsd) {
  Rng rng(7);
  const DensityMatrix a = lsd::testing::random_density(rng, {2});
  const DensityMatrix b = lsd::testing::random_density(rng, {3});
  const DensityMatrix rho({2, 3}, kron(a.matrix(), b.matrix()));
  EXPECT_GE(min_eigenvalue(partial_transpose(rho, 0)), -1e-12);
  EXPECT_GE(min_eigenvalue(partial_transpose(rho, 1)), -1e-12);
}

TEST(PartialTranspose, InvolutionPreservingTraceAndHermiticity) {
  Rng rng(9);
  const DensityMatrix rho = lsd::testing::random_density(rng, {2, 3, 2});
  for (std::size_t k = 0; k < 3; ++k) {
    const ComplexMatrix t = partial_transpose(rho, k);
    EXPECT_LT(hermiticity_defect(t), 1e-14);
    EXPECT_NEAR(t.trace().real(), 1.0, 1e-14);
    EXPECT_LT(max_abs_entry(partial_transpose(t, rho.dims(), k) - rho.matrix()), 1e-15);
  }
  try {
    partial_transpose(rho, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadIndex);
  }
}

TEST(PartialTrace, Marginals) {
  const DensityMatrix bell(PureState({2, 2}, bell_states()[0]));
  EXPECT_LT(max_abs_entry(partial_trace(bell, 0).matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);

  const DensityMatrix psi3(PureState({3, 3}, max_entangled(3)));
  EXPECT_LT(max_abs_entry(partial_trace(psi3, 0).matrix() - ComplexMatrix::Identity(3, 3) / 3.0), 1e-15);

  Rng rng(13);
  const DensityMatrix a = lsd::testing::random_density(rng, {3});
  const DensityMatrix b = lsd::testing::random_density(rng, {2});
  const DensityMatrix ab({3, 2}, kron(a.matrix(), b.matrix()));
  EXPECT_LT(max_abs_entry(partial_trace(ab, 0).matrix() - a.matrix()), 1e-12);
  EXPECT_LT(max_abs_entry(partial_trace(ab, 1).matrix() - b.matrix()), 1e-12);
  try {
    partial_trace(ab, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadIndex);
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(ComplexMatrix::Identity(3, 3), 1e-9));
  EXPECT_FALSE(is_psd(diag({1, -0.1}), 1e-9));
}

TEST(DensityMatrixValidation, RejectsBrokenInvariants) {
  auto kind_of = [](auto&& build) {
    try {
      build();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ParseError;
  };
  EXPECT_EQ(kind_of([] { DensityMatrix({2}, diag({0.5, 0.4})); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { DensityMatrix({2}, diag({1.1, -0.1})); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { DensityMatrix({2, 2}, diag({0.5, 0.5})); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] {
              ComplexMatrix m = diag({0.5, 0.5});
              m(0, 1) = 0.1;
              DensityMatrix({2}, m);
            }),
            ErrorKind::ValidationError);
  // round-off below the clamp is accepted
  EXPECT_NO_THROW(DensityMatrix({2}, diag({1.0 + 5e-10, -5e-10})));
}

TEST(PureStateValidation, NormChecked) {
  ComplexVector v(2);
  v << 1.0, 1e-5;
  EXPECT_THROW(PureState({2}, v), Error);
  EXPECT_NO_THROW(PureState::normalized({2}, v));
}
