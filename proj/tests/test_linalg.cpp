#include <gtest/gtest.h>

#include <cmath>

#include "cesscm/linalg.hpp"
#include "error_matchers.hpp"
#include "oracles.hpp"

using namespace cesscm;

namespace {

double rel_fro(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST(HermitianMatrix, SymmetrizesWithinTolerance) {
  ComplexMatrix a(2, 2);
  a << Complex(2, 0), Complex(1, 1), Complex(1, -1 + 1e-14), Complex(3, 1e-14);
  const HermitianMatrix h(a);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_EQ(h(1, 1).imag(), 0.0);
}

TEST(HermitianMatrix, RejectsAsymmetricInput) {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  EXPECT_CESSCM_ERROR(HermitianMatrix{a}, ErrorKind::kNotHermitian);
}

TEST(HermitianMatrix, RejectsNonSquareAndNonFinite) {
  EXPECT_CESSCM_ERROR(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, ErrorKind::kShapeMismatch);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_CESSCM_ERROR(HermitianMatrix{a}, ErrorKind::kInvalidArgument);
}

TEST(HermitianMatrix, TraceAndTraceOfSquare) {
  const HermitianMatrix m(oracle::random_hpd(4, 11));
  EXPECT_NEAR(m.trace(), m.matrix().trace().real(), 1e-12);
  EXPECT_NEAR(m.trace_of_square(), (m.matrix() * m.matrix()).trace().real(), 1e-10);
}

TEST(Vec, IdentityTwoByTwo) {
  const ComplexVector v = vec(ComplexMatrix::Identity(2, 2));
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v(0), Complex(1.0));
  EXPECT_EQ(v(1), Complex(0.0));
  EXPECT_EQ(v(2), Complex(0.0));
  EXPECT_EQ(v(3), Complex(1.0));
}

TEST(Vec, StacksColumns) {
  for (Index rows : {1, 2, 3}) {
    for (Index cols : {1, 2, 4}) {
      const ComplexMatrix a = oracle::random_complex(rows, cols, 5 + rows * 7 + cols);
      const ComplexVector v = vec(a);
      const auto ref = oracle::vec_bruteforce(a);
      ASSERT_EQ(static_cast<std::size_t>(v.size()), ref.size());
      for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_EQ(v(static_cast<Index>(k)), ref[k]);
      EXPECT_EQ(unvec(v, rows, cols), a);
    }
  }
  EXPECT_CESSCM_ERROR(unvec(ComplexVector::Zero(5), 2, 2), ErrorKind::kShapeMismatch);
}

TEST(CommutationMatrix, SmallCases) {
  EXPECT_EQ(commutation_matrix(1), RealMatrix::Identity(1, 1));
  RealMatrix k2 = RealMatrix::Zero(4, 4);
  k2(0, 0) = k2(1, 2) = k2(2, 1) = k2(3, 3) = 1.0;
  EXPECT_EQ(commutation_matrix(2), k2);
}

TEST(CommutationMatrix, RejectsZeroDimension) {
  EXPECT_CESSCM_ERROR(commutation_matrix(0), ErrorKind::kInvalidArgument);
}

TEST(CommutationMatrix, MatchesDefiningSum) {
  for (Index p = 1; p <= 6; ++p) {
    EXPECT_EQ(ComplexMatrix(commutation_matrix(p).cast<Complex>()),
              oracle::commutation_by_definition(p))
        << "p = " << p;
  }
}

TEST(CommutationMatrix, TransposesVecExhaustively) {
  for (Index p = 1; p <= 6; ++p) {
    const RealMatrix k = commutation_matrix(p);
    const ComplexMatrix a = oracle::random_complex(p, p, 100 + p);
    const ComplexVector lhs = k.cast<Complex>() * vec(a);
    const ComplexVector rhs = vec(a.transpose());
    for (Index idx = 0; idx < p * p; ++idx) EXPECT_EQ(lhs(idx), rhs(idx)) << p << " " << idx;
  }
}

TEST(CommutationMatrix, IsPermutationInvolution) {
  for (Index p = 1; p <= 6; ++p) {
    const RealMatrix k = commutation_matrix(p);
    EXPECT_EQ(k * k, RealMatrix::Identity(p * p, p * p));
    EXPECT_TRUE((k.rowwise().sum().array() == 1.0).all());
    EXPECT_TRUE((k.colwise().sum().array() == 1.0).all());
  }
}

TEST(CommutationMatrix, FixesVecIdentity) {
  for (Index p : {2, 3, 5}) {
    const ComplexVector vi = vec(ComplexMatrix::Identity(p, p));
    EXPECT_EQ(ComplexVector(commutation_matrix(p).cast<Complex>() * vi), vi);
  }
}

TEST(Kron, IdentityBlocks) {
  EXPECT_EQ(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
            ComplexMatrix::Identity(4, 4));
}

TEST(Kron, MatchesBruteForceOnRectangularInputs) {
  const ComplexMatrix a = oracle::random_complex(2, 3, 1);
  const ComplexMatrix b = oracle::random_complex(4, 2, 2);
  EXPECT_EQ(kron(a, b), oracle::kron_bruteforce(a, b));
}

TEST(Kron, MixedProduct) {
  const ComplexMatrix a = oracle::random_complex(2, 2, 3);
  const ComplexMatrix b = oracle::random_complex(2, 2, 4);
  const ComplexMatrix c = oracle::random_complex(2, 2, 5);
  const ComplexMatrix d = oracle::random_complex(2, 2, 6);
  EXPECT_LT(rel_fro(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-13);
}

TEST(Kron, VecOfTripleProduct) {
  const ComplexMatrix a = oracle::random_complex(3, 2, 7);
  const ComplexMatrix b = oracle::random_complex(2, 4, 8);
  const ComplexMatrix x = oracle::random_complex(4, 2, 9);
  const ComplexVector lhs = vec(b * x * a.transpose());
  const ComplexVector rhs = kron(a, b) * vec(x);
  EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-13);
}

TEST(Kron, TraceOfConjugateKronecker) {
  const HermitianMatrix m(oracle::random_hpd(4, 10));
  const double tr = m.trace();
  EXPECT_NEAR(kron(m.matrix().conjugate(), m.matrix()).trace().real(), tr * tr, 1e-10 * tr * tr);
}

TEST(HermitianSqrt, IdentityAndDiagonal) {
  EXPECT_LT((hermitian_sqrt(HermitianMatrix::identity(5)).matrix() -
             ComplexMatrix::Identity(5, 5)).norm(),
            1e-14);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const ComplexMatrix r = hermitian_sqrt(HermitianMatrix(d)).matrix();
  EXPECT_NEAR(r(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1).real(), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-14);
}

TEST(HermitianSqrt, ReconstructsRandomPositiveDefinite) {
  for (Index p : {1, 2, 3, 5, 8, 16}) {
    const HermitianMatrix m(oracle::random_hpd(p, 200 + p));
    const HermitianMatrix r = hermitian_sqrt(m);
    EXPECT_LT(rel_fro(r.matrix() * r.matrix(), m.matrix()), 1e-10) << "p = " << p;
    EXPECT_GT(r.min_eigenvalue(), 0.0);
  }
}

TEST(HermitianSqrt, RejectsSingularAndIndefinite) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  EXPECT_CESSCM_ERROR(hermitian_sqrt(HermitianMatrix(a)), ErrorKind::kNotPositiveDefinite);
  a(1, 1) = -1.0;
  EXPECT_CESSCM_ERROR(hermitian_sqrt(HermitianMatrix(a)), ErrorKind::kNotPositiveDefinite);
  a(1, 1) = 1e-12;
  EXPECT_CESSCM_ERROR(hermitian_sqrt(HermitianMatrix(a)), ErrorKind::kNotPositiveDefinite);
  EXPECT_NO_THROW(hermitian_sqrt(HermitianMatrix(a), 1e-13));
}

TEST(HermitianSqrt, KroneckerCongruenceIdentities) {
  for (Index p : {2, 3, 4}) {
    const HermitianMatrix m(oracle::random_hpd(p, 300 + p));
    const ComplexMatrix r = hermitian_sqrt(m).matrix();
    const ComplexMatrix rk = kron(r.conjugate(), r);
    EXPECT_LT(rel_fro(rk * rk, kron(m.matrix().conjugate(), m.matrix())), 1e-12);
    const ComplexVector vi = vec(ComplexMatrix::Identity(p, p));
    const ComplexVector vm = vec(m.matrix());
    EXPECT_LT(rel_fro(rk * vi * vi.transpose() * rk, vm * vm.adjoint()), 1e-12);
  }
}

TEST(CenteringMatrix, Identities) {
  const RealMatrix h = centering_matrix(10);
  EXPECT_NEAR(h.squaredNorm(), 9.0, 1e-13);
  EXPECT_NEAR(h.diagonal().squaredNorm(), 8.1, 1e-13);
  EXPECT_NEAR(h.trace(), 9.0, 1e-13);
  EXPECT_LT((h * RealVector::Ones(10)).norm(), 1e-14);
  EXPECT_LT((h * h - h).norm(), 1e-14);
}

TEST(CenteringMatrix, RejectsSmallN) {
  EXPECT_CESSCM_ERROR(centering_matrix(1), ErrorKind::kInvalidArgument);
  EXPECT_NO_THROW(centering_matrix(2));
}

TEST(ScaleSphericity, ScaledIdentity) {
  const ScaleSphericity s =
      scale_and_sphericity(HermitianMatrix(3.5 * ComplexMatrix::Identity(6, 6)));
  EXPECT_DOUBLE_EQ(s.eta, 3.5);
  EXPECT_DOUBLE_EQ(s.gamma, 1.0);
}

TEST(ScaleSphericity, RankOne) {
  const ComplexVector v = oracle::random_complex(5, 1, 12).col(0);
  const ScaleSphericity s = scale_and_sphericity(HermitianMatrix(v * v.adjoint()));
  EXPECT_NEAR(s.gamma, 5.0, 1e-12);
}

TEST(ScaleSphericity, DiagonalArithmetic) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  const ScaleSphericity s = scale_and_sphericity(HermitianMatrix(d));
  EXPECT_DOUBLE_EQ(s.eta, 2.0);
  EXPECT_DOUBLE_EQ(s.gamma, 1.25);
}

TEST(ScaleSphericity, ScaleInvariantAndBounded) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix m = oracle::random_hpd(4, 400 + seed);
    const double g = scale_and_sphericity(HermitianMatrix(m)).gamma;
    EXPECT_GE(g, 1.0);
    EXPECT_LE(g, 4.0);
    for (double c : {1e-3, 0.7, 42.0}) {
      EXPECT_NEAR(scale_and_sphericity(HermitianMatrix(c * m)).gamma, g, 1e-13 * g);
    }
  }
}

TEST(ScaleSphericity, RejectsZeroTrace) {
  EXPECT_CESSCM_ERROR(scale_and_sphericity(HermitianMatrix::zero(3)), ErrorKind::kZeroTrace);
}
