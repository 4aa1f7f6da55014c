#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace cesscm {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Relative tolerance used when accepting a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;
// Default positive-definiteness tolerance, relative to the largest eigenvalue.
inline constexpr double kDefaultPdRelTolerance = 1e-10;

/// Dense complex Hermitian matrix.
///
/// Construction accepts A when max|A - A^H| <= 1e-12 * max|a_ij| and then
/// stores (A + A^H) / 2, so every downstream product sees an exactly
/// Hermitian operand.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  static HermitianMatrix identity(Index p);
  static HermitianMatrix zero(Index p);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  // Real trace and tr(M^2) = ||M||_F^2.
  double trace() const;
  double trace_of_square() const;

  RealVector eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  ComplexMatrix m_;
};

void require_finite(const ComplexMatrix& a, const char* what);

/// Column-stacking vectorization: element A(i, j) lands at index j * rows + i.
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols);

/// The p^2 x p^2 permutation K_p with K_p vec(A) = vec(A^T).
RealMatrix commutation_matrix(Index p);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unique Hermitian positive definite square root via eigendecomposition.
/// pd_tol defaults to 1e-10 times the largest eigenvalue; any eigenvalue at
/// or below it raises NotPositiveDefinite.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& m,
                               std::optional<double> pd_tol = std::nullopt);

/// H = I - (1/n) 1 1^T, n >= 2.
RealMatrix centering_matrix(Index n);

struct ScaleSphericity {
  double eta = 0.0;
  double gamma = 0.0;
};

/// eta = tr(M)/p, gamma = p tr(M^2) / tr(M)^2.
ScaleSphericity scale_and_sphericity(const HermitianMatrix& m);

}  // namespace cesscm
