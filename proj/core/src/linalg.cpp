#include "cesscm/linalg.hpp"

#include <cmath>
#include <string>

#include "cesscm/error.hpp"

namespace cesscm {

namespace {

Eigen::SelfAdjointEigenSolver<ComplexMatrix> eigensolve(const ComplexMatrix& m,
                                                        bool vectors) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
      m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kShapeMismatch,
                "Hermitian matrix must be square, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  require_finite(a, "Hermitian matrix");
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const ComplexMatrix ah = a.adjoint();
  const double asym = a.size() == 0 ? 0.0 : (a - ah).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * scale) {
    throw Error(ErrorKind::kNotHermitian,
                "max|A - A^H| = " + std::to_string(asym) +
                    " exceeds tolerance relative to max|a_ij| = " +
                    std::to_string(scale));
  }
  m_ = (a + ah) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(Index p) {
  return HermitianMatrix(ComplexMatrix::Identity(p, p));
}

HermitianMatrix HermitianMatrix::zero(Index p) {
  return HermitianMatrix(ComplexMatrix::Zero(p, p));
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

double HermitianMatrix::trace_of_square() const { return m_.squaredNorm(); }

RealVector HermitianMatrix::eigenvalues() const {
  return eigensolve(m_, false).eigenvalues();
}

double HermitianMatrix::min_eigenvalue() const {
  return dim() == 0 ? 0.0 : eigenvalues().minCoeff();
}

double HermitianMatrix::max_eigenvalue() const {
  return dim() == 0 ? 0.0 : eigenvalues().maxCoeff();
}

void require_finite(const ComplexMatrix& a, const char* what) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::kInvalidArgument,
                    std::string(what) + " has a non-finite entry at (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

ComplexVector vec(const ComplexMatrix& a) {
  const Index rows = a.rows();
  ComplexVector v(a.size());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < rows; ++i) {
      v(j * rows + i) = a(i, j);
    }
  }
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorKind::kShapeMismatch,
                "cannot reshape vector of length " + std::to_string(v.size()) +
                    " into " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      a(i, j) = v(j * rows + i);
    }
  }
  return a;
}

RealMatrix commutation_matrix(Index p) {
  if (p < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "commutation matrix needs p >= 1");
  }
  RealMatrix k = RealMatrix::Zero(p * p, p * p);
  // vec(A^T)[j*p + i] = A(j, i) = vec(A)[i*p + j]
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      k(j * p + i, i * p + j) = 1.0;
    }
  }
  return k;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index br = b.rows();
  const Index bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& m,
                               std::optional<double> pd_tol) {
  if (m.dim() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "empty matrix has no square root");
  }
  const auto es = eigensolve(m.matrix(), true);
  const RealVector& lambda = es.eigenvalues();
  const double tol = pd_tol.value_or(kDefaultPdRelTolerance * lambda.maxCoeff());
  if (lambda.minCoeff() <= tol) {
    throw Error(ErrorKind::kNotPositiveDefinite,
                "min eigenvalue " + std::to_string(lambda.minCoeff()) +
                    " <= pd_tol " + std::to_string(tol));
  }
  const ComplexMatrix& v = es.eigenvectors();
  const ComplexMatrix root =
      v * lambda.cwiseSqrt().cast<Complex>().asDiagonal() * v.adjoint();
  return HermitianMatrix(root);
}

RealMatrix centering_matrix(Index n) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidArgument, "centering matrix needs n >= 2");
  }
  const double inv = 1.0 / static_cast<double>(n);
  RealMatrix h = RealMatrix::Constant(n, n, -inv);
  h.diagonal().array() += 1.0;
  return h;
}

ScaleSphericity scale_and_sphericity(const HermitianMatrix& m) {
  const double tr = m.trace();
  if (!(tr > 0.0)) {
    throw Error(ErrorKind::kZeroTrace,
                "scale and sphericity need tr(M) > 0, got " + std::to_string(tr));
  }
  const auto p = static_cast<double>(m.dim());
  return {tr / p, p * m.trace_of_square() / (tr * tr)};
}

}  // namespace cesscm
