#include "resilock/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "resilock/error.hpp"

namespace resilock {

void Tolerance::validate() const {
  if (!(pd_eps > 0.0) || !(eig_eps > 0.0) || !(ode_step > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "tolerances must be strictly positive");
  }
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "symmetric matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "symmetric matrix has non-finite entries");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorCode::kInvalidInput,
                "matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::gram(const Matrix& x) {
  Matrix g = x * x.transpose();
  return SymMatrix(0.5 * (g + g.transpose()), Trusted{});
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Matrix::Identity(n, n), Trusted{});
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  return SymMatrix(m_ + other.m_, Trusted{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
  return SymMatrix(m_ - other.m_, Trusted{});
}

SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(m_ * s, Trusted{}); }

SymEigen sym_eigen(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector sym_eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigenvalues(m)(0); }

double pd_threshold(const SymMatrix& m, const Tolerance& tol) {
  return tol.pd_eps * (1.0 + m.matrix().diagonal().cwiseAbs().maxCoeff());
}

bool is_positive_definite(const SymMatrix& m, const Tolerance& tol) {
  return min_eigenvalue(m) > pd_threshold(m, tol);
}

CompactSvd compact_svd(const Matrix& m) {
  if (m.cols() < m.rows()) {
    throw Error(ErrorCode::kInvalidInput, "compact SVD requires at least as many columns as rows");
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "SVD did not converge");
  }
  return {svd.matrixU(), svd.singularValues(), svd.matrixV().transpose()};
}

double max_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix solve_spd(const SymMatrix& m, const Matrix& rhs, const Tolerance& tol) {
  if (rhs.rows() != m.dim()) {
    throw Error(ErrorCode::kInvalidInput, "right-hand side has wrong row count");
  }
  if (!is_positive_definite(m, tol)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "solve_spd on a matrix that is not positive definite");
  }
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky factorization failed");
  }
  return llt.solve(rhs);
}

Vector solve_spd(const SymMatrix& m, const Vector& rhs, const Tolerance& tol) {
  return solve_spd(m, Matrix(rhs), tol).col(0);
}

SymMatrix spd_sqrt(const SymMatrix& m, const Tolerance& tol) {
  SymEigen eig = sym_eigen(m);
  if (eig.values(0) < -tol.eig_eps) {
    throw Error(ErrorCode::kNotPositiveSemidefinite,
                "eigenvalue " + std::to_string(eig.values(0)) + " below -eig_eps");
  }
  const Vector quarter = eig.values.cwiseMax(0.0).cwiseSqrt().cwiseSqrt();
  // (V diag(lambda^{1/4}))(V diag(lambda^{1/4}))^T = V diag(sqrt(lambda)) V^T
  return SymMatrix::gram(eig.vectors * quarter.asDiagonal());
}

double spectral_abscissa(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "eigensolver did not converge");
  }
  return solver.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& a, double margin) { return spectral_abscissa(a) < -margin; }

Matrix expm(const Matrix& m) { return m.exp(); }

namespace {

double care_residual(const Matrix& a, const Matrix& g, const Matrix& q, const Matrix& x) {
  return (a.transpose() * x + x * a - x * g * x + q).norm();
}

// Solves M' X + X M = -W through the Kronecker-product linear system.
Matrix solve_lyapunov(const Matrix& m, const Matrix& w) {
  const Eigen::Index n = m.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix mt = m.transpose();
  Matrix kron(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // column-major vec: vec(M'X) = (I kron M') vec X, vec(XM) = (M' kron I) vec X
      kron.block(i * n, j * n, n, n) = id(i, j) * mt + mt(i, j) * id;
    }
  }
  Vector rhs = -Eigen::Map<const Vector>(w.data(), n * n);
  Vector sol = kron.fullPivLu().solve(rhs);
  Matrix x = Eigen::Map<Matrix>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

}  // namespace

CareSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidInput, "CARE dimensions are inconsistent");
  }
  Eigen::LLT<Matrix> r_llt(r);
  if (r_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "R must be positive definite");
  }
  const Matrix g = b * r_llt.solve(b.transpose());

  Matrix h(2 * n, 2 * n);
  h << a, -g, -q, -a.transpose();
  Eigen::ComplexEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kRiccatiFailure, "Hamiltonian eigendecomposition failed");
  }
  Eigen::MatrixXcd basis(2 * n, n);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (eig.eigenvalues()(i).real() < 0.0) {
      if (found == n) {
        throw Error(ErrorCode::kRiccatiFailure, "too many stable Hamiltonian eigenvalues");
      }
      basis.col(found++) = eig.eigenvectors().col(i);
    }
  }
  if (found != n) {
    throw Error(ErrorCode::kRiccatiFailure,
                "Hamiltonian has eigenvalues on the imaginary axis (not stabilizable/detectable)");
  }
  Eigen::MatrixXcd u1 = basis.topRows(n);
  Eigen::MatrixXcd u2 = basis.bottomRows(n);
  Matrix x = (u2 * u1.partialPivLu().inverse()).real();
  x = 0.5 * (x + x.transpose());
  if (!x.allFinite()) {
    throw Error(ErrorCode::kRiccatiFailure, "stable subspace basis is singular");
  }

  double residual = care_residual(a, g, q, x);
  for (int iter = 0; iter < 20 && residual > 1e-14 * (1.0 + x.norm()); ++iter) {
    const Matrix k = r_llt.solve(b.transpose() * x);
    const Matrix closed = a - b * k;
    Matrix candidate = solve_lyapunov(closed, q + k.transpose() * r * k);
    const double cand_residual = care_residual(a, g, q, candidate);
    if (!(cand_residual < residual)) break;
    x = candidate;
    residual = cand_residual;
  }

  CareSolution sol;
  sol.X = x;
  sol.K = r_llt.solve(b.transpose() * x);
  sol.residual = residual;
  if (!is_hurwitz(a - b * sol.K)) {
    throw Error(ErrorCode::kRiccatiFailure, "closed loop A - BK is not Hurwitz");
  }
  return sol;
}

Matrix care_lqr_gain(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
  return solve_care(a, b, q, r).K;
}

}  // namespace resilock
