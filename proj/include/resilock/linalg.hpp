#pragma once

#include <Eigen/Dense>

namespace resilock {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical margins shared by every decision procedure.
struct Tolerance {
  double pd_eps = 1e-9;    ///< relative margin for strict positive definiteness
  double eig_eps = 1e-10;  ///< negative eigenvalues above -eig_eps are clipped
  double ode_step = 1e-3;  ///< default integration step [s]

  /// Throws InvalidInput unless every field is strictly positive.
  void validate() const;
};

/// Real symmetric matrix. Construction rejects inputs whose asymmetry
/// exceeds 1e-12 * max|M| and stores the exactly symmetrized average.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  /// X X^T, symmetric by construction.
  static SymMatrix gram(const Matrix& x);
  static SymMatrix identity(Eigen::Index n);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double s) const;

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

struct SymEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< columns are unit eigenvectors
};

SymEigen sym_eigen(const SymMatrix& m);

/// Ascending eigenvalues.
Vector sym_eigenvalues(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

/// Absolute threshold pd_eps * (1 + max|M_ii|) used by the strict tests.
double pd_threshold(const SymMatrix& m, const Tolerance& tol = {});

bool is_positive_definite(const SymMatrix& m, const Tolerance& tol = {});

/// Compact SVD M = U diag(D) V with V having orthonormal rows (m >= n).
struct CompactSvd {
  Matrix U;  ///< n x n orthogonal
  Vector D;  ///< n singular values, descending
  Matrix V;  ///< n x m, V V^T = I
};

CompactSvd compact_svd(const Matrix& m);

double max_singular_value(const Matrix& m);

/// Solves M X = rhs for symmetric positive definite M.
Matrix solve_spd(const SymMatrix& m, const Matrix& rhs, const Tolerance& tol = {});
Vector solve_spd(const SymMatrix& m, const Vector& rhs, const Tolerance& tol = {});

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-eig_eps, 0) are clipped to zero; anything lower throws.
SymMatrix spd_sqrt(const SymMatrix& m, const Tolerance& tol = {});

/// max Re(lambda(A)).
double spectral_abscissa(const Matrix& a);

bool is_hurwitz(const Matrix& a, double margin = 0.0);

/// e^{M}.
Matrix expm(const Matrix& m);

struct CareSolution {
  Matrix X;  ///< stabilizing solution of A'X + XA - XBR^{-1}B'X + Q = 0
  Matrix K;  ///< R^{-1} B' X
  double residual = 0.0;
};

/// Continuous-time algebraic Riccati equation via the stable invariant
/// subspace of the Hamiltonian matrix, polished by Newton-Kleinman steps.
CareSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                        const Matrix& r);

/// LQR state-feedback gain K (u = -K x).
Matrix care_lqr_gain(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r);

}  // namespace resilock
