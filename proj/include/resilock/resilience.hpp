#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resilock/linalg.hpp"

namespace resilock {

struct ActuatorRange {
  double min = 0.0;
  double max = 0.0;

  double span() const { return max - min; }
  double center() const { return 0.5 * (max + min); }
};

/// Full actuation matrix with one column per actuator.
class ControlMatrix {
 public:
  explicit ControlMatrix(Matrix entries, std::vector<std::string> labels = {},
                         std::optional<std::vector<ActuatorRange>> ranges = std::nullopt);

  Eigen::Index n() const { return entries_.rows(); }
  Eigen::Index m() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<std::vector<ActuatorRange>>& ranges() const { return ranges_; }

  /// Returns a copy with every entry of column j multiplied by factor.
  ControlMatrix with_scaled_column(Eigen::Index j, double factor) const;
  /// Returns P * entries, keeping labels and ranges.
  ControlMatrix left_multiplied(const Matrix& p) const;

 private:
  Matrix entries_;
  std::vector<std::string> labels_;
  std::optional<std::vector<ActuatorRange>> ranges_;
};

/// Set of p actuators (0-based column indices, sorted) that lost authority.
class LossScenario {
 public:
  LossScenario(std::vector<int> indices, Eigen::Index m);

  const std::vector<int>& indices() const { return indices_; }
  int p() const { return static_cast<int>(indices_.size()); }
  Eigen::Index m() const { return m_; }
  bool contains(int j) const;

 private:
  std::vector<int> indices_;
  Eigen::Index m_;
};

/// Column partition Bbar = [B C] (up to the permutation given by the scenario).
struct SplitSystem {
  Matrix B;  ///< controlled columns, original order
  Matrix C;  ///< uncontrolled columns, original order
  LossScenario scenario;
  std::vector<int> controlled;  ///< original indices of the columns of B
};

SplitSystem split(const ControlMatrix& bbar, const LossScenario& scenario);

/// F = B B^T - C C^T.
SymMatrix compute_F(const SplitSystem& sys);

enum class Verdict { kTolerable, kNotTolerable, kIndeterminate };

std::string to_string(Verdict v);

struct LossVerdict {
  std::vector<int> indices;
  double min_eigenvalue = 0.0;
  Verdict verdict = Verdict::kIndeterminate;

  bool tolerable() const { return verdict == Verdict::kTolerable; }
};

/// F-criterion for one loss. Minimum eigenvalues inside the pd margin are
/// reported as indeterminate and count as not tolerable.
LossVerdict is_loss_tolerable(const SplitSystem& sys, const Tolerance& tol = {});

struct ResilienceReport {
  int p = 0;
  std::vector<LossVerdict> verdicts;  ///< lexicographic scenario order
  bool overall = false;
  std::size_t indeterminate = 0;
  std::optional<int> degree;
};

struct EnumerationOptions {
  std::uint64_t combination_cap = 1'000'000;
  /// 0 selects the default worker count (RESILOCK_THREADS or hardware).
  unsigned workers = 0;
};

/// Worker count from RESILOCK_THREADS, capped by hardware concurrency.
unsigned default_worker_count();

std::uint64_t binomial(std::int64_t m, std::int64_t p);

/// All p-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int m, int p);

ResilienceReport check_p_resilience(const ControlMatrix& bbar, int p, const Tolerance& tol = {},
                                    const EnumerationOptions& opts = {});

/// Largest p with check_p_resilience true (0 when not even 1-resilient).
int degree_of_resilience(const ControlMatrix& bbar, const Tolerance& tol = {},
                         const EnumerationOptions& opts = {});

struct SvdReduction {
  Matrix V;     ///< orthonormal rows
  bool valid;   ///< Bbar Bbar^T positive definite, so V carries the same degree
};

SvdReduction svd_reduce(const ControlMatrix& bbar, const Tolerance& tol = {});

/// Singular-value criterion on an orthonormal-row matrix: every p-column
/// submatrix C_V must have sigma_max(C_V^T) < 1/sqrt(2).
bool sigma_criterion(const Matrix& v, int p, const Tolerance& tol = {},
                     const EnumerationOptions& opts = {});

/// |sum_i det(F_i) - det(Bbar Bbar^T)(m - 2n)| / (1 + |det(Bbar Bbar^T)| m).
double verify_size_identity(const ControlMatrix& bbar, const Tolerance& tol = {});

}  // namespace resilock
