#include "resilock/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <thread>

#include "resilock/error.hpp"

namespace resilock {

ControlMatrix::ControlMatrix(Matrix entries, std::vector<std::string> labels,
                             std::optional<std::vector<ActuatorRange>> ranges)
    : entries_(std::move(entries)), labels_(std::move(labels)), ranges_(std::move(ranges)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw Error(ErrorCode::kInvalidInput, "control matrix needs n >= 1 and m >= 1");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "control matrix has non-finite entries");
  }
  if (labels_.empty()) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) labels_.push_back("u" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(labels_.size()) != entries_.cols()) {
    throw Error(ErrorCode::kInvalidInput, "label count must equal the actuator count");
  }
  if (ranges_) {
    if (static_cast<Eigen::Index>(ranges_->size()) != entries_.cols()) {
      throw Error(ErrorCode::kInvalidInput, "range count must equal the actuator count");
    }
    for (const auto& r : *ranges_) {
      if (!(r.min < r.max)) {
        throw Error(ErrorCode::kDegenerateRange, "actuator range requires min < max");
      }
    }
  }
}

ControlMatrix ControlMatrix::with_scaled_column(Eigen::Index j, double factor) const {
  Matrix scaled = entries_;
  scaled.col(j) *= factor;
  return ControlMatrix(std::move(scaled), labels_, ranges_);
}

ControlMatrix ControlMatrix::left_multiplied(const Matrix& p) const {
  return ControlMatrix(p * entries_, labels_, ranges_);
}

LossScenario::LossScenario(std::vector<int> indices, Eigen::Index m) : indices_(std::move(indices)), m_(m) {
  std::sort(indices_.begin(), indices_.end());
  for (int j : indices_) {
    if (j < 0 || j >= m) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "actuator index " + std::to_string(j + 1) + " outside [1, " + std::to_string(m) + "]");
    }
  }
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorCode::kDuplicateIndex, "loss scenario repeats an actuator");
  }
  if (indices_.empty() || static_cast<Eigen::Index>(indices_.size()) >= m) {
    throw Error(ErrorCode::kInvalidInput, "loss scenario needs 1 <= p < m");
  }
}

bool LossScenario::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

SplitSystem split(const ControlMatrix& bbar, const LossScenario& scenario) {
  if (scenario.m() != bbar.m()) {
    throw Error(ErrorCode::kInvalidInput, "scenario built for a different actuator count");
  }
  const Eigen::Index n = bbar.n();
  const int p = scenario.p();
  SplitSystem sys{Matrix(n, bbar.m() - p), Matrix(n, p), scenario, {}};
  Eigen::Index bi = 0, ci = 0;
  for (Eigen::Index j = 0; j < bbar.m(); ++j) {
    if (scenario.contains(static_cast<int>(j))) {
      sys.C.col(ci++) = bbar.entries().col(j);
    } else {
      sys.B.col(bi++) = bbar.entries().col(j);
      sys.controlled.push_back(static_cast<int>(j));
    }
  }
  return sys;
}

SymMatrix compute_F(const SplitSystem& sys) {
  return SymMatrix::gram(sys.B) - SymMatrix::gram(sys.C);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kTolerable: return "tolerable";
    case Verdict::kNotTolerable: return "not_tolerable";
    case Verdict::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

LossVerdict is_loss_tolerable(const SplitSystem& sys, const Tolerance& tol) {
  const SymMatrix f = compute_F(sys);
  LossVerdict v;
  v.indices = sys.scenario.indices();
  v.min_eigenvalue = min_eigenvalue(f);
  const double margin = pd_threshold(f, tol);
  if (v.min_eigenvalue > margin) {
    v.verdict = Verdict::kTolerable;
  } else if (v.min_eigenvalue < -margin) {
    v.verdict = Verdict::kNotTolerable;
  } else {
    v.verdict = Verdict::kIndeterminate;
  }
  return v;
}

unsigned default_worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RESILOCK_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::uint64_t binomial(std::int64_t m, std::int64_t p) {
  if (p < 0 || p > m) return 0;
  p = std::min(p, m - p);
  // Saturates instead of overflowing; callers only compare against a cap.
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::int64_t i = 1; i <= p; ++i) {
    const auto num = static_cast<std::uint64_t>(m - p + i);
    if (result > kMax / num) return kMax;
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<std::vector<int>> combinations(int m, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > m) return out;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == m - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

namespace {

std::vector<std::vector<int>> budgeted_combinations(Eigen::Index m, int p, const EnumerationOptions& opts) {
  if (p < 1 || p >= m) {
    throw Error(ErrorCode::kInvalidInput, "p must satisfy 1 <= p < m");
  }
  const std::uint64_t count = binomial(m, p);
  if (count > opts.combination_cap) {
    throw Error(ErrorCode::kCombinatorialBudgetExceeded,
                "binomial(" + std::to_string(m) + ", " + std::to_string(p) + ") = " + std::to_string(count) +
                    " exceeds the cap of " + std::to_string(opts.combination_cap));
  }
  return combinations(static_cast<int>(m), p);
}

// Evaluates fn(i) for i in [0, count), contiguous chunks per worker. Each
// slot is written by exactly one worker, so the result order is fixed.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = default_worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, count / 64)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

ResilienceReport check_p_resilience(const ControlMatrix& bbar, int p, const Tolerance& tol,
                                    const EnumerationOptions& opts) {
  tol.validate();
  const auto combos = budgeted_combinations(bbar.m(), p, opts);
  ResilienceReport report;
  report.p = p;
  report.verdicts.resize(combos.size());
  parallel_for(combos.size(), opts.workers, [&](std::size_t i) {
    report.verdicts[i] = is_loss_tolerable(split(bbar, LossScenario(combos[i], bbar.m())), tol);
  });
  report.overall = true;
  for (const auto& v : report.verdicts) {
    report.overall = report.overall && v.tolerable();
    if (v.verdict == Verdict::kIndeterminate) ++report.indeterminate;
  }
  return report;
}

int degree_of_resilience(const ControlMatrix& bbar, const Tolerance& tol, const EnumerationOptions& opts) {
  int degree = 0;
  // p-resilience implies (p-1)-resilience, so the first failure ends the search.
  for (int p = 1; p < bbar.m(); ++p) {
    if (!check_p_resilience(bbar, p, tol, opts).overall) break;
    degree = p;
  }
  return degree;
}

SvdReduction svd_reduce(const ControlMatrix& bbar, const Tolerance& tol) {
  const bool valid = is_positive_definite(SymMatrix::gram(bbar.entries()), tol);
  if (bbar.m() < bbar.n()) {
    // Not overactuated: no compact SVD with orthonormal rows exists.
    return {Matrix(), false};
  }
  return {compact_svd(bbar.entries()).V, valid};
}

bool sigma_criterion(const Matrix& v, int p, const Tolerance& tol, const EnumerationOptions& opts) {
  const Matrix vvt = v * v.transpose();
  if ((vvt - Matrix::Identity(v.rows(), v.rows())).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::kNotOrthonormalRows, "sigma criterion needs V V^T = I");
  }
  const auto combos = budgeted_combinations(v.cols(), p, opts);
  const double bound = 1.0 / std::sqrt(2.0) - tol.pd_eps;
  std::vector<char> ok(combos.size(), 0);
  parallel_for(combos.size(), opts.workers, [&](std::size_t i) {
    Matrix cv(v.rows(), p);
    for (int k = 0; k < p; ++k) cv.col(k) = v.col(combos[i][k]);
    ok[i] = max_singular_value(cv.transpose()) < bound;
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

double verify_size_identity(const ControlMatrix& bbar, const Tolerance& tol) {
  const SymMatrix gram = SymMatrix::gram(bbar.entries());
  if (!is_positive_definite(gram, tol)) {
    throw Error(ErrorCode::kSingularGram, "Bbar Bbar^T is not invertible");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < bbar.m(); ++i) {
    const auto sys = split(bbar, LossScenario({static_cast<int>(i)}, bbar.m()));
    sum += compute_F(sys).matrix().determinant();
  }
  const double det = gram.matrix().determinant();
  const double rhs = det * static_cast<double>(bbar.m() - 2 * bbar.n());
  return std::abs(sum - rhs) / (1.0 + std::abs(det) * static_cast<double>(bbar.m()));
}

}  // namespace resilock
