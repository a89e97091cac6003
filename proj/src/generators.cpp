#include "resilock/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "resilock/error.hpp"

namespace resilock {

ControlMatrix gen_identity_stack(int n, int p) {
  if (n < 1 || p < 1) {
    throw Error(ErrorCode::kInvalidInput, "identity stack needs n >= 1 and p >= 1");
  }
  Matrix bbar(n, 2 * p * n + 1);
  for (int k = 0; k < 2 * p; ++k) bbar.block(0, k * n, n, n).setIdentity();
  bbar.col(2 * p * n).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return ControlMatrix(std::move(bbar));
}

Matrix gen_hadamard(int order) {
  if (order < 1 || !std::has_single_bit(static_cast<unsigned>(order))) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "Hadamard order " + std::to_string(order) + " is not a power of two");
  }
  Matrix h = Matrix::Ones(1, 1);
  while (h.rows() < order) {
    const Eigen::Index k = h.rows();
    Matrix next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

int sign_orthogonal_order(int n, int m) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidInput, "sign-orthogonal construction needs n >= 1");
  }
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(m, 2 * n + 1))));
}

ControlMatrix gen_sign_orthogonal(int n, int m) {
  const int order = sign_orthogonal_order(n, m);
  const Matrix h = gen_hadamard(order);
  std::vector<int> rows{0};
  for (int r = order / 2; r >= 1 && static_cast<int>(rows.size()) < n; r /= 2) rows.push_back(r);
  for (int r = 1; r < order && static_cast<int>(rows.size()) < n; ++r) {
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
  }
  Matrix v(n, order);
  for (int i = 0; i < n; ++i) v.row(i) = h.row(rows[i]);
  return ControlMatrix(v / std::sqrt(static_cast<double>(order)));
}

ControlMatrix generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GeneratorFamily::kIdentityStack:
      return gen_identity_stack(spec.n, spec.p);
    case GeneratorFamily::kSignOrthogonal:
      return gen_sign_orthogonal(spec.n, spec.m);
    case GeneratorFamily::kFixture:
      if (!spec.fixture_name) {
        throw Error(ErrorCode::kInvalidInput, "fixture family needs a fixture name");
      }
      return appendix_fixture(*spec.fixture_name);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown generator family");
}

}  // namespace resilock
