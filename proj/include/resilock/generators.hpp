#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resilock/resilience.hpp"

namespace resilock {

enum class GeneratorFamily { kIdentityStack, kSignOrthogonal, kFixture };

struct GeneratorSpec {
  int n = 1;
  int p = 1;
  /// Column count for kSignOrthogonal; 0 picks the smallest supported one.
  int m = 0;
  GeneratorFamily family = GeneratorFamily::kIdentityStack;
  std::optional<std::string> fixture_name;
};

/// [I_n ... I_n D] with 2p identity blocks and D = ones(n) / sqrt(n).
ControlMatrix gen_identity_stack(int n, int p);

/// Sylvester Hadamard matrix; order must be a power of two.
Matrix gen_hadamard(int order);

/// n rows of the Sylvester Hadamard matrix of order m, scaled by 1/sqrt(m).
/// Rows are the all-ones row followed by rows m/2, m/4, ..., then the
/// remaining rows in index order. An m that is not a power of two, or is
/// below 2n+1, is raised to the next power of two >= max(m, 2n+1).
ControlMatrix gen_sign_orthogonal(int n, int m = 0);

/// Smallest m accepted unchanged by gen_sign_orthogonal for this n.
int sign_orthogonal_order(int n, int m = 0);

std::vector<std::string> appendix_fixture_names();

/// Verbatim 2-resilient sign matrices: "6x24", "8x32" or "12x46".
ControlMatrix appendix_fixture(const std::string& name);

ControlMatrix generate(const GeneratorSpec& spec);

}  // namespace resilock
