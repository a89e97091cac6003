#pragma once

#include <optional>
#include <string>

#include "resilock/linalg.hpp"
#include "resilock/resilience.hpp"

namespace resilock {

/// Contents of a JSON system description. Matrices are row-major, either as
/// nested arrays or as one flat array. Angles are radians.
struct SystemFile {
  std::optional<Matrix> A;
  ControlMatrix bbar;
  std::optional<Vector> x0;
  std::optional<Vector> x_goal;
  std::optional<double> epsilon;
  std::optional<double> horizon;
};

/// Throws ParseError (with source name and line) on malformed JSON and
/// InvalidInput on inconsistent dimensions.
SystemFile parse_system_file(const std::string& text, const std::string& source = "<input>");

SystemFile load_system_file(const std::string& path);

/// JSON with n, m, B (nested rows), labels and ranges when present.
std::string control_matrix_json(const ControlMatrix& bbar);

std::string system_file_json(const SystemFile& file);

}  // namespace resilock
