#include "resilock/system_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resilock/error.hpp"

namespace resilock {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::kInvalidInput, source + ": " + what);
}

double number(const json& v, const std::string& source, const std::string& key) {
  if (!v.is_number()) fail(source, "'" + key + "' must contain numbers");
  return v.get<double>();
}

Matrix read_matrix(const json& doc, const std::string& key, Eigen::Index rows, Eigen::Index cols,
                   const std::string& source) {
  const json& v = doc.at(key);
  if (!v.is_array()) fail(source, "'" + key + "' must be an array");
  Matrix out(rows, cols);
  if (!v.empty() && v.front().is_array()) {
    if (static_cast<Eigen::Index>(v.size()) != rows) {
      fail(source, "'" + key + "' needs " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = v[i];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        fail(source, "row " + std::to_string(i + 1) + " of '" + key + "' needs " + std::to_string(cols) +
                         " entries");
      }
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = number(row[j], source, key);
    }
  } else {
    if (static_cast<Eigen::Index>(v.size()) != rows * cols) {
      fail(source, "'" + key + "' needs " + std::to_string(rows * cols) + " entries, got " +
                       std::to_string(v.size()));
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = number(v[i * cols + j], source, key);
    }
  }
  return out;
}

Vector read_vector(const json& doc, const std::string& key, Eigen::Index size, const std::string& source) {
  const json& v = doc.at(key);
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != size) {
    fail(source, "'" + key + "' must be an array of " + std::to_string(size) + " numbers");
  }
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = number(v[i], source, key);
  return out;
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_array(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json control_matrix_object(const ControlMatrix& bbar) {
  json out;
  out["n"] = bbar.n();
  out["m"] = bbar.m();
  out["B"] = matrix_rows(bbar.entries());
  out["labels"] = bbar.labels();
  if (bbar.ranges()) {
    json ranges = json::array();
    for (const auto& r : *bbar.ranges()) ranges.push_back({r.min, r.max});
    out["ranges"] = std::move(ranges);
  }
  return out;
}

}  // namespace

SystemFile parse_system_file(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                source + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "top level must be an object");
  for (const char* key : {"n", "m", "B"}) {
    if (!doc.contains(key)) fail(source, std::string("missing required key '") + key + "'");
  }
  if (!doc["n"].is_number_integer() || !doc["m"].is_number_integer()) fail(source, "n and m must be integers");
  const auto n = doc["n"].get<Eigen::Index>();
  const auto m = doc["m"].get<Eigen::Index>();
  if (n < 1 || m < 1) fail(source, "n and m must be positive");

  Matrix b = read_matrix(doc, "B", n, m, source);
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array() || static_cast<Eigen::Index>(doc["labels"].size()) != m) {
      fail(source, "'labels' must hold " + std::to_string(m) + " strings");
    }
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) fail(source, "'labels' must hold strings");
      labels.push_back(l.get<std::string>());
    }
  }
  std::optional<std::vector<ActuatorRange>> ranges;
  if (doc.contains("ranges")) {
    const json& r = doc["ranges"];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != m) {
      fail(source, "'ranges' must hold " + std::to_string(m) + " [min, max] pairs");
    }
    ranges.emplace();
    for (const auto& pair : r) {
      if (!pair.is_array() || pair.size() != 2) fail(source, "each range must be [min, max]");
      ranges->push_back({number(pair[0], source, "ranges"), number(pair[1], source, "ranges")});
    }
  }

  SystemFile file{std::nullopt, ControlMatrix(std::move(b), std::move(labels), std::move(ranges)),
                  std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  if (doc.contains("A")) file.A = read_matrix(doc, "A", n, n, source);
  if (doc.contains("x0")) file.x0 = read_vector(doc, "x0", n, source);
  if (doc.contains("x_goal")) file.x_goal = read_vector(doc, "x_goal", n, source);
  if (doc.contains("epsilon")) {
    file.epsilon = number(doc["epsilon"], source, "epsilon");
    if (*file.epsilon < 0.0) fail(source, "'epsilon' must be nonnegative");
  }
  if (doc.contains("horizon")) {
    file.horizon = number(doc["horizon"], source, "horizon");
    if (!(*file.horizon > 0.0)) fail(source, "'horizon' must be positive");
  }
  return file;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_file(buf.str(), path);
}

std::string control_matrix_json(const ControlMatrix& bbar) { return control_matrix_object(bbar).dump(2); }

std::string system_file_json(const SystemFile& file) {
  json out = control_matrix_object(file.bbar);
  if (file.A) out["A"] = matrix_rows(*file.A);
  if (file.x0) out["x0"] = vector_array(*file.x0);
  if (file.x_goal) out["x_goal"] = vector_array(*file.x_goal);
  if (file.epsilon) out["epsilon"] = *file.epsilon;
  if (file.horizon) out["horizon"] = *file.horizon;
  return out.dump(2);
}

}  // namespace resilock
