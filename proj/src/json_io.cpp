#include "json_io.hpp"

#include "errors.hpp"

namespace qwork::json_io {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected [re, im] pair", path);
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of rows", path);
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw ParseError("expected an array of [re, im] pairs", path + "[0]");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("row length differs from row 0", row_path);
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], row_path + "[" + std::to_string(c) + "]");
  }
  if (!m.all_finite()) throw ParseError("non-finite entry", path);
  return m;
}

}  // namespace qwork::json_io
