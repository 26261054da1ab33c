#pragma once

#include <string>

#include <json.hpp>

#include "matrix.hpp"

namespace qwork::json_io {

using json = nlohmann::ordered_json;

json complex_to_json(Complex z);
json matrix_to_json(const Matrix& m);

// `path` prefixes error messages, e.g. "H" gives "H[1][0]: expected [re, im] pair".
Complex complex_from_json(const json& j, const std::string& path);
Matrix matrix_from_json(const json& j, const std::string& path);

}  // namespace qwork::json_io
