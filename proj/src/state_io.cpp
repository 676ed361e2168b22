#include "superact/state_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace superact {

namespace {

using nlohmann::json;

void read_block(const json& rows, std::size_t dim, const char* name, Matrix& m, bool imaginary) {
  if (!rows.is_array() || rows.size() != dim) {
    throw std::invalid_argument(std::string("\"") + name + "\" must be a " + std::to_string(dim) +
                                "-row array");
  }
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != dim) {
      throw std::invalid_argument(std::string("\"") + name + "\" row " + std::to_string(r) +
                                  " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      if (!row[c].is_number()) {
        throw std::invalid_argument(std::string("\"") + name + "\" entry is not a number");
      }
      const double v = row[c].get<double>();
      if (imaginary) {
        m(r, c) = Complex{m(r, c).real(), v};
      } else {
        m(r, c) = Complex{v, m(r, c).imag()};
      }
    }
  }
}

}  // namespace

DensityMatrix density_matrix_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer()) {
    throw std::invalid_argument("state file needs an integer \"n_qubits\"");
  }
  const auto n = doc["n_qubits"].get<long long>();
  if (n < 1 || n > static_cast<long long>(DensityMatrix::kMaxQubits)) {
    throw std::invalid_argument("\"n_qubits\" must be between 1 and 8");
  }
  const std::size_t dim = std::size_t{1} << n;
  if (!doc.contains("re")) throw std::invalid_argument("state file needs \"re\"");
  Matrix m(dim, dim);
  read_block(doc["re"], dim, "re", m, false);
  if (doc.contains("im")) read_block(doc["im"], dim, "im", m, true);
  return DensityMatrix::from_matrix(std::move(m), Normalization::Normalized);
}

DensityMatrix read_density_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return density_matrix_from_json(buf.str());
}

std::string density_matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  json doc;
  doc["n_qubits"] = qubits_for_dimension(m.rows());
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump();
}

}  // namespace superact
