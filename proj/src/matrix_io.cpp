#include "qchaos/matrix_io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace qchaos {

std::string matrix_to_json(const CMatrixd& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix file: matrix must be square");
  nlohmann::ordered_json doc;
  doc["dim"] = m.rows();
  auto entries = nlohmann::ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  doc["entries"] = std::move(entries);
  return doc.dump() + '\n';
}

CMatrixd matrix_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("matrix file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries")) {
    throw IoError("matrix file: expected an object with 'dim' and 'entries'");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "dim" && key != "entries") throw IoError("matrix file: unknown key '" + key + "'");
  }
  if (!doc["dim"].is_number_integer()) throw IoError("matrix file: 'dim' must be an integer");
  const auto dim = doc["dim"].get<long long>();
  if (dim < 1) throw IoError("matrix file: 'dim' must be positive");
  if (dim > kMaxDim) throw DimensionError("matrix file: dim " + std::to_string(dim) + " exceeds cap");
  const auto& entries = doc["entries"];
  if (!entries.is_array() || static_cast<long long>(entries.size()) != dim * dim) {
    throw IoError("matrix file: 'entries' must hold dim*dim [re, im] pairs");
  }
  CMatrixd m(dim, dim);
  std::size_t k = 0;
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c, ++k) {
      const auto& e = entries[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw IoError("matrix file: entry " + std::to_string(k) + " is not a [re, im] pair");
      }
      m(r, c) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

UnitaryMatrixd read_unitary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return UnitaryMatrixd(matrix_from_json(buf.str()));
}

void write_matrix_file(const CMatrixd& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << matrix_to_json(m);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qchaos
