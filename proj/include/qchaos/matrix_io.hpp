#pragma once
/** \file
 * Matrix interchange file: {"dim": N, "entries": [[re, im], ...]} in row-major order.
 */

#include "qchaos/linalg.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qchaos {

std::string matrix_to_json(const CMatrixd& m);

/// Parses and validates shape; throws IoError on malformed documents.
CMatrixd matrix_from_json(std::string_view text);

/// Reads a matrix file and runs the unitarity check (UnitarityError, DimensionError).
UnitaryMatrixd read_unitary_file(const std::filesystem::path& path);

void write_matrix_file(const CMatrixd& m, const std::filesystem::path& path);

}  // namespace qchaos
