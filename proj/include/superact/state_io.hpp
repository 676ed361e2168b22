#pragma once

#include <filesystem>
#include <string>

#include "superact/quantum_state.hpp"

namespace superact {

/// Parses {"n_qubits": k, "re": [[...]], "im": [[...]]}. "im" may be omitted
/// for real matrices. The result is validated as a normalized density matrix.
DensityMatrix density_matrix_from_json(const std::string& text);
DensityMatrix read_density_matrix(const std::filesystem::path& path);

std::string density_matrix_to_json(const Matrix& m);

}  // namespace superact
