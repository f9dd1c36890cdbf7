#ifndef WRFLOW_MATRIX_IO_HPP
#define WRFLOW_MATRIX_IO_HPP

#include <string>

#include "wrflow/psd_core.hpp"

namespace wrflow {

enum class MatrixKind { Psd, Projection, Symmetric };

MatrixKind parse_kind(const std::string& s);
std::string kind_name(MatrixKind k);

// File format: "dim = N", "kind = psd|projection|symmetric",
// "entries = <N*N row-major reals>" (order free, comments with '#').
SymmetricMatrix parse_matrix_file(const std::string& path);
SymmetricMatrix parse_matrix_text(const std::string& text, const std::string& origin);
void write_matrix_file(const std::string& path, const SymmetricMatrix& m, MatrixKind kind);

// Spec is a keyword ("zero"/"identity"), an inline span
// ("span: 1,0 ; 0,1"), or a path to a projection matrix file.
Projection resolve_projection(const std::string& spec, int dim);

} // namespace wrflow

#endif
