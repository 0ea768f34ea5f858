#pragma once

#include <string>

#include "bpg/sym_operator.hpp"

namespace bpg {

/// Read a MatrixMarket file (coordinate or array, real, general or
/// symmetric). General files must carry symmetric content; a mismatched
/// (i,j)/(j,i) pair or a duplicate entry is a parse error reporting the
/// offending line. Diagonal patterns come back in diagonal storage,
/// everything else as upper-triangle CSR.
SymOperator mm_read(const std::string& path);

/// Write in coordinate symmetric format (lower triangle), values with 17
/// significant digits so that a read reproduces entries exactly.
void mm_write(const SymOperator& op, const std::string& path);

} // namespace bpg
