#pragma once

#include <string>

#include "qpnls/poly.hpp"

namespace qpnls {

/// Line-oriented text form of a polynomial. First line `# d <dim>`, then one
/// term per line: `site:(n,n') site:(n,n') ... # re im` with sites in
/// canonical order and coefficients printed to 17 significant digits, so a
/// round trip reproduces every double bit-exactly.
std::string poly_to_text(const HamiltonianPoly& W);

/// Inverse of poly_to_text. Throws std::runtime_error with a line number on
/// malformed input.
HamiltonianPoly poly_from_text(const std::string& text);

/// 17-significant-digit decimal rendering (round-trips doubles exactly).
std::string format_double(double x);

}  // namespace qpnls
