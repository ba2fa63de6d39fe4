#pragma once

#include "ioqfr/numkit.hpp"

// Real lock-in representation. Parameters and currents are ordered as
// (cosine, sine) pairs: (c_1, s_1, c_2, s_2, ...).

namespace ioqfr {

/// 2x2 real block [[Re z, -Im z], [Im z, Re z]] representing multiplication by z
/// on (cosine, sine) lock-in components.
inline RMatrix real_block(Complex z) {
  RMatrix b(2, 2);
  b << z.real(), -z.imag(), z.imag(), z.real();
  return b;
}

/// Blockwise real_block of a complex matrix: (rows x cols) -> (2 rows x 2 cols).
inline RMatrix real_blocks(const CMatrix& z) {
  RMatrix out(2 * z.rows(), 2 * z.cols());
  for (Eigen::Index a = 0; a < z.rows(); ++a)
    for (Eigen::Index b = 0; b < z.cols(); ++b) out.block<2, 2>(2 * a, 2 * b) = real_block(z(a, b));
  return out;
}

}  // namespace ioqfr
