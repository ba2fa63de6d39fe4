#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "ioqfr/numkit.hpp"

// Operators on a finite Hilbert space.
//
// Basis conventions: a qubit is ordered (|e>, |g>) so sigma_z = diag(1, -1) and
// sigma_minus = |g><e|. Fock spaces are ordered |0>, |1>, ..., |N-1>.

namespace ioqfr {

struct Operator {
  CMatrix matrix;
  std::string label;

  Operator() = default;
  explicit Operator(CMatrix m, std::string l = {}) : matrix(std::move(m)), label(std::move(l)) {
    if (matrix.rows() != matrix.cols()) throw DimMismatch("operator must be square");
  }

  Eigen::Index dim() const { return matrix.rows(); }

  static Operator zero(Eigen::Index d, std::string l = "0") { return Operator(CMatrix::Zero(d, d), std::move(l)); }
  static Operator identity(Eigen::Index d, std::string l = "I") {
    return Operator(CMatrix::Identity(d, d), std::move(l));
  }

  bool is_hermitian(double rel_tol = 1e-12) const {
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }
};

namespace detail {
inline void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimMismatch(std::string(what) + ": dimension " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
}
}  // namespace detail

inline Operator dagger(const Operator& a) { return Operator(a.matrix.adjoint(), a.label + "^dag"); }

inline Operator operator+(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "add");
  return Operator(a.matrix + b.matrix, a.label + "+" + b.label);
}

inline Operator operator-(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "subtract");
  return Operator(a.matrix - b.matrix, a.label + "-" + b.label);
}

inline Operator operator*(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "multiply");
  return Operator(a.matrix * b.matrix, a.label + "*" + b.label);
}

inline Operator scale(Complex c, const Operator& a) { return Operator(c * a.matrix, a.label); }
inline Operator operator*(Complex c, const Operator& a) { return scale(c, a); }
inline Operator operator*(double c, const Operator& a) { return scale(Complex(c, 0.0), a); }

inline Operator commutator(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "commutator");
  return Operator(a.matrix * b.matrix - b.matrix * a.matrix, "[" + a.label + "," + b.label + "]");
}

inline Operator anticommutator(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "anticommutator");
  return Operator(a.matrix * b.matrix + b.matrix * a.matrix, "{" + a.label + "," + b.label + "}");
}

inline Operator kron(const Operator& a, const Operator& b) {
  return Operator(ioqfr::kron(a.matrix, b.matrix), a.label + "(x)" + b.label);
}

inline Complex trace(const Operator& a) { return a.matrix.trace(); }

/// Tr[A B] without forming the product.
inline Complex trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.transpose().array() * b.array()).sum();
}

enum class Pauli { x, y, z, plus, minus };

inline Operator pauli(Pauli which) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (which) {
    case Pauli::x:
      m << 0, 1, 1, 0;
      return Operator(m, "sx");
    case Pauli::y:
      m << 0, -kI, kI, 0;
      return Operator(m, "sy");
    case Pauli::z:
      m << 1, 0, 0, -1;
      return Operator(m, "sz");
    case Pauli::plus:
      m(0, 1) = 1.0;  // |e><g|
      return Operator(m, "sp");
    case Pauli::minus:
      m(1, 0) = 1.0;  // |g><e|
      return Operator(m, "sm");
  }
  return Operator(m);
}

/// Truncated annihilation operator P_N a P_N on span{|0>..|n_cut-1>}.
inline Operator annihilation(Eigen::Index n_cut) {
  if (n_cut < 2) throw DimMismatch("annihilation: n_cut must be at least 2");
  CMatrix m = CMatrix::Zero(n_cut, n_cut);
  for (Eigen::Index n = 1; n < n_cut; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(m, "a");
}

/// Homodyne quadrature X_theta = e^{-i theta} L + e^{i theta} L^dag.
inline Operator quadrature(const Operator& l, double theta) {
  const Complex ph = std::exp(-kI * theta);
  CMatrix x = ph * l.matrix + std::conj(ph) * l.matrix.adjoint();
  x = 0.5 * (x + x.adjoint()).eval();
  return Operator(std::move(x), "X(" + l.label + ")");
}

}  // namespace ioqfr
