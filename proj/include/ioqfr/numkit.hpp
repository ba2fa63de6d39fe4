#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ioqfr/errors.hpp"

namespace ioqfr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Every numerical threshold used by the library. Passed explicitly; there is
/// no process-wide default instance.
struct ToleranceSet {
  double min_rcond = 1e-14;         // reciprocal condition below which a solve is singular
  double pinv_rel = 1e-12;          // relative singular-value cutoff for pseudo-inverses
  double hermitian = 1e-12;         // relative hermiticity of H and of PSD inputs
  double gap = 1e-8;                // mixing gap, relative to the generator norm
  double stationary = 1e-9;         // steady-state residual and eigen-mode agreement
  double traceless = 1e-10;         // trace of resolvent sources, relative to their norm
  double real_part = 1e-10;         // imaginary residue allowed on real quantities
  double bound = 1e-8;              // Loewner margin tolerance
  double activity = 1e-12;          // smallest usable diagonal activity entry
  double pure_dissipative = 1e-10;  // Hamiltonian-like tangent component
  double psd = 1e-8;                // eigenvalue floor for noise matrices

  /// Sets a tolerance by name. "all" sets every accuracy tolerance (not min_rcond).
  /// Returns false for an unknown name.
  bool set(const std::string& name, double value) {
    if (name == "all") {
      pinv_rel = hermitian = gap = stationary = traceless = real_part = bound = activity =
          pure_dissipative = psd = value;
      return true;
    }
    for (auto& [key, field] : fields()) {
      if (key == name) {
        *field = value;
        return true;
      }
    }
    return false;
  }

  std::vector<std::pair<std::string, double*>> fields() {
    return {{"min_rcond", &min_rcond},   {"pinv_rel", &pinv_rel},
            {"hermitian", &hermitian},   {"gap", &gap},
            {"stationary", &stationary}, {"traceless", &traceless},
            {"real_part", &real_part},   {"bound", &bound},
            {"activity", &activity},     {"pure_dissipative", &pure_dissipative},
            {"psd", &psd}};
  }

  std::vector<std::pair<std::string, double>> values() const {
    auto copy = *this;
    std::vector<std::pair<std::string, double>> out;
    for (auto& [key, field] : copy.fields()) out.emplace_back(key, *field);
    return out;
  }
};

struct EigenResult {
  CVector values;                 // sorted by descending real part
  std::optional<CMatrix> vectors; // right eigenvectors as columns, same order
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Max absolute row sum.
template <typename Derived>
double norm_inf(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// LU-factorized square system, reusable for several right-hand sides.
class LinearSolver {
 public:
  LinearSolver(const CMatrix& a, const ToleranceSet& tol = {}) : a_(a), lu_(a) {
    if (a.rows() != a.cols()) throw DimMismatch("solve: matrix is not square");
    if (!all_finite(a)) throw NumericalError("solve: matrix has non-finite entries");
    rcond_ = 1.0;
    if (a.size() > 0) {
      // the estimator misses exact zero pivots, so also bound by the pivot ratio
      const RVector piv = lu_.matrixLU().diagonal().cwiseAbs();
      const double ratio = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
      rcond_ = std::min(lu_.rcond(), ratio);
      if (!std::isfinite(rcond_)) rcond_ = 0.0;
    }
    if (!(rcond_ >= tol.min_rcond)) {
      throw SingularMatrix("solve: estimated reciprocal condition " + sci(rcond_) +
                           " below " + sci(tol.min_rcond));
    }
  }

  CMatrix solve(const CMatrix& b) const {
    if (b.rows() != a_.rows()) throw DimMismatch("solve: right-hand side is not conformable");
    CMatrix x = lu_.solve(b);
    // one refinement step; cheap at these sizes and tightens the backward error
    CMatrix r = b - a_ * x;
    x += lu_.solve(r);
    return x;
  }

  double rcond() const { return rcond_; }

 private:
  CMatrix a_;
  Eigen::PartialPivLU<CMatrix> lu_;
  double rcond_ = 1.0;
};

inline CMatrix solve(const CMatrix& a, const CMatrix& b, const ToleranceSet& tol = {}) {
  return LinearSolver(a, tol).solve(b);
}

inline EigenResult eig(const CMatrix& a, bool compute_vectors = false) {
  if (a.rows() != a.cols()) throw DimMismatch("eig: matrix is not square");
  EigenResult result;
  if (a.size() == 0) {
    result.values = CVector(0);
    return result;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(a, compute_vectors);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("eig: QR iteration did not converge");

  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const CVector& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    if (vals(l).real() != vals(r).real()) return vals(l).real() > vals(r).real();
    return vals(l).imag() > vals(r).imag();
  });

  result.values.resize(n);
  CMatrix vecs;
  if (compute_vectors) vecs.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    result.values(k) = vals(order[static_cast<std::size_t>(k)]);
    if (compute_vectors) vecs.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  if (compute_vectors) result.vectors = std::move(vecs);
  return result;
}

/// Moore-Penrose pseudo-inverse. Singular values at or below rel_tol * sigma_max
/// are treated as zero.
template <typename Derived>
auto pinv(const Eigen::MatrixBase<Derived>& a, double rel_tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat m = a;
  Mat out = Mat::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * (sv.size() > 0 ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) {
      out.noalias() += svd.matrixV().col(i) * (Scalar(1.0 / sv(i)) * svd.matrixU().col(i).adjoint());
    }
  }
  return out;
}

/// Spectral data of a real symmetric PSD matrix restricted to its support.
struct PsdSupport {
  RVector eigenvalues;
  RMatrix eigenvectors;
  double cutoff = 0.0;
  Eigen::Index rank = 0;

  RMatrix projector() const {
    RMatrix p = RMatrix::Zero(eigenvectors.rows(), eigenvectors.rows());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
      if (eigenvalues(i) > cutoff) p += eigenvectors.col(i) * eigenvectors.col(i).transpose();
    return p;
  }
};

inline PsdSupport psd_support(const RMatrix& a, double rel_tol = 1e-12,
                              double symmetry_tol = 1e-12) {
  if (a.rows() != a.cols()) throw DimMismatch("psd: matrix is not square");
  PsdSupport s;
  if (a.size() == 0) return s;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
    throw NotPSD("psd: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw ConvergenceFailure("psd: eigensolver failed");
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  const double lmax = std::max(0.0, s.eigenvalues.maxCoeff());
  s.cutoff = rel_tol * lmax;
  if (s.eigenvalues.minCoeff() < -s.cutoff)
    throw NotPSD("psd: eigenvalue " + sci(s.eigenvalues.minCoeff()) +
                 " below tolerance");
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues(i) > s.cutoff) ++s.rank;
  return s;
}

/// A^{-1/2} on the support of a PSD matrix; directions outside the support map to 0.
inline RMatrix psd_inv_sqrt(const RMatrix& a, double rel_tol = 1e-12, double symmetry_tol = 1e-12) {
  const PsdSupport s = psd_support(a, rel_tol, symmetry_tol);
  RMatrix out = RMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double l = s.eigenvalues(i);
    if (l > s.cutoff) out += (1.0 / std::sqrt(l)) * s.eigenvectors.col(i) * s.eigenvectors.col(i).transpose();
  }
  return 0.5 * (out + out.transpose());
}

/// Kronecker product; (A kron B)(i*p + k, j*q + l) = A(i,j) B(k,l).
template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DA::Scalar, typename DB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline RMatrix symmetrize(const RMatrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace ioqfr
