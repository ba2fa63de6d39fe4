#pragma once

#include <set>
#include <string>

#include "ioqfr/lindblad.hpp"
#include "ioqfr/lockin.hpp"

namespace ioqfr {

struct NoiseMatrix {
  double omega = 0.0;
  CMatrix complex_S;  // m x m Hermitian
  RMatrix real_S;     // 2m x 2m, lock-in ordering (c_1, s_1, c_2, s_2, ...)
};

/// Current-insertion superoperator rho -> e^{-i theta} L rho + e^{i theta} rho L^dag.
inline Superoperator insertion_superop(const Operator& l, double theta) {
  const Complex ph = std::exp(-kI * theta);
  return Superoperator{l.dim(), ph * left_mult(l.matrix) + std::conj(ph) * right_mult(l.matrix.adjoint())};
}

namespace detail {

inline const MonitoredCurrent& monitored_at(const LindbladModel& model, Eigen::Index a) {
  if (a < 0 || a >= static_cast<Eigen::Index>(model.monitored.size()))
    throw ModelError("monitored current index " + std::to_string(a) + " out of range");
  return model.monitored[static_cast<std::size_t>(a)];
}

/// Q(B_theta rho_ss), the connected insertion source.
inline Operator insertion_source(const Analysis& an, const Operator& l, double theta) {
  const Operator& rho = an.stationary.rho;
  const Complex ph = std::exp(-kI * theta);
  Operator b(ph * l.matrix * rho.matrix + std::conj(ph) * rho.matrix * l.matrix.adjoint());
  return project_q(b, rho);
}

inline void require_unique_channels(const LindbladModel& model) {
  std::set<Eigen::Index> seen;
  for (const auto& m : model.monitored)
    if (!seen.insert(m.channel).second)
      throw DuplicateChannel("channel " + std::to_string(m.channel) + " is monitored more than once");
}

inline double checked_real(Complex z, double tol, const char* what) {
  if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z.real())))
    throw NumericalError(std::string(what) + ": imaginary residue " + sci(z.imag()));
  return z.real();
}

}  // namespace detail

/// Stationary homodyne spectrum of a channel at phase theta. Evaluated as
/// 1 + T(omega) + T(-omega) with T the one-sided resolvent transform; the
/// imaginary part of the sum must vanish.
inline double homodyne_spectrum(const Analysis& an, Eigen::Index channel, double theta, double omega) {
  const Operator& l = an.model.channels.at(static_cast<std::size_t>(channel));
  const Operator x = quadrature(l, theta);
  const Operator src = detail::insertion_source(an, l, theta);
  const Complex tp = trace_product(x.matrix, Resolvent(an.generator, an.stationary.rho, omega, an.tol).apply(src).matrix);
  const Complex tm = omega == 0.0 ? tp
                                  : trace_product(x.matrix, Resolvent(an.generator, an.stationary.rho, -omega, an.tol)
                                                                .apply(src)
                                                                .matrix);
  return detail::checked_real(1.0 + tp + tm, an.tol.real_part, "homodyne_spectrum");
}

/// Evaluates several frequencies sharing the two resolvents at +omega and -omega.
class SpectrumEvaluator {
 public:
  explicit SpectrumEvaluator(const Analysis& an) : an_(an) {
    detail::require_unique_channels(an.model);
    for (const auto& m : an.model.monitored) {
      const Operator& l = an.model.channels.at(static_cast<std::size_t>(m.channel));
      quadratures_.push_back(quadrature(l, m.theta));
      sources_.push_back(detail::insertion_source(an, l, m.theta));
    }
  }

  NoiseMatrix at(double omega, const Resolvent& plus, const Resolvent& minus) const {
    const auto m = static_cast<Eigen::Index>(quadratures_.size());
    std::vector<CMatrix> xp, xm;
    for (Eigen::Index b = 0; b < m; ++b) {
      xp.push_back(plus.apply(sources_[static_cast<std::size_t>(b)]).matrix);
      xm.push_back(minus.apply(sources_[static_cast<std::size_t>(b)]).matrix);
    }
    NoiseMatrix s;
    s.omega = omega;
    s.complex_S = CMatrix::Identity(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) {
        s.complex_S(a, b) += trace_product(quadratures_[static_cast<std::size_t>(a)].matrix, xp[static_cast<std::size_t>(b)]);
        s.complex_S(a, b) += trace_product(quadratures_[static_cast<std::size_t>(b)].matrix, xm[static_cast<std::size_t>(a)]);
      }
    const double herm = (s.complex_S - s.complex_S.adjoint()).cwiseAbs().maxCoeff();
    if (herm > an_.tol.real_part * std::max(1.0, s.complex_S.cwiseAbs().maxCoeff()))
      throw NumericalError("matrix_spectrum: non-Hermitian noise matrix, residue " + sci(herm));
    s.complex_S = 0.5 * (s.complex_S + s.complex_S.adjoint()).eval();
    s.real_S = symmetrize(real_blocks(s.complex_S));
    return s;
  }

  NoiseMatrix at(double omega) const {
    Resolvent plus(an_.generator, an_.stationary.rho, omega, an_.tol);
    if (omega == 0.0) return at(omega, plus, plus);
    Resolvent minus(an_.generator, an_.stationary.rho, -omega, an_.tol);
    return at(omega, plus, minus);
  }

 private:
  const Analysis& an_;
  std::vector<Operator> quadratures_;
  std::vector<Operator> sources_;
};

/// Noise matrix of every monitored current; D_ab = delta_ab (independent vacuum inputs).
inline NoiseMatrix matrix_spectrum(const Analysis& an, double omega) {
  if (an.model.monitored.empty()) throw ModelError("matrix_spectrum: no monitored currents");
  return SpectrumEvaluator(an).at(omega);
}

}  // namespace ioqfr
