#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "ioqfr/lindblad.hpp"

// Built-in models and their closed-form evaluators.

namespace ioqfr {

// ---------------------------------------------------------------------------
// Lossless single-sided cavity (analytic only; infinite Hilbert space)

struct CavityAnalytic {
  double kappa = 1.0;
  double Delta = 0.0;
};

/// Scattering coefficient s = (-kappa/2 + i(Delta - omega)) / (kappa/2 + i(Delta - omega)).
inline Complex cavity_s(const CavityAnalytic& c, double omega) {
  if (!(c.kappa > 0.0)) throw ModelError("cavity: kappa must be positive");
  const double detuning = c.Delta - omega;
  return Complex(-0.5 * c.kappa, detuning) / Complex(0.5 * c.kappa, detuning);
}

/// Homodyne phase maximizing the coherent-displacement response, arg s(omega).
inline double cavity_optimal_theta(const CavityAnalytic& c, double omega) { return std::arg(cavity_s(c, omega)); }

/// |R|^2 / S for the phase-optimized homodyne current: |R| = 2|s|, S = 1.
inline double cavity_scalar_ratio(const CavityAnalytic& c, double omega) {
  const double r = 2.0 * std::abs(cavity_s(c, omega));
  const double shot_noise = 1.0;
  return r * r / shot_noise;
}

// ---------------------------------------------------------------------------
// Resonance fluorescence: H = Delta/2 sz + Omega/2 sx, L = sqrt(kappa) sm

struct RfAnalytic {
  double kappa = 1.0;
  double Omega = 1.0;
};

struct RfClosedForms {
  double D = 0.0;
  double p_e = 0.0;
  double A = 0.0;
  Complex d;
  Complex R_y;
  double S_x = 0.0;
  double S_y = 0.0;
};

/// Resonant (Delta = 0) closed forms for the phase-quadrature response and both
/// quadrature spectra.
inline RfClosedForms rf_closed_forms(const RfAnalytic& p, double omega) {
  const double k = p.kappa, W = p.Omega, w = omega;
  RfClosedForms f;
  f.D = k * k + 2.0 * W * W;
  f.p_e = W * W / f.D;
  f.A = k * f.p_e;
  f.d = Complex(0.5 * k, -w) * Complex(k, -w) + W * W;
  f.R_y = (std::sqrt(k) * W * k / f.D) * Complex(3.0 * W * W - 0.5 * k * k - w * w, -0.5 * k * w) / f.d;
  f.S_x = 1.0 + 2.0 * k * k * W * W / (f.D * (0.25 * k * k + w * w));
  f.S_y = 1.0 - (4.0 * k * W * W / (f.D * f.D)) *
                    (Complex(k * (k * k - 4.0 * W * W), -w * (k * k - 2.0 * W * W)) / f.d).real();
  return f;
}

/// Stationary Bloch vector (<sx>, <sy>, <sz>) at Delta = 0.
inline std::array<double, 3> rf_bloch(const RfAnalytic& p) {
  const double D = p.kappa * p.kappa + 2.0 * p.Omega * p.Omega;
  return {0.0, 2.0 * p.Omega * p.kappa / D, -p.kappa * p.kappa / D};
}

/// Closed form of A S_y - |R_y|^2 as a manifestly nonnegative expression.
inline double rf_positivity_closed_form(const RfAnalytic& p, double omega) {
  const double k = p.kappa, W = p.Omega, w = omega;
  const RfClosedForms f = rf_closed_forms(p, omega);
  const double bracket = 4.0 * std::pow(w * w - W * W, 2) + k * k * (4.0 * W * W + 9.0 * w * w + 5.0 * k * k);
  return k * std::pow(W, 4) * bracket / (2.0 * f.D * f.D * std::norm(f.d));
}

/// Two-level atom with one radiative channel, homodyne-monitored at phase theta,
/// kinetic modulation b = 1 of that channel.
inline LindbladModel rf_lindblad(const RfAnalytic& p, double theta = std::numbers::pi / 2, double Delta = 0.0) {
  if (!(p.kappa > 0.0)) throw ModelError("rf: kappa must be positive");
  if (p.Omega < 0.0) throw ModelError("rf: Omega must be nonnegative");
  LindbladModel m;
  m.name = "rf";
  m.hamiltonian = Operator((0.5 * Delta) * pauli(Pauli::z).matrix + (0.5 * p.Omega) * pauli(Pauli::x).matrix, "H");
  m.channels.push_back(Operator(std::sqrt(p.kappa) * pauli(Pauli::minus).matrix, "L"));
  m.monitored.push_back({0, theta});
  m.signal = SignalSpec{KineticSignal{RMatrix::Ones(1, 1)}};
  return m;
}

// ---------------------------------------------------------------------------
// Kerr-parametric cat resonator on a Fock truncation

struct KerrCatParams {
  Eigen::Index n_cut = 12;
  double K = 1.0;
  double Delta = 0.2;
  double p = 2.0;
  double F = 0.15;
  double kappa_ex = 0.2;
  double kappa_in = 0.05;
  double theta = 0.0;
};

/// H = -Delta a^dag a - K a^dag^2 a^2 + p/2 (a^dag^2 + a^2) + F (a + a^dag);
/// channels sqrt(kappa_ex) a (monitored) and sqrt(kappa_in) a; one kinetic
/// signal per channel.
inline LindbladModel kerr_cat(const KerrCatParams& k) {
  if (k.n_cut < 4) throw ModelError("kerr_cat: n_cut must be at least 4");
  if (k.kappa_ex < 0.0 || k.kappa_in < 0.0) throw ModelError("kerr_cat: loss rates must be nonnegative");
  if (k.kappa_ex == 0.0 && k.kappa_in == 0.0) throw ModelError("kerr_cat: at least one loss rate must be positive");
  const CMatrix a = annihilation(k.n_cut).matrix;
  const CMatrix ad = a.adjoint();
  const CMatrix n = ad * a;
  const CMatrix a2 = a * a;
  const CMatrix ad2 = ad * ad;
  CMatrix h = -k.Delta * n - k.K * (ad2 * a2) + (0.5 * k.p) * (ad2 + a2) + k.F * (a + ad);
  LindbladModel m;
  m.name = "kerr_cat";
  m.hamiltonian = Operator(0.5 * (h + h.adjoint()), "H");
  m.channels.push_back(Operator(std::sqrt(k.kappa_ex) * a, "L_ex"));
  m.channels.push_back(Operator(std::sqrt(k.kappa_in) * a, "L_in"));
  m.monitored.push_back({0, k.theta});
  m.signal = SignalSpec{KineticSignal{RMatrix::Identity(2, 2)}};
  m.number_operator = Operator(n, "n");
  return m;
}

// ---------------------------------------------------------------------------
// Classical jump process embedded as a Lindblad model.
// rates(alpha, beta) is the transition rate beta -> alpha; the diagonal is ignored.

inline bool is_irreducible(const RMatrix& rates) {
  const Eigen::Index n = rates.rows();
  if (n == 0) return false;
  auto reach_all = [&](bool forward) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Eigen::Index> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
      const auto s = todo.front();
      todo.pop();
      for (Eigen::Index t = 0; t < n; ++t) {
        if (t == s) continue;
        const double r = forward ? rates(t, s) : rates(s, t);
        if (r > 0.0 && !seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          todo.push(t);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(true) && reach_all(false);
}

inline void require_rate_matrix(const RMatrix& rates) {
  if (rates.rows() != rates.cols() || rates.rows() < 1) throw DimMismatch("rate matrix must be square");
  for (Eigen::Index a = 0; a < rates.rows(); ++a)
    for (Eigen::Index b = 0; b < rates.cols(); ++b)
      if (a != b && !(rates(a, b) >= 0.0)) throw ModelError("rates must be nonnegative");
  if (!is_irreducible(rates)) throw NotIrreducible("rate matrix is not irreducible");
}

/// Stationary distribution of the classical master equation.
inline RVector classical_stationary(const RMatrix& rates) {
  require_rate_matrix(rates);
  const Eigen::Index n = rates.rows();
  RMatrix w = rates;
  for (Eigen::Index b = 0; b < n; ++b) {
    w(b, b) = 0.0;
    w(b, b) = -w.col(b).sum();
  }
  w.row(0).setOnes();
  RVector rhs = RVector::Zero(n);
  rhs(0) = 1.0;
  return w.fullPivLu().solve(rhs);
}

/// Jump operator sqrt(rate) |alpha><beta| for every ordered pair with nonzero rate;
/// kinetic coefficients b_{(alpha beta), q} = Y[q](alpha, beta).
inline LindbladModel classical_embedding(const RMatrix& rates, const std::vector<RMatrix>& y) {
  require_rate_matrix(rates);
  const Eigen::Index n = rates.rows();
  for (const auto& yq : y)
    if (yq.rows() != n || yq.cols() != n) throw DimMismatch("Y matrices must match the rate matrix");

  LindbladModel m;
  m.name = "classical_jump";
  m.hamiltonian = Operator::zero(n, "H");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      if (a == b || rates(a, b) <= 0.0) continue;
      CMatrix l = CMatrix::Zero(n, n);
      l(a, b) = std::sqrt(rates(a, b));
      m.channels.push_back(Operator(l, "L_" + std::to_string(a) + "_" + std::to_string(b)));
      pairs.emplace_back(a, b);
    }
  RMatrix bcoef(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(y.size()));
  for (std::size_t c = 0; c < pairs.size(); ++c)
    for (std::size_t q = 0; q < y.size(); ++q)
      bcoef(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(q)) = y[q](pairs[c].first, pairs[c].second);
  m.signal = SignalSpec{KineticSignal{bcoef}};
  return m;
}

}  // namespace ioqfr
