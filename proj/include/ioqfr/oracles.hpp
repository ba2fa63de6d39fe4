#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "ioqfr/lindblad.hpp"

// Time-domain reference computations. These integrate the master equation in
// operator form with RK4 and never touch the vectorized generator or its
// resolvent, so they can check those independently.

namespace ioqfr::oracle {

/// Lindblad right-hand side with explicit channel operators.
inline CMatrix lindblad_rhs(const CMatrix& h, const std::vector<CMatrix>& ls, const CMatrix& rho) {
  CMatrix out = -kI * (h * rho - rho * h);
  for (const auto& l : ls) {
    const CMatrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

template <typename Rhs>
CMatrix rk4_step(const Rhs& f, double t, const CMatrix& y, double dt) {
  const CMatrix k1 = f(t, y);
  const CMatrix k2 = f(t + 0.5 * dt, y + (0.5 * dt) * k1);
  const CMatrix k3 = f(t + 0.5 * dt, y + (0.5 * dt) * k2);
  const CMatrix k4 = f(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline std::vector<CMatrix> channel_matrices(const LindbladModel& m) {
  std::vector<CMatrix> ls;
  for (const auto& l : m.channels) ls.push_back(l.matrix);
  return ls;
}

/// Stationary state by long-time propagation from the maximally mixed state.
inline CMatrix relaxed_state(const LindbladModel& m, double t_final, double dt) {
  const auto ls = channel_matrices(m);
  const CMatrix& h = m.hamiltonian.matrix;
  auto f = [&](double, const CMatrix& r) { return lindblad_rhs(h, ls, r); };
  const auto d = m.dim();
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  const auto steps = static_cast<long>(std::ceil(t_final / dt));
  for (long k = 0; k < steps; ++k) rho = rk4_step(f, k * dt, rho, dt);
  return rho;
}

/// Homodyne spectrum 1 + 2 Re int_0^tau_max e^{i omega tau} C(tau) d tau with the
/// connected correlation C(tau) = Tr[X e^{L tau} Q(B rho_ss)] obtained by
/// propagating the inserted operator. Composite Simpson on the RK4 grid.
inline std::vector<double> time_domain_spectrum(const LindbladModel& m, Eigen::Index channel, double theta,
                                                const std::vector<double>& omegas, double tau_max, double dt,
                                                double relax_time) {
  const auto ls = channel_matrices(m);
  const CMatrix& h = m.hamiltonian.matrix;
  const CMatrix& l = ls.at(static_cast<std::size_t>(channel));
  const Complex ph = std::exp(-kI * theta);
  const CMatrix x = ph * l + std::conj(ph) * l.adjoint();
  const CMatrix rho = relaxed_state(m, relax_time, dt);
  CMatrix y = ph * l * rho + std::conj(ph) * rho * l.adjoint();
  y -= rho * y.trace();

  auto f = [&](double, const CMatrix& r) { return lindblad_rhs(h, ls, r); };
  long steps = static_cast<long>(std::ceil(tau_max / dt));
  if (steps % 2 == 1) ++steps;
  std::vector<Complex> corr(static_cast<std::size_t>(steps + 1));
  for (long k = 0; k <= steps; ++k) {
    corr[static_cast<std::size_t>(k)] = (x * y).trace();
    if (k < steps) y = rk4_step(f, k * dt, y, dt);
  }

  std::vector<double> out;
  for (double w : omegas) {
    Complex acc = 0.0;
    for (long k = 0; k <= steps; ++k) {
      const double weight = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      acc += weight * std::exp(kI * (w * k * dt)) * corr[static_cast<std::size_t>(k)];
    }
    acc *= dt / 3.0;
    out.push_back(1.0 + 2.0 * acc.real());
  }
  return out;
}

/// Lock-in response by brute-force modulation. Signal q is driven with the
/// unit-RMS envelope eps(t) = amplitude * sqrt(2) cos(omega t) (column 0) or
/// sqrt(2) sin(omega t) (column 1); channels follow L_mu -> exp(b_mu q eps / 2) L_mu,
/// and the monitored quadrature carries the same explicit factor. Returns the 2x2
/// real matrix of (sqrt(2)/T) int (cos, sin)(omega t) d<I(t)> dt / amplitude over
/// `periods` full periods after `burn_in`.
inline RMatrix finite_difference_lockin(const LindbladModel& m, Eigen::Index current, Eigen::Index q, double omega,
                                        double amplitude, double burn_in, int periods, int steps_per_period,
                                        double relax_time) {
  const auto& b = std::get<KineticSignal>(m.signal.spec).b;
  const auto ls0 = channel_matrices(m);
  const CMatrix& h = m.hamiltonian.matrix;
  const auto& cur = m.monitored.at(static_cast<std::size_t>(current));
  const Complex ph = std::exp(-kI * cur.theta);
  const CMatrix& lmon = ls0.at(static_cast<std::size_t>(cur.channel));
  const CMatrix x0 = ph * lmon + std::conj(ph) * lmon.adjoint();
  const double relax_dt = 2.0 * std::numbers::pi / omega / steps_per_period;
  const CMatrix rho_ss = relaxed_state(m, relax_time, std::min(relax_dt, 0.01));
  const double mean0 = (x0 * rho_ss).trace().real();

  const double period = 2.0 * std::numbers::pi / omega;
  const double dt = period / steps_per_period;
  const long burn_steps = static_cast<long>(std::ceil(burn_in / period)) * steps_per_period;
  const long window_steps = static_cast<long>(periods) * steps_per_period;
  const double window = periods * period;

  RMatrix out(2, 2);
  for (int col = 0; col < 2; ++col) {
    auto eps = [&](double t) {
      const double env = col == 0 ? std::cos(omega * t) : std::sin(omega * t);
      return amplitude * std::numbers::sqrt2 * env;
    };
    auto f = [&](double t, const CMatrix& r) {
      std::vector<CMatrix> ls = ls0;
      const double e = eps(t);
      for (std::size_t mu = 0; mu < ls.size(); ++mu) ls[mu] *= std::exp(0.5 * b(static_cast<Eigen::Index>(mu), q) * e);
      return lindblad_rhs(h, ls, r);
    };
    CMatrix rho = rho_ss;
    for (long k = 0; k < burn_steps; ++k) rho = rk4_step(f, k * dt, rho, dt);

    double acc_c = 0.0, acc_s = 0.0;
    for (long k = 0; k <= window_steps; ++k) {
      const double t = (burn_steps + k) * dt;
      const double xfactor = std::exp(0.5 * b(cur.channel, q) * eps(t));
      const double di = xfactor * (x0 * rho).trace().real() - mean0;
      const double w = (k == 0 || k == window_steps) ? 0.5 : 1.0;
      acc_c += w * std::cos(omega * t) * di;
      acc_s += w * std::sin(omega * t) * di;
      if (k < window_steps) rho = rk4_step(f, t, rho, dt);
    }
    out(0, col) = std::numbers::sqrt2 * acc_c * dt / window / amplitude;
    out(1, col) = std::numbers::sqrt2 * acc_s * dt / window / amplitude;
  }
  return out;
}

}  // namespace ioqfr::oracle
