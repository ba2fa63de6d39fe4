#pragma once

#include "ioqfr/lindblad.hpp"
#include "ioqfr/lockin.hpp"
#include "ioqfr/spectra.hpp"

// Linear response of the monitored currents to dissipative coupling modulation.
// Drives are positive frequency, eps(t) = eps_w exp(-i omega t), so the density
// response is (-i omega - L)^{-1} V rho_ss.

namespace ioqfr {

struct ResponseMatrix {
  double omega = 0.0;
  CMatrix complex_R;  // m x n_p
  RMatrix real_R;     // 2m x 2n_p
};

/// First derivative of the generator with respect to eps_q:
/// V_q rho = sum_mu (M rho L^dag + L rho M^dag - {M^dag L + L^dag M, rho}/2).
/// For kinetic signals this equals sum_mu b(mu, q) D[L_mu].
inline Superoperator perturbation_superop(const LindbladModel& model, Eigen::Index q) {
  const auto d = model.dim();
  Superoperator v{d, CMatrix::Zero(d * d, d * d)};
  if (const auto* k = std::get_if<KineticSignal>(&model.signal.spec)) {
    for (Eigen::Index mu = 0; mu < model.n_channels(); ++mu) {
      const double b = k->b(mu, q);
      if (b != 0.0) v.matrix += b * dissipator(model.channels[static_cast<std::size_t>(mu)]);
    }
    return v;
  }
  for (Eigen::Index mu = 0; mu < model.n_channels(); ++mu) {
    const CMatrix& l = model.channels[static_cast<std::size_t>(mu)].matrix;
    const CMatrix m = tangent(model, mu, q).matrix;
    const CMatrix anti = m.adjoint() * l + l.adjoint() * m;
    v.matrix += sandwich(m, l.adjoint()) + sandwich(l, m.adjoint()) - 0.5 * (left_mult(anti) + right_mult(anti));
  }
  return v;
}

/// Direct input-output term Tr[Xdot_{a,q} rho_ss], present when the monitored
/// channel itself carries signal q.
inline double direct_term(const Analysis& an, Eigen::Index a, Eigen::Index q) {
  const auto& cur = detail::monitored_at(an.model, a);
  const Operator xdot = quadrature(tangent(an.model, cur.channel, q), cur.theta);
  return trace_product(xdot.matrix, an.stationary.rho.matrix).real();
}

/// Evaluates response coefficients at many frequencies while caching V_q rho_ss.
class ResponseEvaluator {
 public:
  explicit ResponseEvaluator(const Analysis& an) : an_(an) {
    const auto np = an.model.n_params();
    const auto m = static_cast<Eigen::Index>(an.model.monitored.size());
    for (Eigen::Index q = 0; q < np; ++q)
      sources_.push_back(perturbation_superop(an.model, q).apply(an.stationary.rho));
    for (const auto& cur : an.model.monitored)
      quadratures_.push_back(quadrature(an.model.channels.at(static_cast<std::size_t>(cur.channel)), cur.theta));
    direct_ = RMatrix::Zero(m, np);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index q = 0; q < np; ++q) direct_(a, q) = direct_term(an, a, q);
  }

  ResponseMatrix at(double omega, const Resolvent& res) const {
    const auto m = static_cast<Eigen::Index>(quadratures_.size());
    const auto np = static_cast<Eigen::Index>(sources_.size());
    ResponseMatrix r;
    r.omega = omega;
    r.complex_R = CMatrix::Zero(m, np);
    for (Eigen::Index q = 0; q < np; ++q) {
      const CMatrix drho = res.apply(sources_[static_cast<std::size_t>(q)]).matrix;
      for (Eigen::Index a = 0; a < m; ++a)
        r.complex_R(a, q) = trace_product(quadratures_[static_cast<std::size_t>(a)].matrix, drho) + direct_(a, q);
    }
    r.real_R = real_blocks(r.complex_R);
    return r;
  }

  ResponseMatrix at(double omega) const {
    return at(omega, Resolvent(an_.generator, an_.stationary.rho, omega, an_.tol));
  }

 private:
  const Analysis& an_;
  std::vector<Operator> sources_;
  std::vector<Operator> quadratures_;
  RMatrix direct_;
};

inline Complex response_complex(const Analysis& an, Eigen::Index a, Eigen::Index q, double omega) {
  const auto& cur = detail::monitored_at(an.model, a);
  const Operator x = quadrature(an.model.channels.at(static_cast<std::size_t>(cur.channel)), cur.theta);
  const Operator src = perturbation_superop(an.model, q).apply(an.stationary.rho);
  const Operator drho = resolvent_apply(an.generator, an.stationary.rho, omega, src, an.tol);
  return trace_product(x.matrix, drho.matrix) + direct_term(an, a, q);
}

inline ResponseMatrix response_matrix(const Analysis& an, double omega) {
  if (an.model.monitored.empty()) throw ModelError("response_matrix: no monitored currents");
  if (an.model.n_params() < 1) throw ModelError("response_matrix: no signal parameters");
  return ResponseEvaluator(an).at(omega);
}

}  // namespace ioqfr
