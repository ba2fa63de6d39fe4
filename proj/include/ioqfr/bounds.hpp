#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ioqfr/models.hpp"
#include "ioqfr/parallel.hpp"
#include "ioqfr/response.hpp"
#include "ioqfr/spectra.hpp"

// Activity matrices and certification of R^T S^+ R <= A (x) I_2.

namespace ioqfr {

struct ActivityMatrix {
  RMatrix A;  // n_p x n_p, rate units
};

/// A_qr = 4 Re sum_mu Tr[M_mu q^dag M_mu r rho_ss]; for kinetic signals
/// A_qr = sum_mu b_mu q b_mu r Tr[L_mu^dag L_mu rho_ss].
inline ActivityMatrix activity(const LindbladModel& model, const Operator& rho_ss) {
  const auto np = model.n_params();
  ActivityMatrix act{RMatrix::Zero(np, np)};
  if (const auto* k = std::get_if<KineticSignal>(&model.signal.spec)) {
    for (Eigen::Index mu = 0; mu < model.n_channels(); ++mu) {
      const CMatrix& l = model.channels[static_cast<std::size_t>(mu)].matrix;
      const double flux = trace_product(l.adjoint() * l, rho_ss.matrix).real();
      act.A += flux * k->b.row(mu).transpose() * k->b.row(mu);
    }
  } else {
    for (Eigen::Index mu = 0; mu < model.n_channels(); ++mu) {
      std::vector<CMatrix> ms;
      for (Eigen::Index q = 0; q < np; ++q) ms.push_back(tangent(model, mu, q).matrix);
      for (Eigen::Index q = 0; q < np; ++q)
        for (Eigen::Index r = 0; r < np; ++r)
          act.A(q, r) += 4.0 * trace_product(ms[static_cast<std::size_t>(q)].adjoint() * ms[static_cast<std::size_t>(r)],
                                             rho_ss.matrix)
                                   .real();
    }
  }
  act.A = symmetrize(act.A);
  return act;
}

inline ActivityMatrix activity(const Analysis& an) { return activity(an.model, an.stationary.rho); }

struct PureDissipativeStatus {
  std::vector<double> residuals;  // per signal parameter
  bool ok = true;
};

/// Norm of sum_mu (L_mu^dag M_mu q - M_mu q^dag L_mu) per q; nonzero means the
/// tangent carries a Hamiltonian-like component and the activity bound does not apply.
inline PureDissipativeStatus check_pure_dissipative(const LindbladModel& model, const ToleranceSet& tol = {}) {
  PureDissipativeStatus st;
  for (Eigen::Index q = 0; q < model.n_params(); ++q) {
    CMatrix c = CMatrix::Zero(model.dim(), model.dim());
    for (Eigen::Index mu = 0; mu < model.n_channels(); ++mu) {
      const CMatrix& l = model.channels[static_cast<std::size_t>(mu)].matrix;
      const CMatrix m = tangent(model, mu, q).matrix;
      c += l.adjoint() * m - m.adjoint() * l;
    }
    const double res = c.norm();
    st.residuals.push_back(res);
    if (res > tol.pure_dissipative) st.ok = false;
  }
  return st;
}

/// R^T S^+ R.
inline RMatrix j_meas(const RMatrix& real_R, const RMatrix& real_S, double rel_tol = 1e-12) {
  if (real_S.rows() != real_S.cols() || real_S.rows() != real_R.rows())
    throw DimMismatch("j_meas: response and noise matrices are not conformable");
  return symmetrize(real_R.transpose() * pinv(real_S, rel_tol) * real_R);
}

struct FrequencyBound {
  double omega = 0.0;
  NoiseMatrix S;
  ResponseMatrix R;
  RMatrix J;
  double lambda_max = 0.0;
  std::vector<double> r;  // scalar projections; single-current models only
  double margin_min = 0.0;
  RVector margin_direction;  // eigenvector of the smallest margin eigenvalue
  bool support_mismatch = false;
  bool directional_agrees = true;
  bool pass = false;
  std::string note;
};

struct BoundReport {
  std::string model_name;
  std::string model_hash;
  ActivityMatrix activity;
  PureDissipativeStatus pure_dissipative;
  std::vector<FrequencyBound> points;
  ToleranceSet tol;

  bool pass() const {
    for (const auto& p : points)
      if (!p.pass) return false;
    return true;
  }
};

struct CertifyOptions {
  bool require_pure_dissipative = true;
  int random_directions = 16;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  // keep going when some A_qq vanishes: r_q is NaN there and lambda_max is taken on the support
  bool allow_degenerate_activity = false;
};

/// theta^T (A (x) I_2 - J) theta.
inline double directional_margin(const RMatrix& activity_lockin, const RMatrix& J, const RVector& theta) {
  return theta.dot((activity_lockin - J) * theta);
}

namespace detail {

inline FrequencyBound certify_point(const Analysis& an, const SpectrumEvaluator& spec, const ResponseEvaluator& resp,
                                    const RMatrix& act_lockin, const RMatrix& act_inv_sqrt,
                                    const RMatrix& act_projector, const RVector& act_diag, double omega,
                                    const CertifyOptions& opt) {
  const ToleranceSet& tol = an.tol;
  FrequencyBound fb;
  fb.omega = omega;
  Resolvent plus(an.generator, an.stationary.rho, omega, tol);
  if (omega == 0.0) {
    fb.S = spec.at(omega, plus, plus);
  } else {
    Resolvent minus(an.generator, an.stationary.rho, -omega, tol);
    fb.S = spec.at(omega, plus, minus);
  }
  fb.R = resp.at(omega, plus);
  fb.J = j_meas(fb.R.real_R, fb.S.real_S, tol.pinv_rel);

  const double jscale = std::max(1.0, fb.J.cwiseAbs().maxCoeff());
  const RMatrix off_support = fb.J - act_projector * fb.J * act_projector;
  fb.support_mismatch = off_support.cwiseAbs().maxCoeff() > tol.bound * jscale;

  Eigen::SelfAdjointEigenSolver<RMatrix> normalized(symmetrize(act_inv_sqrt * fb.J * act_inv_sqrt),
                                                     Eigen::EigenvaluesOnly);
  fb.lambda_max = normalized.eigenvalues().maxCoeff();

  Eigen::SelfAdjointEigenSolver<RMatrix> margin(symmetrize(act_lockin - fb.J));
  fb.margin_min = margin.eigenvalues()(0);
  fb.margin_direction = margin.eigenvectors().col(0);

  if (an.model.monitored.size() == 1) {
    const double s = fb.S.complex_S(0, 0).real();
    for (Eigen::Index q = 0; q < fb.R.complex_R.cols(); ++q)
      fb.r.push_back(act_diag(q) > tol.activity ? std::norm(fb.R.complex_R(0, q)) / (s * act_diag(q))
                                                : std::numeric_limits<double>::quiet_NaN());
  }

  fb.pass = fb.margin_min >= -tol.bound && !fb.support_mismatch;
  if (fb.support_mismatch) fb.note = "response has weight outside the activity support";
  else if (fb.margin_min < 0.0 && fb.pass) fb.note = "negative margin within tolerance";

  // directional form must agree with the matrix form
  std::mt19937_64 rng(opt.seed ^ static_cast<std::uint64_t>(std::hash<double>{}(omega)));
  std::normal_distribution<double> gauss;
  const auto n = act_lockin.rows();
  bool all_directions_pass = true;
  for (int k = 0; k < opt.random_directions; ++k) {
    RVector th(n);
    for (Eigen::Index i = 0; i < n; ++i) th(i) = gauss(rng);
    th.normalize();
    if (directional_margin(act_lockin, fb.J, th) < -tol.bound) all_directions_pass = false;
  }
  const bool worst_direction_pass = directional_margin(act_lockin, fb.J, fb.margin_direction) >= -tol.bound;
  const bool matrix_pass = fb.margin_min >= -tol.bound;
  fb.directional_agrees = matrix_pass ? (all_directions_pass && worst_direction_pass) : !worst_direction_pass;
  if (!fb.directional_agrees) {
    fb.pass = false;
    fb.note = "directional and matrix tests disagree";
  }
  return fb;
}

}  // namespace detail

inline BoundReport certify(const Analysis& an, const std::vector<double>& omegas, const CertifyOptions& opt = {}) {
  const ToleranceSet& tol = an.tol;
  if (an.model.monitored.empty()) throw ModelError("certify: no monitored currents");
  if (an.model.n_params() < 1) throw ModelError("certify: no signal parameters");

  BoundReport rep;
  rep.model_name = an.model.name;
  rep.model_hash = model_hash(an.model);
  rep.tol = tol;
  rep.pure_dissipative = check_pure_dissipative(an.model, tol);
  if (!rep.pure_dissipative.ok && opt.require_pure_dissipative)
    throw PureDissipativeViolated("certify: signal tangent has a Hamiltonian-like component; the activity bound does not apply");

  rep.activity = activity(an);
  const RVector diag = rep.activity.A.diagonal();
  for (Eigen::Index q = 0; q < diag.size(); ++q)
    if (!(diag(q) > tol.activity) && !opt.allow_degenerate_activity)
      throw ActivityDegenerate("certify: activity of signal " + std::to_string(q) + " is " + sci(diag(q)));

  const RMatrix act_lockin = kron(rep.activity.A, RMatrix::Identity(2, 2));
  const PsdSupport support = psd_support(act_lockin, tol.pinv_rel, tol.hermitian);
  const RMatrix inv_sqrt = psd_inv_sqrt(act_lockin, tol.pinv_rel, tol.hermitian);
  const RMatrix projector = support.projector();

  const SpectrumEvaluator spec(an);
  const ResponseEvaluator resp(an);
  rep.points.resize(omegas.size());
  parallel_for(omegas.size(), opt.threads, [&](std::size_t i) {
    rep.points[i] = detail::certify_point(an, spec, resp, act_lockin, inv_sqrt, projector, diag, omegas[i], opt);
  });
  return rep;
}

// ---------------------------------------------------------------------------
// Resonance-fluorescence positivity identity

struct RfIdentity {
  double pipeline = 0.0;     // A S_y - |R_y|^2 from the Lindblad pipeline
  double closed_forms = 0.0; // same combination from the closed-form R_y, S_y
  double identity = 0.0;     // manifestly nonnegative closed form
};

inline RfIdentity rf_identity_residual(double Omega, double kappa, double omega, const ToleranceSet& tol = {}) {
  const RfAnalytic p{kappa, Omega};
  RfIdentity out;
  const RfClosedForms f = rf_closed_forms(p, omega);
  out.closed_forms = f.A * f.S_y - std::norm(f.R_y);
  out.identity = rf_positivity_closed_form(p, omega);
  const Analysis an = analyze(rf_lindblad(p, std::numbers::pi / 2), tol);
  const double a = activity(an).A(0, 0);
  out.pipeline = a * homodyne_spectrum(an, 0, std::numbers::pi / 2, omega) - std::norm(response_complex(an, 0, 0, omega));
  return out;
}

// ---------------------------------------------------------------------------
// Generalized Rayleigh quotient max_u (u^T R t)^2 / (u^T S u)

struct RayleighResult {
  double quadratic_form = 0.0;    // t^T R^T S^+ R t
  double generalized_max = 0.0;   // exact maximum from the eigen-decomposition of S
  double optimal_ratio = 0.0;     // ratio at u = S^+ R t
  double max_random_ratio = 0.0;  // sup over random trial filters
  bool bounded = true;            // R t lies in the support of S
};

inline RayleighResult rayleigh_check(const RMatrix& R, const RMatrix& S, const RVector& theta, int trials,
                                     std::uint64_t seed = 7, double rel_tol = 1e-12) {
  if (R.cols() != theta.size() || S.rows() != R.rows()) throw DimMismatch("rayleigh_check: shapes differ");
  RayleighResult res;
  const RVector v = R * theta;
  res.quadratic_form = v.dot(pinv(S, rel_tol) * v);

  const PsdSupport sup = psd_support(S, rel_tol);
  RVector in_support = RVector::Zero(v.size());
  for (Eigen::Index i = 0; i < sup.eigenvalues.size(); ++i) {
    if (sup.eigenvalues(i) <= sup.cutoff) continue;
    const double c = sup.eigenvectors.col(i).dot(v);
    res.generalized_max += c * c / sup.eigenvalues(i);
    in_support += c * sup.eigenvectors.col(i);
  }
  const double vscale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - in_support).cwiseAbs().maxCoeff() > 1e3 * rel_tol * vscale) {
    res.bounded = false;
    res.generalized_max = std::numeric_limits<double>::infinity();
  }

  auto ratio = [&](const RVector& u) {
    const double den = u.dot(S * u);
    const double num = std::pow(u.dot(v), 2);
    return den > 0.0 ? num / den : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  };
  const RVector u_opt = pinv(S, rel_tol) * v;
  res.optimal_ratio = u_opt.squaredNorm() > 0.0 ? ratio(u_opt) : 0.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < trials; ++t) {
    RVector u(v.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(rng);
    res.max_random_ratio = std::max(res.max_random_ratio, ratio(u));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Coherent-input ceiling on the lossless cavity

struct CoherentCeilingReport {
  std::vector<double> omegas;
  std::vector<double> ratio;
  std::vector<double> abs_s;
  std::vector<double> theta_opt;
  double max_error = 0.0;  // max |ratio - 4|
  bool pass = false;
};

inline CoherentCeilingReport coherent_ceiling_check(const CavityAnalytic& cav, const std::vector<double>& omegas,
                                                    double tol = 1e-12) {
  CoherentCeilingReport rep;
  rep.omegas = omegas;
  for (double w : omegas) {
    const double r = cavity_scalar_ratio(cav, w);
    rep.ratio.push_back(r);
    rep.abs_s.push_back(std::abs(cavity_s(cav, w)));
    rep.theta_opt.push_back(cavity_optimal_theta(cav, w));
    rep.max_error = std::max(rep.max_error, std::abs(r - 4.0));
  }
  rep.pass = rep.max_error <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Classical jump-process reduction

struct ClassicalReductionReport {
  RVector p_classical;
  RVector rho_diagonal;
  double offdiagonal_max = 0.0;
  double state_error = 0.0;     // max |rho_ss(b,b) - p_st(b)|
  RMatrix activity_lindblad;
  RMatrix activity_classical;
  double activity_error = 0.0;  // max entry difference
};

inline ClassicalReductionReport classical_reduction_check(const RMatrix& rates, const std::vector<RMatrix>& y,
                                                          const ToleranceSet& tol = {}) {
  ClassicalReductionReport rep;
  rep.p_classical = classical_stationary(rates);
  const LindbladModel model = classical_embedding(rates, y);
  validate(model, tol);
  const StationaryState ss = steady_state(liouvillian(model), tol);
  const CMatrix& rho = ss.rho.matrix;
  const Eigen::Index n = rates.rows();
  rep.rho_diagonal = rho.diagonal().real();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      if (a != b) rep.offdiagonal_max = std::max(rep.offdiagonal_max, std::abs(rho(a, b)));
  rep.state_error = std::max((rep.rho_diagonal - rep.p_classical).cwiseAbs().maxCoeff(), rep.offdiagonal_max);

  rep.activity_lindblad = activity(model, ss.rho).A;
  const auto np = static_cast<Eigen::Index>(y.size());
  rep.activity_classical = RMatrix::Zero(np, np);
  for (Eigen::Index q = 0; q < np; ++q)
    for (Eigen::Index r = 0; r < np; ++r)
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
          if (a != b)
            rep.activity_classical(q, r) += y[static_cast<std::size_t>(q)](a, b) * y[static_cast<std::size_t>(r)](a, b) *
                                            rates(a, b) * rep.p_classical(b);
  rep.activity_error = np > 0 ? (rep.activity_lindblad - rep.activity_classical).cwiseAbs().maxCoeff() : 0.0;
  return rep;
}

}  // namespace ioqfr
