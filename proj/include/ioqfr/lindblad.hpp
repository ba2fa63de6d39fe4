#pragma once

#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ioqfr/hilbert.hpp"

// Generator assembly and stationary analysis.
//
// Vectorization is column stacking: vec(X)[i + d*j] = X(i, j), so that
// vec(A X B) = (B^T kron A) vec(X). The trace functional is vec(I)^T.

namespace ioqfr {

/// One homodyne-detected output port.
struct MonitoredCurrent {
  Eigen::Index channel = 0;
  double theta = 0.0;
};

/// Rate modulation L_mu -> exp(sum_q b(mu, q) eps_q / 2) L_mu. b is n_channels x n_params.
struct KineticSignal {
  RMatrix b;
};

/// General coupling tangents: m[mu][q] = dL_mu / d eps_q.
struct TangentSignal {
  std::vector<std::vector<Operator>> m;
};

struct SignalSpec {
  std::variant<KineticSignal, TangentSignal> spec;

  bool is_kinetic() const { return std::holds_alternative<KineticSignal>(spec); }

  Eigen::Index n_params() const {
    if (const auto* k = std::get_if<KineticSignal>(&spec)) return k->b.cols();
    const auto& t = std::get<TangentSignal>(spec);
    return t.m.empty() ? 0 : static_cast<Eigen::Index>(t.m.front().size());
  }
};

struct LindbladModel {
  std::string name;
  Operator hamiltonian;
  std::vector<Operator> channels;
  std::vector<MonitoredCurrent> monitored;
  SignalSpec signal{KineticSignal{}};
  std::optional<Operator> number_operator;  // set for bosonic models

  Eigen::Index dim() const { return hamiltonian.dim(); }
  Eigen::Index n_channels() const { return static_cast<Eigen::Index>(channels.size()); }
  Eigen::Index n_params() const { return signal.n_params(); }
};

/// Tangent operator M_{mu q}; for kinetic signals this is b(mu, q) L_mu / 2.
inline Operator tangent(const LindbladModel& model, Eigen::Index mu, Eigen::Index q) {
  const auto& L = model.channels.at(static_cast<std::size_t>(mu));
  if (const auto* k = std::get_if<KineticSignal>(&model.signal.spec)) return (0.5 * k->b(mu, q)) * L;
  return std::get<TangentSignal>(model.signal.spec)
      .m.at(static_cast<std::size_t>(mu))
      .at(static_cast<std::size_t>(q));
}

/// Throws ModelError / DimMismatch when the model is inconsistent.
inline void validate(const LindbladModel& model, const ToleranceSet& tol = {}) {
  const auto d = model.dim();
  if (d < 1) throw ModelError("model '" + model.name + "': empty Hilbert space");
  if (!all_finite(model.hamiltonian.matrix)) throw ModelError("Hamiltonian has non-finite entries");
  if (!model.hamiltonian.is_hermitian(tol.hermitian)) throw ModelError("Hamiltonian is not Hermitian");
  for (const auto& L : model.channels) {
    if (L.dim() != d) throw DimMismatch("channel '" + L.label + "' has wrong dimension");
    if (!all_finite(L.matrix)) throw ModelError("channel '" + L.label + "' has non-finite entries");
  }
  for (const auto& m : model.monitored)
    if (m.channel < 0 || m.channel >= model.n_channels())
      throw ModelError("monitored channel index " + std::to_string(m.channel) + " out of range");
  if (const auto* k = std::get_if<KineticSignal>(&model.signal.spec)) {
    if (k->b.size() > 0 && k->b.rows() != model.n_channels())
      throw DimMismatch("kinetic coefficients need one row per channel");
    if (!all_finite(k->b)) throw ModelError("kinetic coefficients are not finite");
  } else {
    const auto& t = std::get<TangentSignal>(model.signal.spec);
    if (static_cast<Eigen::Index>(t.m.size()) != model.n_channels())
      throw DimMismatch("tangent grid needs one row per channel");
    for (const auto& row : t.m) {
      if (static_cast<Eigen::Index>(row.size()) != model.n_params())
        throw DimMismatch("tangent grid rows differ in length");
      for (const auto& M : row)
        if (M.dim() != d) throw DimMismatch("tangent operator has wrong dimension");
    }
  }
  if (model.number_operator && model.number_operator->dim() != d)
    throw DimMismatch("number operator has wrong dimension");
}

struct Superoperator {
  Eigen::Index dim = 0;  // Hilbert-space dimension d; matrix is d^2 x d^2
  CMatrix matrix;

  Operator apply(const Operator& x) const;
};

inline CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

inline CMatrix devec(const CVector& v, Eigen::Index d) {
  if (v.size() != d * d) throw DimMismatch("devec: length is not d^2");
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

inline Operator Superoperator::apply(const Operator& x) const {
  if (x.dim() != dim) throw DimMismatch("superoperator applied to operator of wrong dimension");
  return Operator(devec(matrix * vec(x.matrix), dim));
}

/// Matrix of X -> A X B.
inline CMatrix sandwich(const CMatrix& a, const CMatrix& b) { return ioqfr::kron(b.transpose().eval(), a); }
inline CMatrix left_mult(const CMatrix& a) {
  return ioqfr::kron(CMatrix::Identity(a.rows(), a.rows()).eval(), a);
}
inline CMatrix right_mult(const CMatrix& b) {
  return ioqfr::kron(b.transpose().eval(), CMatrix::Identity(b.rows(), b.rows()).eval());
}

/// Matrix of rho -> L rho L^dag - {L^dag L, rho}/2.
inline CMatrix dissipator(const Operator& l) {
  const CMatrix ldl = l.matrix.adjoint() * l.matrix;
  return sandwich(l.matrix, l.matrix.adjoint()) - 0.5 * (left_mult(ldl) + right_mult(ldl));
}

inline Superoperator liouvillian(const LindbladModel& model) {
  const auto d = model.dim();
  const CMatrix& h = model.hamiltonian.matrix;
  Superoperator s{d, -kI * (left_mult(h) - right_mult(h))};
  for (const auto& L : model.channels) s.matrix += dissipator(L);
  return s;
}

/// Row vector of the trace functional on vectorized d x d matrices.
inline CVector trace_functional(Eigen::Index d) { return vec(CMatrix::Identity(d, d)); }

struct StationaryState {
  Operator rho;
  double gap = 0.0;        // -max Re over the non-stationary generator eigenvalues
  double residual = 0.0;   // max |L vec(rho)|
  double min_eigenvalue = 0.0;
  CVector generator_spectrum;  // descending real part
};

inline StationaryState steady_state(const Superoperator& lsup, const ToleranceSet& tol = {}) {
  const Eigen::Index d = lsup.dim;
  const Eigen::Index n = d * d;
  if (lsup.matrix.rows() != n || lsup.matrix.cols() != n) throw DimMismatch("steady_state: malformed superoperator");
  const double norm = norm_inf(lsup.matrix);
  const EigenResult spec = eig(lsup.matrix, true);
  const double zero_tol = tol.gap * norm;

  std::vector<Complex> zeros;
  Eigen::Index zero_index = -1;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(spec.values(k)) <= zero_tol) {
      zeros.push_back(spec.values(k));
      zero_index = k;
    }
  }
  if (norm == 0.0 || zeros.size() != 1) {
    std::vector<Complex> offending = zeros;
    if (norm == 0.0) offending.assign(spec.values.data(), spec.values.data() + n);
    throw NotMixing("steady_state: " + std::to_string(offending.size()) +
                        " eigenvalues within the zero tolerance; the stationary state is not unique",
                    std::move(offending));
  }

  double gap = std::numeric_limits<double>::infinity();
  Complex slowest{};
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == zero_index) continue;
    if (-spec.values(k).real() < gap) {
      gap = -spec.values(k).real();
      slowest = spec.values(k);
    }
  }
  if (gap <= zero_tol) {
    throw NotMixing("steady_state: spectral gap " + sci(gap) + " not above tolerance",
                    {slowest});
  }

  // trace-row replacement
  CMatrix m = lsup.matrix;
  m.row(0) = trace_functional(d).transpose();
  CVector rhs = CVector::Zero(n);
  rhs(0) = 1.0;
  CVector x = LinearSolver(m, tol).solve(rhs);
  CMatrix rho = devec(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  StationaryState ss;
  ss.rho = Operator(rho, "rho_ss");
  ss.gap = gap;
  ss.residual = (lsup.matrix * vec(rho)).cwiseAbs().maxCoeff();
  ss.generator_spectrum = spec.values;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  ss.min_eigenvalue = es.eigenvalues().minCoeff();

  if (ss.residual > tol.stationary * std::max(1.0, norm))
    throw NumericalError("steady_state: residual " + sci(ss.residual) + " too large");

  // agreement with the eigen-solver's zero mode
  CMatrix mode = devec(spec.vectors->col(zero_index), d);
  const Complex tr = mode.trace();
  if (std::abs(tr) == 0.0) throw NumericalError("steady_state: zero mode is traceless");
  mode /= tr;
  const double disagreement = (mode - rho).cwiseAbs().maxCoeff();
  if (disagreement > tol.stationary)
    throw NumericalError("steady_state: trace-row solution and zero eigenmode differ by " +
                         sci(disagreement));
  return ss;
}

/// Q Y = Y - rho_ss Tr Y.
inline Operator project_q(const Operator& y, const Operator& rho_ss) {
  if (y.dim() != rho_ss.dim()) throw DimMismatch("project_q: dimension mismatch");
  return Operator(y.matrix - rho_ss.matrix * y.matrix.trace(), y.label);
}

/// (-i omega - L)^{-1} on the traceless subspace, factorized once per frequency.
/// At omega = 0 the stationary direction is deflated with vec(rho_ss) vec(I)^T.
class Resolvent {
 public:
  Resolvent(const Superoperator& lsup, const Operator& rho_ss, double omega, const ToleranceSet& tol = {})
      : omega_(omega), d_(lsup.dim), rho_(rho_ss), tol_(tol), solver_(build(lsup, rho_ss, omega, tol)) {}

  Operator apply(const Operator& source) const {
    if (source.dim() != d_) throw DimMismatch("resolvent: source has wrong dimension");
    const double snorm = source.matrix.cwiseAbs().maxCoeff();
    if (std::abs(source.matrix.trace()) > tol_.traceless * std::max(snorm, 1e-300) && snorm > 0.0)
      throw SourceNotTraceless("resolvent: source trace " + sci(std::abs(source.matrix.trace())));
    Operator x(devec(solver_.solve(vec(source.matrix)), d_));
    if (omega_ == 0.0) x = project_q(x, rho_);
    return x;
  }

  double omega() const { return omega_; }

 private:
  static LinearSolver build(const Superoperator& lsup, const Operator& rho, double omega, const ToleranceSet& tol) {
    CMatrix a = -lsup.matrix;
    if (omega != 0.0) {
      a.diagonal().array() -= kI * omega;
    } else {
      a += vec(rho.matrix) * trace_functional(lsup.dim).transpose();
    }
    try {
      return LinearSolver(a, tol);
    } catch (const SingularMatrix& e) {
      std::ostringstream os;
      os.precision(17);
      os << e.what() << " (resolvent at omega=" << omega << ")";
      throw SingularMatrix(os.str());
    }
  }

  double omega_;
  Eigen::Index d_;
  Operator rho_;
  ToleranceSet tol_;
  LinearSolver solver_;
};

inline Operator resolvent_apply(const Superoperator& lsup, const Operator& rho_ss, double omega,
                                const Operator& source, const ToleranceSet& tol = {}) {
  return Resolvent(lsup, rho_ss, omega, tol).apply(source);
}

/// Generator and stationary state of a validated model, computed once and shared
/// read-only by spectrum, response and bound evaluations.
struct Analysis {
  LindbladModel model;
  Superoperator generator;
  StationaryState stationary;
  ToleranceSet tol;
};

inline Analysis analyze(LindbladModel model, const ToleranceSet& tol = {}) {
  validate(model, tol);
  Superoperator lsup = liouvillian(model);
  StationaryState ss = steady_state(lsup, tol);
  return Analysis{std::move(model), std::move(lsup), std::move(ss), tol};
}

/// FNV-1a digest of every matrix entry and index defining the model.
inline std::string model_hash(const LindbladModel& model) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&](const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  };
  auto mix_matrix = [&](const auto& m) {
    const Eigen::Index r = m.rows(), c = m.cols();
    mix_bytes(&r, sizeof r);
    mix_bytes(&c, sizeof c);
    mix_bytes(m.data(), sizeof(typename std::decay_t<decltype(m)>::Scalar) * static_cast<std::size_t>(m.size()));
  };
  mix_matrix(model.hamiltonian.matrix);
  for (const auto& L : model.channels) mix_matrix(L.matrix);
  for (const auto& m : model.monitored) {
    mix_bytes(&m.channel, sizeof m.channel);
    mix_bytes(&m.theta, sizeof m.theta);
  }
  if (const auto* k = std::get_if<KineticSignal>(&model.signal.spec)) {
    mix_matrix(k->b);
  } else {
    for (const auto& row : std::get<TangentSignal>(model.signal.spec).m)
      for (const auto& M : row) mix_matrix(M.matrix);
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace ioqfr
