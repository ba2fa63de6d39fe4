#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ioqfr/models.hpp"
#include "ioqfr/oracles.hpp"

using namespace ioqfr;

namespace {

CMatrix random_complex(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

LindbladModel random_model(Eigen::Index d, int channels, std::mt19937_64& rng) {
  LindbladModel m;
  m.name = "random";
  const CMatrix h = random_complex(d, rng);
  m.hamiltonian = Operator(0.5 * (h + h.adjoint()));
  for (int c = 0; c < channels; ++c) m.channels.push_back(Operator(0.5 * random_complex(d, rng)));
  m.signal = SignalSpec{KineticSignal{RMatrix::Ones(channels, 1)}};
  return m;
}

}  // namespace

TEST(Vectorization, ColumnStackingIdentity) {
  std::mt19937_64 rng(1);
  const CMatrix a = random_complex(3, rng), x = random_complex(3, rng), b = random_complex(3, rng);
  EXPECT_LT((vec(a * x * b) - sandwich(a, b) * vec(x)).norm(), 1e-12);
  EXPECT_LT((devec(vec(x), 3) - x).norm(), 0.0 + 1e-15);
  EXPECT_LT((vec(a * x) - left_mult(a) * vec(x)).norm(), 1e-12);
  EXPECT_LT((vec(x * b) - right_mult(b) * vec(x)).norm(), 1e-12);
}

TEST(Liouvillian, MatchesOperatorForm) {
  std::mt19937_64 rng(2);
  const LindbladModel m = random_model(4, 2, rng);
  const Superoperator l = liouvillian(m);
  const CMatrix x = random_complex(4, rng);
  const CMatrix direct = oracle::lindblad_rhs(m.hamiltonian.matrix, oracle::channel_matrices(m), x);
  EXPECT_LT((l.apply(Operator(x)).matrix - direct).norm(), 1e-12);
}

TEST(Liouvillian, TracePreservingAndHermiticityPreserving) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const LindbladModel m = random_model(3, 2, rng);
    const Superoperator l = liouvillian(m);
    EXPECT_LT((trace_functional(3).transpose() * l.matrix).cwiseAbs().maxCoeff(), 1e-12);
    CMatrix x = random_complex(3, rng);
    x = (x + x.adjoint()).eval();
    const CMatrix y = l.apply(Operator(x)).matrix;
    EXPECT_LT((y - y.adjoint()).norm(), 1e-12);
  }
}

TEST(SteadyState, ResonanceFluorescenceClosedForm) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}));
  const CMatrix& rho = an.stationary.rho.matrix;
  EXPECT_NEAR(rho(0, 0).real(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(an.stationary.gap, 0.5, 1e-12);
  const auto bloch = rf_bloch({1.0, 1.0});
  EXPECT_NEAR(trace_product(pauli(Pauli::y).matrix, rho).real(), bloch[1], 1e-12);
  EXPECT_NEAR(trace_product(pauli(Pauli::z).matrix, rho).real(), bloch[2], 1e-12);
  EXPECT_GE(an.stationary.min_eigenvalue, 0.0);
}

TEST(SteadyState, UndrivenQubitIsGround) {
  const Analysis an = analyze(rf_lindblad({1.0, 0.0}));
  EXPECT_NEAR(an.stationary.rho.matrix(1, 1).real(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(an.stationary.rho.matrix(0, 1)), 0.0, 1e-14);
}

TEST(SteadyState, MatchesTimeEvolution) {
  std::mt19937_64 rng(4);
  const LindbladModel m = random_model(3, 2, rng);
  const Analysis an = analyze(m);
  const double t = 40.0 / an.stationary.gap;
  const CMatrix relaxed = oracle::relaxed_state(m, t, 0.01);
  EXPECT_LT((relaxed - an.stationary.rho.matrix).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SteadyState, NoDissipationIsNotMixing) {
  LindbladModel m;
  m.name = "closed";
  m.hamiltonian = pauli(Pauli::z);
  try {
    analyze(m);
    FAIL() << "expected NotMixing";
  } catch (const NotMixing& e) {
    EXPECT_GE(e.offending().size(), 2u);
  }
}

TEST(SteadyState, DecoupledBlocksAreNotMixing) {
  // two independent decaying qubits embedded block-diagonally: two stationary states
  LindbladModel m;
  m.name = "blocks";
  m.hamiltonian = Operator::zero(4);
  CMatrix l = CMatrix::Zero(4, 4);
  l(1, 0) = 1.0;
  l(3, 2) = 1.0;
  m.channels.push_back(Operator(l));
  EXPECT_THROW(analyze(m), NotMixing);
}

TEST(Resolvent, SolvesShiftedSystem) {
  std::mt19937_64 rng(5);
  const LindbladModel m = random_model(3, 2, rng);
  const Analysis an = analyze(m);
  CMatrix y = random_complex(3, rng);
  y -= an.stationary.rho.matrix * y.trace();
  for (double w : {0.7, -1.3}) {
    const CMatrix x = resolvent_apply(an.generator, an.stationary.rho, w, Operator(y)).matrix;
    const CMatrix lhs = -kI * w * x - an.generator.apply(Operator(x)).matrix;
    EXPECT_LT((lhs - y).norm(), 1e-10);
  }
}

TEST(Resolvent, ZeroFrequencyIsTracelessReducedInverse) {
  std::mt19937_64 rng(6);
  const LindbladModel m = random_model(3, 1, rng);
  const Analysis an = analyze(m);
  CMatrix y = random_complex(3, rng);
  y -= an.stationary.rho.matrix * y.trace();
  const CMatrix x = resolvent_apply(an.generator, an.stationary.rho, 0.0, Operator(y)).matrix;
  EXPECT_LT(std::abs(x.trace()), 1e-12);
  EXPECT_LT((-an.generator.apply(Operator(x)).matrix - y).norm(), 1e-10);
}

TEST(Resolvent, ContinuousAtZero) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.3}));
  CMatrix y = pauli(Pauli::x).matrix;
  y -= an.stationary.rho.matrix * y.trace();
  const CMatrix x0 = resolvent_apply(an.generator, an.stationary.rho, 0.0, Operator(y)).matrix;
  const CMatrix xe = resolvent_apply(an.generator, an.stationary.rho, 1e-7, Operator(y)).matrix;
  EXPECT_LT((x0 - xe).norm(), 1e-6);
}

TEST(Resolvent, RejectsSourceWithTrace) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}));
  EXPECT_THROW(resolvent_apply(an.generator, an.stationary.rho, 0.5, Operator::identity(2)), SourceNotTraceless);
}

TEST(Validate, RejectsInconsistentModels) {
  LindbladModel m = rf_lindblad({1.0, 1.0});
  m.channels.push_back(annihilation(3));
  EXPECT_THROW(validate(m), DimMismatch);

  LindbladModel h = rf_lindblad({1.0, 1.0});
  h.hamiltonian.matrix(0, 1) = Complex(0.0, 1.0);
  EXPECT_THROW(validate(h), ModelError);

  LindbladModel mon = rf_lindblad({1.0, 1.0});
  mon.monitored.push_back({3, 0.0});
  EXPECT_THROW(validate(mon), ModelError);

  LindbladModel b = rf_lindblad({1.0, 1.0});
  b.signal = SignalSpec{KineticSignal{RMatrix::Ones(2, 1)}};
  EXPECT_THROW(validate(b), DimMismatch);
}

TEST(ModelHash, StableAndSensitive) {
  EXPECT_EQ(model_hash(rf_lindblad({1.0, 1.0})), model_hash(rf_lindblad({1.0, 1.0})));
  EXPECT_NE(model_hash(rf_lindblad({1.0, 1.0})), model_hash(rf_lindblad({1.0, 1.0 + 1e-12})));
  EXPECT_EQ(model_hash(rf_lindblad({1.0, 1.0})).size(), 16u);
}

TEST(ProjectQ, RemovesTrace) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}));
  const Operator q = project_q(Operator::identity(2), an.stationary.rho);
  EXPECT_LT(std::abs(q.matrix.trace()), 1e-14);
}

TEST(SpecExamples, EmptyModelGivesZeroGenerator) {
  LindbladModel m;
  m.hamiltonian = Operator::zero(3);
  EXPECT_EQ(liouvillian(m).matrix.norm(), 0.0);
}

TEST(SpecExamples, UndrivenQubitSpectrum) {
  const EigenResult r = eig(liouvillian(rf_lindblad({1.0, 0.0})).matrix);
  const double expected[] = {0.0, -0.5, -0.5, -1.0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(r.values(k) - expected[k]), 0.0, 1e-14);
  const Analysis an = analyze(rf_lindblad({1.0, 0.0}));
  EXPECT_NEAR(an.stationary.gap, 0.5, 1e-14);
}

TEST(SpecExamples, ClassicalTwoStateEmbedding) {
  RMatrix rates(2, 2);
  rates << 0, 2, 1, 0;
  const Analysis an = analyze(classical_embedding(rates, {}));
  EXPECT_NEAR(an.stationary.rho.matrix(0, 0).real(), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(an.stationary.rho.matrix(1, 1).real(), 1.0 / 3.0, 1e-14);
}

TEST(SpecExamples, ProjectQ) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}));
  const Operator& rho = an.stationary.rho;
  EXPECT_LT(project_q(rho, rho).matrix.norm(), 1e-15);
  const Operator sx = pauli(Pauli::x);
  EXPECT_LT((project_q(sx, rho).matrix - sx.matrix).norm(), 1e-15);
  EXPECT_LT((project_q(Operator::identity(2), rho).matrix - (CMatrix::Identity(2, 2) - 2.0 * rho.matrix)).norm(), 1e-15);
}

TEST(SpecExamples, ResolventOfZeroAndVacuum) {
  const Analysis an = analyze(rf_lindblad({1.0, 0.0}));
  EXPECT_EQ(resolvent_apply(an.generator, an.stationary.rho, 0.4, Operator::zero(2)).matrix.norm(), 0.0);
  const Operator src = project_q(pauli(Pauli::minus) * an.stationary.rho, an.stationary.rho);
  EXPECT_LT(resolvent_apply(an.generator, an.stationary.rho, 0.0, src).matrix.norm(), 1e-15);
}

TEST(SpecExamples, StationaryInvariants) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Analysis an = analyze(random_model(4, 2, rng));
    const CMatrix& rho = an.stationary.rho.matrix;
    EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
    EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(an.stationary.min_eigenvalue, -1e-10);
    EXPECT_LE(an.stationary.residual, 1e-10);
    EXPECT_LE(an.stationary.generator_spectrum(0).real(), 1e-10);
  }
}
