#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ioqfr/models.hpp"
#include "ioqfr/oracles.hpp"
#include "ioqfr/lockin.hpp"
#include "ioqfr/response.hpp"

using namespace ioqfr;

namespace {
constexpr double kPi = std::numbers::pi;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

class RfGrid : public ::testing::TestWithParam<double> {};

TEST_P(RfGrid, SpectraMatchClosedForms) {
  const RfAnalytic p{1.0, GetParam()};
  const Analysis ax = analyze(rf_lindblad(p, 0.0));
  const Analysis ay = analyze(rf_lindblad(p, kPi / 2));
  for (double w : {0.0, 0.3, 1.0, 2.2, 5.0}) {
    const RfClosedForms f = rf_closed_forms(p, w);
    EXPECT_LT(rel(homodyne_spectrum(ax, 0, 0.0, w), f.S_x), 1e-10) << w;
    EXPECT_LT(rel(homodyne_spectrum(ay, 0, kPi / 2, w), f.S_y), 1e-10) << w;
  }
}

TEST_P(RfGrid, ResponseMatchesClosedForm) {
  const RfAnalytic p{1.0, GetParam()};
  const Analysis an = analyze(rf_lindblad(p, kPi / 2));
  for (double w : {0.0, 0.5, 1.7, 4.0}) {
    const RfClosedForms f = rf_closed_forms(p, w);
    EXPECT_LT(rel(-response_complex(an, 0, 0, w), f.R_y), 1e-10) << w;
  }
}

INSTANTIATE_TEST_SUITE_P(Drives, RfGrid, ::testing::Values(0.5, 1.0, 2.5));

TEST(Spectrum, SpotValueAtZeroFrequency) {
  // Omega = kappa = 1: S_x(0) = 1 + 2/(3/4) = 11/3
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}, 0.0));
  EXPECT_NEAR(homodyne_spectrum(an, 0, 0.0, 0.0), 11.0 / 3.0, 1e-12);
}

TEST(Spectrum, UndrivenQubitIsShotNoise) {
  const Analysis an = analyze(rf_lindblad({1.0, 0.0}, 0.3));
  for (double w : {0.0, 1.0, -2.0}) EXPECT_NEAR(homodyne_spectrum(an, 0, 0.3, w), 1.0, 1e-12);
}

TEST(Spectrum, EvenInFrequencyForSingleCurrent) {
  const Analysis an = analyze(kerr_cat({.n_cut = 8}));
  for (double w : {0.4, 1.9}) EXPECT_NEAR(homodyne_spectrum(an, 0, 0.0, w), homodyne_spectrum(an, 0, 0.0, -w), 1e-10);
}

TEST(Spectrum, MatchesTimeDomainOracle) {
  const LindbladModel m = rf_lindblad({1.0, 1.2}, 0.6);
  const Analysis an = analyze(m);
  const std::vector<double> ws = {0.0, 0.8, 2.0};
  const auto td = oracle::time_domain_spectrum(m, 0, 0.6, ws, 40.0, 0.005, 60.0);
  for (std::size_t i = 0; i < ws.size(); ++i) EXPECT_NEAR(homodyne_spectrum(an, 0, 0.6, ws[i]), td[i], 1e-6);
}

TEST(MatrixSpectrum, SingleCurrentAgreesWithScalar) {
  const Analysis an = analyze(rf_lindblad({1.0, 2.5}, kPi / 4));
  for (double w : {0.0, 1.5}) {
    const NoiseMatrix s = matrix_spectrum(an, w);
    EXPECT_NEAR(s.complex_S(0, 0).real(), homodyne_spectrum(an, 0, kPi / 4, w), 1e-12);
    EXPECT_LT((s.real_S - s.complex_S(0, 0).real() * RMatrix::Identity(2, 2)).norm(), 1e-12);
  }
}

TEST(MatrixSpectrum, TwoCurrentsHermitianAndPsd) {
  LindbladModel m = kerr_cat({.n_cut = 8});
  m.monitored.push_back({1, 0.4});
  const Analysis an = analyze(m);
  for (double w : {-1.0, 0.0, 0.7}) {
    const NoiseMatrix s = matrix_spectrum(an, w);
    EXPECT_LT((s.complex_S - s.complex_S.adjoint()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(s.real_S);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    EXPECT_LT((s.real_S - s.real_S.transpose()).norm(), 1e-12);
  }
}

TEST(MatrixSpectrum, DuplicateChannelRejected) {
  LindbladModel m = rf_lindblad({1.0, 1.0});
  m.monitored.push_back({0, 0.1});
  const Analysis an = analyze(m);
  EXPECT_THROW(matrix_spectrum(an, 0.5), DuplicateChannel);
}

TEST(Response, TangentFormEqualsKinetic) {
  LindbladModel kin = kerr_cat({.n_cut = 8});
  LindbladModel tan = kin;
  TangentSignal ts;
  const RMatrix& b = std::get<KineticSignal>(kin.signal.spec).b;
  for (Eigen::Index mu = 0; mu < kin.n_channels(); ++mu) {
    std::vector<Operator> row;
    for (Eigen::Index q = 0; q < b.cols(); ++q) row.push_back((0.5 * b(mu, q)) * kin.channels[static_cast<std::size_t>(mu)]);
    ts.m.push_back(row);
  }
  tan.signal = SignalSpec{ts};
  const Analysis ak = analyze(kin), at = analyze(tan);
  for (double w : {0.0, 0.9}) {
    const ResponseMatrix rk = response_matrix(ak, w), rt = response_matrix(at, w);
    EXPECT_LT((rk.complex_R - rt.complex_R).norm(), 1e-12);
  }
}

TEST(Response, HighFrequencyLimitIsDirectTerm) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}, 0.9));
  const Complex r = response_complex(an, 0, 0, 1e6);
  EXPECT_NEAR(r.real(), direct_term(an, 0, 0), 1e-5);
  EXPECT_NEAR(r.imag(), 0.0, 1e-5);
}

TEST(Response, AmplitudeQuadratureHasNoResponseOnResonance) {
  const Analysis an = analyze(rf_lindblad({1.0, 2.0}, 0.0));
  for (double w : {0.0, 1.0, 3.0}) EXPECT_LT(std::abs(response_complex(an, 0, 0, w)), 1e-12);
}

TEST(Response, LockinBlocksFromComplexResponse) {
  const Analysis an = analyze(kerr_cat({.n_cut = 8}));
  const ResponseMatrix r = response_matrix(an, 0.6);
  ASSERT_EQ(r.real_R.rows(), 2);
  ASSERT_EQ(r.real_R.cols(), 4);
  for (Eigen::Index q = 0; q < 2; ++q) {
    const Complex z = r.complex_R(0, q);
    EXPECT_EQ(r.real_R(0, 2 * q), z.real());
    EXPECT_EQ(r.real_R(0, 2 * q + 1), -z.imag());
    EXPECT_EQ(r.real_R(1, 2 * q), z.imag());
    EXPECT_EQ(r.real_R(1, 2 * q + 1), z.real());
  }
}

TEST(Response, FiniteDifferenceOracle) {
  const LindbladModel m = rf_lindblad({1.0, 1.0}, kPi / 4);
  const Analysis an = analyze(m);
  for (double w : {0.5, 2.0}) {
    const RMatrix fd = oracle::finite_difference_lockin(m, 0, 0, w, 1e-4, 20.0, 20, 400, 80.0);
    const RMatrix r = response_matrix(an, w).real_R;
    EXPECT_LT((fd - r).norm() / r.norm(), 1e-4) << w;
  }
}

TEST(Response, RequiresMonitoredCurrent) {
  RMatrix rates(2, 2);
  rates << 0, 1, 1, 0;
  const Analysis an = analyze(classical_embedding(rates, {RMatrix::Ones(2, 2)}));
  EXPECT_THROW(response_matrix(an, 0.0), ModelError);
}

TEST(SpecExamples, InsertionSuperop) {
  EXPECT_EQ(insertion_superop(Operator::zero(2), 0.4).matrix.norm(), 0.0);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  CMatrix r(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) r(i, j) = Complex(g(rng), g(rng));
  const Operator rho(r * r.adjoint());
  const Operator l = annihilation(3);
  const Complex lhs = insertion_superop(l, 0.8).apply(rho).matrix.trace();
  EXPECT_LT(std::abs(lhs - trace_product(quadrature(l, 0.8).matrix, rho.matrix)), 1e-12);
  const Analysis an = analyze(rf_lindblad({1.0, 0.0}));
  EXPECT_LT(insertion_superop(an.model.channels[0], 1.1).apply(an.stationary.rho).matrix.norm(), 1e-15);
}

TEST(SpecExamples, PhaseQuadratureSpectrumAtZero) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}, kPi / 2));
  EXPECT_NEAR(homodyne_spectrum(an, 0, kPi / 2, 0.0), 17.0 / 9.0, 1e-12);
}

TEST(SpecExamples, UncoupledPortsArePureShotNoise) {
  LindbladModel m = rf_lindblad({1.0, 1.0});
  m.channels.push_back(Operator::zero(2, "vac1"));
  m.channels.push_back(Operator::zero(2, "vac2"));
  m.monitored = {{1, 0.0}, {2, 0.7}};
  m.signal = SignalSpec{KineticSignal{RMatrix::Ones(3, 1)}};
  const NoiseMatrix s = matrix_spectrum(analyze(m), 0.9);
  EXPECT_LT((s.complex_S - CMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((s.real_S - RMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(SpecExamples, PerturbationSuperop) {
  const LindbladModel rf = rf_lindblad({1.0, 1.0});
  EXPECT_LT((perturbation_superop(rf, 0).matrix - dissipator(rf.channels[0])).norm(), 1e-15);
  LindbladModel zero = rf;
  zero.signal = SignalSpec{TangentSignal{{{Operator::zero(2)}}}};
  EXPECT_EQ(perturbation_superop(zero, 0).matrix.norm(), 0.0);
  const LindbladModel k = kerr_cat({.n_cut = 5});
  for (Eigen::Index q = 0; q < 2; ++q)
    EXPECT_LT((trace_functional(5).transpose() * perturbation_superop(k, q).matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SpecExamples, DirectTerm) {
  const Analysis an = analyze(kerr_cat({}));
  const double half_x = 0.5 * trace_product(quadrature(an.model.channels[0], 0.0).matrix, an.stationary.rho.matrix).real();
  EXPECT_NEAR(direct_term(an, 0, 0), half_x, 1e-14);
  EXPECT_EQ(direct_term(an, 0, 1), 0.0);
  EXPECT_NEAR(direct_term(analyze(rf_lindblad({1.0, 0.0})), 0, 0), 0.0, 1e-15);
}

TEST(SpecExamples, ResponseSpotValues) {
  const Analysis an = analyze(rf_lindblad({1.0, 1.0}, kPi / 2));
  EXPECT_NEAR(std::abs(response_complex(an, 0, 0, 0.0)), 5.0 / 9.0, 1e-12);
  const Analysis und = analyze(rf_lindblad({1.0, 0.0}, 0.4));
  for (double w : {0.0, 1.0}) EXPECT_LT(std::abs(response_complex(und, 0, 0, w)), 1e-14);
}

TEST(SpecExamples, RealBlock) {
  EXPECT_EQ(real_block(Complex(1.0)), RMatrix::Identity(2, 2));
  RMatrix i(2, 2);
  i << 0, -1, 1, 0;
  EXPECT_EQ(real_block(Complex(0.0, 1.0)), i);
  RMatrix z(2, 2);
  z << 1, -2, 2, 1;
  EXPECT_EQ(real_block(Complex(1.0, 2.0)), z);
  const Complex a(0.3, -1.2), b(-2.0, 0.7);
  EXPECT_LT((real_block(a * b) - real_block(a) * real_block(b)).norm(), 1e-14);
}

TEST(SpecExamples, ResponseReality) {
  for (const auto& m : {rf_lindblad({1.0, 1.5}, 0.9), kerr_cat({.n_cut = 8})}) {
    const Analysis an = analyze(m);
    for (double w : {0.3, 2.0})
      for (Eigen::Index q = 0; q < m.n_params(); ++q)
        EXPECT_LT(std::abs(std::conj(response_complex(an, 0, q, w)) - response_complex(an, 0, q, -w)), 1e-9);
  }
}

TEST(SpecExamples, ResponseMatrixShapes) {
  const Analysis an = analyze(kerr_cat({}));
  for (double w : {-5.0, -0.1, 0.0, 2.5}) {
    const ResponseMatrix r = response_matrix(an, w);
    EXPECT_EQ(r.real_R.rows(), 2);
    EXPECT_EQ(r.real_R.cols(), 4);
    EXPECT_TRUE(r.real_R.allFinite());
  }
  LindbladModel zero = rf_lindblad({1.0, 1.0});
  zero.signal = SignalSpec{TangentSignal{{{Operator::zero(2)}}}};
  EXPECT_EQ(response_matrix(analyze(zero), 0.5).real_R.norm(), 0.0);
}
