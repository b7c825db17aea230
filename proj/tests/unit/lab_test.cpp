#include <gtest/gtest.h>

#include <cmath>

#include "../common/fixtures.hpp"
#include "spovm/errors.hpp"
#include "spovm/lab.hpp"
#include "spovm/random.hpp"

namespace spovm {
namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

const HypothesisCheck& find(const CoveringHypothesisReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

CoveringInstance identity_projector_instance(Rng& rng, int letters) {
  std::vector<double> lambda(letters, 1.0 / letters), mu = lambda;
  std::vector<Matrix> sigma, pi_x;
  for (int x = 0; x < letters; ++x) {
    sigma.push_back(random_density(rng, 2, 2));
    pi_x.push_back(Matrix::Identity(2, 2));
  }
  return make_covering_instance(lambda, sigma, mu, Matrix::Identity(2, 2), pi_x);
}

TEST(CoveringHypotheses, IdentityProjectors) {
  Rng rng(41);
  const CoveringInstance inst = identity_projector_instance(rng, 4);
  EXPECT_NEAR(inst.epsilon, 0.0, 1e-12);
  double top = 0.0;
  for (const auto& s : inst.sigma) top = std::max(top, max_eigenvalue(s));
  EXPECT_NEAR(inst.d, 1.0 / top, 1e-12);
  EXPECT_NEAR(inst.kappa(), 1.0, 1e-12);
  const CoveringHypothesisReport r = check_covering_hypotheses(inst);
  EXPECT_TRUE(r.all_hold);
  EXPECT_TRUE(find(r, "trace_pi").holds);
  EXPECT_TRUE(find(r, "pi_x_below_1/d").holds);
}

TEST(CoveringHypotheses, EpsilonViolationFlagged) {
  Rng rng(42);
  CoveringInstance inst = identity_projector_instance(rng, 2);
  inst.sigma[0] = diag2(0.5, 0.5);
  inst.pi = diag2(1.0, 0.0);
  inst.epsilon = 0.1;
  const CoveringHypothesisReport r = check_covering_hypotheses(inst);
  EXPECT_FALSE(r.all_hold);
  EXPECT_FALSE(find(r, "trace_pi").holds);
  EXPECT_NEAR(find(r, "trace_pi").violation, 0.4, 1e-12);
}

TEST(CoveringHypotheses, QubitInstance) {
  const CoveringInstance inst = qubit_covering_instance(6, 0.02, 7);
  EXPECT_EQ(inst.size(), 64u);
  EXPECT_TRUE(check_covering_hypotheses(inst).all_hold);
  EXPECT_NEAR(inst.epsilon, 0.01, 1e-12);
  EXPECT_THROW(qubit_covering_instance(3, 1.5, 0), ArgumentError);
}

TEST(Covering, SingleLetterHasNoDeviation) {
  const CoveringInstance inst = make_covering_instance(
      {1.0}, {diag2(0.7, 0.3)}, {1.0}, Matrix::Identity(2, 2), {Matrix::Identity(2, 2)});
  for (std::int64_t m : {1, 4, 32}) {
    const CoveringReport r = covering_experiment(inst, {}, m, 10, 3);
    EXPECT_NEAR(r.raw.empirical_mean, 0.0, 1e-12);
    EXPECT_NEAR(r.cut.empirical_mean, 0.0, 1e-12);
    EXPECT_TRUE(r.pass());
  }
}

TEST(Covering, EqualStatesHaveNoCutDeviation) {
  const Matrix s = diag2(0.6, 0.4);
  const std::vector<double> uniform(8, 1.0 / 8);
  const CoveringInstance inst = make_covering_instance(
      uniform, std::vector<Matrix>(8, s), uniform, Matrix::Identity(2, 2),
      std::vector<Matrix>(8, Matrix::Identity(2, 2)));
  const CoveringReport r = covering_experiment(inst, {}, 4, 20, 5);
  EXPECT_NEAR(r.cut.empirical_mean, 0.0, 1e-12);
}

TEST(Covering, BoundsHoldForBothSamplers) {
  const CoveringInstance inst = qubit_covering_instance(8, 0.02, 11);
  SamplerConfig ucc{SamplerKind::Ucc, 2, 8};
  for (std::int64_t m : {4, 16, 64}) {
    const CoveringReport iid = covering_experiment(inst, {}, m, 200, 13);
    const CoveringReport structured = covering_experiment(inst, ucc, m, 200, 13);
    EXPECT_TRUE(iid.pass());
    EXPECT_TRUE(structured.pass());
    EXPECT_EQ(iid.cut_above_raw, 0);
    EXPECT_EQ(structured.cut_above_raw, 0);
  }
}

TEST(Covering, ReproducibleUnderSeed) {
  const CoveringInstance inst = qubit_covering_instance(5, 0.05, 1);
  const CoveringReport a = covering_experiment(inst, {}, 8, 50, 77);
  const CoveringReport b = covering_experiment(inst, {}, 8, 50, 77);
  EXPECT_EQ(a.raw.empirical_mean, b.raw.empirical_mean);
  EXPECT_EQ(a.cut.stderr_, b.cut.stderr_);
  EXPECT_THROW(covering_experiment(inst, {}, 0, 50, 1), ArgumentError);
  EXPECT_THROW(covering_experiment(inst, {}, 4, 1, 1), ArgumentError);
}

TEST(Covering, UccSamplerNeedsMatchingAlphabet) {
  const CoveringInstance inst = qubit_covering_instance(4, 0.05, 1);
  Rng rng(3);
  EXPECT_THROW(sample_code(inst, {SamplerKind::Ucc, 2, 5}, 4, rng), ArgumentError);
  EXPECT_EQ(sample_code(inst, {SamplerKind::Ucc, 2, 4}, 4, rng).size(), 4u);
}

TEST(Covering, DeltaAndSlope) {
  EXPECT_NEAR(covering_delta(0.01), 0.4, 1e-15);
  const std::vector<double> x{1, 4, 16, 64};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 / std::sqrt(v));
  EXPECT_NEAR(loglog_slope(x, y), -0.5, 1e-12);
}

TEST(Pruning, DeterministicHandCases) {
  const PruningReport zero = pruning_inequality_experiment(
      [](Rng&) { return Matrix(Matrix::Zero(2, 2)); }, 5, 0.5, 1, Matrix::Zero(2, 2));
  EXPECT_EQ(zero.trace_violations, 0);
  EXPECT_NEAR(zero.mean_deficit, 0.0, 1e-15);

  const PruningReport spike = pruning_inequality_experiment(
      [](Rng&) { return diag2(2.0, 0.0); }, 5, 0.5, 1, diag2(2.0, 0.0));
  EXPECT_NEAR(spike.mean_deficit, 1.0, 1e-12);
  EXPECT_NEAR(spike.mean_trace_x, 2.0, 1e-12);
  EXPECT_EQ(spike.trace_violations, 0);
  EXPECT_EQ(spike.indicator_violations, 0);
  EXPECT_NEAR(spike.prob_not_below, 1.0, 1e-15);
}

TEST(Pruning, WishartPathwise) {
  const PruningReport r =
      pruning_inequality_experiment(wishart_sampler(4, 2, 0.25), 2000, 0.5, 9,
                                    0.25 * Matrix::Identity(4, 4));
  EXPECT_TRUE(r.pass());
  EXPECT_FALSE(r.precondition_warning);
}

TEST(Pruning, WishartMean) {
  const PsdSampler sampler = wishart_sampler(3, 2, 0.4);
  Rng rng(10);
  Matrix mean = Matrix::Zero(3, 3);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) mean += sampler(rng);
  mean /= trials;
  EXPECT_LT((mean - 0.4 * Matrix::Identity(3, 3)).norm(), 0.02);
}

TEST(Separate, TrivialMeasurementIsEquality) {
  Rng rng(43);
  const DensityOperator rho(random_density(rng, 4, 3), {2, 2});
  const Matrix w = ginibre(rng, 2, 2);
  const SeparateReport r = separate_lemma_check(rho, w * w.adjoint(), {Matrix::Identity(2, 2)});
  EXPECT_TRUE(r.complete);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-10);
  EXPECT_TRUE(r.pass());

  // With an indefinite Gamma even {I} is strict: Bell state, Gamma = Z.
  const SeparateReport z = separate_lemma_check(
      DensityOperator(spovm::testing::bell_state(), {2, 2}), diag2(1.0, -1.0),
      {Matrix::Identity(2, 2)});
  EXPECT_NEAR(z.lhs, 0.0, 1e-12);
  EXPECT_NEAR(z.rhs, 1.0, 1e-12);
}

TEST(Separate, HalfIdentityHalvesProductValue) {
  Rng rng(44);
  const Matrix ra = random_density(rng, 2, 2), rb = random_density(rng, 2, 2);
  const Matrix w = ginibre(rng, 2, 2);
  const SeparateReport r = separate_lemma_check(DensityOperator(kron(ra, rb), {2, 2}),
                                                w * w.adjoint(), {0.5 * Matrix::Identity(2, 2)});
  EXPECT_FALSE(r.complete);
  EXPECT_NEAR(r.lhs, r.rhs / 2.0, 1e-10);
  EXPECT_TRUE(r.inequality_holds);
}

TEST(Separate, PositiveGammaEqualityOnEntangledStates) {
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho(random_density(rng, 4, 1 + trial % 4), {2, 2});
    const Matrix w = ginibre(rng, 2, 2);
    const SeparateReport r =
        separate_lemma_check(rho, w * w.adjoint(), random_projective(rng, 2).elements());
    EXPECT_TRUE(r.pass());
    EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
  }
}

TEST(Separate, IndefiniteGammaOnlyInequality) {
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho(random_density(rng, 4, 2), {2, 2});
    const Matrix gamma = hermitian_part(ginibre(rng, 2, 2));
    EXPECT_TRUE(
        separate_lemma_check(rho, gamma, random_povm(rng, 2, 3).elements()).inequality_holds);
  }
  // Bell state, Gamma = Z, measurement in the X basis: every branch cancels.
  Vector plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const SeparateReport bell =
      separate_lemma_check(DensityOperator(spovm::testing::bell_state(), {2, 2}),
                           diag2(1.0, -1.0), {projector(plus), projector(minus)});
  EXPECT_NEAR(bell.lhs, 0.0, 1e-12);
  EXPECT_NEAR(bell.rhs, 1.0, 1e-12);
  EXPECT_TRUE(bell.inequality_holds);
  EXPECT_FALSE(bell.equality_holds);
}

}  // namespace
}  // namespace spovm
