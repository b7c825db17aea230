#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../common/fixtures.hpp"
#include "spovm/errors.hpp"
#include "spovm/linalg.hpp"
#include "spovm/random.hpp"

namespace spovm {
namespace {

using spovm::testing::bell_state;

Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(values.size(), values.size());
  int i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

TEST(TraceNorm, HandValues) {
  Rng rng(1);
  const Matrix a = ginibre(rng, 3, 3);
  EXPECT_EQ(trace_norm(a - a), 0.0);
  EXPECT_NEAR(trace_norm(diag({1, -1})), 2.0, 1e-12);
  EXPECT_NEAR(trace_norm(diag({1, 0}) - diag({0, 1})), 2.0, 1e-12);
}

TEST(TraceNorm, RejectsNonSquare) {
  EXPECT_THROW(trace_norm(Matrix::Zero(2, 3)), DimensionError);
}

TEST(TraceNorm, SymmetricInArguments) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = hermitian_part(ginibre(rng, 4, 4));
    const Matrix b = hermitian_part(ginibre(rng, 4, 4));
    EXPECT_NEAR(trace_norm(a - b), trace_norm(b - a), 1e-10);
  }
}

TEST(Entropy, PureAndMaximallyMixed) {
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(diag({1, 0}))), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(diag({0.5, 0.5}))), 1.0, 1e-12);
}

TEST(Entropy, UnitarilyInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix rho = random_density(rng, 4, 1 + trial % 4);
    const Matrix u = random_unitary(rng, 4);
    const double s0 = von_neumann_entropy(DensityOperator(rho));
    const double s1 = von_neumann_entropy(DensityOperator(u * rho * u.adjoint(), {}, 1e-8));
    EXPECT_NEAR(s0, s1, 1e-9);
  }
}

TEST(Entropy, ShannonBits) {
  const std::vector<double> fair{0.5, 0.5};
  const std::vector<double> with_zero{1.0, 0.0};
  EXPECT_NEAR(shannon_bits(fair), 1.0, 1e-15);
  EXPECT_EQ(shannon_bits(with_zero), 0.0);
}

TEST(MutualInformation, HandValues) {
  const std::vector<int> a{0};
  const Matrix product = kron(diag({0.3, 0.7}), diag({0.5, 0.5}));
  EXPECT_NEAR(quantum_mutual_information(DensityOperator(product, {2, 2}), a), 0.0, 1e-12);
  EXPECT_NEAR(quantum_mutual_information(DensityOperator(bell_state(), {2, 2}), a), 2.0,
              1e-12);
  EXPECT_NEAR(
      quantum_mutual_information(DensityOperator(diag({0.5, 0, 0, 0.5}), {2, 2}), a), 1.0,
      1e-12);
}

TEST(MutualInformation, NonNegative) {
  Rng rng(4);
  const std::vector<int> a{0};
  for (int trial = 0; trial < 100; ++trial) {
    const DensityOperator rho(random_density(rng, 6, 1 + trial % 6), {2, 3});
    EXPECT_GE(quantum_mutual_information(rho, a), -1e-9);
  }
}

TEST(PartialTrace, ProductState) {
  Rng rng(5);
  const Matrix ra = random_density(rng, 2, 2);
  const Matrix rb = random_density(rng, 3, 2);
  const std::vector<int> dims{2, 3};
  const std::vector<int> traced{1};
  EXPECT_LT((partial_trace(kron(ra, rb), dims, traced) - ra).norm(), 1e-12);
}

TEST(PartialTrace, GhzMarginalIsMaximallyMixed) {
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const std::vector<int> dims{2, 2, 2};
  const std::vector<int> traced{0, 2};
  const Matrix reduced = partial_trace(ghz * ghz.adjoint(), dims, traced);
  EXPECT_LT((reduced - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(PartialTrace, MatchesIndexSummation) {
  Rng rng(6);
  const Matrix m = ginibre(rng, 12, 12);
  const std::vector<int> dims{2, 3, 2};
  const std::vector<int> traced{1};
  const Matrix got = partial_trace(m, dims, traced);
  Matrix want = Matrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int b = 0; b < 3; ++b)
            want(a * 2 + c, a2 * 2 + c2) += m(a * 6 + b * 2 + c, a2 * 6 + b * 2 + c2);
  EXPECT_LT((got - want).norm(), 1e-12);
}

TEST(PartialTrace, RejectsBadLayout) {
  const std::vector<int> dims{2, 3};
  const std::vector<int> traced{0};
  EXPECT_THROW(partial_trace(Matrix::Zero(5, 5), dims, traced), DimensionError);
}

TEST(Purify, InvertsPartialTrace) {
  Rng rng(7);
  const std::vector<int> traced{0};
  for (int trial = 0; trial < 30; ++trial) {
    const DensityOperator rho(random_density(rng, 3, 1 + trial % 3));
    const PureState psi = purify(rho);
    ASSERT_EQ(psi.register_dims().size(), 2u);
    const Matrix back = partial_trace(psi.density(), psi.register_dims(), traced);
    EXPECT_LT((back - rho.matrix()).norm(), 1e-9);
  }
}

TEST(Purify, PureInputHasRankOneReference) {
  const PureState psi = purify(DensityOperator(bell_state(), {2, 2}));
  const std::vector<int> traced{1, 2};
  const Matrix ref = partial_trace(psi.density(), psi.register_dims(), traced);
  EXPECT_EQ(psi.register_dims(), (std::vector<int>{4, 2, 2}));
  const RealVector ev = hermitian_eig(ref).values;
  EXPECT_NEAR(ev(ev.size() - 1), 1.0, 1e-12);
  EXPECT_NEAR(ev.head(ev.size() - 1).sum(), 0.0, 1e-12);
}

TEST(Purify, MaximallyMixedGivesMaximalEntanglement) {
  const PureState psi = purify(DensityOperator(diag({0.5, 0.5})));
  const std::vector<int> a{0};
  EXPECT_NEAR(quantum_mutual_information(DensityOperator(psi.density(), {2, 2}), a), 2.0,
              1e-12);
}

TEST(PsdRoots, HandValues) {
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_LT((psd_sqrt(id) - id).norm(), 1e-14);
  EXPECT_LT((psd_pinv_sqrt(id) - id).norm(), 1e-14);
  EXPECT_LT((psd_sqrt(diag({4, 0})) - diag({2, 0})).norm(), 1e-14);
  EXPECT_LT((psd_pinv_sqrt(diag({4, 0})) - diag({0.5, 0})).norm(), 1e-14);
}

TEST(PsdRoots, SquareRoundTrip) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix w = ginibre(rng, 4, 2);
    const Matrix a = w * w.adjoint();
    const Matrix r = psd_sqrt(a);
    EXPECT_LT((r * r - a).norm(), 1e-10);
  }
}

TEST(PsdRoots, RejectNegative) {
  EXPECT_THROW(psd_sqrt(diag({1, -0.5})), ValidationError);
}

TEST(Operators, ConstructionChecks) {
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{skew}, ValidationError);
  EXPECT_THROW(HermitianOperator{Matrix::Zero(2, 3)}, DimensionError);
  EXPECT_THROW(HermitianOperator::psd(diag({1, -1})), ValidationError);
  EXPECT_TRUE(HermitianOperator::psd(diag({1, 0})).is_psd());
  EXPECT_THROW(DensityOperator{diag({1, 1})}, ValidationError);
  EXPECT_THROW((DensityOperator{diag({1, 0, 0}), {2, 2}}), DimensionError);
}

TEST(Povm, TrivialValidation) {
  const Povm identity({Matrix::Identity(2, 2)});
  const PovmReport full = validate_povm(identity, PovmMode::kPovm);
  EXPECT_TRUE(full.valid);
  EXPECT_EQ(full.completeness_defect, 0.0);

  const Povm half({0.5 * Matrix::Identity(2, 2)});
  EXPECT_FALSE(validate_povm(half, PovmMode::kPovm).valid);
  const PovmReport sub = validate_povm(half, PovmMode::kSubPovm);
  EXPECT_TRUE(sub.valid);
  EXPECT_LT((sub.completion - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Povm, BundledExampleIsValid) {
  const auto problem = spovm::testing::bundled_problem(1);
  EXPECT_TRUE(validate_povm(problem.m_a, PovmMode::kPovm).valid);
  EXPECT_TRUE(validate_povm(problem.m_b, PovmMode::kPovm).valid);
}

TEST(Povm, CompletionRestoresIdentity) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Povm sub = random_sub_povm(rng, 3, 1 + trial % 4);
    const PovmReport r = validate_povm(sub, PovmMode::kSubPovm);
    ASSERT_TRUE(r.valid);
    EXPECT_LE(r.max_excess, 1e-9);
    EXPECT_LT((sub.sum() + r.completion - Matrix::Identity(3, 3)).norm(), 1e-10);
  }
}

TEST(Povm, RandomPovmIsComplete) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_TRUE(validate_povm(random_povm(rng, 4, 3), PovmMode::kPovm).valid);
    EXPECT_TRUE(validate_povm(random_projective(rng, 3), PovmMode::kPovm).valid);
  }
}

TEST(Registers, PermuteSwapsKron) {
  Rng rng(11);
  const Matrix a = ginibre(rng, 2, 2);
  const Matrix b = ginibre(rng, 3, 3);
  const std::vector<int> dims{2, 3};
  const std::vector<int> perm{1, 0};
  EXPECT_LT((permute_registers(kron(a, b), dims, perm) - kron(b, a)).norm(), 1e-12);
}

TEST(Registers, KronPower) {
  const Matrix z = diag({1, -1});
  const Matrix zzz = kron_power(z, 3);
  EXPECT_EQ(zzz.rows(), 8);
  EXPECT_NEAR(zzz.trace().real(), 0.0, 1e-15);
  EXPECT_NEAR(zzz(7, 7).real(), -1.0, 1e-15);
}

TEST(Pruning, ProjectorHandCases) {
  EXPECT_LT((pruning_projector(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)).norm(), 1e-15);
  const Matrix p = pruning_projector(diag({2, 0}));
  EXPECT_LT((p - diag({0, 1})).norm(), 1e-12);
  EXPECT_EQ(pruning_projector(Matrix(0, 0)).size(), 0);
}

}  // namespace
}  // namespace spovm
