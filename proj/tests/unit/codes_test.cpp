#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "spovm/codes.hpp"
#include "spovm/errors.hpp"

namespace spovm {
namespace {

UccCode make_code(int p, std::vector<Word> G, std::vector<Word> h) {
  UccCode c;
  c.p = p;
  c.k = static_cast<int>(G.size());
  c.n = static_cast<int>(h.front().size());
  c.l = 0;
  for (std::size_t s = h.size(); s > 1; s /= p) ++c.l;
  c.G = std::move(G);
  c.h = std::move(h);
  c.validate();
  return c;
}

TEST(PrimeField, Arithmetic) {
  const PrimeField f(7);
  EXPECT_EQ(f.add(5, 4), 2);
  EXPECT_EQ(f.sub(2, 5), 4);
  EXPECT_EQ(f.mul(3, 5), 1);
  EXPECT_EQ(f.neg(3), 4);
  for (int a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1);
  EXPECT_THROW(f.inv(0), ArgumentError);
}

TEST(PrimeField, RejectsComposites) {
  EXPECT_THROW(PrimeField(4), ArgumentError);
  EXPECT_THROW(PrimeField(1), ArgumentError);
  EXPECT_NO_THROW(PrimeField(2));
  EXPECT_TRUE(PrimeField::is_prime(101));
  EXPECT_FALSE(PrimeField::is_prime(91));
}

TEST(Words, IndexRoundTrip) {
  for (std::int64_t i = 0; i < 81; ++i) EXPECT_EQ(to_index(to_word(i, 3, 4), 3), i);
  EXPECT_EQ(to_word(5, 2, 3), (Word{1, 0, 1}));
  EXPECT_THROW(ipow(2, 63), SizeError);
}

TEST(CosetCode, HandCases) {
  const auto zeros = coset_code(3, {{0, 0, 0}, {0, 0, 0}}, {0, 0, 0});
  EXPECT_EQ(zeros.size(), 9u);
  for (const auto& w : zeros) EXPECT_EQ(w, (Word{0, 0, 0}));

  const auto small = coset_code(2, {{1, 1}}, {0, 1});
  EXPECT_EQ(small, (std::vector<Word>{{0, 1}, {1, 0}}));
}

TEST(CosetCode, FullRankCodewordsDistinct) {
  const std::vector<Word> G{{1, 0, 2, 1}, {0, 1, 1, 2}};
  const auto words = coset_code(3, G, {1, 1, 0, 0});
  const std::set<Word> unique(words.begin(), words.end());
  EXPECT_EQ(unique.size(), 9u);
}

TEST(UccCodeword, ZeroMessageIsShift) {
  const UccCode c = make_code(2, {{1, 0, 1}}, {{0, 1, 1}, {1, 1, 0}});
  EXPECT_EQ(ucc_codeword(c, 0, 0), (Word{0, 1, 1}));
  EXPECT_EQ(ucc_codeword(c, 0, 1), (Word{1, 1, 0}));
  EXPECT_EQ(ucc_codeword(c, Word{1}, Word{1}), (Word{0, 1, 1}));
}

TEST(UccCodeword, FixedBinIsCoset) {
  const UccCode c = make_code(3, {{1, 2}}, {{0, 1}, {2, 2}, {1, 0}});
  for (std::int64_t i = 0; i < 3; ++i) {
    std::vector<Word> sweep;
    for (std::int64_t a = 0; a < 3; ++a) sweep.push_back(ucc_codeword(c, a, i));
    EXPECT_EQ(sweep, coset_code(3, c.G, c.h[i]));
  }
}

TEST(Multiplicity, DegenerateAndDisjoint) {
  const UccCode zero = make_code(2, {{0, 0}}, {{0, 0}, {0, 0}});
  EXPECT_EQ(multiplicity(zero, {0, 0}), 4);
  EXPECT_EQ(multiplicity(zero, {1, 0}), 0);

  const UccCode disjoint = make_code(2, {{1, 0}}, {{0, 0}, {0, 1}});
  const auto m = multiplicities(disjoint);
  EXPECT_EQ(m.size(), 4u);
  for (const auto& [w, count] : m) EXPECT_EQ(count, 1);
}

TEST(Multiplicity, CountingIdentityOnSampledCodes) {
  for (int p : {2, 3, 5}) {
    const auto codes = sample_ensemble({p, 3, 1, 2, 6, 77});
    for (const auto& code : codes) {
      std::int64_t total = 0;
      for (const auto& [w, count] : multiplicities(code)) total += count;
      EXPECT_EQ(total, ipow(p, code.k + code.l));
    }
  }
}

TEST(Bins, UnionIsFullSweep) {
  const auto code = sample_ensemble({3, 3, 1, 1, 1, 5}).front();
  std::multiset<Word> from_bins, sweep;
  for (const auto& bin : bins(code)) from_bins.insert(bin.begin(), bin.end());
  for (std::int64_t a = 0; a < code.num_messages(); ++a)
    for (std::int64_t i = 0; i < code.num_bins(); ++i) sweep.insert(ucc_codeword(code, a, i));
  EXPECT_EQ(from_bins, sweep);
}

TEST(Ensemble, DeterministicUnderSeed) {
  const CodeEnsembleSpec spec{3, 4, 2, 1, 4, 123};
  const auto a = sample_ensemble(spec);
  const auto b = sample_ensemble(spec);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t m = 0; m < a.size(); ++m) {
    EXPECT_EQ(a[m].G, b[m].G);
    EXPECT_EQ(a[m].h, b[m].h);
    EXPECT_EQ(a[m].G, a[0].G);
  }
  EXPECT_EQ(sample_ensemble({3, 4, 2, 1, 1, 9}).size(), 1u);
}

TEST(Ensemble, CodewordMarginalIsUniform) {
  const int p = 3, n = 2, seeds = 3000;
  std::map<Word, int> counts;
  for (int s = 0; s < seeds; ++s) {
    const auto code = sample_ensemble({p, n, 1, 1, 1, static_cast<std::uint64_t>(s)}).front();
    ++counts[ucc_codeword(code, 2, 1)];
  }
  const double expected = static_cast<double>(seeds) / 9.0;
  const double sigma = std::sqrt(seeds * (1.0 / 9.0) * (8.0 / 9.0));
  EXPECT_EQ(counts.size(), 9u);
  for (const auto& [w, c] : counts) EXPECT_LT(std::abs(c - expected), 4.0 * sigma);
}

TEST(Pairwise, ExhaustiveChecks) {
  for (auto [p, n, k, l] : std::vector<std::array<int, 4>>{
           {2, 2, 1, 1}, {2, 3, 1, 1}, {3, 2, 1, 1}, {2, 2, 0, 0}, {2, 2, 2, 0}}) {
    const PairwiseReport r = pairwise_independence_check(p, n, k, l);
    EXPECT_TRUE(r.pass) << p << n << k << l;
    EXPECT_LT(r.max_marginal_deviation, 1e-12);
    EXPECT_LT(r.max_pair_deviation, 1e-12);
  }
}

TEST(Pairwise, CapEnforced) {
  EXPECT_THROW(pairwise_independence_check(3, 6, 3, 3), SizeError);
}

TEST(Witness, HigherOrderDependence) {
  const DependenceWitness odd = dependence_witness(3, 2, 1, 1, 3);
  EXPECT_TRUE(odd.fires());
  const DependenceWitness even = dependence_witness(2, 2, 1, 1, 4);
  EXPECT_TRUE(even.fires());
  EXPECT_THROW(dependence_witness(2, 2, 1, 0, 4), ArgumentError);
}

}  // namespace
}  // namespace spovm
