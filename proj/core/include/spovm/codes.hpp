#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace spovm {

using Word = std::vector<int>;

class PrimeField {
 public:
  /// Throws ArgumentError unless p is prime.
  explicit PrimeField(int p);

  static bool is_prime(int p);

  int p() const { return p_; }
  int add(int a, int b) const { return (a + b) % p_; }
  int sub(int a, int b) const { return (a - b + p_) % p_; }
  int mul(int a, int b) const {
    return static_cast<int>((static_cast<std::int64_t>(a) * b) % p_);
  }
  int neg(int a) const { return (p_ - a) % p_; }
  int inv(int a) const;

 private:
  int p_;
};

/// Integer power p^e; throws SizeError on overflow past 2^62.
std::int64_t ipow(std::int64_t p, int e);

/// Base-p digits of `index` (most significant first), length `len`.
Word to_word(std::int64_t index, int p, int len);
std::int64_t to_index(const Word& w, int p);

/// Union of p^l cosets of the row space of G: W(a, i) = aG + h(i).
struct UccCode {
  int p = 2;
  int n = 0;
  int k = 0;
  int l = 0;
  std::vector<Word> G;  // k rows of length n
  std::vector<Word> h;  // p^l shift vectors of length n, indexed by i

  /// Throws on inconsistent sizes or entries outside [0, p).
  void validate() const;
  std::int64_t num_messages() const { return ipow(p, k); }
  std::int64_t num_bins() const { return ipow(p, l); }
};

/// All p^k words aG + B, in the order of a's base-p index.
std::vector<Word> coset_code(int p, const std::vector<Word>& G, const Word& B);

Word ucc_codeword(const UccCode& code, const Word& a, const Word& i);
/// Same with a and i given by base-p index.
Word ucc_codeword(const UccCode& code, std::int64_t a, std::int64_t i);

std::int64_t multiplicity(const UccCode& code, const Word& w);
/// Word index -> multiplicity, over words with nonzero multiplicity.
std::map<std::int64_t, std::int64_t> multiplicities(const UccCode& code);

/// bins[i] = coset C(G, h(i)) with multiplicity.
std::vector<std::vector<Word>> bins(const UccCode& code);

struct CodeEnsembleSpec {
  int p = 2;
  int n = 1;
  int k = 0;
  int l = 0;
  int N = 1;
  std::uint64_t seed = 0;
};

/// N codes sharing one uniformly drawn G, each with an independent uniform
/// shift table.
std::vector<UccCode> sample_ensemble(const CodeEnsembleSpec& spec);

struct PairwiseReport {
  bool pass = false;
  std::int64_t codes_enumerated = 0;
  std::int64_t pairs_checked = 0;
  /// max |P(W = w) - p^-n| over indices and words
  double max_marginal_deviation = 0.0;
  /// max |P(W = w, W' = w') - p^-2n| over distinct index pairs and words
  double max_pair_deviation = 0.0;
};

/// Upper bound on the number of (G, h) pairs an exhaustive check will visit.
inline constexpr std::int64_t kExhaustiveCap = std::int64_t{1} << 24;

/// Enumerates every (G, h) and checks that each codeword is uniform and every
/// pair of distinct codewords is jointly uniform. Throws SizeError past
/// kExhaustiveCap.
PairwiseReport pairwise_independence_check(int p, int n, int k, int l);

struct DependenceWitness {
  /// Codeword indices (a, i) involved, as base-p indices.
  std::vector<std::pair<std::int64_t, std::int64_t>> indices;
  /// Coefficients c with sum_j c_j W_j = 0 on every code.
  std::vector<int> coefficients;
  /// Relation held on every enumerated code.
  bool relation_holds = false;
  /// max |P(W_1..W_m = w_1..w_m) - p^-mn| (nonzero means not m-wise uniform).
  double joint_deviation = 0.0;
  std::int64_t codes_enumerated = 0;
  bool fires() const { return relation_holds && joint_deviation > 0.0; }
};

/// Exhaustive joint law of `order` distinct codewords from one bin.
/// order 3 (odd p): 2W(a,0) - W(2a,0) - W(0,0) = 0.
/// order 4 (any p): W(a,0) - W(0,0) - W(a,1) + W(0,1) = 0.
/// Requires k >= 1, and l >= 1 for order 4.
DependenceWitness dependence_witness(int p, int n, int k, int l, int order);

/// Exhaustive max deviation of the joint law of the given codewords from
/// uniform on (F_p^n)^m.
double joint_uniformity_deviation(
    int p, int n, int k, int l,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& indices);

}  // namespace spovm
