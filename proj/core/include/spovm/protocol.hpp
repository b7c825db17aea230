#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "spovm/codes.hpp"
#include "spovm/cq_state.hpp"
#include "spovm/linalg.hpp"

namespace spovm {

/// Weights lambda_w = Tr(L_w rho) and post-measurement states
/// rho_hat_w = sqrt(rho) L_w sqrt(rho) / lambda_w.
struct CanonicalEnsemble {
  std::vector<double> weights;
  /// Zero matrix for outcomes with lambda_w = 0.
  std::vector<Matrix> post_states;
  Eigen::Index dim() const { return post_states.front().rows(); }
};

CanonicalEnsemble canonical_ensemble(const Povm& m, const DensityOperator& rho);

/// Strongly typical sequences: |freq(x) - P(x)| <= delta * P(x) for every
/// letter, and freq(x) = 0 whenever P(x) = 0.
struct TypicalSet {
  std::vector<double> distribution;
  int n = 0;
  double delta = 0.0;
  std::vector<Word> members;  // lexicographic order
  std::unordered_set<std::int64_t> index;

  bool contains(const Word& w) const;
  std::size_t size() const { return members.size(); }
  /// Sum of P^n over the members.
  double probability() const;
};

/// Enumeration cap on |alphabet|^n.
inline constexpr std::int64_t kSequenceCap = std::int64_t{1} << 20;

bool is_strongly_typical(const Word& w, const std::vector<double>& dist,
                         double delta);
TypicalSet typical_set(const std::vector<double>& dist, int n, double delta);

/// Projector onto the span of eigenvector products of rho^{(x)n} whose
/// eigenvalue sequence j^n has |-(1/n) log2 q(j^n) - S(rho)| <= delta.
Matrix typical_projector(const Matrix& rho, int n, double delta);

/// Strong conditionally typical projector: for each letter w, the
/// eigen-index subsequence at the positions where w_seq equals w must be
/// strongly delta-typical for the spectrum of rho_hat_w.
Matrix cond_typical_projector(const CanonicalEnsemble& ens, const Word& w_seq,
                              double delta);

/// rho_hat_{w^n} = (x)_t rho_hat_{w_t}.
Matrix product_post_state(const CanonicalEnsemble& ens, const Word& w_seq);

/// Pi_rho Pi_w rho_hat_w Pi_w Pi_rho for typical w_seq, zero otherwise.
Matrix cut_post_state(const CanonicalEnsemble& ens, const Matrix& pi_rho,
                      const TypicalSet& typical, const Word& w_seq);

struct ProtocolParams {
  int n = 2;
  int k = 0;
  int l = 1;  // point-to-point
  int l1 = 1;
  int l2 = 1;
  int p = 2;
  int N = 1;  // point-to-point
  int N1 = 1;
  int N2 = 1;
  double eta = 0.1;
  double delta = 0.2;
  std::uint64_t seed = 0;

  /// Throws ArgumentError for out-of-range values.
  void validate(bool distributed) const;
};

/// One encoder realization: code, pruned operators and bins.
struct EncoderRealization {
  UccCode code;
  Matrix sigma;    // sum_w gamma_w Abar_w
  Matrix pruning;  // Pi^mu
  /// A_w = Pi Abar_w Pi for every typical codeword w (word index).
  std::map<std::int64_t, Matrix> pruned;
  /// Nonzero bins b (0-based) -> typical codewords of the bin, with
  /// multiplicity. Gamma_{b+1} is the sum of their A_w.
  std::map<std::int64_t, std::vector<std::int64_t>> bin_members;
  Matrix gamma_sum;  // sum_b Gamma_b
  Matrix gamma0;     // I - gamma_sum

  /// Gamma for bin b (0-based); zero for bins without typical codewords.
  Matrix gamma(std::int64_t b) const;
};

struct InstanceStats {
  std::int64_t nonzero_bins = 0;
  std::int64_t singleton_bins = 0;
  std::int64_t decoder_collisions = 0;
  double subpovm_defect = 0.0;  // max over realizations of lambda_max(sum - I)
  double max_pruned_sigma = 0.0;  // max eigenvalue of Pi Sigma Pi
};

struct P2pInstance {
  ProtocolParams params;
  CanonicalEnsemble ensemble;
  TypicalSet typical;
  Matrix pi_rho;
  /// Abar_w for typical w (word index -> operator) before pruning.
  std::map<std::int64_t, Matrix> abar;
  std::vector<EncoderRealization> realizations;
  /// decoder[mu][b] = word index for bin b, or -1 for w0.
  std::vector<std::vector<std::int64_t>> decoder;
  /// Lexicographically smallest non-typical word; empty when every word is
  /// typical (sentinel with uniform P(z|w) image).
  Word w0;
  InstanceStats stats;
};

/// Builds the point-to-point construction for every mu in [N]. The POVM
/// outcomes are identified with the first m.size() elements of F_p.
P2pInstance build_instance(const ProtocolParams& params, const Povm& m,
                           const DensityOperator& rho);

/// Word decoded from outcome i (0 = completion, i = b + 1 for bin b);
/// std::nullopt stands for w0.
std::optional<Word> decode_p2p(const P2pInstance& inst, int mu, std::int64_t i);

/// Lambda_hat_{z^n} = (1/N) sum_mu sum_i Gamma_i P^n(z^n | F(i)), indexed by
/// the base-|Z| index of z^n.
std::vector<Matrix> assemble_overall(const P2pInstance& inst,
                                     const StochasticMap& p_zw);

/// Target (M composed with P(z|w))^{(x)n}: element z^n is
/// (x)_t sum_w P(z_t|w) L_w.
std::vector<Matrix> target_povm(const Povm& m, const StochasticMap& p_zw,
                                int n);

/// sum_x ||sqrt(rho)(L_x - Lt_x)sqrt(rho)||_1 + Tr((I - sum_x Lt_x) rho).
double faithfulness(const Matrix& rho_n, const std::vector<Matrix>& target,
                    const std::vector<Matrix>& candidate);

/// Point-to-point problem: state, POVM with outcomes in F_p, and P(z|w).
struct P2pProblem {
  DensityOperator rho;
  Povm m;
  StochasticMap p_zw;
  int p = 2;
};

/// rho = I/2, trine POVM {(2/3)|psi_w><psi_w|} with Bloch angles 2 pi w / 3,
/// p = 3 and Z = W.
P2pProblem trine_problem();

/// faithfulness of the assembled POVM against the target at block length n.
double p2p_error(const P2pInstance& inst, const P2pProblem& problem);

struct DistributedInstance {
  ProtocolParams params;
  CanonicalEnsemble ensemble_a;
  CanonicalEnsemble ensemble_b;
  TypicalSet typical_u;
  TypicalSet typical_v;
  TypicalSet typical_w;  // law of U + V, delta_hat = p * delta
  Matrix pi_a;
  Matrix pi_b;
  std::vector<EncoderRealization> side_a;  // N1 realizations, shared G
  std::vector<EncoderRealization> side_b;  // N2 realizations, shared G
  Word w0;
  InstanceStats stats;
};

/// Registers of rho_ab are (A, B); POVM outcomes are identified with F_p.
DistributedInstance build_distributed_instance(const ProtocolParams& params,
                                               const Povm& m_a, const Povm& m_b,
                                               const DensityOperator& rho_ab);

/// Joint decoder: the unique a with aG + h1(i) + h2(j) typical for W, else
/// w0 (also for i = 0 or j = 0).
std::optional<Word> decode_distributed(const DistributedInstance& inst,
                                       int mu1, int mu2, std::int64_t i,
                                       std::int64_t j);

/// Lambda_hat^{AB}_{z^n} in A^n B^n register order.
std::vector<Matrix> assemble_distributed(const DistributedInstance& inst,
                                         const StochasticMap& p_zw);

/// Permutation taking (AB)^n register order to A^n B^n.
std::vector<int> interleaved_to_blocked(int n);

/// rho_AB^{(x)n} in A^n B^n register order.
Matrix blocked_power(const DensityOperator& rho_ab, int n);

/// Target M_AB^{(x)n} with Gamma_z = sum_{u,v} P(z | u + v) L_u (x) L_v, in
/// A^n B^n register order.
std::vector<Matrix> distributed_target(const Povm& m_a, const Povm& m_b,
                                       const StochasticMap& p_zw, int p, int n);

}  // namespace spovm
