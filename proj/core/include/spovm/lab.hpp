#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spovm/linalg.hpp"
#include "spovm/rng.hpp"

namespace spovm {

/// Ensemble {lambda_x, sigma_x} over an extended alphabet. Padding letters
/// carry lambda_x = 0 and a zero sigma_x.
struct CoveringInstance {
  std::vector<double> lambda;
  std::vector<Matrix> sigma;
  std::vector<double> mu;  // sampling law on the extended alphabet
  Matrix pi;               // total subspace projector
  std::vector<Matrix> pi_x;
  double epsilon = 0.0;
  double d = 1.0;
  double D = 1.0;
  std::optional<double> kappa_override;

  std::size_t size() const { return lambda.size(); }
  /// Override if set, else max_x lambda_x / mu_x.
  double kappa() const;
  /// sum_x lambda_x sigma_x
  Matrix average() const;
  /// Pi Pi_x sigma_x Pi_x Pi
  Matrix cut(std::size_t x) const;
  /// Throws DimensionError / ArgumentError on inconsistent sizes.
  void validate() const;
};

/// Fills epsilon, d and D with the tightest values the hypotheses allow.
CoveringInstance make_covering_instance(std::vector<double> lambda,
                                        std::vector<Matrix> sigma,
                                        std::vector<double> mu, Matrix pi,
                                        std::vector<Matrix> pi_x);

/// Ensemble over F_2^bits: pure qubit states psi_x mixed with white noise
/// of weight `noise`, lambda_x proportional to 1 + U[0,1), uniform mu,
/// Pi = I and Pi_x = |psi_x><psi_x|.
CoveringInstance qubit_covering_instance(int bits, double noise,
                                         std::uint64_t seed);

struct HypothesisCheck {
  std::string name;
  double violation = 0.0;  // worst excess over the hypothesis, <= 0 if held
  bool holds = false;
};

struct CoveringHypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_hold = false;
};

/// Trace conditions on Pi and Pi_x, the D bound, the 1/d and sigma_x
/// operator bounds, absolute continuity and kappa.
CoveringHypothesisReport check_covering_hypotheses(const CoveringInstance& inst,
                                                   double slack = 1e-9);

enum class SamplerKind { Iid, Ucc };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::Iid;
  /// Ucc only: the extended alphabet is F_p^n (letter = base-p index) and
  /// M = p^k codewords aG + h with uniform G and h.
  int p = 2;
  int n = 0;
};

/// Draws the M codeword letters of one random code.
std::vector<std::size_t> sample_code(const CoveringInstance& inst,
                                     const SamplerConfig& sampler,
                                     std::int64_t M, Rng& rng);

/// Mean, standard error and bound of one statistic.
struct StatSummary {
  double empirical_mean = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;
  bool pass = false;  // mean <= bound + 3 stderr
};

struct CoveringReport {
  std::int64_t M = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::Iid;
  StatSummary raw;  // bound sqrt(kappa D / (M d)) + 2 delta(eps)
  StatSummary cut;  // bound sqrt(kappa D / (M d))
  /// Trials whose cut deviation exceeded raw + 2 delta(eps).
  int cut_above_raw = 0;
  bool pass() const { return raw.pass && cut.pass; }
};

/// delta(eps) = 4 sqrt(eps)
double covering_delta(double epsilon);

/// Throws ArgumentError for M < 1 or trials < 2.
CoveringReport covering_experiment(const CoveringInstance& inst,
                                   const SamplerConfig& sampler, std::int64_t M,
                                   int trials, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

using PsdSampler = std::function<Matrix(Rng&)>;

/// X = c W W^dagger with W a dim x rank Ginibre matrix and c chosen so that
/// E[X] = mean_scale * I.
PsdSampler wishart_sampler(Eigen::Index dim, Eigen::Index rank,
                           double mean_scale);

struct PruningReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  /// Per-trial Tr(I - P) <= Tr X violations.
  int trace_violations = 0;
  /// Per-trial 1{X not <= I} <= Tr(I - P) violations.
  int indicator_violations = 0;
  double mean_trace_x = 0.0;
  double mean_deficit = 0.0;    // E Tr(I - P)
  double prob_not_below = 0.0;  // P(X not <= I)
  /// Aggregate statistic: empirical mean of Tr(I - P) against
  /// (1/eta) E||X - EX||_1; pass allows 3 stderr of the difference.
  StatSummary aggregate;
  /// max eigenvalue of mean(X) - (1 - eta) I beyond 3 stderr
  bool precondition_warning = false;
  bool pass() const {
    return trace_violations == 0 && indicator_violations == 0 &&
           aggregate.pass;
  }
};

/// `expected` is E[X]; when empty it is replaced by the sample mean.
PruningReport pruning_inequality_experiment(const PsdSampler& sampler,
                                            int trials, double eta,
                                            std::uint64_t seed,
                                            const Matrix& expected = Matrix());

struct SeparateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool complete = false;
  bool inequality_holds = false;
  /// Only meaningful when complete.
  bool equality_holds = false;
  bool pass() const { return inequality_holds && (!complete || equality_holds); }
};

/// sum_y ||sqrt(rho_AB)(Gamma (x) L_y)sqrt(rho_AB)||_1 against
/// ||sqrt(rho_A) Gamma sqrt(rho_A)||_1, registers (A, B).
SeparateReport separate_lemma_check(const DensityOperator& rho_ab,
                                    const Matrix& gamma_a,
                                    const std::vector<Matrix>& m_y,
                                    double tolerance = 1e-9);

}  // namespace spovm
