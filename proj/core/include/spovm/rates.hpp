#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spovm/cq_state.hpp"
#include "spovm/linalg.hpp"
#include "spovm/rng.hpp"

namespace spovm {

/// sum_v coeffs[v] * x_v >= constant.
struct LinearInequality {
  std::map<std::string, double> coeffs;
  double constant = 0.0;

  bool is_trivial() const;
  double lhs(const std::map<std::string, double>& point) const;
};

/// Builds an inequality, throwing ArgumentError when every coefficient is 0.
LinearInequality make_inequality(std::map<std::string, double> coeffs,
                                 double constant);

using RatePoint = std::map<std::string, double>;

inline constexpr double kMembershipSlack = 1e-9;

class RateRegion {
 public:
  /// Throws ArgumentError if an inequality references an undeclared variable
  /// or has no nonzero coefficient.
  RateRegion(std::vector<std::string> variables,
             std::vector<LinearInequality> inequalities,
             bool infeasible = false);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<LinearInequality>& inequalities() const {
    return inequalities_;
  }
  /// Set when elimination produced a violated variable-free constraint.
  bool infeasible() const { return infeasible_; }
  bool has_variable(const std::string& v) const;

 private:
  std::vector<std::string> variables_;
  std::vector<LinearInequality> inequalities_;
  bool infeasible_;
};

/// Every inequality satisfied within `slack`; missing coordinates count as 0.
bool region_membership(const RateRegion& region, const RatePoint& point,
                       double slack = kMembershipSlack);

/// Projects out `var`: each lower bound paired with each upper bound, zero-
/// coefficient rows kept, duplicates pruned by pairwise dominance. Throws
/// ArgumentError when `var` is not declared.
RateRegion fourier_motzkin_eliminate(const RateRegion& region,
                                     const std::string& var);

/// Minimum of sum_v objective[v] * v over the region, by eliminating every
/// variable against an auxiliary one. nullopt when the region is empty,
/// -infinity when unbounded below.
std::optional<double> linear_minimum(const RateRegion& region,
                                     const std::map<std::string, double>& objective);

/// Feasible interval [lo, hi] of `var` with every other coordinate fixed
/// from `point`; nullopt when empty (beyond slack).
std::optional<std::pair<double, double>> feasible_interval(
    const RateRegion& region, const std::string& var, const RatePoint& point,
    double slack = kMembershipSlack);

/// Every information quantity used by the implemented regions, in bits.
struct InfoQuantities {
  double I_U_RB_s1 = 0.0;
  double I_V_RA_s2 = 0.0;
  double I_U_RZ = 0.0;
  double I_V_RZ = 0.0;
  double I_UV_RZ = 0.0;
  double I_W_U = 0.0;
  double I_W_V = 0.0;
  double I_U_V = 0.0;
  double S_U = 0.0;
  double S_V = 0.0;
  double S_UV = 0.0;
  double S_W = 0.0;  // S(U+V) in the distributed setting
  double I_U_RZV = 0.0;
  double I_V_RZU = 0.0;
  double I_W_R = 0.0;   // point-to-point
  double I_W_RZ = 0.0;  // point-to-point
  double S_W_p2p = 0.0;
  double log_p = 0.0;

  std::map<std::string, double> named() const;
};

/// Inputs of the distributed problem: rho_AB, M_A, M_B, P(z|s,t), the field
/// size and the maps f_S, f_T into F_p, and P(z|w).
struct DistributedProblem {
  DensityOperator rho_ab;
  Povm m_a;
  Povm m_b;
  StochasticMap p_zst;
  int p;
  std::vector<int> f_s;
  std::vector<int> f_t;
  StochasticMap p_zw;
};

/// sigma_3 with derived registers U = f_S(S), V = f_T(T), W = U + V.
CqState build_sigma3_uvw(const DistributedProblem& problem);

InfoQuantities distributed_quantities(const DistributedProblem& problem);
InfoQuantities p2p_quantities(const DensityOperator& rho, const Povm& m,
                              const StochasticMap& p_zw, int p);

struct SeparableReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool pass = false;
};

/// Residual ||L_z^AB - sum_{s,t} P(z|s,t) L_s (x) L_t||_1 per outcome z.
SeparableReport check_separable_decomposition(
    const Povm& m_ab, const Povm& m_a, const Povm& m_b,
    const StochasticMap& p_zst, double tolerance = kDefaultTolerance);

/// True iff P(z|s,t) = P(z | f_S(s) + f_T(t) mod p) for every (s,t,z).
bool check_sum_structure(const StochasticMap& p_zst, const std::vector<int>& f_s,
                         const std::vector<int>& f_t, int p,
                         const StochasticMap& p_zw);

/// Variables R1, R2, C1, C2: the five sum-structured bounds plus
/// nonnegativity of each rate.
RateRegion distributed_region(const InfoQuantities& q);
/// Variables R, R1, C.
RateRegion p2p_region(const InfoQuantities& q);
/// R1 + R2 + C1 + C2 >= I(UV;RZ).
LinearInequality unstructured_sum_constraint(const InfoQuantities& q);
/// 2 S(U+V) - S(U,V).
double gain_indicator(const InfoQuantities& q);
struct BaselineComparison {
  double structured_rhs = 0.0;  // sum-rate bound of distributed_region
  double baseline_rhs = 0.0;    // unstructured_sum_constraint
  double gap = 0.0;             // baseline_rhs - structured_rhs
  int sampled = 0;
  int in_structured = 0;
  /// Sampled points inside distributed_region that violate the baseline.
  int witnesses = 0;
  std::optional<RatePoint> witness;
  /// Exact minimum of R1 + R2 + C1 + C2 over distributed_region. A witness
  /// exists iff this is below baseline_rhs.
  double structured_sum_min = 0.0;
};

/// Samples `count` points with sample_points over distributed_region.
BaselineComparison compare_with_baseline(const InfoQuantities& q, int count,
                                         Rng& rng);

/// Variables Rtilde, R1, R2, C1, C2.
RateRegion r3_region(const InfoQuantities& q);

/// Uniform points in [0, 2 * max |constant|]^vars (at least [0, 1]).
std::vector<RatePoint> sample_points(const RateRegion& region, int count,
                                     Rng& rng);

struct SurfaceRow {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  bool valid = false;
  double gain = 0.0;  // NaN when invalid
};

/// Lambda_0 = [[t1, t2 + i t3], [t2 - i t3, 1 - t1]] on both sides, gain
/// indicator over the product grid. Points where Lambda_0 or I - Lambda_0 is
/// not PSD are flagged invalid.
std::vector<SurfaceRow> surface_scan(const DensityOperator& rho_ab,
                                     const std::vector<double>& grid,
                                     const StochasticMap& p_zst, int p,
                                     const std::vector<int>& f_s,
                                     const std::vector<int>& f_t);

/// Evenly spaced grid of `points` values over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int points);

}  // namespace spovm
