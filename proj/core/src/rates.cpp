#include "spovm/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spovm/codes.hpp"
#include "spovm/errors.hpp"

namespace spovm {
namespace {

constexpr double kZeroCoefficient = 1e-12;
constexpr double kSumStructureTolerance = 1e-12;

LinearInequality scaled(const LinearInequality& in, double factor) {
  LinearInequality out;
  for (const auto& [v, c] : in.coeffs) out.coeffs[v] = c * factor;
  out.constant = in.constant * factor;
  return out;
}

// Divides by the largest |coefficient| and drops zero coefficients.
LinearInequality normalized(const LinearInequality& in) {
  double scale = 0.0;
  for (const auto& [v, c] : in.coeffs) scale = std::max(scale, std::abs(c));
  LinearInequality out;
  for (const auto& [v, c] : in.coeffs) {
    if (std::abs(c) > kZeroCoefficient * scale) out.coeffs[v] = c / scale;
  }
  out.constant = in.constant / scale;
  return out;
}

bool same_direction(const LinearInequality& a, const LinearInequality& b) {
  if (a.coeffs.size() != b.coeffs.size()) return false;
  for (const auto& [v, c] : a.coeffs) {
    const auto it = b.coeffs.find(v);
    if (it == b.coeffs.end() || std::abs(it->second - c) > 1e-12) return false;
  }
  return true;
}

CqState sigma3_with_uvw(const DensityOperator& rho_ab, const Povm& m_a,
                        const Povm& m_b, const StochasticMap& p_zst, int p,
                        const std::vector<int>& f_s,
                        const std::vector<int>& f_t) {
  const PrimeField field(p);
  if (f_s.size() != m_a.size() || f_t.size() != m_b.size()) {
    throw ArgumentError("f_S / f_T must cover the POVM outcome alphabets");
  }
  CqState s3 = build_sigma3(rho_ab, m_a, m_b, p_zst);
  s3 = derive_classical(s3, {"S"}, "U", p,
                        [&](const Label& x) { return f_s.at(x[0]); });
  s3 = derive_classical(s3, {"T"}, "V", p,
                        [&](const Label& x) { return f_t.at(x[0]); });
  return derive_classical(s3, {"U", "V"}, "W", p, [&](const Label& x) {
    return field.add(x[0], x[1]);
  });
}

}  // namespace

bool LinearInequality::is_trivial() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](const auto& kv) { return kv.second == 0.0; });
}

double LinearInequality::lhs(const std::map<std::string, double>& point) const {
  double s = 0.0;
  for (const auto& [v, c] : coeffs) {
    const auto it = point.find(v);
    if (it != point.end()) s += c * it->second;
  }
  return s;
}

LinearInequality make_inequality(std::map<std::string, double> coeffs,
                                 double constant) {
  LinearInequality ineq{std::move(coeffs), constant};
  if (ineq.is_trivial()) {
    throw ArgumentError("inequality has no nonzero coefficient");
  }
  return ineq;
}

RateRegion::RateRegion(std::vector<std::string> variables,
                       std::vector<LinearInequality> inequalities,
                       bool infeasible)
    : variables_(std::move(variables)),
      inequalities_(std::move(inequalities)),
      infeasible_(infeasible) {
  for (const auto& ineq : inequalities_) {
    if (ineq.is_trivial()) {
      throw ArgumentError("inequality has no nonzero coefficient");
    }
    for (const auto& [v, c] : ineq.coeffs) {
      if (!has_variable(v)) {
        throw ArgumentError("inequality references undeclared variable " + v);
      }
    }
  }
}

bool RateRegion::has_variable(const std::string& v) const {
  return std::find(variables_.begin(), variables_.end(), v) != variables_.end();
}

bool region_membership(const RateRegion& region, const RatePoint& point,
                       double slack) {
  if (region.infeasible()) return false;
  for (const auto& ineq : region.inequalities()) {
    if (ineq.lhs(point) < ineq.constant - slack) return false;
  }
  return true;
}

RateRegion fourier_motzkin_eliminate(const RateRegion& region,
                                     const std::string& var) {
  if (!region.has_variable(var)) {
    throw ArgumentError("cannot eliminate undeclared variable " + var);
  }
  std::vector<LinearInequality> lower, upper, rest;
  for (const auto& ineq : region.inequalities()) {
    const auto it = ineq.coeffs.find(var);
    const double c = it == ineq.coeffs.end() ? 0.0 : it->second;
    if (c > 0.0) {
      lower.push_back(scaled(ineq, 1.0 / c));
    } else if (c < 0.0) {
      upper.push_back(scaled(ineq, -1.0 / c));
    } else {
      rest.push_back(ineq);
    }
  }
  bool infeasible = region.infeasible();
  std::vector<LinearInequality> combined;
  for (const auto& ineq : rest) {
    LinearInequality copy = ineq;
    copy.coeffs.erase(var);
    combined.push_back(normalized(copy));
  }
  for (const auto& lo : lower) {
    for (const auto& hi : upper) {
      // lo: var + a.x >= c1, hi: -var + b.x >= c2  =>  (a+b).x >= c1 + c2.
      LinearInequality sum;
      for (const auto& [v, c] : lo.coeffs) sum.coeffs[v] += c;
      for (const auto& [v, c] : hi.coeffs) sum.coeffs[v] += c;
      sum.coeffs.erase(var);
      sum.constant = lo.constant + hi.constant;
      double scale = 0.0;
      for (const auto& [v, c] : sum.coeffs) scale = std::max(scale, std::abs(c));
      if (scale <= kZeroCoefficient) {
        if (sum.constant > kMembershipSlack) infeasible = true;
        continue;
      }
      combined.push_back(normalized(sum));
    }
  }

  // Pairwise dominance: among rows with equal normalized coefficients keep
  // the one with the largest constant.
  std::vector<LinearInequality> kept;
  for (const auto& ineq : combined) {
    bool dominated = false;
    for (auto& k : kept) {
      if (same_direction(k, ineq)) {
        k.constant = std::max(k.constant, ineq.constant);
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(ineq);
  }

  std::vector<std::string> vars;
  for (const auto& v : region.variables()) {
    if (v != var) vars.push_back(v);
  }
  return RateRegion(std::move(vars), std::move(kept), infeasible);
}

std::optional<double> linear_minimum(const RateRegion& region,
                                     const std::map<std::string, double>& objective) {
  static const std::string kAux = "__objective";
  std::vector<std::string> vars = region.variables();
  vars.push_back(kAux);
  std::vector<LinearInequality> rows = region.inequalities();
  LinearInequality above, below;  // aux >= f(x) and aux <= f(x)
  above.coeffs[kAux] = 1.0;
  below.coeffs[kAux] = -1.0;
  for (const auto& [v, c] : objective) {
    if (!region.has_variable(v)) {
      throw ArgumentError("objective uses undeclared variable " + v);
    }
    above.coeffs[v] -= c;
    below.coeffs[v] += c;
  }
  rows.push_back(above);
  rows.push_back(below);
  RateRegion work(vars, rows, region.infeasible());
  for (const auto& v : region.variables()) work = fourier_motzkin_eliminate(work, v);
  if (work.infeasible()) return std::nullopt;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& ineq : work.inequalities()) {
    const auto it = ineq.coeffs.find(kAux);
    const double c = it == ineq.coeffs.end() ? 0.0 : it->second;
    if (c > kZeroCoefficient) {
      lo = std::max(lo, ineq.constant / c);
    } else if (c < -kZeroCoefficient) {
      hi = std::min(hi, ineq.constant / c);
    } else if (ineq.constant > kMembershipSlack) {
      return std::nullopt;
    }
  }
  if (lo > hi + kMembershipSlack) return std::nullopt;
  return lo;
}

std::optional<std::pair<double, double>> feasible_interval(
    const RateRegion& region, const std::string& var, const RatePoint& point,
    double slack) {
  if (region.infeasible()) return std::nullopt;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& ineq : region.inequalities()) {
    const auto it = ineq.coeffs.find(var);
    const double c = it == ineq.coeffs.end() ? 0.0 : it->second;
    double others = 0.0;
    for (const auto& [v, coef] : ineq.coeffs) {
      if (v == var) continue;
      const auto pt = point.find(v);
      if (pt != point.end()) others += coef * pt->second;
    }
    const double need = ineq.constant - others;
    if (c > 0.0) {
      lo = std::max(lo, need / c);
    } else if (c < 0.0) {
      hi = std::min(hi, need / c);
    } else if (need > slack) {
      return std::nullopt;
    }
  }
  if (lo > hi + slack) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::map<std::string, double> InfoQuantities::named() const {
  return {{"I(U;RB)_s1", I_U_RB_s1}, {"I(V;RA)_s2", I_V_RA_s2},
          {"I(U;RZ)", I_U_RZ},       {"I(V;RZ)", I_V_RZ},
          {"I(UV;RZ)", I_UV_RZ},     {"I(W;U)", I_W_U},
          {"I(W;V)", I_W_V},         {"I(U;V)", I_U_V},
          {"S(U)", S_U},             {"S(V)", S_V},
          {"S(U,V)", S_UV},          {"S(U+V)", S_W},
          {"I(U;RZV)", I_U_RZV},     {"I(V;RZU)", I_V_RZU},
          {"I(W;R)", I_W_R},         {"I(W;RZ)", I_W_RZ},
          {"S(W)", S_W_p2p},         {"log p", log_p}};
}

CqState build_sigma3_uvw(const DistributedProblem& problem) {
  return sigma3_with_uvw(problem.rho_ab, problem.m_a, problem.m_b,
                         problem.p_zst, problem.p, problem.f_s, problem.f_t);
}

InfoQuantities distributed_quantities(const DistributedProblem& problem) {
  const PrimeField field(problem.p);
  InfoQuantities q;
  q.log_p = std::log2(static_cast<double>(problem.p));

  const CqState s1 = relabel_classical(build_sigma1(problem.rho_ab, problem.m_a),
                                       "S", problem.f_s, problem.p, "U");
  q.I_U_RB_s1 = cq_mutual_information(s1, {"U"}, {"R", "B"});
  const CqState s2 = relabel_classical(build_sigma2(problem.rho_ab, problem.m_b),
                                       "T", problem.f_t, problem.p, "V");
  q.I_V_RA_s2 = cq_mutual_information(s2, {"V"}, {"R", "A"});

  const CqState s3 = build_sigma3_uvw(problem);
  q.I_U_RZ = cq_mutual_information(s3, {"U"}, {"R", "Z"});
  q.I_V_RZ = cq_mutual_information(s3, {"V"}, {"R", "Z"});
  q.I_UV_RZ = cq_mutual_information(s3, {"U", "V"}, {"R", "Z"});
  q.I_W_U = cq_mutual_information(s3, {"W"}, {"U"});
  q.I_W_V = cq_mutual_information(s3, {"W"}, {"V"});
  q.I_U_V = cq_mutual_information(s3, {"U"}, {"V"});
  q.S_U = entropy_of(s3, {"U"});
  q.S_V = entropy_of(s3, {"V"});
  q.S_UV = entropy_of(s3, {"U", "V"});
  q.S_W = entropy_of(s3, {"W"});
  q.I_U_RZV = cq_mutual_information(s3, {"U"}, {"R", "Z", "V"});
  q.I_V_RZU = cq_mutual_information(s3, {"V"}, {"R", "Z", "U"});
  return q;
}

InfoQuantities p2p_quantities(const DensityOperator& rho, const Povm& m,
                              const StochasticMap& p_zw, int p) {
  const PrimeField field(p);
  if (static_cast<int>(m.size()) > p) {
    throw ArgumentError("POVM outcomes must embed into F_p");
  }
  InfoQuantities q;
  q.log_p = std::log2(static_cast<double>(p));
  const CqState s = build_sigma_p2p(rho, m, p_zw);
  q.I_W_R = cq_mutual_information(s, {"W"}, {"R"});
  q.I_W_RZ = cq_mutual_information(s, {"W"}, {"R", "Z"});
  q.S_W_p2p = entropy_of(s, {"W"});
  return q;
}

SeparableReport check_separable_decomposition(const Povm& m_ab,
                                              const Povm& m_a,
                                              const Povm& m_b,
                                              const StochasticMap& p_zst,
                                              double tolerance) {
  const int ns = static_cast<int>(m_a.size());
  const int nt = static_cast<int>(m_b.size());
  if (p_zst.input_alphabets() != std::vector<int>{ns, nt} ||
      p_zst.output_alphabet() != static_cast<int>(m_ab.size())) {
    throw ArgumentError("separable check: alphabets do not match");
  }
  if (m_ab.dim() != m_a.dim() * m_b.dim()) {
    throw DimensionError("separable check: M_AB dimension mismatch");
  }
  SeparableReport report;
  for (std::size_t z = 0; z < m_ab.size(); ++z) {
    Matrix target = Matrix::Zero(m_ab.dim(), m_ab.dim());
    for (int s = 0; s < ns; ++s) {
      for (int t = 0; t < nt; ++t) {
        target += p_zst({s, t}, static_cast<int>(z)) * kron(m_a[s], m_b[t]);
      }
    }
    const double r = trace_norm(m_ab[z] - target);
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  report.pass = report.max_residual <= tolerance;
  return report;
}

bool check_sum_structure(const StochasticMap& p_zst, const std::vector<int>& f_s,
                         const std::vector<int>& f_t, int p,
                         const StochasticMap& p_zw) {
  const PrimeField field(p);
  const auto& in = p_zst.input_alphabets();
  if (in.size() != 2 || static_cast<int>(f_s.size()) != in[0] ||
      static_cast<int>(f_t.size()) != in[1]) {
    return false;
  }
  if (p_zw.input_alphabets() != std::vector<int>{p} ||
      p_zw.output_alphabet() != p_zst.output_alphabet()) {
    return false;
  }
  for (int s = 0; s < in[0]; ++s) {
    for (int t = 0; t < in[1]; ++t) {
      const int w = field.add(f_s[s], f_t[t]);
      for (int z = 0; z < p_zst.output_alphabet(); ++z) {
        if (std::abs(p_zst({s, t}, z) - p_zw({w}, z)) > kSumStructureTolerance) {
          return false;
        }
      }
    }
  }
  return true;
}

RateRegion distributed_region(const InfoQuantities& q) {
  const double shared = -q.I_U_V;
  return RateRegion(
      {"R1", "R2", "C1", "C2"},
      {
          make_inequality({{"R1", 1}}, q.I_U_RB_s1 + q.I_W_V + shared),
          make_inequality({{"R2", 1}}, q.I_V_RA_s2 + q.I_W_U + shared),
          make_inequality({{"R1", 1}, {"C1", 1}}, q.I_U_RZ + q.I_W_V + shared),
          make_inequality({{"R2", 1}, {"C2", 1}}, q.I_V_RZ + q.I_W_U + shared),
          make_inequality({{"R1", 1}, {"R2", 1}, {"C1", 1}, {"C2", 1}},
                          q.I_UV_RZ + q.I_W_U + q.I_W_V + shared),
          make_inequality({{"R1", 1}}, 0.0),
          make_inequality({{"R2", 1}}, 0.0),
          make_inequality({{"C1", 1}}, 0.0),
          make_inequality({{"C2", 1}}, 0.0),
      });
}

RateRegion p2p_region(const InfoQuantities& q) {
  const double shift = q.log_p - q.S_W_p2p;
  return RateRegion({"R", "R1", "C"},
                    {
                        make_inequality({{"R1", 1}, {"R", 1}}, q.I_W_R + shift),
                        make_inequality({{"R1", 1}, {"R", 1}, {"C", 1}},
                                        q.I_W_RZ + shift),
                        make_inequality({{"R1", 1}}, 0.0),
                        make_inequality({{"R1", -1}}, -shift),
                        make_inequality({{"C", 1}}, 0.0),
                    });
}

LinearInequality unstructured_sum_constraint(const InfoQuantities& q) {
  return make_inequality({{"R1", 1}, {"R2", 1}, {"C1", 1}, {"C2", 1}},
                         q.I_UV_RZ);
}

BaselineComparison compare_with_baseline(const InfoQuantities& q, int count,
                                         Rng& rng) {
  const RateRegion region = distributed_region(q);
  const LinearInequality baseline = unstructured_sum_constraint(q);
  BaselineComparison out;
  for (const auto& in : region.inequalities()) {
    if (in.coeffs.size() == 4) out.structured_rhs = in.constant;
  }
  out.baseline_rhs = baseline.constant;
  out.gap = out.baseline_rhs - out.structured_rhs;
  out.structured_sum_min =
      linear_minimum(region, {{"R1", 1.0}, {"R2", 1.0}, {"C1", 1.0}, {"C2", 1.0}})
          .value_or(std::numeric_limits<double>::infinity());
  for (const RatePoint& pt : sample_points(region, count, rng)) {
    ++out.sampled;
    if (!region_membership(region, pt)) continue;
    ++out.in_structured;
    if (baseline.lhs(pt) < baseline.constant - kMembershipSlack) {
      ++out.witnesses;
      if (!out.witness) out.witness = pt;
    }
  }
  return out;
}

double gain_indicator(const InfoQuantities& q) { return 2.0 * q.S_W - q.S_UV; }

RateRegion r3_region(const InfoQuantities& q) {
  const double lp = q.log_p;
  return RateRegion(
      {"Rtilde", "R1", "R2", "C1", "C2"},
      {
          make_inequality({{"Rtilde", 1}, {"R1", 1}}, q.I_U_RB_s1 - q.S_U + lp),
          make_inequality({{"Rtilde", 1}, {"R2", 1}}, q.I_V_RA_s2 - q.S_V + lp),
          make_inequality({{"Rtilde", 1}, {"R1", 1}, {"C1", 1}},
                          q.I_U_RZ - q.S_U + lp),
          make_inequality({{"Rtilde", 1}, {"R2", 1}, {"C2", 1}},
                          q.I_V_RZ - q.S_V + lp),
          make_inequality(
              {{"Rtilde", 2}, {"R1", 1}, {"R2", 1}, {"C1", 1}, {"C2", 1}},
              q.I_UV_RZ - q.S_UV + 2 * lp),
          make_inequality({{"Rtilde", 1}}, 0.0),
          make_inequality({{"Rtilde", -1}}, -(lp - q.S_W)),
          make_inequality({{"R1", 1}}, 0.0),
          make_inequality({{"R2", 1}}, 0.0),
          make_inequality({{"C1", 1}}, 0.0),
          make_inequality({{"C2", 1}}, 0.0),
      });
}

std::vector<RatePoint> sample_points(const RateRegion& region, int count,
                                     Rng& rng) {
  double top = 0.0;
  for (const auto& ineq : region.inequalities()) {
    top = std::max(top, std::abs(ineq.constant));
  }
  const double hi = std::max(1.0, 2.0 * top);
  std::vector<RatePoint> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) {
    RatePoint pt;
    for (const auto& v : region.variables()) pt[v] = rng.uniform(0.0, hi);
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2) return {lo};
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  }
  return g;
}

std::vector<SurfaceRow> surface_scan(const DensityOperator& rho_ab,
                                     const std::vector<double>& grid,
                                     const StochasticMap& p_zst, int p,
                                     const std::vector<int>& f_s,
                                     const std::vector<int>& f_t) {
  const Matrix id = Matrix::Identity(2, 2);
  std::vector<SurfaceRow> rows;
  rows.reserve(grid.size() * grid.size() * grid.size());
  for (double t1 : grid) {
    for (double t2 : grid) {
      for (double t3 : grid) {
        SurfaceRow row{t1, t2, t3, false,
                       std::numeric_limits<double>::quiet_NaN()};
        Matrix l0(2, 2);
        l0 << Complex(t1, 0), Complex(t2, t3), Complex(t2, -t3),
            Complex(1 - t1, 0);
        const Matrix l1 = id - l0;
        if (min_eigenvalue(l0) >= -kDefaultTolerance &&
            min_eigenvalue(l1) >= -kDefaultTolerance) {
          const Povm m({l0, l1});
          const CqState s3 =
              sigma3_with_uvw(rho_ab, m, m, p_zst, p, f_s, f_t);
          row.valid = true;
          row.gain = 2.0 * entropy_of(s3, {"W"}) - entropy_of(s3, {"U", "V"});
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace spovm
